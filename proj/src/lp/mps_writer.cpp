#include "vfmga/lp/mps_writer.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <vector>

namespace vfmga::lp {
namespace {

std::string column_code(std::size_t j) { return fmt::format("C{:07d}", j + 1); }
std::string row_code(std::size_t i) { return fmt::format("R{:07d}", i + 1); }

// " f1 f2        f3        f4              f5        f6" at columns 2,5,15,25,40,50.
std::string data_line(std::string_view f1, std::string_view f2, std::string_view f3, std::string_view f4,
                      std::string_view f5 = {}, std::string_view f6 = {}) {
    std::string line = fmt::format(" {:<2} {:<8}  {:<8}  {:<12}", f1, f2, f3, f4);
    if (!f5.empty()) line += fmt::format("   {:<8}  {:<12}", f5, f6);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line;
}

}  // namespace

std::string mps_number(double value) {
    if (value == 0.0) return "0";
    for (int precision = 12; precision >= 1; --precision) {
        std::string s = fmt::format("{:.{}g}", value, precision);
        if (s.size() <= 12) return s;
    }
    return fmt::format("{:.1e}", value);
}

void write_mps(const LinearProgram& lp, std::ostream& out, std::string_view name) {
    const std::size_t n = lp.num_variables();
    const std::size_t m = lp.num_constraints();

    fmt::print(out, "* generated by vfmga; {} columns, {} rows\n", n, m);
    for (std::size_t j = 0; j < n; ++j) fmt::print(out, "* {} {}\n", column_code(j), lp.variables()[j].id);
    for (std::size_t i = 0; i < m; ++i) fmt::print(out, "* {} {}\n", row_code(i), lp.constraint(i).name);

    fmt::print(out, "NAME          {}\n", name);
    fmt::print(out, "ROWS\n");
    fmt::print(out, " N  COST\n");
    for (std::size_t i = 0; i < m; ++i) {
        const char* type = "E";
        switch (lp.constraint(i).relation) {
            case Relation::kLessEqual: type = "L"; break;
            case Relation::kGreaterEqual: type = "G"; break;
            case Relation::kEqual: type = "E"; break;
        }
        fmt::print(out, " {}  {}\n", type, row_code(i));
    }

    // Column-major view of the rows, objective entry first.
    std::vector<std::vector<std::pair<std::string, double>>> entries(n);
    for (const Term& t : lp.objective().terms) entries[t.var.index].emplace_back("COST", t.coeff);
    for (std::size_t i = 0; i < m; ++i)
        for (const Term& t : lp.constraint(i).terms) entries[t.var.index].emplace_back(row_code(i), t.coeff);

    fmt::print(out, "COLUMNS\n");
    for (std::size_t j = 0; j < n; ++j) {
        const auto& col = entries[j];
        const std::string code = column_code(j);
        if (col.empty()) {
            // Keep the column declared even without nonzeros.
            fmt::print(out, "{}\n", data_line("", code, "COST", "0"));
            continue;
        }
        for (std::size_t k = 0; k < col.size(); k += 2) {
            if (k + 1 < col.size())
                fmt::print(out, "{}\n",
                           data_line("", code, col[k].first, mps_number(col[k].second), col[k + 1].first,
                                     mps_number(col[k + 1].second)));
            else
                fmt::print(out, "{}\n", data_line("", code, col[k].first, mps_number(col[k].second)));
        }
    }

    fmt::print(out, "RHS\n");
    if (lp.objective().constant != 0.0)
        fmt::print(out, "{}\n", data_line("", "RHS", "COST", mps_number(-lp.objective().constant)));
    for (std::size_t i = 0; i < m; ++i)
        if (lp.constraint(i).rhs != 0.0)
            fmt::print(out, "{}\n", data_line("", "RHS", row_code(i), mps_number(lp.constraint(i).rhs)));

    fmt::print(out, "BOUNDS\n");
    for (std::size_t j = 0; j < n; ++j) {
        const Variable& v = lp.variables()[j];
        const std::string code = column_code(j);
        const bool lo_inf = std::isinf(v.lower);
        const bool up_inf = std::isinf(v.upper);
        if (lo_inf && up_inf) {
            fmt::print(out, "{}\n", data_line("FR", "BND", code, ""));
        } else if (!lo_inf && !up_inf && v.lower == v.upper) {
            fmt::print(out, "{}\n", data_line("FX", "BND", code, mps_number(v.lower)));
        } else {
            if (lo_inf)
                fmt::print(out, "{}\n", data_line("MI", "BND", code, ""));
            else if (v.lower != 0.0)
                fmt::print(out, "{}\n", data_line("LO", "BND", code, mps_number(v.lower)));
            if (!up_inf) fmt::print(out, "{}\n", data_line("UP", "BND", code, mps_number(v.upper)));
        }
    }
    fmt::print(out, "ENDATA\n");
}

void write_mps_file(const LinearProgram& lp, const std::filesystem::path& path, std::string_view name) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    write_mps(lp, out, name);
}

}  // namespace vfmga::lp

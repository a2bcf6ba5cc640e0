#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vfmga/error.hpp"

namespace vfmga::esm {

/// A representative period. `weight` is the number of hours of the modelled
/// year it stands for.
struct TimeSlice {
    std::string id;
    double weight = 1.0;
};

/// Carrier consumed per unit of generation: consumption(t) = generation(t) / cop[t].
struct InputCarrier {
    std::string carrier;
    std::vector<double> cop;  ///< per slice, > 0
};

struct CostCoefficients {
    double invest = 0.0;  ///< annualised, EUR/MW/a
    double fom = 0.0;     ///< EUR/MW/a on existing + invested capacity
    double vom = 0.0;     ///< EUR/MWh
    double fuel = 0.0;    ///< EUR/MWh, fuel and CO2 certificates
    double aux = 0.0;     ///< EUR/MWh
};

/// Generation is measured in the technology's sector carrier; `outputs` lists
/// every carrier produced per MWh of generation (the sector carrier included).
struct Technology {
    std::string id;
    std::string sector;
    std::map<std::string, double> outputs;
    std::optional<InputCarrier> input;
    double existing_capacity = 0.0;  ///< MW
    double max_investment = 0.0;     ///< MW, finite
    std::optional<double> max_annual_generation;  ///< MWh
    /// Grid procurement: existing capacity is replaced by a large finite bound
    /// of `SystemModel::procurement_factor` times the peak sector demand.
    bool procurement = false;
    CostCoefficients costs;
    double emission_factor = 0.0;  ///< t CO2 per MWh generated
    std::vector<double> availability;  ///< per slice, in [0, 1]

    [[nodiscard]] bool investable() const noexcept { return max_investment > 0.0; }
};

struct SystemModel {
    std::vector<std::string> carriers;
    std::vector<TimeSlice> slices;
    std::vector<Technology> technologies;
    /// carrier -> per-slice demand in MWh (slice energy, already weighted).
    std::map<std::string, std::vector<double>> demand;
    double emission_cap = std::numeric_limits<double>::infinity();  ///< t CO2 / a
    double hours_per_year = 8760.0;
    double hours_tolerance = 1e-6;
    double procurement_factor = 3.0;

    /// Throws ValidationError listing the first violated invariant.
    void validate() const;

    [[nodiscard]] std::size_t technology_index(std::string_view id) const;
    [[nodiscard]] bool has_carrier(std::string_view id) const;
    [[nodiscard]] double total_hours() const;
    [[nodiscard]] double annual_demand(std::string_view carrier) const;
    [[nodiscard]] double total_annual_demand() const;
    /// max_t demand(c, t) / weight(t), in MW.
    [[nodiscard]] double peak_demand(std::string_view carrier) const;

    /// Existing capacity after resolving the procurement default.
    [[nodiscard]] double existing_capacity(const Technology& tech) const;
    /// Upper bound on annual generation: availability-weighted hours times
    /// existing plus maximum investable capacity, capped by the annual potential.
    [[nodiscard]] double max_annual_supply(const Technology& tech) const;
};

}  // namespace vfmga::esm

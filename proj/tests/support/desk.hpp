#pragma once

#include <string>
#include <vector>

#include "vfmga/attributes/catalog.hpp"
#include "vfmga/esm/system_json.hpp"
#include "vfmga/mga/engine.hpp"

// Loads the desk fixtures and runs the full sweep once per test binary.
namespace vfmga::desk {

inline std::string fixture(const std::string& name) { return std::string(VFMGA_FIXTURE_DIR) + "/" + name; }

inline const std::vector<double>& desk_slacks() {
    static const std::vector<double> s{0.01, 0.05, 0.10, 0.20, 0.30};
    return s;
}

struct DeskSweep {
    esm::SystemModel model;
    attributes::AttributeCatalog catalog;
    std::vector<mga::MgaGroup> groups;
    std::vector<mga::WeightVector> vectors;
    mga::MgaContext context;
    mga::SweepResult result;
};

inline std::vector<mga::MgaGroup> all_groups(const attributes::AttributeCatalog& catalog,
                                             const esm::SystemModel& model) {
    std::vector<mga::MgaGroup> groups;
    for (mga::Strategy s : {mga::Strategy::kBenchmark, mga::Strategy::kContributionBased,
                            mga::Strategy::kDomainBalanced}) {
        auto g = mga::construct_groups(catalog, model, s);
        groups.insert(groups.end(), g.begin(), g.end());
    }
    return groups;
}

inline const DeskSweep& desk_sweep() {
    static const DeskSweep sweep = [] {
        esm::SystemModel model = esm::load_system(fixture("system.json"));
        attributes::AttributeCatalog catalog = attributes::load_catalog(fixture("catalog.json"));
        auto groups = all_groups(catalog, model);
        const std::vector<mga::Scheme> schemes{mga::Scheme::kExtreme, mga::Scheme::kMultiExtreme};
        auto vectors = mga::build_weight_vectors(groups, schemes);
        mga::MgaContext context(model);
        auto result = mga::generate_all(context, groups, vectors, desk_slacks());
        return DeskSweep{std::move(model), std::move(catalog), std::move(groups), std::move(vectors),
                         std::move(context), std::move(result)};
    }();
    return sweep;
}

}  // namespace vfmga::desk

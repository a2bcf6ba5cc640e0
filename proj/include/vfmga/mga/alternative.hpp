#pragma once

#include <string>
#include <vector>

#include "vfmga/esm/compile.hpp"

namespace vfmga::mga {

/// One MGA run that produced (or, after deduplication, reproduced) an alternative.
struct Provenance {
    std::string weight_vector;        ///< WeightVector::id, "optimum" for the cost optimum
    std::vector<std::string> groups;  ///< group ids with nonzero weight
    std::string scheme;               ///< "extreme", "multi-extreme" or "optimum"
    std::string strategy;             ///< strategy tag of the groups
    std::string direction;
    double slack = 0.0;
    std::size_t run_index = 0;        ///< position in the sweep; 0 is the optimum
    double mga_objective = 0.0;       ///< weighted group sum, without the augmentation term
};

struct Alternative {
    std::string id;
    std::vector<Provenance> provenance;
    std::vector<double> generation;  ///< annual MWh per technology, model order
    std::vector<double> invested;    ///< MW per technology
    /// Capacity in use: existing plus invested, or the peak draw for procurement technologies.
    std::vector<double> capacity;
    esm::CostBreakdown costs;
    double slack_used = 0.0;  ///< realised cost / optimum - 1
    bool capacity_artefact = false;
};

}  // namespace vfmga::mga

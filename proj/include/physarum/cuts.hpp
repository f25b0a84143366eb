#pragma once

#include "physarum/network.hpp"

namespace physarum {

struct CutResult {
    std::vector<int> side;    // node indices, sorted; contains the source side
    double capacity = 0.0;    // sum of diameters over delta(S), off-support edges skipped
    double imbalance = 0.0;   // b_S
    double ratio = 0.0;       // C_S / |b_S| for transportation cuts
};

/// Capacity of an explicit cut. Off-support edges do not contribute.
double cut_capacity(const Network& net, const DiameterState& state,
                    const std::vector<char>& in_side);

/// Minimum s0-s1 cut with capacities D_e. Max-flow for any size; for
/// n <= enumeration_bound the lexicographically smallest minimizing node
/// set is returned.
CutResult min_cut(const Network& net, const DiameterState& state,
                  int enumeration_bound = 16);

/// Max-flow value from s0 to s1 with capacities D_e (augmenting paths).
double max_flow_value(const Network& net, const DiameterState& state);

/// Cut minimizing C_S/|b_S| over nontrivial cuts (b_S != 0) of a
/// transportation instance; exhaustive subset enumeration.
CutResult most_constraining_cut(const Network& net, const DiameterState& state,
                                int enumeration_bound = 16);

}  // namespace physarum

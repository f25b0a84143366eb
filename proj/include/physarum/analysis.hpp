#pragma once

#include "physarum/dynamics.hpp"
#include "physarum/network.hpp"

#include <optional>

namespace physarum {

struct ShortestPathSummary {
    double l_star = 0;
    std::vector<double> dist;  // per node, shortest distance to s1
    std::vector<char> in_g0;   // per edge, member of the shortest-path subgraph
    bool unique = false;
    // populated when the shortest path is unique
    std::vector<int> path_edges;  // P0 from s0 to s1
    std::vector<int> path_nodes;
};

ShortestPathSummary shortest_path_oracle(const Network& net);

/// Distances from a single node with edge lengths L_e.
std::vector<double> dijkstra(const Network& net, int from);

struct AttractionRow {
    double t = 0;
    double mass_off_g0 = 0;        // sum of D over edges outside G0
    double value_deviation = 0;    // |val(Q restricted to G0) - 1|
    double max_diameter_error = 0; // max |D_e - 1_{e in P0}| (unique only)
    double drop_error = 0;         // |Delta - L*|
    double potential_error = 0;    // max over P0 nodes of |p_v - dist(v,s1)|
};

std::vector<AttractionRow> attraction_metrics(const Network& net, const Trajectory& traj,
                                              const ShortestPathSummary& summary);

enum class EdgeOrientation { Forward, Backward, Horizontal };

struct PathDecomposition {
    struct Path {
        std::vector<int> edges;
        std::vector<int> nodes;  // from the higher-potential endpoint
        double slope = 0;
    };
    std::vector<Path> paths;
    int i0 = 0;  // index of the last positive slope
    std::vector<double> p_star;                   // per node (NaN if off-support)
    std::vector<double> decay_rate;               // per edge, f(P_i) - 1
    std::vector<EdgeOrientation> orientation;     // per edge, vs reference orientation
    std::vector<int> skipped_edges;               // off-support edges, not decomposed
};

/// Greedy slope-ordered decomposition into paths P_0..P_k. Requires a
/// unique shortest path and unique positive-slope argmax candidates.
PathDecomposition path_decomposition(const Network& net, int max_edges = 20);

struct DecayFit {
    double rate = 0;    // least-squares slope of ln D_e(t)
    bool floored = false;  // window contained floor-clamped samples
};

DecayFit decay_rate_fit(const Trajectory& traj, int edge, double t_a, double t_b);

enum class EdgeClass { Horizontal, DirectedForward, DirectedBackward, Unstable };

struct ClassifyConfig {
    double tail_fraction = 0.25;
    std::optional<double> eps_h;  // default 1e-3 * L_min
};

std::vector<EdgeClass> stabilization_classify(const Network& net, const Trajectory& traj,
                                              const ClassifyConfig& config = {});

/// sum over the path of L_e ln D_e.
double path_log_weight(const Network& net, const DiameterState& state,
                       const std::vector<int>& path_edges);

}  // namespace physarum

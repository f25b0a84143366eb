#pragma once

#include "physarum/dynamics.hpp"
#include "physarum/network.hpp"

#include <string>

namespace physarum {
namespace transportation {

/// A transportation network extended by the auxiliary source: a node s0
/// with supply +1 attached to the anchor, whose own supply is reduced by
/// one. Conservation forces unit flow on the auxiliary edge at all times.
struct Instance {
    Network extended;
    std::string aux_node;
    std::string aux_edge;
    std::string anchor;
};

Instance build_instance(const Network& net, const std::string& anchor,
                        double aux_length = 1.0);

struct EquilibriumCheck {
    double residual = 0;               // max_e |D_e - |Q_e||
    double equal_length_violation = 0; // over directed path pairs with common endpoints
    bool is_tree = true;               // support of the flow is a forest
};

/// Orients edges by sign(Q), keeps |Q| > tol, and compares lengths of all
/// directed path pairs sharing endpoints. Zero violation at an equilibrium.
EquilibriumCheck equal_length_check(const Network& net, const DiameterState& state,
                                    const ElectricalSolution& solution, double tol = 1e-4);

struct OracleResult {
    std::vector<double> flow;  // signed, reference orientation
    double cost = 0;
    bool cost_tie = false;     // two distinct feasible forest flows with equal cost
    double runner_up_cost = 0; // cost of the best distinct flow, if any
};

/// Exact optimum of the uncapacitated transportation problem by forest
/// enumeration; also detects equal-cost equilibria (tolerance 1e-9).
OracleResult min_cost_oracle(const Network& net, int max_edges = 20);

struct ConvergenceReport {
    std::vector<double> residuals;       // per sample
    double terminal_cost = 0;            // sum L_e |Q_e| at t_end
    double oracle_cost = 0;
    double cost_gap = 0;
    double max_aux_flow_deviation = 0;   // |Q_aux - 1| over all samples
    bool cost_tie = false;               // optimum not guaranteed when set
};

ConvergenceReport convergence_report(const Instance& instance, const Trajectory& traj,
                                     const OracleResult& oracle);

}  // namespace transportation
}  // namespace physarum

#pragma once

#include "physarum/cuts.hpp"
#include "physarum/dynamics.hpp"

#include <map>
#include <string>

namespace physarum {

/// Per-sample derived quantities attached to a trajectory. C is the min-cut
/// capacity for shortest-path instances and the most-constraining ratio F
/// for transportation instances.
struct MonitorRecord {
    double t = 0;
    double V = 0;
    double W = 0;
    double h = 0;
    double C = 0;
    double drop = 0;
    double hardware_cost = 0;  // sum L_e D_e
    double flow_cost = 0;      // sum L_e |Q_e|
};

/// Min-cut capacity C, or the ratio F = min C_S/|b_S| when the instance is
/// not a shortest-path instance.
double cut_scale(const Network& net, const DiameterState& state);

double compute_W(const Network& net, const DiameterState& state);
double compute_V(const Network& net, const DiameterState& state);
double compute_h(const Network& net, const DiameterState& state,
                 const ElectricalSolution& solution);

MonitorRecord monitor(const Network& net, const Sample& sample);
std::vector<MonitorRecord> attach_monitors(const Network& net, const Trajectory& traj);

struct MonotonicityReport {
    struct Violation {
        double t = 0;
        double excess = 0;
    };
    std::vector<Violation> increase_violations;     // V rose by more than slack
    std::vector<Violation> rate_bound_violations;   // dV/dt <= -h - 2W
    std::vector<Violation> sharp_bound_violations;  // dV/dt <= -sum (Lmin/4)(D/C-|Q|)^2
    double max_step_increase = 0;
    bool clean(double) const {
        return increase_violations.empty() && rate_bound_violations.empty() &&
               sharp_bound_violations.empty();
    }
};

/// Discrete monotonicity check between consecutive samples; slack_per_step
/// is multiplied by the number of integrator steps between samples.
MonotonicityReport monotonicity_report(const Network& net, const Trajectory& traj,
                                       const std::vector<MonitorRecord>& monitors,
                                       double slack_per_step = 1e-6);

/// The six parallel-links monitor functions; network must have two nodes.
/// Link index 1 is the shortest link (ties by insertion order).
std::map<std::string, double> parallel_links_suite(const Network& net,
                                                   const DiameterState& state);

}  // namespace physarum

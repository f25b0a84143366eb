#include "physarum/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace physarum {

namespace {

double source_cut_capacity(const Network& net, const DiameterState& state) {
    int source;
    if (net.is_shortest_path_instance()) {
        source = net.source();
    } else {
        // transportation instances carry the auxiliary source: supply +1
        // and a single incident edge; fall back to the most positive supply
        source = -1;
        for (int v = 0; v < net.node_count(); ++v)
            if (std::abs(net.supply(v) - 1.0) < 1e-12 && net.incident(v).size() == 1) {
                source = v;
                break;
            }
        if (source < 0) {
            source = 0;
            for (int v = 1; v < net.node_count(); ++v)
                if (net.supply(v) > net.supply(source)) source = v;
        }
    }
    std::vector<char> in_side(net.node_count(), 0);
    in_side[source] = 1;
    return cut_capacity(net, state, in_side);
}

double hardware_cost(const Network& net, const DiameterState& state) {
    double total = 0;
    for (int e = 0; e < net.edge_count(); ++e) total += net.length(e) * state.d[e];
    return total;
}

double flow_cost(const Network& net, const ElectricalSolution& sol) {
    double total = 0;
    for (int e = 0; e < net.edge_count(); ++e)
        total += net.length(e) * std::abs(sol.flows[e]);
    return total;
}

}  // namespace

double cut_scale(const Network& net, const DiameterState& state) {
    if (net.is_shortest_path_instance()) return max_flow_value(net, state);
    return most_constraining_cut(net, state).ratio;
}

double compute_W(const Network& net, const DiameterState& state) {
    double c0 = source_cut_capacity(net, state);
    return (c0 - 1.0) * (c0 - 1.0);
}

double compute_V(const Network& net, const DiameterState& state) {
    double c = cut_scale(net, state);
    if (!(c > 1e-12)) throw std::runtime_error("degenerate cut capacity");
    return hardware_cost(net, state) / c + compute_W(net, state);
}

double compute_h(const Network& net, const DiameterState& state,
                 const ElectricalSolution& solution) {
    double c = cut_scale(net, state);
    if (!(c > 1e-12)) throw std::runtime_error("degenerate cut capacity");
    // R_e |Q_e| D_e = L_e |Q_e| and R_e D_e^2 = L_e D_e
    return -flow_cost(net, solution) / c + hardware_cost(net, state) / (c * c);
}

MonitorRecord monitor(const Network& net, const Sample& sample) {
    MonitorRecord rec;
    rec.t = sample.t;
    rec.C = cut_scale(net, sample.state);
    rec.W = compute_W(net, sample.state);
    rec.hardware_cost = hardware_cost(net, sample.state);
    rec.flow_cost = flow_cost(net, sample.solution);
    if (!(rec.C > 1e-12)) throw std::runtime_error("degenerate cut capacity");
    rec.V = rec.hardware_cost / rec.C + rec.W;
    rec.h = -rec.flow_cost / rec.C + rec.hardware_cost / (rec.C * rec.C);
    rec.drop = sample.solution.drop;
    return rec;
}

std::vector<MonitorRecord> attach_monitors(const Network& net, const Trajectory& traj) {
    std::vector<MonitorRecord> out;
    out.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) out.push_back(monitor(net, s));
    return out;
}

MonotonicityReport monotonicity_report(const Network& net, const Trajectory& traj,
                                       const std::vector<MonitorRecord>& monitors,
                                       double slack_per_step) {
    MonotonicityReport rep;
    const double lmin = net.length_min();
    for (size_t k = 0; k + 1 < monitors.size(); ++k) {
        const MonitorRecord& a = monitors[k];
        const MonitorRecord& b = monitors[k + 1];
        double span = b.t - a.t;
        double steps = std::max(1.0, std::round(span / traj.config.dt));
        double slack = slack_per_step * steps;

        double dv = b.V - a.V;
        rep.max_step_increase = std::max(rep.max_step_increase, dv);
        if (dv > slack) rep.increase_violations.push_back({b.t, dv - slack});

        // the bounds hold pointwise; compare against the weaker endpoint
        double rate = dv / span;
        double bound = -std::min(a.h + 2 * a.W, b.h + 2 * b.W);
        if (rate > bound + slack / span)
            rep.rate_bound_violations.push_back({b.t, rate - bound});

        auto sharp = [&](size_t i) {
            const Sample& s = traj.samples[i];
            const MonitorRecord& mrec = monitors[i];
            double total = 0;
            for (int e = 0; e < net.edge_count(); ++e) {
                double dev = s.state.d[e] / mrec.C - std::abs(s.solution.flows[e]);
                total += lmin / 4.0 * dev * dev;
            }
            return -total;
        };
        double sharp_bound = std::max(sharp(k), sharp(k + 1));
        if (rate > sharp_bound + slack / span)
            rep.sharp_bound_violations.push_back({b.t, rate - sharp_bound});
    }
    return rep;
}

std::map<std::string, double> parallel_links_suite(const Network& net,
                                                   const DiameterState& state) {
    if (net.node_count() != 2)
        throw std::invalid_argument("parallel-links suite needs a two-node network");
    const int m = net.edge_count();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return net.length(a) < net.length(b); });

    double total_d = 0;
    for (int e = 0; e < m; ++e) total_d += state.d[e];
    double inv_l = 0;  // 1/L = sum x_j / L_j
    for (int e = 0; e < m; ++e) inv_l += (state.d[e] / total_d) / net.length(e);
    double harmonic_l = 1.0 / inv_l;
    double drop = harmonic_l / total_d;  // Delta = 1 / sum D_i/L_i = L/D

    double mean_length = 0, flow_cost = 0, hardware = 0;
    for (int e = 0; e < m; ++e) {
        double x = state.d[e] / total_d;
        mean_length += x * net.length(e);
        double q = drop * state.d[e] / net.length(e);
        flow_cost += q * net.length(e);
        hardware += state.d[e] * net.length(e);
    }

    int first = order[0];
    double log_gap = 0, off_min = 0;
    for (int e : order)
        if (e != first) {
            log_gap += net.length(e) * std::log(state.d[e]) -
                       net.length(first) * std::log(state.d[first]);
            off_min += state.d[e] / total_d;
        }

    return {{"off_shortest_fraction", off_min},
            {"mean_length", mean_length},
            {"harmonic_length", harmonic_l},
            {"flow_cost", flow_cost},
            {"drop_times_hardware", drop * hardware},
            {"log_weight_gap", log_gap}};
}

}  // namespace physarum

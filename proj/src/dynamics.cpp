#include "physarum/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace physarum {

Method parse_method(const std::string& name) {
    if (name == "explicit-euler" || name == "euler") return Method::ExplicitEuler;
    if (name == "rk4") return Method::Rk4;
    throw std::invalid_argument("unknown integrator method: " + name);
}

std::string method_name(Method m) {
    return m == Method::Rk4 ? "rk4" : "explicit-euler";
}

void IntegratorConfig::validate() const {
    if (!(dt > 0 && dt < 1)) throw std::invalid_argument("dt must be in (0, 1)");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
    if (!(diameter_floor > 0 && diameter_floor <= 1e-12))
        throw std::invalid_argument("diameter_floor must be in (0, 1e-12]");
}

int Trajectory::sample_at(double t) const {
    for (int i = 0; i < static_cast<int>(samples.size()); ++i)
        if (samples[i].t >= t - 1e-12) return i;
    throw std::out_of_range("time beyond trajectory end");
}

std::vector<double> derivative(const Network& net, const DiameterState& state) {
    ElectricalSolution sol = solve_potentials(net, state);
    std::vector<double> dd(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e)
        dd[e] = std::abs(sol.flows[e]) - state.d[e];
    return dd;
}

Trajectory integrate(const Network& net, const DiameterState& d0,
                     const IntegratorConfig& config) {
    config.validate();
    const int m = net.edge_count();
    for (double d : d0.d)
        if (!(d > 0)) throw std::invalid_argument("initial diameters must be positive");

    Trajectory traj;
    traj.config = config;

    DiameterState state = d0;
    std::vector<double> scratch(m), k1(m), k2(m), k3(m), k4(m);

    auto field = [&](const std::vector<double>& d, std::vector<double>& out) {
        DiameterState s;
        s.d.resize(m);
        for (int e = 0; e < m; ++e) s.d[e] = std::max(d[e], config.diameter_floor);
        ElectricalSolution sol = solve_potentials(net, s);
        for (int e = 0; e < m; ++e) out[e] = std::abs(sol.flows[e]) - s.d[e];
    };

    auto record = [&](double t) {
        Sample sample;
        sample.t = t;
        sample.state = state;
        sample.state.t = t;
        sample.solution = solve_potentials(net, sample.state);
        for (double d : sample.state.d)
            if (!std::isfinite(d)) throw std::runtime_error("non-finite diameter");
        traj.samples.push_back(std::move(sample));
    };

    record(0.0);
    const long steps = std::lround(config.t_end / config.dt);
    const double dt = config.dt;
    for (long step = 0; step < steps; ++step) {
        if (config.method == Method::ExplicitEuler) {
            field(state.d, k1);
            for (int e = 0; e < m; ++e) state.d[e] += dt * k1[e];
        } else {
            field(state.d, k1);
            for (int e = 0; e < m; ++e) scratch[e] = state.d[e] + 0.5 * dt * k1[e];
            field(scratch, k2);
            for (int e = 0; e < m; ++e) scratch[e] = state.d[e] + 0.5 * dt * k2[e];
            field(scratch, k3);
            for (int e = 0; e < m; ++e) scratch[e] = state.d[e] + dt * k3[e];
            field(scratch, k4);
            for (int e = 0; e < m; ++e)
                state.d[e] += dt / 6.0 * (k1[e] + 2 * k2[e] + 2 * k3[e] + k4[e]);
        }
        for (int e = 0; e < m; ++e)
            if (state.d[e] < config.diameter_floor) {
                state.d[e] = config.diameter_floor;
                ++traj.floor_clamps;
            }
        if ((step + 1) % config.record_stride == 0 || step + 1 == steps)
            record((step + 1) * dt);
    }
    return traj;
}

double equilibrium_residual(const DiameterState& state, const ElectricalSolution& solution) {
    double worst = 0;
    for (size_t e = 0; e < state.d.size(); ++e)
        worst = std::max(worst, std::abs(state.d[e] - std::abs(solution.flows[e])));
    return worst;
}

}  // namespace physarum

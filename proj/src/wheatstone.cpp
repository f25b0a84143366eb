#include "physarum/wheatstone.hpp"

#include <cmath>

namespace physarum {
namespace wheatstone {

namespace {
const char* kEdgeIds[5] = {"a", "b", "c", "d", "e"};
}

Network make_network(const std::array<double, 5>& lengths) {
    std::vector<Edge> edges = {
        {"a", "s0", "r", lengths[kA]}, {"b", "s0", "l", lengths[kB]},
        {"c", "r", "s1", lengths[kC]}, {"d", "l", "s1", lengths[kD]},
        {"e", "l", "r", lengths[kE]},
    };
    return Network({"s0", "l", "r", "s1"}, edges, {{"s0", 1.0}, {"s1", -1.0}});
}

State State::from_diameters(const std::array<double, 5>& lengths,
                            const std::array<double, 5>& diameters) {
    State s;
    s.length = lengths;
    for (int i = 0; i < 5; ++i) {
        if (!(diameters[i] > 0)) throw std::invalid_argument("nonpositive diameter");
        s.conductance[i] = diameters[i] / lengths[i];
    }
    return s;
}

State State::from_sample(const Network& net, const DiameterState& d) {
    std::array<double, 5> lengths{}, diameters{};
    for (int i = 0; i < 5; ++i) {
        int e = net.edge_index(kEdgeIds[i]);
        lengths[i] = net.length(e);
        diameters[i] = d.d[e];
    }
    return from_diameters(lengths, diameters);
}

double State::denominator() const {
    const auto& c = conductance;
    return c[kA] * c[kB] * (c[kC] + c[kD]) + (c[kA] + c[kB]) * c[kC] * c[kD] +
           (c[kA] + c[kB]) * (c[kC] + c[kD]) * c[kE];
}

State State::mirrored() const {
    State s = *this;
    std::swap(s.length[kA], s.length[kB]);
    std::swap(s.length[kC], s.length[kD]);
    std::swap(s.conductance[kA], s.conductance[kB]);
    std::swap(s.conductance[kC], s.conductance[kD]);
    return s;
}

std::array<double, 4> conductance_derivatives(const State& s) {
    const auto& c = s.conductance;
    const auto& l = s.length;
    const double denom = s.denominator();
    auto dc = [&](int x, int p, int q, int r2, double lx) {
        // dC_x/dt = C_x/(S L_x) (C_p C_q + C_q C_r + C_q C_e + C_r C_e) - C_x
        return c[x] / (denom * lx) *
                   (c[p] * c[q] + c[q] * c[r2] + c[q] * c[kE] + c[r2] * c[kE]) -
               c[x];
    };
    return {
        dc(kA, kB, kC, kD, l[kA]),  // C_b C_c + C_c C_d + C_c C_e + C_d C_e
        dc(kB, kA, kD, kC, l[kB]),  // C_a C_d + C_d C_c + C_d C_e + C_c C_e
        dc(kC, kD, kA, kB, l[kC]),  // C_d C_a + C_a C_b + C_a C_e + C_b C_e
        dc(kD, kC, kB, kA, l[kD]),  // C_c C_b + C_b C_a + C_b C_e + C_a C_e
    };
}

std::array<double, 2> ratio_derivatives(const State& s) {
    const auto& c = s.conductance;
    const auto& l = s.length;
    const double denom = s.denominator();

    double xa = s.x_a(), xb = s.x_b();
    double xa_star = s.x_a_star(), xb_star = s.x_b_star();
    double xc_star = 1.0 - xa_star, xd_star = 1.0 - xb_star;
    double xc = 1.0 - xa, xd = 1.0 - xb;

    double sum_ac = c[kA] + c[kC], sum_bd = c[kB] + c[kD];
    double dxa = c[kA] * c[kC] / (denom * l[kA] * l[kC] * sum_ac * sum_ac) *
                 ((c[kB] + c[kD] + c[kE]) * (l[kA] + l[kC]) * sum_ac * (xa_star - xa) +
                  c[kE] * c[kB] * l[kC] * (xa_star / xc_star - xb / xd));
    double dxb = c[kB] * c[kD] / (denom * l[kB] * l[kD] * sum_bd * sum_bd) *
                 ((c[kA] + c[kC] + c[kE]) * (l[kB] + l[kD]) * sum_bd * (xb_star - xb) +
                  c[kE] * c[kA] * l[kD] * (xb_star / xd_star - xa / xc));
    return {dxa, dxb};
}

std::pair<Region, Region> regime_classify(const State& s) {
    State cs = s;
    if (cs.x_a_star() > cs.x_b_star()) cs = cs.mirrored();
    double lo = cs.x_a_star(), hi = cs.x_b_star();
    if (lo == hi) throw std::runtime_error("degenerate regime boundaries: x*_a == x*_b");
    auto region = [&](double x) {
        if (x <= lo) return Region::S;
        if (x <= hi) return Region::M;
        return Region::L;
    };
    return {region(cs.x_a()), region(cs.x_b())};
}

DirectionChanges direction_changes(const Trajectory& traj, int edge) {
    constexpr double kBand = 1e-12;
    DirectionChanges out;
    int last_sign = 0;
    for (const Sample& s : traj.samples) {
        double q = s.solution.flows[edge];
        if (std::abs(q) <= kBand) continue;
        int sign = q > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            ++out.count;
            out.times.push_back(s.t);
        }
        last_sign = sign;
    }
    return out;
}

}  // namespace wheatstone
}  // namespace physarum

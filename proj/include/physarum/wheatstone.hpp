#pragma once

#include "physarum/dynamics.hpp"
#include "physarum/network.hpp"

#include <array>

namespace physarum {
namespace wheatstone {

/// Edge order used throughout: a, b, c, d, e. Edges a-d are oriented
/// downward (towards s1 / away from s0), so their flow is always positive;
/// e is oriented left to right.
enum : int { kA = 0, kB = 1, kC = 2, kD = 3, kE = 4 };

/// The five-edge graph: s0 on top, s1 on bottom, l / r at the sides;
/// a = (s0,r), b = (s0,l), c = (r,s1), d = (l,s1), e = (l,r).
Network make_network(const std::array<double, 5>& lengths);

struct State {
    std::array<double, 5> length;       // L_a..L_e
    std::array<double, 5> conductance;  // C_x = D_x / L_x

    static State from_diameters(const std::array<double, 5>& lengths,
                                const std::array<double, 5>& diameters);
    static State from_sample(const Network& net, const DiameterState& d);

    double denominator() const;  // S of the derivative formulas
    double x_a() const { return conductance[kC] / (conductance[kA] + conductance[kC]); }
    double x_b() const { return conductance[kD] / (conductance[kB] + conductance[kD]); }
    double x_a_star() const { return length[kA] / (length[kA] + length[kC]); }
    double x_b_star() const { return length[kB] / (length[kB] + length[kD]); }

    /// Left/right mirror (a<->b, c<->d); used to normalize x*_a < x*_b.
    State mirrored() const;
};

/// Closed-form dC/dt for edges a..d under a forced unit flow.
std::array<double, 4> conductance_derivatives(const State& s);

/// Closed-form (dx_a/dt, dx_b/dt).
std::array<double, 2> ratio_derivatives(const State& s);

enum class Region { S, M, L };

/// Interval membership of (x_a, x_b) in S = [0,x*_a], M = [x*_a,x*_b],
/// L = [x*_b,1]; boundary points go to the lower-index region. The state
/// is mirrored first if x*_a > x*_b. Throws when x*_a == x*_b.
std::pair<Region, Region> regime_classify(const State& s);

struct DirectionChanges {
    int count = 0;
    std::vector<double> times;
};

/// Sign changes of Q_e along a trajectory, with a +-1e-12 hysteresis band.
DirectionChanges direction_changes(const Trajectory& traj, int edge);

}  // namespace wheatstone
}  // namespace physarum

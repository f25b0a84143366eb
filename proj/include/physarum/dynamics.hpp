#pragma once

#include "physarum/electrical.hpp"
#include "physarum/network.hpp"

#include <functional>
#include <string>

namespace physarum {

enum class Method { ExplicitEuler, Rk4 };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct IntegratorConfig {
    Method method = Method::Rk4;
    double dt = 0.01;
    double t_end = 60.0;
    int record_stride = 10;
    double diameter_floor = 1e-300;

    void validate() const;
};

struct Sample {
    double t = 0.0;
    DiameterState state;
    ElectricalSolution solution;
};

struct Trajectory {
    std::vector<Sample> samples;
    IntegratorConfig config;
    long floor_clamps = 0;  // times a diameter hit the floor

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }

    /// Index of the first sample with t >= given time.
    int sample_at(double t) const;
};

/// Right-hand side dD_e/dt = |Q_e| - D_e of the adaptation equation.
std::vector<double> derivative(const Network& net, const DiameterState& state);

/// Fixed-step integration from D0. Every recorded sample carries the
/// electrical solution recomputed from its own diameters.
Trajectory integrate(const Network& net, const DiameterState& d0,
                     const IntegratorConfig& config);

/// max_e |D_e - |Q_e||; zero exactly at an equilibrium.
double equilibrium_residual(const DiameterState& state, const ElectricalSolution& solution);

}  // namespace physarum

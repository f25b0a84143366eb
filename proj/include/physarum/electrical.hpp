#pragma once

#include "physarum/network.hpp"

namespace physarum {

/// Node potentials and signed edge flows for a fixed diameter state.
/// Flows are relative to each edge's reference orientation (tail, head).
struct ElectricalSolution {
    std::vector<double> potentials;  // per node, grounded node at 0
    std::vector<double> flows;       // per edge, Q_e = C_e (p_u - p_v)
    double drop = 0.0;               // p_{s0} - p_{s1}, shortest-path instances
    double conservation_residual = 0.0;

    double potential_drop(const Network& net, int e) const {
        return potentials[net.tail(e)] - potentials[net.head(e)];
    }
};

/// Solves the potential equations with one grounded reference (the node of
/// most negative supply; p_{s1} = 0 on shortest-path instances) and derives
/// flows by Ohm's law. Throws if the conservation residual cannot be
/// brought below tolerance.
ElectricalSolution solve_potentials(const Network& net, const DiameterState& state,
                                    double tolerance = 1e-9);

/// Energy dissipation sum R_e x_e^2 of an arbitrary edge-flow vector.
double energy(const Network& net, const DiameterState& state,
              const std::vector<double>& flows);

/// Flows by Kirchhoff's spanning-tree formula; exact oracle for small
/// graphs. Throws if the enumeration would exceed `max_combinations`.
std::vector<double> matrix_tree_flow(const Network& net, const DiameterState& state,
                                     long max_combinations = 2'000'000);

}  // namespace physarum

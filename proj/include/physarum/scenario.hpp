#pragma once

#include "physarum/analysis.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/lyapunov.hpp"
#include "physarum/network.hpp"
#include "physarum/transportation.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace physarum {

/// A runnable document: network, initial diameters, integrator settings,
/// optional transportation extension and expected-metric annotations.
struct Scenario {
    std::string name;
    Network network;  // base network as given in the document
    std::vector<double> initial;  // indexed like network edges
    IntegratorConfig config;
    nlohmann::json expect;  // object; empty when the document has none

    std::optional<transportation::Instance> transport;  // built when requested
    std::string transport_anchor;

    bool is_transport() const { return transport.has_value(); }
    /// Network the integrator runs on (extended one for transport scenarios).
    const Network& run_network() const {
        return transport ? transport->extended : network;
    }
    DiameterState initial_state() const;
};

Network parse_network(const nlohmann::json& doc);
nlohmann::json emit_network(const Network& net);

Scenario parse_scenario(const nlohmann::json& doc, const std::string& fallback_name = "");
Scenario load_scenario(const std::string& path);

struct RunResult {
    Trajectory trajectory;
    std::vector<MonitorRecord> monitors;
};

RunResult run_scenario(const Scenario& sc);

/// Shortest 12-significant-digit decimal form; deterministic across runs.
std::string format_double(double x);

void write_trajectory_csv(std::ostream& out, const Network& net, const Trajectory& traj);
void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& monitors);
void write_decay_csv(std::ostream& out, const Network& net, const Trajectory& traj,
                     const PathDecomposition& decomposition, double t_a, double t_b);

/// Terminal metrics and assertion summary; "status" is "pass" or "fail".
nlohmann::json run_report(const Scenario& sc, const RunResult& result);

/// Expectation keys checked when present in the document's "expect" object:
///   l_star, unique_shortest_path, path_edges, terminal_residual_max,
///   transport_cost, direction_changes_min (middle Wheatstone edge "e").
std::vector<std::string> check_expectations(const Scenario& sc, const RunResult& result);

std::vector<std::string> corpus_files(const std::string& directory);

}  // namespace physarum

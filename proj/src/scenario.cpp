#include "physarum/scenario.hpp"

#include "physarum/wheatstone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace physarum {

using nlohmann::json;

DiameterState Scenario::initial_state() const {
    DiameterState s;
    s.d = initial;
    s.t = 0.0;
    return s;
}

Network parse_network(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("scenario document must be an object");
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw std::invalid_argument("missing \"nodes\" array");
    if (!doc.contains("edges") || !doc["edges"].is_array())
        throw std::invalid_argument("missing \"edges\" array");
    if (!doc.contains("supplies") || !doc["supplies"].is_object())
        throw std::invalid_argument("missing \"supplies\" object");

    std::vector<std::string> nodes;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) throw std::invalid_argument("node ids must be strings");
        nodes.push_back(n.get<std::string>());
    }
    std::vector<Edge> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("id") || !e.contains("u") || !e.contains("v") ||
            !e.contains("length"))
            throw std::invalid_argument("each edge needs id, u, v, length");
        edges.push_back({e["id"].get<std::string>(), e["u"].get<std::string>(),
                         e["v"].get<std::string>(), e["length"].get<double>()});
    }
    std::unordered_map<std::string, double> supplies;
    for (auto it = doc["supplies"].begin(); it != doc["supplies"].end(); ++it) {
        if (!it.value().is_number()) throw std::invalid_argument("supplies must be numbers");
        supplies[it.key()] = it.value().get<double>();
    }
    return Network(std::move(nodes), std::move(edges), std::move(supplies));
}

json emit_network(const Network& net) {
    json doc;
    doc["nodes"] = json::array();
    for (const std::string& n : net.nodes()) doc["nodes"].push_back(n);
    doc["edges"] = json::array();
    for (const Edge& e : net.edges())
        doc["edges"].push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}, {"length", e.length}});
    doc["supplies"] = json::object();
    for (int v = 0; v < net.node_count(); ++v)
        if (net.supply(v) != 0.0) doc["supplies"][net.nodes()[v]] = net.supply(v);
    return doc;
}

Scenario parse_scenario(const json& doc, const std::string& fallback_name) {
    Network base = parse_network(doc);

    std::optional<transportation::Instance> transport;
    std::string anchor;
    if (doc.contains("transport")) {
        const json& t = doc["transport"];
        if (!t.is_object() || !t.contains("anchor"))
            throw std::invalid_argument("\"transport\" needs an \"anchor\" node");
        anchor = t["anchor"].get<std::string>();
        double aux_length = t.value("aux_length", 1.0);
        transport = transportation::build_instance(base, anchor, aux_length);
    }
    const Network& run = transport ? transport->extended : base;

    std::vector<double> initial(run.edge_count(), 1.0);
    if (doc.contains("initial_diameters")) {
        const json& d0 = doc["initial_diameters"];
        if (d0.is_number()) {
            std::fill(initial.begin(), initial.end(), d0.get<double>());
        } else if (d0.is_object()) {
            if (d0.contains("uniform"))
                std::fill(initial.begin(), initial.end(), d0["uniform"].get<double>());
            for (auto it = d0.begin(); it != d0.end(); ++it) {
                if (it.key() == "uniform") continue;
                initial[run.edge_index(it.key())] = it.value().get<double>();
            }
        } else {
            throw std::invalid_argument("initial_diameters must be a number or an object");
        }
    }
    for (double d : initial)
        if (!(d > 0)) throw std::invalid_argument("initial diameters must be positive");

    IntegratorConfig config;
    if (doc.contains("integrator")) {
        const json& ic = doc["integrator"];
        if (!ic.is_object()) throw std::invalid_argument("\"integrator\" must be an object");
        if (ic.contains("method")) config.method = parse_method(ic["method"].get<std::string>());
        config.dt = ic.value("dt", config.dt);
        config.t_end = ic.value("t_end", config.t_end);
        config.record_stride = ic.value("record_stride", config.record_stride);
        config.diameter_floor = ic.value("diameter_floor", config.diameter_floor);
    }
    config.validate();

    Scenario sc{doc.value("name", fallback_name), std::move(base), std::move(initial),
                config,        doc.value("expect", json::object()),
                std::move(transport), anchor};
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    json doc = json::parse(in);
    std::string stem = std::filesystem::path(path).stem().string();
    return parse_scenario(doc, stem);
}

RunResult run_scenario(const Scenario& sc) {
    RunResult result;
    result.trajectory = integrate(sc.run_network(), sc.initial_state(), sc.config);
    result.monitors = attach_monitors(sc.run_network(), result.trajectory);
    return result;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Network& net, const Trajectory& traj) {
    out << "t,edge_id,D,Q,dD\n";
    for (const Sample& s : traj.samples)
        for (int e = 0; e < net.edge_count(); ++e)
            out << format_double(s.t) << ',' << net.edge(e).id << ','
                << format_double(s.state.d[e]) << ',' << format_double(s.solution.flows[e])
                << ',' << format_double(std::abs(s.solution.flows[e]) - s.state.d[e])
                << '\n';
}

void write_monitor_csv(std::ostream& out, const std::vector<MonitorRecord>& monitors) {
    out << "t,V,W,h,C,Delta,hardware_cost,flow_cost\n";
    for (const MonitorRecord& m : monitors)
        out << format_double(m.t) << ',' << format_double(m.V) << ',' << format_double(m.W)
            << ',' << format_double(m.h) << ',' << format_double(m.C) << ','
            << format_double(m.drop) << ',' << format_double(m.hardware_cost) << ','
            << format_double(m.flow_cost) << '\n';
}

void write_decay_csv(std::ostream& out, const Network& net, const Trajectory& traj,
                     const PathDecomposition& decomposition, double t_a, double t_b) {
    out << "edge_id,r_predicted,r_fitted,abs_error\n";
    for (int e = 0; e < net.edge_count(); ++e) {
        double predicted = decomposition.decay_rate[e];
        if (std::isnan(predicted)) continue;
        DecayFit fit = decay_rate_fit(traj, e, t_a, t_b);
        out << net.edge(e).id << ',' << format_double(predicted) << ','
            << format_double(fit.rate) << ','
            << format_double(std::abs(fit.rate - predicted)) << '\n';
    }
}

namespace {

json lyapunov_summary(const Network& net, const RunResult& r) {
    MonotonicityReport rep = monotonicity_report(net, r.trajectory, r.monitors);
    return {{"max_step_increase", rep.max_step_increase},
            {"increase_violations", rep.increase_violations.size()},
            {"rate_bound_violations", rep.rate_bound_violations.size()},
            {"sharp_bound_violations", rep.sharp_bound_violations.size()}};
}

const char* class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::Horizontal: return "horizontal";
        case EdgeClass::DirectedForward: return "forward";
        case EdgeClass::DirectedBackward: return "backward";
        default: return "unstable";
    }
}

}  // namespace

json run_report(const Scenario& sc, const RunResult& result) {
    const Network& net = sc.run_network();
    const Sample& last = result.trajectory.back();

    json report;
    report["scenario"] = sc.name;
    report["config"] = {{"method", method_name(sc.config.method)},
                        {"dt", sc.config.dt},
                        {"t_end", sc.config.t_end},
                        {"record_stride", sc.config.record_stride}};
    report["terminal"] = {
        {"t", last.t},
        {"equilibrium_residual", equilibrium_residual(last.state, last.solution)},
        {"floor_clamps", result.trajectory.floor_clamps}};
    report["lyapunov"] = lyapunov_summary(net, result);

    if (net.is_shortest_path_instance()) {
        ShortestPathSummary summary = shortest_path_oracle(net);
        json sp = {{"l_star", summary.l_star}, {"unique", summary.unique}};
        auto rows = attraction_metrics(net, result.trajectory, summary);
        const AttractionRow& tail = rows.back();
        sp["mass_off_g0"] = tail.mass_off_g0;
        sp["drop_error"] = tail.drop_error;
        sp["potential_error"] = tail.potential_error;
        if (summary.unique) sp["max_diameter_error"] = tail.max_diameter_error;
        report["shortest_path"] = sp;

        if (summary.unique) {
            try {
                PathDecomposition dec = path_decomposition(net);
                json slopes = json::array();
                for (const auto& p : dec.paths) slopes.push_back(p.slope);
                report["decomposition"] = {{"slopes", slopes}, {"i0", dec.i0}};
            } catch (const std::exception& ex) {
                report["decomposition"] = {{"error", ex.what()}};
            }
        }
    }

    {
        std::vector<EdgeClass> classes =
            stabilization_classify(net, result.trajectory);
        json per_class = {{"horizontal", 0}, {"forward", 0}, {"backward", 0}, {"unstable", 0}};
        for (EdgeClass c : classes) per_class[class_name(c)] = per_class[class_name(c)].get<int>() + 1;
        report["stabilization"] = per_class;
    }

    if (sc.is_transport()) {
        try {
            auto oracle = transportation::min_cost_oracle(net);
            auto conv = transportation::convergence_report(*sc.transport,
                                                           result.trajectory, oracle);
            report["transport"] = {{"terminal_cost", conv.terminal_cost},
                                   {"oracle_cost", conv.oracle_cost},
                                   {"cost_gap", conv.cost_gap},
                                   {"max_aux_flow_deviation", conv.max_aux_flow_deviation},
                                   {"cost_tie", conv.cost_tie}};
        } catch (const std::exception& ex) {
            report["transport"] = {{"error", ex.what()}};
        }
    }

    std::vector<std::string> failures = check_expectations(sc, result);
    report["failures"] = failures;
    report["status"] = failures.empty() ? "pass" : "fail";
    return report;
}

std::vector<std::string> check_expectations(const Scenario& sc, const RunResult& result) {
    std::vector<std::string> failures;
    const json& ex = sc.expect;
    if (!ex.is_object() || ex.empty()) return failures;
    const Network& net = sc.run_network();
    auto fail = [&](const std::string& msg) { failures.push_back(sc.name + ": " + msg); };

    if (ex.contains("l_star") || ex.contains("unique_shortest_path") ||
        ex.contains("path_edges")) {
        ShortestPathSummary summary = shortest_path_oracle(net);
        if (ex.contains("l_star") &&
            std::abs(summary.l_star - ex["l_star"].get<double>()) > 1e-6)
            fail("L* = " + format_double(summary.l_star) + ", expected " +
                 format_double(ex["l_star"].get<double>()));
        if (ex.contains("unique_shortest_path") &&
            summary.unique != ex["unique_shortest_path"].get<bool>())
            fail("shortest-path uniqueness mismatch");
        if (ex.contains("path_edges")) {
            std::vector<std::string> want =
                ex["path_edges"].get<std::vector<std::string>>();
            std::vector<std::string> got;
            for (int e : summary.path_edges) got.push_back(net.edge(e).id);
            if (got != want) fail("P0 edge sequence mismatch");
        }
    }

    if (ex.contains("terminal_residual_max")) {
        const Sample& last = result.trajectory.back();
        double res = equilibrium_residual(last.state, last.solution);
        if (res > ex["terminal_residual_max"].get<double>())
            fail("terminal residual " + format_double(res) + " above bound");
    }

    if (ex.contains("transport_cost")) {
        auto oracle = transportation::min_cost_oracle(net);
        if (std::abs(oracle.cost - ex["transport_cost"].get<double>()) > 1e-6)
            fail("oracle cost " + format_double(oracle.cost) + ", expected " +
                 format_double(ex["transport_cost"].get<double>()));
    }

    if (ex.contains("direction_changes_min")) {
        int edge = net.edge_index("e");
        auto changes = wheatstone::direction_changes(result.trajectory, edge);
        if (changes.count < ex["direction_changes_min"].get<int>())
            fail("middle-edge direction changes below expectation");
    }
    return failures;
}

std::vector<std::string> corpus_files(const std::string& directory) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace physarum

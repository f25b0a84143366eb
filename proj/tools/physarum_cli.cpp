#include "physarum/analysis.hpp"
#include "physarum/scenario.hpp"
#include "physarum/wheatstone.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace physarum;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string out = ".";
    double dt = -1;
    double t_end = -1;
    std::string method;
    unsigned long seed = 0;
    int jobs = 1;
    std::string tolerance_profile = "default";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out, "Output directory");
    cmd->add_option("--dt", flags.dt, "Integrator step size override");
    cmd->add_option("--t-end", flags.t_end, "Integration end time override");
    cmd->add_option("--method", flags.method, "Integrator: rk4 or explicit-euler");
    cmd->add_option("--seed", flags.seed, "Random seed for sweeps");
    cmd->add_option("--jobs", flags.jobs, "Worker count for verify");
    cmd->add_option("--tolerance-profile", flags.tolerance_profile,
                    "Tolerance profile: default or strict");
}

void apply_overrides(Scenario& sc, const CommonFlags& flags) {
    if (flags.dt > 0) sc.config.dt = flags.dt;
    if (flags.t_end > 0) sc.config.t_end = flags.t_end;
    if (!flags.method.empty()) sc.config.method = parse_method(flags.method);
    sc.config.validate();
}

double profile_slack(const std::string& profile) {
    if (profile == "strict") return 1e-8;
    if (profile == "default") return 1e-6;
    throw CLI::ValidationError("unknown tolerance profile: " + profile);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int run_simulate(const std::string& file, const CommonFlags& flags) {
    Scenario sc = load_scenario(file);
    apply_overrides(sc, flags);
    RunResult result = run_scenario(sc);

    fs::create_directories(flags.out);
    const Network& net = sc.run_network();
    {
        std::ofstream csv(fs::path(flags.out) / (sc.name + "_trajectory.csv"));
        write_trajectory_csv(csv, net, result.trajectory);
    }
    {
        std::ofstream csv(fs::path(flags.out) / (sc.name + "_monitors.csv"));
        write_monitor_csv(csv, result.monitors);
    }
    if (net.is_shortest_path_instance()) {
        ShortestPathSummary summary = shortest_path_oracle(net);
        if (summary.unique) {
            try {
                PathDecomposition dec = path_decomposition(net);
                std::ofstream csv(fs::path(flags.out) / (sc.name + "_decay.csv"));
                write_decay_csv(csv, net, result.trajectory, dec,
                                sc.config.t_end / 2, sc.config.t_end);
            } catch (const std::exception&) {
                // degenerate decomposition; the report carries the error
            }
        }
    }
    json report = run_report(sc, result);
    write_file(fs::path(flags.out) / (sc.name + "_report.json"), report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return report["status"] == "pass" ? kExitPass : kExitAssertion;
}

int run_verify(std::string corpus, const CommonFlags& flags) {
    if (const char* env = std::getenv("PHYSARUM_CORPUS"); env && *env) corpus = env;
    if (corpus.empty()) throw CLI::ValidationError("no corpus directory given");
    std::vector<std::string> files = corpus_files(corpus);
    if (files.empty()) {
        std::cerr << "error: nothing to verify in " << corpus << "\n";
        return kExitUsage;
    }
    double slack = profile_slack(flags.tolerance_profile);

    json aggregate = json::array();
    std::vector<std::string> failures;
    for (const std::string& file : files) {
        Scenario sc = load_scenario(file);
        apply_overrides(sc, flags);
        RunResult result = run_scenario(sc);
        json report = run_report(sc, result);

        MonotonicityReport mono =
            monotonicity_report(sc.run_network(), result.trajectory, result.monitors, slack);
        if (!mono.increase_violations.empty())
            failures.push_back(sc.name + ": Lyapunov V increased beyond slack");
        for (const auto& f : report["failures"]) failures.push_back(f.get<std::string>());
        aggregate.push_back(report);
    }
    std::sort(aggregate.begin(), aggregate.end(),
              [](const json& a, const json& b) { return a["scenario"] < b["scenario"]; });

    json summary = {{"scenarios", aggregate},
                    {"failures", failures},
                    {"status", failures.empty() ? "pass" : "fail"}};
    if (flags.out != ".") {
        fs::create_directories(flags.out);
        write_file(fs::path(flags.out) / "verify_report.json", summary.dump(2) + "\n");
    }
    std::cout << summary.dump(2) << "\n";
    return failures.empty() ? kExitPass : kExitAssertion;
}

const char* orientation_name(EdgeOrientation o) {
    switch (o) {
        case EdgeOrientation::Forward: return "forward";
        case EdgeOrientation::Backward: return "backward";
        default: return "horizontal";
    }
}

int run_decompose(const std::string& file, const CommonFlags&) {
    Scenario sc = load_scenario(file);
    const Network& net = sc.run_network();
    json out;
    out["scenario"] = sc.name;
    try {
        PathDecomposition dec = path_decomposition(net);
        json paths = json::array();
        for (const auto& p : dec.paths) {
            json path = {{"slope", p.slope}, {"edges", json::array()}};
            for (int e : p.edges) path["edges"].push_back(net.edge(e).id);
            paths.push_back(path);
        }
        out["paths"] = paths;
        out["i0"] = dec.i0;
        json p_star = json::object(), rates = json::object(), orient = json::object();
        for (int v = 0; v < net.node_count(); ++v)
            if (!std::isnan(dec.p_star[v])) p_star[net.nodes()[v]] = dec.p_star[v];
        for (int e = 0; e < net.edge_count(); ++e)
            if (!std::isnan(dec.decay_rate[e])) {
                rates[net.edge(e).id] = dec.decay_rate[e];
                orient[net.edge(e).id] = orientation_name(dec.orientation[e]);
            }
        out["p_star"] = p_star;
        out["decay_rates"] = rates;
        out["orientations"] = orient;
        std::cout << out.dump(2) << "\n";
        return kExitPass;
    } catch (const std::exception& ex) {
        out["error"] = ex.what();
        std::cout << out.dump(2) << "\n";
        return kExitAssertion;
    }
}

int run_wheatstone_sweep(int count, const CommonFlags& flags) {
    std::mt19937_64 rng(flags.seed);
    std::uniform_real_distribution<double> length_dist(0.5, 2.0);
    std::uniform_real_distribution<double> diameter_dist(0.1, 2.0);

    IntegratorConfig config;
    config.dt = flags.dt > 0 ? flags.dt : 0.02;
    config.t_end = flags.t_end > 0 ? flags.t_end : 30.0;
    config.record_stride = 5;
    if (!flags.method.empty()) config.method = parse_method(flags.method);
    config.validate();

    fs::create_directories(flags.out);
    std::ofstream csv(fs::path(flags.out) / "wheatstone_sweep.csv");
    csv << "La,Lb,Lc,Ld,Le,Da0,Db0,Dc0,Dd0,De0,changes,stabilized_as\n";

    int unstable = 0;
    for (int i = 0; i < count; ++i) {
        std::array<double, 5> lengths{}, d0{};
        for (double& l : lengths) l = length_dist(rng);
        for (double& d : d0) d = diameter_dist(rng);

        Network net = wheatstone::make_network(lengths);
        DiameterState init{std::vector<double>(d0.begin(), d0.end()), 0.0};
        Trajectory traj = integrate(net, init, config);

        int middle = net.edge_index("e");
        auto changes = wheatstone::direction_changes(traj, middle);
        EdgeClass cls = stabilization_classify(net, traj)[middle];
        const char* name = cls == EdgeClass::Horizontal     ? "horizontal"
                           : cls == EdgeClass::DirectedForward  ? "forward"
                           : cls == EdgeClass::DirectedBackward ? "backward"
                                                                : "unstable";
        if (cls == EdgeClass::Unstable) ++unstable;

        for (double l : lengths) csv << format_double(l) << ',';
        for (double d : d0) csv << format_double(d) << ',';
        csv << changes.count << ',' << name << '\n';
    }
    std::cout << "swept " << count << " trajectories, " << unstable << " unstable\n";
    return unstable == 0 ? kExitPass : kExitAssertion;
}

int run_transport(const std::string& file, const CommonFlags& flags) {
    Scenario sc = load_scenario(file);
    if (!sc.is_transport())
        throw CLI::ValidationError("scenario has no \"transport\" section");
    apply_overrides(sc, flags);
    RunResult result = run_scenario(sc);
    json report = run_report(sc, result);

    fs::create_directories(flags.out);
    write_file(fs::path(flags.out) / (sc.name + "_report.json"), report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";

    bool ok = report["status"] == "pass" && !report["transport"].contains("error") &&
              report["transport"]["max_aux_flow_deviation"].get<double>() <= 1e-9;
    return ok ? kExitPass : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slime-mold network dynamics: simulation and verification"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string scenario_file, corpus_dir;
    int sweep_count = 500;

    CLI::App* simulate = app.add_subcommand("simulate", "Integrate a scenario, emit CSV + report");
    simulate->add_option("scenario", scenario_file, "Scenario JSON file")->required();
    add_common(simulate, flags);

    CLI::App* verify = app.add_subcommand("verify", "Run a scenario corpus and check expectations");
    verify->add_option("corpus", corpus_dir, "Corpus directory (or PHYSARUM_CORPUS)");
    add_common(verify, flags);

    CLI::App* decompose = app.add_subcommand("decompose", "Slope-ordered path decomposition");
    decompose->add_option("scenario", scenario_file, "Scenario JSON file")->required();
    add_common(decompose, flags);

    CLI::App* sweep = app.add_subcommand("wheatstone-sweep", "Randomized five-edge trajectory sweep");
    sweep->add_option("--count", sweep_count, "Number of trajectories");
    add_common(sweep, flags);

    CLI::App* transport = app.add_subcommand("transport", "Run a transportation scenario");
    transport->add_option("scenario", scenario_file, "Scenario JSON file")->required();
    add_common(transport, flags);

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(scenario_file, flags);
        if (verify->parsed()) return run_verify(corpus_dir, flags);
        if (decompose->parsed()) return run_decompose(scenario_file, flags);
        if (sweep->parsed()) return run_wheatstone_sweep(sweep_count, flags);
        if (transport->parsed()) return run_transport(scenario_file, flags);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

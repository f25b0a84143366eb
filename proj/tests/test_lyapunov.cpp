#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "physarum/lyapunov.hpp"

#include <cmath>

using namespace physarum;

namespace {

Network parallel_links(std::vector<double> lengths) {
    std::vector<Edge> edges;
    for (size_t i = 0; i < lengths.size(); ++i)
        edges.push_back({"e" + std::to_string(i + 1), "s0", "s1", lengths[i]});
    return Network({"s0", "s1"}, edges, {{"s0", 1.0}, {"s1", -1.0}});
}

Network triangle() {
    return Network({"s0", "m", "s1"},
                   {{"h1", "s0", "m", 1.0},
                    {"h2", "m", "s1", 1.0},
                    {"direct", "s0", "s1", 3.0}},
                   {{"s0", 1.0}, {"s1", -1.0}});
}

}  // namespace

TEST_CASE("W at unit source capacity") {
    Network net = parallel_links({1.0, 2.0});
    CHECK(compute_W(net, DiameterState{{0.4, 0.6}, 0.0}) == doctest::Approx(0.0));
    CHECK(compute_W(net, uniform_state(net)) == doctest::Approx(1.0));
}

TEST_CASE("W decays exactly exponentially") {
    Network net = triangle();
    IntegratorConfig config;
    config.t_end = 10.0;
    DiameterState d0{{1.5, 0.4, 0.8}, 0.0};
    Trajectory traj = integrate(net, d0, config);
    double w0 = compute_W(net, d0);
    for (const Sample& s : traj.samples)
        CHECK(std::abs(compute_W(net, s.state) - w0 * std::exp(-2.0 * s.t)) <= 1e-4);
}

TEST_CASE("V at an equilibrium equals the path length") {
    Network net = triangle();
    DiameterState eq{{1.0, 1.0, 1e-13}, 0.0};
    CHECK(compute_V(net, eq) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("V by hand on parallel links") {
    Network net = parallel_links({1.0, 2.0});
    CHECK(compute_V(net, uniform_state(net)) == doctest::Approx(2.5));
}

TEST_CASE("normalized hardware cost is scale free") {
    Network net = parallel_links({1.0, 2.0});
    DiameterState a{{0.7, 1.1}, 0.0};
    DiameterState b{{0.7 * 3.0, 1.1 * 3.0}, 0.0};
    double first_a = compute_V(net, a) - compute_W(net, a);
    double first_b = compute_V(net, b) - compute_W(net, b);
    CHECK(first_a == doctest::Approx(first_b).epsilon(1e-12));
}

TEST_CASE("h by hand") {
    Network net = parallel_links({1.0, 2.0});
    DiameterState s = uniform_state(net);
    CHECK(compute_h(net, s, solve_potentials(net, s)) == doctest::Approx(1.0 / 12.0));

    // single-edge states always have |Q| = D/C, so h = 0
    Network single({"s0", "s1"}, {{"e1", "s0", "s1", 1.7}}, {{"s0", 1.0}, {"s1", -1.0}});
    DiameterState two{{2.0}, 0.0};
    CHECK(std::abs(compute_h(single, two, solve_potentials(single, two))) <= 1e-12);

    Network tri = triangle();
    DiameterState eq{{1.0, 1.0, 1e-13}, 0.0};
    CHECK(std::abs(compute_h(tri, eq, solve_potentials(tri, eq))) <= 1e-9);
}

TEST_CASE("monitors stay clean along a trajectory") {
    Network net = triangle();
    IntegratorConfig config;
    Trajectory traj = integrate(net, DiameterState{{0.5, 1.8, 0.9}, 0.0}, config);
    auto monitors = attach_monitors(net, traj);
    REQUIRE(monitors.size() == traj.samples.size());
    for (const MonitorRecord& m : monitors) {
        CHECK(m.h >= -1e-10);
        CHECK(m.W >= 0.0);
        CHECK(std::isfinite(m.V));
        CHECK(m.V == doctest::Approx(m.hardware_cost / m.C + m.W));
    }
    MonotonicityReport rep = monotonicity_report(net, traj, monitors);
    CHECK(rep.increase_violations.empty());
    CHECK(rep.rate_bound_violations.empty());
    CHECK(rep.sharp_bound_violations.empty());
    // non-equilibrium start: V strictly decreases over the run
    CHECK(monitors.back().V < monitors.front().V - 1e-3);
}

TEST_CASE("V is constant from an equilibrium start") {
    Network net = triangle();
    IntegratorConfig config;
    config.t_end = 5.0;
    Trajectory traj = integrate(net, DiameterState{{1.0, 1.0, 1e-12}, 0.0}, config);
    auto monitors = attach_monitors(net, traj);
    for (const MonitorRecord& m : monitors)
        CHECK(m.V == doctest::Approx(monitors.front().V).epsilon(1e-9));
}

TEST_CASE("normalized diameters track absolute flows") {
    Network net = triangle();
    IntegratorConfig config;
    Trajectory traj = integrate(net, DiameterState{{0.3, 1.9, 1.4}, 0.0}, config);
    auto monitors = attach_monitors(net, traj);
    const Sample& last = traj.back();
    const MonitorRecord& m = monitors.back();
    for (int e = 0; e < net.edge_count(); ++e)
        CHECK(std::abs(last.state.d[e] / m.C - std::abs(last.solution.flows[e])) <= 1e-3);
}

TEST_CASE("parallel links suite values by hand") {
    Network net = parallel_links({1.0, 2.0});
    auto suite = parallel_links_suite(net, uniform_state(net));
    CHECK(suite.at("off_shortest_fraction") == doctest::Approx(0.5));
    CHECK(suite.at("mean_length") == doctest::Approx(1.5));
    CHECK(suite.at("harmonic_length") == doctest::Approx(4.0 / 3.0));
    CHECK(suite.at("flow_cost") == doctest::Approx(4.0 / 3.0));
    CHECK(suite.at("drop_times_hardware") == doctest::Approx(2.0));
    CHECK(suite.at("log_weight_gap") == doctest::Approx(0.0));
}

TEST_CASE("parallel links suite near the equilibrium") {
    Network net = parallel_links({1.0, 2.0});
    auto suite = parallel_links_suite(net, DiameterState{{1.0, 1e-9}, 0.0});
    CHECK(suite.at("off_shortest_fraction") <= 1e-8);
    CHECK(suite.at("mean_length") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parallel links suite monotone along a trajectory") {
    Network net = parallel_links({1.0, 2.0});
    IntegratorConfig config;
    config.t_end = 20.0;
    Trajectory traj = integrate(net, DiameterState{{0.5, 1.5}, 0.0}, config);
    const char* decreasing[] = {"off_shortest_fraction", "mean_length",
                                "harmonic_length", "flow_cost", "log_weight_gap"};
    auto prev = parallel_links_suite(net, traj.samples[0].state);
    for (size_t k = 1; k < traj.samples.size(); ++k) {
        auto cur = parallel_links_suite(net, traj.samples[k].state);
        for (const char* key : decreasing) CHECK(cur.at(key) <= prev.at(key) + 1e-9);
        prev = cur;
    }
}

TEST_CASE("suite rejects wrong topology") {
    Network net({"s0", "m", "s1"},
                {{"h1", "s0", "m", 1.0}, {"h2", "m", "s1", 1.0}},
                {{"s0", 1.0}, {"s1", -1.0}});
    CHECK_THROWS_AS(parallel_links_suite(net, uniform_state(net)),
                    std::invalid_argument);
}

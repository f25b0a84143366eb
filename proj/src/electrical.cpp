#include "physarum/electrical.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace physarum {

namespace {

double conservation_residual(const Network& net, const std::vector<double>& flows) {
    double worst = 0;
    for (int v = 0; v < net.node_count(); ++v) {
        double net_out = 0;
        for (auto [e, dir] : net.incident(v)) net_out += dir * flows[e];
        worst = std::max(worst, std::abs(net_out - net.supply(v)));
    }
    return worst;
}

}  // namespace

ElectricalSolution solve_potentials(const Network& net, const DiameterState& state,
                                    double tolerance) {
    const int n = net.node_count();
    const int m = net.edge_count();
    for (int e = 0; e < m; ++e)
        if (!(state.d[e] > 0)) throw std::invalid_argument("nonpositive diameter");

    int ground = 0;
    for (int v = 1; v < n; ++v)
        if (net.supply(v) < net.supply(ground)) ground = v;

    // reduced Laplacian over the non-ground nodes
    std::vector<int> row(n, -1);
    int k = 0;
    for (int v = 0; v < n; ++v)
        if (v != ground) row[v] = k++;

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    for (int v = 0; v < n; ++v)
        if (v != ground) rhs[row[v]] = net.supply(v);
    for (int e = 0; e < m; ++e) {
        double c = conductance(net, state, e);
        int u = net.tail(e), v = net.head(e);
        if (u != ground) lap(row[u], row[u]) += c;
        if (v != ground) lap(row[v], row[v]) += c;
        if (u != ground && v != ground) {
            lap(row[u], row[v]) -= c;
            lap(row[v], row[u]) -= c;
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> fact(lap);
    Eigen::VectorXd p = fact.solve(rhs);
    // iterative refinement on the reduced system
    for (int iter = 0; iter < 4; ++iter) {
        Eigen::VectorXd r = rhs - lap * p;
        if (r.lpNorm<Eigen::Infinity>() <= 0.1 * tolerance) break;
        p += fact.solve(r);
    }

    ElectricalSolution sol;
    sol.potentials.assign(n, 0.0);
    for (int v = 0; v < n; ++v)
        if (v != ground) sol.potentials[v] = p[row[v]];
    sol.flows.resize(m);
    for (int e = 0; e < m; ++e)
        sol.flows[e] = conductance(net, state, e) *
                       (sol.potentials[net.tail(e)] - sol.potentials[net.head(e)]);
    sol.conservation_residual = conservation_residual(net, sol.flows);
    if (!std::isfinite(sol.conservation_residual) || sol.conservation_residual > tolerance)
        throw std::runtime_error("electrical solve failed: conservation residual " +
                                 std::to_string(sol.conservation_residual));
    if (net.is_shortest_path_instance())
        sol.drop = sol.potentials[net.source()] - sol.potentials[net.sink()];
    return sol;
}

double energy(const Network& net, const DiameterState& state,
              const std::vector<double>& flows) {
    double total = 0;
    for (int e = 0; e < net.edge_count(); ++e)
        total += resistance(net, state, e) * flows[e] * flows[e];
    return total;
}

std::vector<double> matrix_tree_flow(const Network& net, const DiameterState& state,
                                     long max_combinations) {
    const int n = net.node_count();
    const int m = net.edge_count();
    const int s0 = net.source(), s1 = net.sink();
    if (n < 2) throw std::invalid_argument("need at least two nodes");

    // number of (n-1)-subsets to scan
    double combos = 1;
    for (int i = 1; i <= n - 1; ++i) combos *= static_cast<double>(m - i + 1) / i;
    if (combos > static_cast<double>(max_combinations))
        throw std::runtime_error("instance too large for spanning-tree enumeration");

    std::vector<double> weight(m);
    for (int e = 0; e < m; ++e) weight[e] = conductance(net, state, e);

    std::vector<double> numer(m, 0.0);
    double denom = 0.0;

    std::vector<int> pick(n - 1);
    std::iota(pick.begin(), pick.end(), 0);
    std::vector<int> parent_node(n), parent_edge(n), uf(n);

    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };

    auto process = [&](const std::vector<int>& tree) {
        std::iota(uf.begin(), uf.end(), 0);
        for (int e : tree) {
            int a = find(net.tail(e)), b = find(net.head(e));
            if (a == b) return;  // cycle, not spanning
            uf[a] = b;
        }
        double w = 1.0;
        for (int e : tree) w *= weight[e];
        denom += w;
        // unique s0 -> s1 path in the tree, by BFS
        std::fill(parent_node.begin(), parent_node.end(), -1);
        parent_node[s0] = s0;
        std::vector<int> queue = {s0};
        std::vector<std::vector<std::pair<int, int>>> adj(n);
        for (int e : tree) {
            adj[net.tail(e)].push_back({net.head(e), e});
            adj[net.head(e)].push_back({net.tail(e), e});
        }
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [w2, e] : adj[v])
                if (parent_node[w2] < 0) {
                    parent_node[w2] = v;
                    parent_edge[w2] = e;
                    queue.push_back(w2);
                }
        }
        for (int v = s1; v != s0; v = parent_node[v]) {
            int e = parent_edge[v];
            // +w when the path traverses e in its reference orientation
            numer[e] += (net.head(e) == v) ? w : -w;
        }
    };

    if (m >= n - 1) {
        while (true) {
            process(pick);
            int i = n - 2;
            while (i >= 0 && pick[i] == m - (n - 1) + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < n - 1; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    if (denom == 0) throw std::runtime_error("graph has no spanning tree");
    std::vector<double> q(m);
    for (int e = 0; e < m; ++e) q[e] = numer[e] / denom;
    return q;
}

}  // namespace physarum

#include "physarum/transportation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace physarum {
namespace transportation {

Instance build_instance(const Network& net, const std::string& anchor, double aux_length) {
    int anchor_idx = net.node_index(anchor);

    std::string aux_node = "s0";
    while (net.has_node(aux_node)) aux_node += "_aux";
    std::string aux_edge = "aux";
    bool clash = true;
    while (clash) {
        clash = false;
        for (const Edge& e : net.edges())
            if (e.id == aux_edge) {
                aux_edge += "_";
                clash = true;
            }
    }

    std::vector<std::string> nodes = net.nodes();
    nodes.push_back(aux_node);
    std::vector<Edge> edges = net.edges();
    edges.push_back({aux_edge, aux_node, anchor, aux_length});
    std::unordered_map<std::string, double> supplies;
    for (int v = 0; v < net.node_count(); ++v)
        if (net.supply(v) != 0.0) supplies[net.nodes()[v]] = net.supply(v);
    supplies[aux_node] = 1.0;
    supplies[net.nodes()[anchor_idx]] = net.supply(anchor_idx) - 1.0;

    return {Network(std::move(nodes), std::move(edges), std::move(supplies)),
            aux_node, aux_edge, anchor};
}

EquilibriumCheck equal_length_check(const Network& net, const DiameterState& state,
                                    const ElectricalSolution& solution, double tol) {
    EquilibriumCheck out;
    const int n = net.node_count(), m = net.edge_count();
    for (int e = 0; e < m; ++e)
        out.residual = std::max(out.residual,
                                std::abs(state.d[e] - std::abs(solution.flows[e])));

    // directed support graph: edge usable from higher to lower potential
    std::vector<int> support;
    for (int e = 0; e < m; ++e)
        if (std::abs(solution.flows[e]) > tol) support.push_back(e);

    // forest check on the undirected support
    {
        std::vector<int> uf(n);
        for (int v = 0; v < n; ++v) uf[v] = v;
        std::function<int(int)> find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        for (int e : support) {
            int a = find(net.tail(e)), b = find(net.head(e));
            if (a == b) {
                out.is_tree = false;
                break;
            }
            uf[a] = b;
        }
    }

    // longest/shortest directed path length between every node pair, by DFS
    constexpr double kUnset = -1;
    std::vector<std::vector<double>> lo(n, std::vector<double>(n, kUnset));
    std::vector<std::vector<double>> hi(n, std::vector<double>(n, kUnset));
    std::vector<char> on_path(n, 0);
    std::function<void(int, int, double)> dfs = [&](int start, int v, double len) {
        if (v != start) {
            if (lo[start][v] == kUnset || len < lo[start][v]) lo[start][v] = len;
            if (len > hi[start][v]) hi[start][v] = len;
        }
        for (int e : support) {
            double q = solution.flows[e];
            int from = q > 0 ? net.tail(e) : net.head(e);
            int to = q > 0 ? net.head(e) : net.tail(e);
            if (from != v || on_path[to]) continue;
            on_path[to] = 1;
            dfs(start, to, len + net.length(e));
            on_path[to] = 0;
        }
    };
    for (int v = 0; v < n; ++v) {
        std::fill(on_path.begin(), on_path.end(), 0);
        on_path[v] = 1;
        dfs(v, v, 0);
    }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (lo[u][v] != kUnset)
                out.equal_length_violation =
                    std::max(out.equal_length_violation, hi[u][v] - lo[u][v]);
    return out;
}

namespace {

// Flow induced by a forest: on each forest edge, the total imbalance of the
// subtree hanging off its tail side. Returns false if some component is
// unbalanced (no feasible flow on this forest).
bool forest_flow(const Network& net, const std::vector<int>& forest,
                 std::vector<double>& flow) {
    const int n = net.node_count();
    flow.assign(net.edge_count(), 0.0);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (other node, edge)
    for (int e : forest) {
        adj[net.tail(e)].push_back({net.head(e), e});
        adj[net.head(e)].push_back({net.tail(e), e});
    }
    std::vector<char> seen(n, 0);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        // iterative post-order: subtree imbalance flows over the parent edge
        std::vector<std::tuple<int, int, int>> stack = {{root, -1, -1}};  // v, parent, edge
        std::vector<std::tuple<int, int, int>> order;
        seen[root] = 1;
        while (!stack.empty()) {
            auto [v, parent, pe] = stack.back();
            stack.pop_back();
            order.push_back({v, parent, pe});
            for (auto [w, e] : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back({w, v, e});
                }
        }
        std::vector<double> subtree(n, 0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            auto [v, parent, pe] = *it;
            subtree[v] += net.supply(v);
            if (parent >= 0) {
                // flow of subtree imbalance towards the parent
                double f = subtree[v];
                flow[pe] = (net.tail(pe) == v) ? f : -f;
                subtree[parent] += subtree[v];
            } else if (std::abs(subtree[v]) > 1e-9) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

OracleResult min_cost_oracle(const Network& net, int max_edges) {
    const int m = net.edge_count();
    if (m > max_edges) throw std::runtime_error("instance too large for forest enumeration");

    // enumerate acyclic edge subsets
    std::vector<std::vector<int>> forests;
    std::vector<int> current;
    std::function<void(int)> recurse = [&](int e) {
        if (e == m) {
            forests.push_back(current);
            return;
        }
        recurse(e + 1);
        // keep acyclic
        std::vector<int> uf(net.node_count());
        for (int v = 0; v < net.node_count(); ++v) uf[v] = v;
        std::function<int(int)> find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        bool ok = true;
        for (int f : current) uf[find(net.tail(f))] = find(net.head(f));
        if (find(net.tail(e)) == find(net.head(e))) ok = false;
        if (ok) {
            current.push_back(e);
            recurse(e + 1);
            current.pop_back();
        }
    };
    recurse(0);

    // distinct feasible flows and their costs
    std::map<std::vector<long long>, double> flows_seen;
    std::vector<std::pair<double, std::vector<double>>> solutions;
    std::vector<double> flow;
    for (const auto& forest : forests) {
        if (!forest_flow(net, forest, flow)) continue;
        std::vector<long long> key(m);
        for (int e = 0; e < m; ++e) key[e] = std::llround(flow[e] * 1e10);
        double cost = 0;
        for (int e = 0; e < m; ++e) cost += net.length(e) * std::abs(flow[e]);
        if (flows_seen.emplace(std::move(key), cost).second)
            solutions.push_back({cost, flow});
    }
    if (solutions.empty()) throw std::runtime_error("infeasible transportation instance");

    std::sort(solutions.begin(), solutions.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    OracleResult out;
    out.cost = solutions[0].first;
    out.flow = solutions[0].second;
    for (size_t i = 0; i + 1 < solutions.size(); ++i)
        if (solutions[i + 1].first - solutions[i].first <= 1e-9) {
            out.cost_tie = true;
            break;
        }
    if (solutions.size() > 1) out.runner_up_cost = solutions[1].first;
    return out;
}

ConvergenceReport convergence_report(const Instance& instance, const Trajectory& traj,
                                     const OracleResult& oracle) {
    const Network& net = instance.extended;
    const int aux = net.edge_index(instance.aux_edge);
    ConvergenceReport rep;
    rep.oracle_cost = oracle.cost;
    rep.cost_tie = oracle.cost_tie;
    for (const Sample& s : traj.samples) {
        rep.residuals.push_back(equilibrium_residual(s.state, s.solution));
        rep.max_aux_flow_deviation = std::max(
            rep.max_aux_flow_deviation, std::abs(std::abs(s.solution.flows[aux]) - 1.0));
    }
    const Sample& last = traj.back();
    for (int e = 0; e < net.edge_count(); ++e)
        rep.terminal_cost += net.length(e) * std::abs(last.solution.flows[e]);
    rep.cost_gap = rep.terminal_cost - rep.oracle_cost;
    return rep;
}

}  // namespace transportation
}  // namespace physarum

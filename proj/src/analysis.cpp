#include "physarum/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace physarum {

namespace {
constexpr double kTieTol = 1e-9;
}

std::vector<double> dijkstra(const Network& net, int from) {
    std::vector<double> dist(net.node_count(), std::numeric_limits<double>::infinity());
    dist[from] = 0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0, from});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (auto [e, dir] : net.incident(v)) {
            int w = dir > 0 ? net.head(e) : net.tail(e);
            double nd = d + net.length(e);
            if (nd < dist[w] - 1e-300) {
                dist[w] = nd;
                heap.push({nd, w});
            }
        }
    }
    return dist;
}

ShortestPathSummary shortest_path_oracle(const Network& net) {
    const int s0 = net.source(), s1 = net.sink();
    ShortestPathSummary out;
    out.dist = dijkstra(net, s1);
    std::vector<double> dist0 = dijkstra(net, s0);
    out.l_star = out.dist[s0];

    out.in_g0.assign(net.edge_count(), 0);
    for (int e = 0; e < net.edge_count(); ++e) {
        int u = net.tail(e), v = net.head(e);
        double via_uv = dist0[u] + net.length(e) + out.dist[v];
        double via_vu = dist0[v] + net.length(e) + out.dist[u];
        if (std::min(via_uv, via_vu) <= out.l_star + kTieTol) out.in_g0[e] = 1;
    }

    // count shortest paths over G0: count[v] = sum over tight edges to
    // nodes closer to s1, processed by increasing dist(.,s1)
    std::vector<int> order(net.node_count());
    for (int v = 0; v < net.node_count(); ++v) order[v] = v;
    std::vector<double> count(net.node_count(), 0);
    count[s1] = 1;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return out.dist[a] < out.dist[b]; });
    for (int v : order) {
        if (v == s1) continue;
        double c = 0;
        for (auto [e, dir] : net.incident(v)) {
            if (!out.in_g0[e]) continue;
            int w = dir > 0 ? net.head(e) : net.tail(e);
            if (std::abs(out.dist[v] - (net.length(e) + out.dist[w])) <= kTieTol) c += count[w];
        }
        count[v] = c;
    }
    out.unique = std::abs(count[s0] - 1.0) < 0.5;

    if (out.unique) {
        int v = s0;
        out.path_nodes.push_back(v);
        std::set<int> used;
        while (v != s1) {
            int next_edge = -1, next_node = -1;
            for (auto [e, dir] : net.incident(v)) {
                if (!out.in_g0[e] || used.count(e)) continue;
                int w = dir > 0 ? net.head(e) : net.tail(e);
                if (std::abs(out.dist[v] - (net.length(e) + out.dist[w])) <= kTieTol) {
                    next_edge = e;
                    next_node = w;
                    break;
                }
            }
            if (next_edge < 0) throw std::logic_error("shortest path reconstruction failed");
            used.insert(next_edge);
            out.path_edges.push_back(next_edge);
            out.path_nodes.push_back(next_node);
            v = next_node;
        }
    }
    return out;
}

std::vector<AttractionRow> attraction_metrics(const Network& net, const Trajectory& traj,
                                              const ShortestPathSummary& summary) {
    const int s0 = net.source();
    std::vector<char> on_p0(net.edge_count(), 0);
    for (int e : summary.path_edges) on_p0[e] = 1;
    std::vector<char> on_p0_node(net.node_count(), 0);
    for (int v : summary.path_nodes) on_p0_node[v] = 1;

    std::vector<AttractionRow> rows;
    rows.reserve(traj.samples.size());
    for (const Sample& s : traj.samples) {
        AttractionRow row;
        row.t = s.t;
        double g0_out = 0;
        for (int e = 0; e < net.edge_count(); ++e) {
            if (!summary.in_g0[e]) row.mass_off_g0 += s.state.d[e];
            if (summary.in_g0[e]) {
                if (net.tail(e) == s0) g0_out += s.solution.flows[e];
                if (net.head(e) == s0) g0_out -= s.solution.flows[e];
            }
            if (summary.unique) {
                double target = on_p0[e] ? 1.0 : 0.0;
                row.max_diameter_error =
                    std::max(row.max_diameter_error, std::abs(s.state.d[e] - target));
            }
        }
        row.value_deviation = std::abs(g0_out - 1.0);
        row.drop_error = std::abs(s.solution.drop - summary.l_star);
        if (summary.unique)
            for (int v : summary.path_nodes)
                row.potential_error = std::max(
                    row.potential_error, std::abs(s.solution.potentials[v] - summary.dist[v]));
        rows.push_back(row);
    }
    return rows;
}

namespace {

struct Candidate {
    int a = 0, b = 0;             // endpoints on the skeleton, p*_a >= p*_b
    std::vector<int> edges;
    std::vector<int> nodes;       // a .. b
    double length = 0;
    double slope = 0;
};

// All simple paths between skeleton nodes whose interior avoids the
// skeleton and whose edges are unused.
void enumerate_candidates(const Network& net, const std::vector<char>& on_skeleton,
                          const std::vector<char>& edge_used,
                          const std::vector<double>& p_star,
                          std::vector<Candidate>& out) {
    std::set<std::vector<int>> seen;
    std::vector<int> edges, nodes;
    std::vector<char> visited(net.node_count(), 0);

    auto emit = [&](int a, int b) {
        std::vector<int> key = edges;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) return;
        Candidate c;
        if (p_star[a] >= p_star[b]) {
            c.a = a;
            c.b = b;
            c.edges = edges;
            c.nodes = nodes;
        } else {
            c.a = b;
            c.b = a;
            c.edges.assign(edges.rbegin(), edges.rend());
            c.nodes.assign(nodes.rbegin(), nodes.rend());
        }
        for (int e : edges) c.length += net.length(e);
        c.slope = (p_star[c.a] - p_star[c.b]) / c.length;
        out.push_back(std::move(c));
    };

    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (auto [e, dir] : net.incident(v)) {
            if (edge_used[e]) continue;
            if (!edges.empty() && e == edges.back()) continue;
            int w = dir > 0 ? net.head(e) : net.tail(e);
            if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
            edges.push_back(e);
            nodes.push_back(w);
            if (on_skeleton[w]) {
                emit(start, w);
            } else if (!visited[w]) {
                visited[w] = 1;
                dfs(start, w);
                visited[w] = 0;
            }
            edges.pop_back();
            nodes.pop_back();
        }
    };

    for (int a = 0; a < net.node_count(); ++a) {
        if (!on_skeleton[a]) continue;
        edges.clear();
        nodes.assign(1, a);
        dfs(a, a);
    }
}

std::vector<std::string> edge_id_key(const Network& net, const std::vector<int>& edges) {
    std::vector<std::string> ids;
    for (int e : edges) ids.push_back(net.edge(e).id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

PathDecomposition path_decomposition(const Network& net, int max_edges) {
    if (net.edge_count() > max_edges)
        throw std::runtime_error("graph too large for path decomposition");
    ShortestPathSummary summary = shortest_path_oracle(net);
    if (!summary.unique)
        throw std::runtime_error("path decomposition requires a unique shortest path");

    const int n = net.node_count(), m = net.edge_count();
    PathDecomposition dec;
    dec.p_star.assign(n, std::numeric_limits<double>::quiet_NaN());
    dec.decay_rate.assign(m, 0);
    dec.orientation.assign(m, EdgeOrientation::Horizontal);

    std::vector<char> on_skeleton(n, 0), edge_used(m, 0);
    for (int e = 0; e < m; ++e)
        if (net.off_support(e)) {
            edge_used[e] = 1;
            dec.skipped_edges.push_back(e);
            dec.decay_rate[e] = -1;
        }

    auto adopt = [&](const Candidate& c, double slope) {
        PathDecomposition::Path p;
        p.edges = c.edges;
        p.nodes = c.nodes;
        p.slope = slope;
        double remaining = c.length;
        for (size_t i = 0; i < c.edges.size(); ++i) {
            int e = c.edges[i];
            edge_used[e] = 1;
            dec.decay_rate[e] = slope - 1.0;
            // traversal direction: from nodes[i] to nodes[i+1]
            bool forward = net.tail(e) == c.nodes[i];
            dec.orientation[e] = slope > 0
                                     ? (forward ? EdgeOrientation::Forward : EdgeOrientation::Backward)
                                     : EdgeOrientation::Horizontal;
            remaining -= net.length(e);
            int v = c.nodes[i + 1];
            if (!on_skeleton[v]) {
                dec.p_star[v] = dec.p_star[c.b] + slope * remaining;
                on_skeleton[v] = 1;
            }
        }
        dec.paths.push_back(std::move(p));
    };

    // P_0: the shortest path, slope 1, p* = dist(.,s1)
    {
        Candidate c;
        c.a = net.source();
        c.b = net.sink();
        c.edges = summary.path_edges;
        c.nodes = summary.path_nodes;
        c.length = summary.l_star;
        for (int v : summary.path_nodes) dec.p_star[v] = summary.dist[v];
        on_skeleton[net.source()] = on_skeleton[net.sink()] = 1;
        adopt(c, 1.0);
    }

    while (std::count(edge_used.begin(), edge_used.end(), 0) > 0) {
        std::vector<Candidate> cands;
        enumerate_candidates(net, on_skeleton, edge_used, dec.p_star, cands);
        if (cands.empty())
            throw std::runtime_error("decomposition stuck: remaining edges unreachable");
        double fmax = -1;
        for (const Candidate& c : cands) fmax = std::max(fmax, c.slope);
        std::vector<const Candidate*> top;
        for (const Candidate& c : cands)
            if (c.slope >= fmax - 1e-12) top.push_back(&c);
        if (fmax > 1e-12 && top.size() > 1)
            throw std::runtime_error("non-unique positive-slope argmax path");
        const Candidate* chosen = top[0];
        if (top.size() > 1) {
            for (const Candidate* c : top)
                if (edge_id_key(net, c->edges) < edge_id_key(net, chosen->edges)) chosen = c;
        }
        adopt(*chosen, fmax > 1e-12 ? fmax : 0.0);
    }

    dec.i0 = 0;
    for (size_t i = 0; i < dec.paths.size(); ++i)
        if (dec.paths[i].slope > 1e-12) dec.i0 = static_cast<int>(i);
    return dec;
}

DecayFit decay_rate_fit(const Trajectory& traj, int edge, double t_a, double t_b) {
    if (t_a >= t_b) throw std::invalid_argument("empty decay window");
    if (t_b > traj.back().t + 1e-9) throw std::out_of_range("window beyond trajectory");
    DecayFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long count = 0;
    for (const Sample& s : traj.samples) {
        if (s.t < t_a - 1e-12 || s.t > t_b + 1e-12) continue;
        double d = s.state.d[edge];
        if (d <= traj.config.diameter_floor * 1.0001) fit.floored = true;
        double x = s.t, y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw std::invalid_argument("window contains fewer than two samples");
    fit.rate = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return fit;
}

std::vector<EdgeClass> stabilization_classify(const Network& net, const Trajectory& traj,
                                              const ClassifyConfig& config) {
    const double t_end = traj.back().t;
    const double t_tail = t_end * (1.0 - config.tail_fraction);
    const double eps = config.eps_h.value_or(1e-3 * net.length_min());

    std::vector<EdgeClass> out(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        bool all_small = true, all_pos = true, all_neg = true;
        for (const Sample& s : traj.samples) {
            if (s.t < t_tail) continue;
            double drop = s.solution.potential_drop(net, e);
            if (std::abs(drop) >= eps) all_small = false;
            if (drop < eps) all_pos = false;
            if (drop > -eps) all_neg = false;
        }
        if (all_small)
            out[e] = EdgeClass::Horizontal;
        else if (all_pos)
            out[e] = EdgeClass::DirectedForward;
        else if (all_neg)
            out[e] = EdgeClass::DirectedBackward;
        else
            out[e] = EdgeClass::Unstable;
    }
    return out;
}

double path_log_weight(const Network& net, const DiameterState& state,
                       const std::vector<int>& path_edges) {
    double total = 0;
    for (int e : path_edges) total += net.length(e) * std::log(state.d[e]);
    return total;
}

}  // namespace physarum

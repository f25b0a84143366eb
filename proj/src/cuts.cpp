#include "physarum/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace physarum {

double cut_capacity(const Network& net, const DiameterState& state,
                    const std::vector<char>& in_side) {
    double c = 0;
    for (int e = 0; e < net.edge_count(); ++e) {
        if (net.off_support(e)) continue;
        if (in_side[net.tail(e)] != in_side[net.head(e)]) c += state.d[e];
    }
    return c;
}

namespace {

double cut_imbalance(const Network& net, const std::vector<char>& in_side) {
    double b = 0;
    for (int v = 0; v < net.node_count(); ++v)
        if (in_side[v]) b += net.supply(v);
    return b;
}

std::vector<int> side_nodes(const std::vector<char>& in_side) {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(in_side.size()); ++v)
        if (in_side[v]) out.push_back(v);
    return out;
}

// BFS augmenting-path max flow with capacities D_e on both directions of
// each undirected edge. Returns the residual source side.
struct MaxFlow {
    double value = 0;
    std::vector<char> source_side;
};

MaxFlow run_max_flow(const Network& net, const DiameterState& state, int s, int t) {
    const int m = net.edge_count();
    const int n = net.node_count();
    std::vector<double> flow(m, 0.0);  // signed, relative to reference orientation
    double cap_max = 0;
    for (int e = 0; e < m; ++e)
        if (!net.off_support(e)) cap_max = std::max(cap_max, state.d[e]);
    const double eps = std::max(cap_max, 1.0) * 1e-14;

    MaxFlow out;
    std::vector<int> prev_edge(n), prev_node(n);
    for (int iter = 0; iter < 4 * n * m + 16; ++iter) {
        std::fill(prev_node.begin(), prev_node.end(), -1);
        prev_node[s] = s;
        std::vector<int> queue = {s};
        for (size_t qi = 0; qi < queue.size() && prev_node[t] < 0; ++qi) {
            int v = queue[qi];
            for (auto [e, dir] : net.incident(v)) {
                if (net.off_support(e)) continue;
                int w = dir > 0 ? net.head(e) : net.tail(e);
                if (prev_node[w] >= 0) continue;
                double residual = state.d[e] - dir * flow[e];
                if (residual <= eps) continue;
                prev_node[w] = v;
                prev_edge[w] = dir > 0 ? e : ~e;  // ~e marks reverse traversal
                queue.push_back(w);
            }
        }
        if (prev_node[t] < 0) {
            out.source_side.assign(n, 0);
            for (int v = 0; v < n; ++v)
                if (prev_node[v] >= 0) out.source_side[v] = 1;
            out.value = 0;
            for (int e = 0; e < m; ++e)
                if (!net.off_support(e) && out.source_side[net.tail(e)] != out.source_side[net.head(e)])
                    out.value += std::abs(flow[e]);
            return out;
        }
        double push = std::numeric_limits<double>::infinity();
        for (int v = t; v != s; v = prev_node[v]) {
            int code = prev_edge[v];
            int e = code >= 0 ? code : ~code;
            int dir = code >= 0 ? 1 : -1;
            push = std::min(push, state.d[e] - dir * flow[e]);
        }
        for (int v = t; v != s; v = prev_node[v]) {
            int code = prev_edge[v];
            int e = code >= 0 ? code : ~code;
            flow[e] += (code >= 0 ? push : -push);
        }
    }
    throw std::runtime_error("max flow did not terminate");
}

}  // namespace

double max_flow_value(const Network& net, const DiameterState& state) {
    auto mf = run_max_flow(net, state, net.source(), net.sink());
    return cut_capacity(net, state, mf.source_side);
}

CutResult min_cut(const Network& net, const DiameterState& state, int enumeration_bound) {
    const int n = net.node_count();
    const int s0 = net.source(), s1 = net.sink();
    CutResult best;
    if (n <= enumeration_bound) {
        std::vector<int> free_nodes;
        for (int v = 0; v < n; ++v)
            if (v != s0 && v != s1) free_nodes.push_back(v);
        const int k = static_cast<int>(free_nodes.size());
        std::vector<char> in_side(n, 0);
        double best_cap = std::numeric_limits<double>::infinity();
        std::vector<int> best_side;
        for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
            std::fill(in_side.begin(), in_side.end(), 0);
            in_side[s0] = 1;
            for (int i = 0; i < k; ++i)
                if (mask & (1ul << i)) in_side[free_nodes[i]] = 1;
            double c = cut_capacity(net, state, in_side);
            auto nodes = side_nodes(in_side);
            if (c < best_cap || (c == best_cap && nodes < best_side)) {
                best_cap = c;
                best_side = nodes;
                best.imbalance = cut_imbalance(net, in_side);
            }
        }
        best.side = best_side;
        best.capacity = best_cap;
    } else {
        auto mf = run_max_flow(net, state, s0, s1);
        best.side = side_nodes(mf.source_side);
        best.capacity = mf.value;
        best.imbalance = cut_imbalance(net, mf.source_side);
    }
    best.ratio = best.capacity;  // |b_S| = 1 for s0-s1 cuts
    return best;
}

CutResult most_constraining_cut(const Network& net, const DiameterState& state,
                                int enumeration_bound) {
    const int n = net.node_count();
    if (n > enumeration_bound)
        throw std::runtime_error("instance too large for cut enumeration");
    CutResult best;
    double best_ratio = std::numeric_limits<double>::infinity();
    double best_imbalance = 0;
    std::vector<int> best_side;
    std::vector<char> in_side(n, 0);
    for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
        for (int v = 0; v < n; ++v) in_side[v] = (mask >> v) & 1;
        double b = cut_imbalance(net, in_side);
        if (b == 0) continue;
        double ratio = cut_capacity(net, state, in_side) / std::abs(b);
        auto nodes = side_nodes(in_side);
        bool better = ratio < best_ratio;
        if (!better && ratio == best_ratio) {
            // prefer the supply side, then the lexicographically smallest set
            if ((b > 0) != (best_imbalance > 0))
                better = b > 0;
            else
                better = nodes < best_side;
        }
        if (better) {
            best_ratio = ratio;
            best_side = nodes;
            best_imbalance = b;
        }
    }
    if (best_side.empty()) throw std::runtime_error("no nontrivial cut");
    best.side = best_side;
    best.imbalance = best_imbalance;
    best.ratio = best_ratio;
    best.capacity = best_ratio * std::abs(best_imbalance);
    return best;
}

}  // namespace physarum

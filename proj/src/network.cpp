#include "physarum/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace physarum {

namespace {

// Biconnected components of a connected multigraph, as an edge -> block id
// map, plus the set of articulation points. Iterative DFS; parallel edges
// are distinct edges and end up in the same block.
struct BlockDecomposition {
    std::vector<int> edge_block;       // per edge
    std::vector<char> is_cut_vertex;   // per node
    int block_count = 0;
};

BlockDecomposition biconnected_components(int n, const std::vector<int>& tail,
                                          const std::vector<int>& head) {
    const int m = static_cast<int>(tail.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
    for (int e = 0; e < m; ++e) {
        adj[tail[e]].push_back({head[e], e});
        adj[head[e]].push_back({tail[e], e});
    }

    BlockDecomposition out;
    out.edge_block.assign(m, -1);
    out.is_cut_vertex.assign(n, 0);

    std::vector<int> disc(n, -1), low(n, 0), child_count(n, 0);
    std::vector<int> edge_stack;
    int timer = 0;

    struct Frame {
        int v, parent_edge;
        size_t next = 0;
    };

    for (int root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<Frame> stack;
        stack.push_back({root, -1});
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < adj[f.v].size()) {
                auto [w, e] = adj[f.v][f.next++];
                if (e == f.parent_edge) continue;
                if (disc[w] < 0) {
                    edge_stack.push_back(e);
                    disc[w] = low[w] = timer++;
                    if (f.parent_edge < 0) ++child_count[f.v];
                    stack.push_back({w, e});
                } else if (disc[w] < disc[f.v]) {
                    edge_stack.push_back(e);
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                int v = f.v;
                int pe = f.parent_edge;
                stack.pop_back();
                if (pe >= 0) {
                    int p = stack.back().v;
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] >= disc[p]) {
                        if (stack.back().parent_edge >= 0 || child_count[p] > 1)
                            out.is_cut_vertex[p] = 1;
                        int b = out.block_count++;
                        while (true) {
                            int e = edge_stack.back();
                            edge_stack.pop_back();
                            out.edge_block[e] = b;
                            if (e == pe) break;
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

Network::Network(std::vector<std::string> nodes, std::vector<Edge> edges,
                 std::unordered_map<std::string, double> supplies)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
        if (!node_idx_.emplace(nodes_[i], i).second)
            throw std::invalid_argument("duplicate node id: " + nodes_[i]);
    }
    supply_.assign(nodes_.size(), 0.0);
    for (const auto& [id, b] : supplies) {
        auto it = node_idx_.find(id);
        if (it == node_idx_.end())
            throw std::invalid_argument("supply for unknown node: " + id);
        supply_[it->second] = b;
    }
    incident_.resize(nodes_.size());
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const Edge& ed = edges_[e];
        if (!edge_idx_.emplace(ed.id, e).second)
            throw std::invalid_argument("duplicate edge id: " + ed.id);
        auto iu = node_idx_.find(ed.u), iv = node_idx_.find(ed.v);
        if (iu == node_idx_.end() || iv == node_idx_.end())
            throw std::invalid_argument("edge " + ed.id + " references unknown node");
        if (iu == iv) throw std::invalid_argument("self-loop not allowed: " + ed.id);
        tail_.push_back(iu->second);
        head_.push_back(iv->second);
        incident_[iu->second].push_back({e, +1});
        incident_[iv->second].push_back({e, -1});
    }
    validate();

    length_min_ = length_max_ = edges_.empty() ? 0.0 : edges_[0].length;
    for (const Edge& ed : edges_) {
        length_min_ = std::min(length_min_, ed.length);
        length_max_ = std::max(length_max_, ed.length);
    }

    auto nz = nonzero_supply_nodes();
    if (nz.size() == 2) {
        int a = nz[0], b = nz[1];
        if (supply_[a] == 1.0 && supply_[b] == -1.0) {
            sp_source_ = a;
            sp_sink_ = b;
        } else if (supply_[a] == -1.0 && supply_[b] == 1.0) {
            sp_source_ = b;
            sp_sink_ = a;
        }
    }
    compute_support_flags();
}

void Network::validate() const {
    if (nodes_.empty()) throw std::invalid_argument("network has no nodes");
    for (const Edge& ed : edges_) {
        if (!(ed.length > 0))
            throw std::invalid_argument("nonpositive length on edge " + ed.id);
    }
    double total = 0;
    for (double b : supply_) total += b;
    if (std::abs(total) > 1e-12)
        throw std::invalid_argument("supplies do not sum to zero");

    // connectivity
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> queue = {0};
    seen[0] = 1;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (auto [e, dir] : incident_[v]) {
            int w = dir > 0 ? head_[e] : tail_[e];
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(nodes_.size()))
        throw std::invalid_argument("graph is not connected");
}

void Network::compute_support_flags() {
    const int n = node_count(), m = edge_count();
    off_support_.assign(m, 0);
    off_support_count_ = 0;
    auto terminals = nonzero_supply_nodes();
    if (terminals.size() < 2) {
        off_support_.assign(m, 1);
        off_support_count_ = m;
        return;
    }
    // An edge lies on a simple path between two terminals iff its block
    // lies on the block-cut-tree path between some terminal pair.
    auto dec = biconnected_components(n, tail_, head_);
    const int B = dec.block_count;

    // block-cut tree: block nodes [0,B), vertex nodes [B, B+n)
    std::vector<std::vector<int>> tree(B + n);
    std::vector<std::set<int>> block_vertices(B);
    for (int e = 0; e < m; ++e) {
        block_vertices[dec.edge_block[e]].insert(tail_[e]);
        block_vertices[dec.edge_block[e]].insert(head_[e]);
    }
    for (int b = 0; b < B; ++b)
        for (int v : block_vertices[b]) {
            tree[b].push_back(B + v);
            tree[B + v].push_back(b);
        }

    // A terminal maps to its vertex node in the tree.
    std::vector<char> block_used(B, 0);
    std::vector<int> parent(B + n);
    for (size_t i = 0; i < terminals.size(); ++i) {
        // BFS from terminal i, then walk back from every other terminal
        std::fill(parent.begin(), parent.end(), -2);
        std::vector<int> queue = {B + terminals[i]};
        parent[B + terminals[i]] = -1;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int x = queue[qi];
            for (int y : tree[x])
                if (parent[y] == -2) {
                    parent[y] = x;
                    queue.push_back(y);
                }
        }
        for (size_t j = i + 1; j < terminals.size(); ++j) {
            int x = B + terminals[j];
            while (x != -1) {
                if (x < B) block_used[x] = 1;
                x = parent[x];
            }
        }
    }
    for (int e = 0; e < m; ++e) {
        if (!block_used[dec.edge_block[e]]) {
            off_support_[e] = 1;
            ++off_support_count_;
        }
    }
}

int Network::node_index(const std::string& id) const {
    auto it = node_idx_.find(id);
    if (it == node_idx_.end()) throw std::invalid_argument("unknown node: " + id);
    return it->second;
}

int Network::edge_index(const std::string& id) const {
    auto it = edge_idx_.find(id);
    if (it == edge_idx_.end()) throw std::invalid_argument("unknown edge: " + id);
    return it->second;
}

int Network::source() const {
    if (sp_source_ < 0) throw std::logic_error("not a shortest-path instance");
    return sp_source_;
}

int Network::sink() const {
    if (sp_sink_ < 0) throw std::logic_error("not a shortest-path instance");
    return sp_sink_;
}

std::vector<int> Network::nonzero_supply_nodes() const {
    std::vector<int> out;
    for (int v = 0; v < node_count(); ++v)
        if (supply_[v] != 0.0) out.push_back(v);
    return out;
}

Network Network::shortest_path_instance(const std::string& s0, const std::string& s1) const {
    if (s0 == s1) throw std::invalid_argument("source and sink coincide");
    node_index(s0);
    node_index(s1);
    return Network(nodes_, edges_, {{s0, 1.0}, {s1, -1.0}});
}

DiameterState uniform_state(const Network& net, double value) {
    if (!(value > 0)) throw std::invalid_argument("diameter must be positive");
    DiameterState s;
    s.d.assign(net.edge_count(), value);
    return s;
}

}  // namespace physarum

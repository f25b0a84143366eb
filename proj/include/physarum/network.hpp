#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace physarum {

struct Edge {
    std::string id;
    std::string u;
    std::string v;
    double length = 1.0;
};

/// Undirected multigraph with positive edge lengths and balanced node
/// supplies. Immutable after construction; iteration order of nodes and
/// edges is insertion order.
class Network {
public:
    Network(std::vector<std::string> nodes, std::vector<Edge> edges,
            std::unordered_map<std::string, double> supplies);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }

    int node_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
    bool has_node(const std::string& id) const { return node_idx_.count(id) > 0; }

    double supply(int v) const { return supply_[v]; }
    const std::vector<double>& supplies() const { return supply_; }

    // endpoint node indices of edge e, in the reference orientation (u,v)
    int tail(int e) const { return tail_[e]; }
    int head(int e) const { return head_[e]; }
    double length(int e) const { return edges_[e].length; }

    double length_min() const { return length_min_; }
    double length_max() const { return length_max_; }

    /// Edges that lie on no path between two nonzero-supply nodes. They
    /// carry no flow; their diameters decay as D(0)exp(-t) and they are
    /// skipped when cut capacities are accumulated.
    bool off_support(int e) const { return off_support_[e]; }
    int off_support_count() const { return off_support_count_; }

    /// Exactly two nonzero supplies, +1 and -1.
    bool is_shortest_path_instance() const { return sp_source_ >= 0; }
    int source() const;  // node with supply +1
    int sink() const;    // node with supply -1

    std::vector<int> nonzero_supply_nodes() const;

    /// edges incident to v, as (edge index, +1 if v is the tail else -1)
    const std::vector<std::pair<int, int>>& incident(int v) const { return incident_[v]; }

    /// Copy with supplies replaced by b_{s0}=+1, b_{s1}=-1, 0 elsewhere.
    Network shortest_path_instance(const std::string& s0, const std::string& s1) const;

private:
    void validate() const;
    void compute_support_flags();

    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::vector<double> supply_;
    std::unordered_map<std::string, int> node_idx_;
    std::unordered_map<std::string, int> edge_idx_;
    std::vector<int> tail_, head_;
    std::vector<std::vector<std::pair<int, int>>> incident_;
    std::vector<char> off_support_;
    int off_support_count_ = 0;
    double length_min_ = 0, length_max_ = 0;
    int sp_source_ = -1, sp_sink_ = -1;
};

/// Strictly positive diameters indexed like Network::edges().
struct DiameterState {
    std::vector<double> d;
    double t = 0.0;
};

inline double resistance(const Network& net, const DiameterState& s, int e) {
    return net.length(e) / s.d[e];
}
inline double conductance(const Network& net, const DiameterState& s, int e) {
    return s.d[e] / net.length(e);
}

DiameterState uniform_state(const Network& net, double value = 1.0);

}  // namespace physarum

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aggsched {

using NodeId = std::int32_t;

/// Connected weighted unit-disk network under test. Immutable once built;
/// node ids are dense 0..n-1 and the id order doubles as the total order
/// used for tie-breaking throughout the scheduler.
class Wsn {
public:
    Wsn() = default;

    // Line-oriented topology document; see README for the grammar.
    static Wsn from_topology_text(std::string_view text);
    static Wsn from_topology_file(const std::string& path);

    // Explicit construction, mainly for tests and generated instances.
    static Wsn from_parts(int node_count, NodeId sink, const std::vector<std::pair<NodeId, NodeId>>& edges,
                          const std::vector<int>& rho);

    // Uniform placement in [0,L]^2, unit-disk edges, rho uniform in [1,beta]
    // for sensors and 0 for the sink (node 0). Resamples the whole layout
    // until connected; gives up after `max_attempts` layouts.
    static Wsn random_unit_disk(int sensors, double area_side, double transmission_range, int beta,
                                std::uint64_t seed, int max_attempts = 1000);

    int node_count() const { return n_; }
    NodeId sink() const { return sink_; }
    int rho(NodeId v) const { return rho_[static_cast<size_t>(v)]; }
    long long total_rho() const;
    int edge_count() const { return edges_; }

    const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[static_cast<size_t>(v)]; }
    bool adjacent(NodeId u, NodeId v) const {
        return (adj_bits_[static_cast<size_t>(u) * words_ + static_cast<size_t>(v >> 6)] >> (v & 63)) & 1u;
    }

    bool has_positions() const { return have_pos_; }
    double pos_x(NodeId v) const { return xs_[static_cast<size_t>(v)]; }
    double pos_y(NodeId v) const { return ys_[static_cast<size_t>(v)]; }
    double transmission_range() const { return range_; }

    std::string to_topology_text() const;

private:
    int n_ = 0;
    NodeId sink_ = 0;
    int edges_ = 0;
    size_t words_ = 0;
    std::vector<int> rho_;
    std::vector<std::vector<NodeId>> adj_;
    std::vector<std::uint64_t> adj_bits_;
    std::vector<double> xs_, ys_;
    double range_ = 0.0;
    bool have_pos_ = false;

    void add_edge(NodeId u, NodeId v);
    void seal();  // sort adjacency, verify invariants, check connectivity
};

/// Minimum hop count to the sink for every node.
struct HopMap {
    std::vector<int> hop;
    int of(NodeId v) const { return hop[static_cast<size_t>(v)]; }
};

HopMap compute_hops(const Wsn& w);

/// Induced k-hop neighbourhood of one node. An edge (x,y) is part of the
/// view only if min(dist(center,x), dist(center,y)) <= k-1, so edges whose
/// endpoints both sit on the outer ring are not visible.
struct LocalView {
    NodeId center = 0;
    int radius = 0;
    std::vector<NodeId> nodes;  // ascending id
    std::vector<int> distance;  // parallel to nodes
    std::vector<std::pair<NodeId, NodeId>> edges;  // u < v, sorted

    bool contains(NodeId v) const;
};

LocalView k_hop_subgraph(const Wsn& w, NodeId center, int radius);

}  // namespace aggsched

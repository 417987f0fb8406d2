#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "linkrec/types.hpp"

namespace linkrec {

// Simple alternating user/item path. Nodes are stored as graph-internal
// node indices; length (edge count) == nodes.size() - 1.
struct Path {
    std::vector<int> nodes;
    std::vector<double> weights;
    std::vector<std::int64_t> timestamps;

    int length() const { return static_cast<int>(nodes.size()) - 1; }
};

// Non-owning view of a path; lets batch scorers share one flat arena of
// enumerated paths instead of allocating per pair.
struct PathView {
    std::span<const int> nodes;
    std::span<const double> weights;
    std::span<const std::int64_t> timestamps;

    PathView() = default;
    PathView(const Path& p) : nodes(p.nodes), weights(p.weights), timestamps(p.timestamps) {}
    PathView(std::span<const int> n, std::span<const double> w,
             std::span<const std::int64_t> t)
        : nodes(n), weights(w), timestamps(t) {}

    int length() const { return static_cast<int>(nodes.size()) - 1; }
};

inline std::vector<PathView> as_views(const std::vector<Path>& paths) {
    return {paths.begin(), paths.end()};
}

// Immutable weighted, timestamped user-item bipartite graph.
//
// Original ids are remapped to dense indices at build time: users occupy
// node indices [0, num_users) and items [num_users, num_users+num_items).
// Adjacency is stored symmetrically and sorted by neighbor index, and the
// structure is never mutated after build, so all queries are safe to run
// from any number of concurrent readers.
class BipartiteGraph {
public:
    struct Edge {
        int nbr;  // node index of the neighbor (other side)
        double weight;
        std::int64_t timestamp;
    };

    BipartiteGraph() = default;

    // Throws DuplicateEdgeError naming the offending pair if the same
    // (user, item) appears twice; ingest is expected to dedup first.
    static BipartiteGraph build(const std::vector<Interaction>& interactions);

    int num_users() const { return num_users_; }
    int num_items() const { return num_items_; }
    int num_nodes() const { return num_users_ + num_items_; }
    std::int64_t num_edges() const { return num_edges_; }

    bool is_item_node(int node) const { return node >= num_users_; }

    bool has_user(UserId u) const { return user_index_.count(u) != 0; }
    bool has_item(ItemId i) const { return item_index_.count(i) != 0; }

    // Dense index lookups; throw UnknownNodeError for ids not in the graph.
    int user_node(UserId u) const;
    int item_node(ItemId i) const;
    UserId user_id(int node) const;
    ItemId item_id(int node) const;

    std::span<const Edge> neighbors(int node) const {
        return {adj_[node].data(), adj_[node].size()};
    }
    int degree(int node) const { return static_cast<int>(adj_[node].size()); }
    double weighted_degree(int node) const { return wdeg_[node]; }

    // nullptr when the edge does not exist.
    const Edge* find_edge(int node, int other) const;

    // All nodes at shortest-path distance in [1, k] from `node`,
    // excluding `node` itself; sorted by node index. Requires k >= 1.
    std::vector<int> neighbors_within(int node, int k) const;

    // Timestamp range over all edges; {0, 0} on an empty graph.
    std::int64_t min_timestamp() const { return min_ts_; }
    std::int64_t max_timestamp() const { return max_ts_; }

    std::vector<UserId> users() const;
    std::vector<ItemId> items() const;

private:
    int num_users_ = 0;
    int num_items_ = 0;
    std::int64_t num_edges_ = 0;
    std::int64_t min_ts_ = 0;
    std::int64_t max_ts_ = 0;
    std::vector<std::vector<Edge>> adj_;
    std::vector<double> wdeg_;
    std::vector<UserId> user_ids_;
    std::vector<ItemId> item_ids_;
    std::unordered_map<UserId, int> user_index_;
    std::unordered_map<ItemId, int> item_index_;
};

// All simple paths of odd length <= max_len between user u and item p,
// ordered by length and then lexicographically by node sequence.
// max_len must be >= 3 and odd.
std::vector<Path> enumerate_paths(const BipartiteGraph& g, int u_node,
                                  int p_node, int max_len);

std::vector<Path> enumerate_paths(const BipartiteGraph& g, UserId u, ItemId p,
                                  int max_len);

}  // namespace linkrec

#include "linkrec/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace linkrec {

BipartiteGraph BipartiteGraph::build(const std::vector<Interaction>& interactions) {
    BipartiteGraph g;
    for (const auto& it : interactions) {
        if (g.user_index_.emplace(it.user, g.num_users_).second) {
            g.user_ids_.push_back(it.user);
            ++g.num_users_;
        }
        if (g.item_index_.emplace(it.item, g.num_items_).second) {
            g.item_ids_.push_back(it.item);
            ++g.num_items_;
        }
    }
    // Canonical dense indices: sorted by original id, users then items.
    std::sort(g.user_ids_.begin(), g.user_ids_.end());
    std::sort(g.item_ids_.begin(), g.item_ids_.end());
    for (int u = 0; u < g.num_users_; ++u) g.user_index_[g.user_ids_[u]] = u;
    for (int i = 0; i < g.num_items_; ++i) g.item_index_[g.item_ids_[i]] = i;

    g.adj_.assign(g.num_nodes(), {});
    for (const auto& it : interactions) {
        const int un = g.user_index_.at(it.user);
        const int in = g.num_users_ + g.item_index_.at(it.item);
        g.adj_[un].push_back({in, it.rating, it.timestamp});
        g.adj_[in].push_back({un, it.rating, it.timestamp});
    }
    for (auto& edges : g.adj_) {
        std::sort(edges.begin(), edges.end(),
                  [](const Edge& a, const Edge& b) { return a.nbr < b.nbr; });
    }
    for (int u = 0; u < g.num_users_; ++u) {
        const auto& edges = g.adj_[u];
        for (std::size_t k = 1; k < edges.size(); ++k) {
            if (edges[k].nbr == edges[k - 1].nbr) {
                throw DuplicateEdgeError(
                    "duplicate (user,item) pair: user " +
                    std::to_string(g.user_ids_[u].v) + ", item " +
                    std::to_string(g.item_ids_[edges[k].nbr - g.num_users_].v));
            }
        }
    }

    g.wdeg_.assign(g.num_nodes(), 0.0);
    bool first = true;
    for (int v = 0; v < g.num_nodes(); ++v) {
        for (const Edge& e : g.adj_[v]) {
            g.wdeg_[v] += e.weight;
            if (v < g.num_users_) {
                ++g.num_edges_;
                if (first || e.timestamp < g.min_ts_) g.min_ts_ = e.timestamp;
                if (first || e.timestamp > g.max_ts_) g.max_ts_ = e.timestamp;
                first = false;
            }
        }
    }
    return g;
}

int BipartiteGraph::user_node(UserId u) const {
    auto it = user_index_.find(u);
    if (it == user_index_.end())
        throw UnknownNodeError("unknown user id " + std::to_string(u.v));
    return it->second;
}

int BipartiteGraph::item_node(ItemId i) const {
    auto it = item_index_.find(i);
    if (it == item_index_.end())
        throw UnknownNodeError("unknown item id " + std::to_string(i.v));
    return num_users_ + it->second;
}

UserId BipartiteGraph::user_id(int node) const { return user_ids_.at(node); }

ItemId BipartiteGraph::item_id(int node) const {
    return item_ids_.at(node - num_users_);
}

const BipartiteGraph::Edge* BipartiteGraph::find_edge(int node, int other) const {
    const auto& edges = adj_[node];
    auto it = std::lower_bound(edges.begin(), edges.end(), other,
                               [](const Edge& e, int n) { return e.nbr < n; });
    if (it != edges.end() && it->nbr == other) return &*it;
    return nullptr;
}

std::vector<int> BipartiteGraph::neighbors_within(int node, int k) const {
    if (node < 0 || node >= num_nodes())
        throw UnknownNodeError("node index out of range: " + std::to_string(node));
    if (k < 1) throw std::invalid_argument("hop bound must be >= 1");
    std::vector<int> dist(num_nodes(), -1);
    std::deque<int> queue{node};
    dist[node] = 0;
    std::vector<int> out;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        if (dist[v] == k) continue;
        for (const Edge& e : adj_[v]) {
            if (dist[e.nbr] < 0) {
                dist[e.nbr] = dist[v] + 1;
                out.push_back(e.nbr);
                queue.push_back(e.nbr);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<UserId> BipartiteGraph::users() const { return user_ids_; }
std::vector<ItemId> BipartiteGraph::items() const { return item_ids_; }

namespace {

void extend_path(const BipartiteGraph& g, int target, int max_len, Path& cur,
                 std::vector<char>& on_path, std::vector<Path>& out) {
    const int v = cur.nodes.back();
    for (const auto& e : g.neighbors(v)) {
        if (e.nbr == target) {
            cur.nodes.push_back(e.nbr);
            cur.weights.push_back(e.weight);
            cur.timestamps.push_back(e.timestamp);
            out.push_back(cur);
            cur.nodes.pop_back();
            cur.weights.pop_back();
            cur.timestamps.pop_back();
            continue;
        }
        if (on_path[e.nbr] || cur.length() + 2 > max_len) continue;
        cur.nodes.push_back(e.nbr);
        cur.weights.push_back(e.weight);
        cur.timestamps.push_back(e.timestamp);
        on_path[e.nbr] = 1;
        extend_path(g, target, max_len, cur, on_path, out);
        on_path[e.nbr] = 0;
        cur.nodes.pop_back();
        cur.weights.pop_back();
        cur.timestamps.pop_back();
    }
}

}  // namespace

std::vector<Path> enumerate_paths(const BipartiteGraph& g, int u_node,
                                  int p_node, int max_len) {
    if (u_node < 0 || u_node >= g.num_nodes() || p_node < 0 ||
        p_node >= g.num_nodes())
        throw UnknownNodeError("path endpoint out of range");
    if (max_len < 3 || max_len % 2 == 0)
        throw std::invalid_argument("max_len must be odd and >= 3");

    std::vector<Path> out;
    Path cur;
    cur.nodes.push_back(u_node);
    std::vector<char> on_path(g.num_nodes(), 0);
    on_path[u_node] = 1;
    extend_path(g, p_node, max_len, cur, on_path, out);

    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.nodes < b.nodes;
    });
    return out;
}

std::vector<Path> enumerate_paths(const BipartiteGraph& g, UserId u, ItemId p,
                                  int max_len) {
    return enumerate_paths(g, g.user_node(u), g.item_node(p), max_len);
}

}  // namespace linkrec

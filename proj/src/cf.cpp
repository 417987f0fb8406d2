#include "linkrec/cf.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace linkrec {

namespace detail {

double pearson_nodes(const BipartiteGraph& g, int a, int b, int min_overlap) {
    const auto ea = g.neighbors(a), eb = g.neighbors(b);
    std::size_t ia = 0, ib = 0;
    std::vector<std::pair<double, double>> co;
    while (ia < ea.size() && ib < eb.size()) {
        if (ea[ia].nbr < eb[ib].nbr) {
            ++ia;
        } else if (eb[ib].nbr < ea[ia].nbr) {
            ++ib;
        } else {
            co.push_back({ea[ia].weight, eb[ib].weight});
            ++ia;
            ++ib;
        }
    }
    if (co.size() < static_cast<std::size_t>(min_overlap)) return 0.0;
    double ma = 0, mb = 0;
    for (auto [x, y] : co) {
        ma += x;
        mb += y;
    }
    ma /= static_cast<double>(co.size());
    mb /= static_cast<double>(co.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (auto [x, y] : co) {
        sxy += (x - ma) * (y - mb);
        sxx += (x - ma) * (x - ma);
        syy += (y - mb) * (y - mb);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cosine_nodes(const BipartiteGraph& g, int a, int b) {
    const auto ea = g.neighbors(a), eb = g.neighbors(b);
    if (ea.empty() || eb.empty()) return 0.0;
    std::size_t ia = 0, ib = 0;
    double dot = 0;
    while (ia < ea.size() && ib < eb.size()) {
        if (ea[ia].nbr < eb[ib].nbr) {
            ++ia;
        } else if (eb[ib].nbr < ea[ia].nbr) {
            ++ib;
        } else {
            dot += ea[ia].weight * eb[ib].weight;
            ++ia;
            ++ib;
        }
    }
    if (dot == 0.0) return 0.0;
    double na = 0, nb = 0;
    for (const auto& e : ea) na += e.weight * e.weight;
    for (const auto& e : eb) nb += e.weight * e.weight;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double mean_rating(const BipartiteGraph& g, int node) {
    const auto edges = g.neighbors(node);
    if (edges.empty()) return 0.0;
    return g.weighted_degree(node) / static_cast<double>(edges.size());
}

double global_mean_rating(const BipartiteGraph& g) {
    if (g.num_edges() == 0) return 0.0;
    double sum = 0;
    for (int u = 0; u < g.num_users(); ++u) sum += g.weighted_degree(u);
    return sum / static_cast<double>(g.num_edges());
}

std::pair<double, double> rating_range(const BipartiteGraph& g) {
    double lo = 0, hi = 0;
    bool first = true;
    for (int u = 0; u < g.num_users(); ++u)
        for (const auto& e : g.neighbors(u)) {
            if (first) {
                lo = hi = e.weight;
                first = false;
            } else {
                lo = std::min(lo, e.weight);
                hi = std::max(hi, e.weight);
            }
        }
    return {lo, hi};
}

}  // namespace detail

double similarity_users(const BipartiteGraph& g, UserId u1, UserId u2,
                        const CFConfig& cfg) {
    return detail::pearson_nodes(g, g.user_node(u1), g.user_node(u2),
                                 cfg.min_overlap);
}

double similarity_items(const BipartiteGraph& g, ItemId i1, ItemId i2,
                        const CFConfig&) {
    return detail::cosine_nodes(g, g.item_node(i1), g.item_node(i2));
}

namespace {

double clamp_to_scale(const BipartiteGraph& g, double value) {
    const auto [lo, hi] = detail::rating_range(g);
    return std::clamp(value, lo, hi);
}

struct Neighbor {
    double sim;
    int node;
};

// Top-k by similarity (descending), ties broken by node index.
std::vector<Neighbor> top_k(std::vector<Neighbor> all, int k) {
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return a.node < b.node;
    });
    if (static_cast<int>(all.size()) > k) all.resize(k);
    return all;
}

}  // namespace

double predict_user_cf(const BipartiteGraph& g, UserId u, ItemId i,
                       const CFConfig& cfg) {
    const int un = g.user_node(u), in = g.item_node(i);
    if (g.degree(un) == 0) return clamp_to_scale(g, detail::global_mean_rating(g));
    std::vector<Neighbor> sims;
    for (const auto& e : g.neighbors(in)) {
        const int v = e.nbr;
        if (v == un) continue;
        const double s = detail::pearson_nodes(g, un, v, cfg.min_overlap);
        if (s != 0.0) sims.push_back({s, v});
    }
    const auto nbrs = top_k(std::move(sims), cfg.neighborhood_size);
    const double mu = detail::mean_rating(g, un);
    double num = 0, den = 0;
    for (const auto& nb : nbrs) {
        const auto* e = g.find_edge(nb.node, in);
        num += nb.sim * (e->weight - detail::mean_rating(g, nb.node));
        den += std::abs(nb.sim);
    }
    if (den == 0.0) return clamp_to_scale(g, mu);
    return clamp_to_scale(g, mu + num / den);
}

double predict_item_cf(const BipartiteGraph& g, UserId u, ItemId i,
                       const CFConfig& cfg) {
    const int un = g.user_node(u), in = g.item_node(i);
    if (g.degree(un) == 0) return clamp_to_scale(g, detail::global_mean_rating(g));
    std::vector<Neighbor> sims;
    for (const auto& e : g.neighbors(un)) {
        const int j = e.nbr;
        if (j == in) continue;
        const double s = detail::cosine_nodes(g, in, j);
        if (s != 0.0) sims.push_back({s, j});
    }
    const auto nbrs = top_k(std::move(sims), cfg.neighborhood_size);
    double num = 0, den = 0;
    for (const auto& nb : nbrs) {
        const auto* e = g.find_edge(un, nb.node);
        num += nb.sim * e->weight;
        den += std::abs(nb.sim);
    }
    if (den == 0.0) return clamp_to_scale(g, detail::mean_rating(g, un));
    return clamp_to_scale(g, num / den);
}

}  // namespace linkrec

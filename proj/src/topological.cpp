#include "linkrec/topological.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linkrec {

namespace {

// Gamma<=3 sets for a candidate pair, endpoints removed from each other's
// set (and from their own, by construction of neighbors_within).
struct PairNeighborhoods {
    std::vector<int> gu, gp;
};

PairNeighborhoods gamma3(const BipartiteGraph& g, int un, int pn) {
    PairNeighborhoods nb;
    nb.gu = g.neighbors_within(un, 3);
    nb.gp = g.neighbors_within(pn, 3);
    std::erase(nb.gu, pn);
    std::erase(nb.gp, un);
    return nb;
}

std::vector<int> intersect_sorted(const std::vector<int>& a,
                                  const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

}  // namespace

double score_cn(const BipartiteGraph& g, UserId u, ItemId p) {
    const auto nb = gamma3(g, g.user_node(u), g.item_node(p));
    return static_cast<double>(intersect_sorted(nb.gu, nb.gp).size());
}

double score_jc(const BipartiteGraph& g, UserId u, ItemId p) {
    const auto nb = gamma3(g, g.user_node(u), g.item_node(p));
    std::vector<int> uni;
    std::set_union(nb.gu.begin(), nb.gu.end(), nb.gp.begin(), nb.gp.end(),
                   std::back_inserter(uni));
    if (uni.empty()) return 0.0;
    return static_cast<double>(intersect_sorted(nb.gu, nb.gp).size()) /
           static_cast<double>(uni.size());
}

double score_aa(const BipartiteGraph& g, UserId u, ItemId p) {
    const auto nb = gamma3(g, g.user_node(u), g.item_node(p));
    double sum = 0.0;
    for (int z : intersect_sorted(nb.gu, nb.gp)) {
        const std::size_t deg3 = g.neighbors_within(z, 3).size();
        if (deg3 > 1) sum += 1.0 / std::log(static_cast<double>(deg3));
    }
    return sum;
}

double score_pa(const BipartiteGraph& g, UserId u, ItemId p) {
    return static_cast<double>(g.degree(g.user_node(u))) *
           static_cast<double>(g.degree(g.item_node(p)));
}

double score_katz(const BipartiteGraph& g, UserId u, ItemId p,
                  const ScorerConfig& cfg) {
    const auto paths = enumerate_paths(g, u, p, cfg.katz_max_len);
    double sum = 0.0;
    for (const Path& path : paths) {
        if (path.length() >= 3)  // the direct edge, if any, is not counted
            sum += std::pow(cfg.katz_beta, path.length());
    }
    return sum;
}

std::vector<double> rwr_distribution(const BipartiteGraph& g, int root,
                                     double restart) {
    const int n = g.num_nodes();
    std::vector<double> x(n, 0.0), next(n);
    x[root] = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        next[root] = restart;
        for (int v = 0; v < n; ++v) {
            if (x[v] == 0.0) continue;
            const double out = (1.0 - restart) * x[v] / g.weighted_degree(v);
            for (const auto& e : g.neighbors(v)) next[e.nbr] += out * e.weight;
        }
        double delta = 0.0;
        for (int v = 0; v < n; ++v) delta += std::abs(next[v] - x[v]);
        x.swap(next);
        if (delta < 1e-10) return x;
    }
    double residual = 0.0;
    for (int v = 0; v < n; ++v) residual += std::abs(x[v] - next[v]);
    throw std::runtime_error(
        "rooted PageRank power iteration did not converge; residual " +
        std::to_string(residual));
}

double score_rpr(const BipartiteGraph& g, UserId u, ItemId p,
                 const ScorerConfig& cfg) {
    const int un = g.user_node(u), pn = g.item_node(p);
    const auto pi_u = rwr_distribution(g, un, cfg.pr_damping);
    const auto pi_p = rwr_distribution(g, pn, cfg.pr_damping);
    return pi_u[pn] + pi_p[un];
}

namespace {

// steps_left = edges still allowed on the current path. The target is an
// item node, so it can only be hit at odd depth from the source user.
void propflow_dfs(const BipartiteGraph& g, int v, int target, double flow,
                  int steps_left, std::vector<char>& on_path, double& total) {
    const double wdeg = g.weighted_degree(v);
    for (const auto& e : g.neighbors(v)) {
        const double out = flow * e.weight / wdeg;
        if (e.nbr == target) {
            total += out;
            continue;
        }
        if (steps_left < 2 || on_path[e.nbr]) continue;
        on_path[e.nbr] = 1;
        propflow_dfs(g, e.nbr, target, out, steps_left - 1, on_path, total);
        on_path[e.nbr] = 0;
    }
}

}  // namespace

double score_propflow(const BipartiteGraph& g, UserId u, ItemId p,
                      const ScorerConfig& cfg) {
    if (cfg.propflow_max_len < 1 || cfg.propflow_max_len % 2 == 0)
        throw std::invalid_argument("propflow_max_len must be odd and >= 1");
    const int un = g.user_node(u), pn = g.item_node(p);
    std::vector<char> on_path(g.num_nodes(), 0);
    on_path[un] = 1;
    double total = 0.0;
    propflow_dfs(g, un, pn, 1.0, cfg.propflow_max_len, on_path, total);
    return total;
}

}  // namespace linkrec

#include "linkrec/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linkrec {

double harmonic_mean(const std::vector<double>& w) {
    if (w.empty()) return 0.0;
    double inv = 0.0;
    for (double x : w) {
        if (x == 0.0) return 0.0;
        inv += 1.0 / x;
    }
    return static_cast<double>(w.size()) / inv;
}

namespace {

void check_cfg(const TemporalConfig& cfg) {
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
        throw std::invalid_argument("temporal beta must be in (0,1)");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::invalid_argument("temporal alpha must be in (0,1)");
}

}  // namespace

double score_time_score(const BipartiteGraph& g, UserId u, ItemId p,
                        const TemporalConfig& cfg) {
    check_cfg(cfg);
    const double now = static_cast<double>(cfg.effective_now(g));
    double sum = 0.0;
    for (const Path& path :
         enumerate_paths(g, u, p, cfg.time_score_max_len)) {
        const auto [lo, hi] = std::minmax_element(path.timestamps.begin(),
                                                  path.timestamps.end());
        const double latest = static_cast<double>(*hi);
        const double oldest = static_cast<double>(*lo);
        const double recency = (now - latest) / cfg.time_unit;
        const double spread = (latest - oldest) / cfg.time_unit;
        sum += harmonic_mean(path.weights) * std::pow(cfg.beta, recency) /
               (spread + 1.0);
    }
    return sum;
}

double score_link_score(const BipartiteGraph& g, UserId u, ItemId p,
                        const TemporalConfig& cfg) {
    check_cfg(cfg);
    const std::int64_t now = cfg.effective_now(g);
    // TPI sum and path count per odd length 3,5,...,max_len.
    std::vector<double> tpi_sum(cfg.max_len + 1, 0.0);
    std::vector<int> count(cfg.max_len + 1, 0);
    for (const Path& path : enumerate_paths(g, u, p, cfg.max_len)) {
        if (path.length() < 3) continue;
        const std::int64_t latest = *std::max_element(
            path.timestamps.begin(), path.timestamps.end());
        // Ages relative to `now`, so a uniform time shift cancels exactly.
        double age_sum = 0.0;
        for (auto t : path.timestamps)
            age_sum += static_cast<double>(now - t);
        const double avg_age = age_sum / static_cast<double>(path.timestamps.size());
        const double tpi =
            harmonic_mean(path.weights) *
            std::pow(cfg.beta, avg_age / cfg.time_unit) /
            (std::abs(static_cast<double>(now - latest)) / cfg.time_unit + 1.0);
        tpi_sum[path.length()] += tpi;
        ++count[path.length()];
    }
    double ls = 0.0;
    for (int l = 3; l <= cfg.max_len; l += 2) {
        if (count[l] > 0)
            ls += tpi_sum[l] / count[l] / static_cast<double>(l - 1);
    }
    return ls;
}

namespace {

void tflow_dfs(const BipartiteGraph& g, int v, int target, double flow,
               std::int64_t prev_ts, bool first_step, int steps_left,
               const TemporalConfig& cfg, std::vector<char>& on_path,
               double& total) {
    const double wdeg = g.weighted_degree(v);
    for (const auto& e : g.neighbors(v)) {
        double out = flow * e.weight / wdeg;
        if (!first_step) {
            const double gap =
                std::abs(static_cast<double>(e.timestamp - prev_ts)) /
                cfg.time_unit;
            out *= std::pow(1.0 - cfg.alpha, gap);
        }
        if (e.nbr == target) {
            total += out;
            continue;
        }
        if (steps_left < 2 || on_path[e.nbr]) continue;
        on_path[e.nbr] = 1;
        tflow_dfs(g, e.nbr, target, out, e.timestamp, false, steps_left - 1,
                  cfg, on_path, total);
        on_path[e.nbr] = 0;
    }
}

}  // namespace

double score_tflow(const BipartiteGraph& g, UserId u, ItemId p,
                   const TemporalConfig& cfg) {
    check_cfg(cfg);
    if (cfg.max_len < 1 || cfg.max_len % 2 == 0)
        throw std::invalid_argument("temporal max_len must be odd and >= 1");
    const int un = g.user_node(u), pn = g.item_node(p);
    std::vector<char> on_path(g.num_nodes(), 0);
    on_path[un] = 1;
    double total = 0.0;
    tflow_dfs(g, un, pn, 1.0, 0, true, cfg.max_len, cfg, on_path, total);
    return total;
}

}  // namespace linkrec

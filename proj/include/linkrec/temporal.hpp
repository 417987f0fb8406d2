#pragma once

#include <cstdint>

#include "linkrec/graph.hpp"

namespace linkrec {

struct TemporalConfig {
    double beta = 0.5;    // damping for recency exponents, in (0,1)
    double alpha = 0.1;   // per-step decay for T_Flow, in (0,1)
    int max_len = 5;      // odd; bound for Link-Score and T_Flow paths
    int time_score_max_len = 3;  // Time-Score is a 3-path measure by default
    std::int64_t now = -1;       // -1: use max timestamp of the graph
    // Seconds per time unit used in all exponents and spreads; raw-second
    // exponents would underflow beta^r immediately.
    double time_unit = 86400.0 * 365.0;

    std::int64_t effective_now(const BipartiteGraph& g) const {
        return now >= 0 ? now : g.max_timestamp();
    }
};

// Time-Score: sum over odd paths (length <= time_score_max_len) of
// hmean(weights) * beta^{(now - latest)/unit} / (|latest - oldest|/unit + 1).
double score_time_score(const BipartiteGraph& g, UserId u, ItemId p,
                        const TemporalConfig& cfg);

// Link-Score: mean over paths of each odd length l <= max_len of the Time
// Path Index, divided by (l - 1), summed over lengths. TPI(path) =
// hmean(weights) * beta^{(now - avg)/unit} / (|now - latest|/unit + 1).
double score_link_score(const BipartiteGraph& g, UserId u, ItemId p,
                        const TemporalConfig& cfg);

// T_Flow: PropFlow's splitting rule with an extra (1-alpha)^{|dt|/unit}
// factor per step, dt being the gap between consecutive edge timestamps
// (first step: 0). Reduces to PropFlow when alpha -> 0 or all timestamps
// coincide.
double score_tflow(const BipartiteGraph& g, UserId u, ItemId p,
                   const TemporalConfig& cfg);

// Harmonic mean; 0 if any weight is 0.
double harmonic_mean(const std::vector<double>& w);

}  // namespace linkrec

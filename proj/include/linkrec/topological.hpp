#pragma once

#include <vector>

#include "linkrec/graph.hpp"

namespace linkrec {

struct ScorerConfig {
    double katz_beta = 0.005;
    int katz_max_len = 5;       // odd
    double pr_damping = 0.15;   // restart probability
    int propflow_max_len = 5;   // odd
};

// All scorers below operate on the within-3-hop neighborhoods
// Gamma<=3(x), with the endpoints u and p excluded from each other's sets
// and from the intersection. Scores are >= 0 and finite.

double score_cn(const BipartiteGraph& g, UserId u, ItemId p);
double score_jc(const BipartiteGraph& g, UserId u, ItemId p);
double score_aa(const BipartiteGraph& g, UserId u, ItemId p);
double score_pa(const BipartiteGraph& g, UserId u, ItemId p);

// Truncated Katz: sum over odd path lengths l in {3,...,katz_max_len} of
// beta^l * (number of simple paths of length l between u and p).
double score_katz(const BipartiteGraph& g, UserId u, ItemId p,
                  const ScorerConfig& cfg);

// Rooted PageRank: pi_u(p) + pi_p(u), where pi_x is the stationary
// distribution of the weighted random walk with restart probability
// cfg.pr_damping to x. Power iteration to 1e-10 or 200 iterations.
double score_rpr(const BipartiteGraph& g, UserId u, ItemId p,
                 const ScorerConfig& cfg);

// Personalized random-walk-with-restart vector rooted at `root`
// (internal node index). Throws on non-convergence.
std::vector<double> rwr_distribution(const BipartiteGraph& g, int root,
                                     double restart);

// PropFlow over simple paths of odd length <= propflow_max_len. Flow starts
// at 1 on u; each step splits the inbound flow proportionally to edge
// weight over the *total* weighted degree of the current node.
double score_propflow(const BipartiteGraph& g, UserId u, ItemId p,
                      const ScorerConfig& cfg);

}  // namespace linkrec

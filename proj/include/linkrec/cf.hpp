#pragma once

#include "linkrec/graph.hpp"

namespace linkrec {

struct CFConfig {
    int neighborhood_size = 50;
    int min_overlap = 2;  // co-rating count below which similarity is 0
};

// Pearson correlation over co-rated items; 0 when the overlap is below
// min_overlap or either side has zero variance on the overlap.
double similarity_users(const BipartiteGraph& g, UserId u1, UserId u2,
                        const CFConfig& cfg = {});

// Cosine similarity over the co-rating user dimension.
double similarity_items(const BipartiteGraph& g, ItemId i1, ItemId i2,
                        const CFConfig& cfg = {});

// Mean-centered weighted prediction over the k most similar users who
// rated i; falls back to mean(u) when none did, and to the global mean
// when u has no ratings. Clamped to the graph's rating range.
double predict_user_cf(const BipartiteGraph& g, UserId u, ItemId i,
                       const CFConfig& cfg = {});

// Similarity-weighted average of u's own ratings on the k items most
// similar to i; same fallbacks as user CF.
double predict_item_cf(const BipartiteGraph& g, UserId u, ItemId i,
                       const CFConfig& cfg = {});

namespace detail {
double pearson_nodes(const BipartiteGraph& g, int a, int b, int min_overlap);
double cosine_nodes(const BipartiteGraph& g, int a, int b);
double mean_rating(const BipartiteGraph& g, int node);
double global_mean_rating(const BipartiteGraph& g);
std::pair<double, double> rating_range(const BipartiteGraph& g);
}  // namespace detail

}  // namespace linkrec

#include "linkrec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "linkrec/rng.hpp"

namespace linkrec {

namespace {

std::uint64_t pair_key(std::size_t users, std::size_t u_idx, std::size_t i_idx) {
    (void)users;
    return (static_cast<std::uint64_t>(u_idx) << 32) | i_idx;
}

}  // namespace

CandidateSet generate_candidates(const Dataset& train, const Dataset& test,
                                 std::uint64_t seed, int ratio) {
    if (ratio < 1) throw std::invalid_argument("negatives ratio must be >= 1");
    // Universe: users and items of train+test, in sorted id order.
    std::vector<std::int64_t> users, items;
    std::unordered_set<std::int64_t> useen, iseen;
    for (const Dataset* d : {&train, &test})
        for (const auto& it : d->interactions) {
            if (useen.insert(it.user.v).second) users.push_back(it.user.v);
            if (iseen.insert(it.item.v).second) items.push_back(it.item.v);
        }
    std::sort(users.begin(), users.end());
    std::sort(items.begin(), items.end());
    std::unordered_map<std::int64_t, std::size_t> uidx, iidx;
    for (std::size_t k = 0; k < users.size(); ++k) uidx[users[k]] = k;
    for (std::size_t k = 0; k < items.size(); ++k) iidx[items[k]] = k;

    std::unordered_set<std::uint64_t> edges;
    for (const Dataset* d : {&train, &test})
        for (const auto& it : d->interactions)
            edges.insert(pair_key(users.size(), uidx[it.user.v], iidx[it.item.v]));

    CandidateSet cs;
    cs.seed = seed;
    cs.negatives_per_positive = ratio;
    for (const auto& it : test.interactions)
        cs.pairs.push_back({it.user, it.item, true});
    cs.num_positives = cs.pairs.size();

    const std::size_t total_cells = users.size() * items.size();
    const std::size_t non_edges = total_cells - edges.size();
    std::size_t want = cs.num_positives * static_cast<std::size_t>(ratio);
    if (want > non_edges) want = non_edges;  // exhaustive fallback

    std::unordered_set<std::uint64_t> taken;
    Rng rng(seed);
    if (want * 2 > non_edges) {
        // Dense request: enumerate all non-edges and take a seeded shuffle
        // prefix instead of thrashing the rejection sampler.
        std::vector<std::uint64_t> pool;
        pool.reserve(non_edges);
        for (std::size_t u = 0; u < users.size(); ++u)
            for (std::size_t i = 0; i < items.size(); ++i) {
                const auto key = pair_key(users.size(), u, i);
                if (!edges.count(key)) pool.push_back(key);
            }
        for (std::size_t j = pool.size(); j > 1; --j)
            std::swap(pool[j - 1], pool[rng.next_below(j)]);
        for (std::size_t k = 0; k < want; ++k) taken.insert(pool[k]);
        for (std::size_t k = 0; k < want; ++k) {
            const std::uint64_t key = pool[k];
            cs.pairs.push_back({UserId{users[key >> 32]},
                                ItemId{items[key & 0xffffffffu]}, false});
        }
    } else {
        std::vector<std::uint64_t> drawn;
        std::size_t attempts = 0;
        const std::size_t max_attempts = 100 * want + 1000;
        while (drawn.size() < want) {
            if (++attempts > max_attempts)
                throw std::runtime_error(
                    "graph too dense to sample requested negatives");
            const std::size_t u = rng.next_below(users.size());
            const std::size_t i = rng.next_below(items.size());
            const auto key = pair_key(users.size(), u, i);
            if (edges.count(key) || !taken.insert(key).second) continue;
            drawn.push_back(key);
        }
        for (const std::uint64_t key : drawn)
            cs.pairs.push_back({UserId{users[key >> 32]},
                                ItemId{items[key & 0xffffffffu]}, false});
    }
    cs.num_negatives = cs.pairs.size() - cs.num_positives;
    return cs;
}

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores/labels size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += l != 0;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("AUROC needs both classes present");
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });
    // Rank sum of positives with average ranks over ties.
    double rank_sum = 0.0;
    std::size_t k = 0;
    while (k < n) {
        std::size_t j = k;
        while (j < n && scores[order[j]] == scores[order[k]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(k + 1 + j);  // 1-based
        for (std::size_t t = k; t < j; ++t)
            if (labels[order[t]] != 0) rank_sum += avg_rank;
        k = j;
    }
    const double n_pos_d = static_cast<double>(n_pos);
    return (rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
           (n_pos_d * static_cast<double>(n_neg));
}

double aupr(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores/labels size mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += l != 0;
    if (n_pos == 0 || n_pos == n)
        throw std::invalid_argument("AUPR needs both classes present");
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    double area = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, seen = 0, k = 0;
    while (k < n) {
        std::size_t j = k;
        while (j < n && scores[order[j]] == scores[order[k]]) ++j;
        for (std::size_t t = k; t < j; ++t) tp += labels[order[t]] != 0;
        seen += j - k;
        const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
        const double precision =
            static_cast<double>(tp) / static_cast<double>(seen);
        area += (recall - prev_recall) * precision;
        prev_recall = recall;
        k = j;
    }
    return area;
}

double rankscore(const std::vector<std::vector<int>>& relevant_ranks_per_user,
                 double halflife) {
    if (halflife <= 0) throw std::invalid_argument("halflife must be > 0");
    double sum = 0.0;
    std::size_t counted = 0;
    for (const auto& ranks : relevant_ranks_per_user) {
        if (ranks.empty()) continue;
        double got = 0.0, best = 0.0;
        for (std::size_t j = 0; j < ranks.size(); ++j) {
            if (ranks[j] < 1)
                throw std::invalid_argument("ranks are 1-based");
            got += std::exp2(-static_cast<double>(ranks[j] - 1) / halflife);
            best += std::exp2(-static_cast<double>(j) / halflife);
        }
        sum += got / best;
        ++counted;
    }
    if (counted == 0)
        throw std::invalid_argument("rankscore needs at least one user with relevant items");
    return sum / static_cast<double>(counted);
}

MetricReport evaluate_rows(const std::string& measure,
                           const std::vector<ScoredRow>& rows,
                           double halflife) {
    MetricReport rep;
    rep.measure = measure;
    rep.n_pairs = rows.size();
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(rows.size());
    labels.reserve(rows.size());
    for (const auto& r : rows) {
        // Undefined rows rank below everything and tie with each other.
        scores.push_back(r.defined ? r.score
                                   : -std::numeric_limits<double>::infinity());
        labels.push_back(r.label);
        rep.n_undefined += !r.defined;
    }
    rep.auroc = auroc(scores, labels);
    rep.aupr = aupr(scores, labels);

    // Per-user rankings for Rank-score: each user's candidate items sorted
    // by score descending, ties by item id.
    std::map<std::int64_t, std::vector<std::size_t>> per_user;
    for (std::size_t k = 0; k < rows.size(); ++k)
        per_user[rows[k].user].push_back(k);
    std::vector<std::vector<int>> relevant_ranks;
    for (auto& [uid, idxs] : per_user) {
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return rows[a].item < rows[b].item;
        });
        std::vector<int> ranks;
        for (std::size_t pos = 0; pos < idxs.size(); ++pos)
            if (rows[idxs[pos]].label != 0)
                ranks.push_back(static_cast<int>(pos) + 1);
        if (!ranks.empty()) relevant_ranks.push_back(std::move(ranks));
    }
    rep.rankscore =
        relevant_ranks.empty() ? 0.0 : rankscore(relevant_ranks, halflife);
    return rep;
}

}  // namespace linkrec

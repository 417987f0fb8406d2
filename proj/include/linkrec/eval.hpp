#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linkrec/ingest.hpp"

namespace linkrec {

struct CandidatePair {
    UserId user;
    ItemId item;
    bool positive = false;
};

struct CandidateSet {
    std::vector<CandidatePair> pairs;  // positives first, then negatives
    std::uint64_t seed = 0;
    int negatives_per_positive = 100;
    std::size_t num_positives = 0;
    std::size_t num_negatives = 0;
};

// All test pairs as positives plus `ratio` seeded uniform non-edge
// negatives per positive, rejection-sampled against train+test edges.
// When the requested negative count exceeds the number of available
// non-edges, every non-edge becomes a negative (exhaustive evaluation).
CandidateSet generate_candidates(const Dataset& train, const Dataset& test,
                                 std::uint64_t seed, int ratio);

// Mann-Whitney AUROC; ties credited 0.5. Throws on single-class input.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

// Area under the precision-recall step curve, descending-score sweep with
// tied scores grouped into one step.
double aupr(const std::vector<double>& scores, const std::vector<int>& labels);

// Half-life utility. relevant_ranks_per_user[k] holds the 1-based ranks of
// user k's relevant items in that user's recommendation list; users with no
// relevant items are skipped. Throws when every user is empty.
double rankscore(const std::vector<std::vector<int>>& relevant_ranks_per_user,
                 double halflife = 5.0);

struct MetricReport {
    std::string measure;
    double auroc = 0.0;
    double aupr = 0.0;
    double rankscore = 0.0;
    std::size_t n_pairs = 0;
    std::size_t n_undefined = 0;
};

// One scored row of a candidate set, as written to/read from scores CSVs.
struct ScoredRow {
    std::int64_t user;
    std::int64_t item;
    int label;
    double score;
    bool defined;
};

// Computes AUROC/AUPR/Rank-score for one measure's scored rows. Undefined
// scores rank below every defined score (and tie with each other).
MetricReport evaluate_rows(const std::string& measure,
                           const std::vector<ScoredRow>& rows,
                           double halflife = 5.0);

}  // namespace linkrec

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "linkrec/batch.hpp"
#include "linkrec/eval.hpp"
#include "linkrec/ingest.hpp"

namespace linkrec {

// Everything a full ingest -> split -> score -> evaluate run depends on.
// All randomness flows from the explicit seeds below.
struct RunConfig {
    std::string ratings_path;
    RatingFormat format = RatingFormat::ml100k;
    SplitSpec split;
    std::vector<std::string> measures;  // empty = all 14
    std::uint64_t candidate_seed = 42;
    int negatives_ratio = 100;
    double rank_halflife = 5.0;
    BatchConfig batch;
    std::string out_dir = ".";

    std::vector<std::string> effective_measures() const {
        return measures.empty() ? all_measures() : measures;
    }
};

// Flat `key = value` config file (# comments, blank lines ignored).
// Unknown keys raise ParseError. See serialize_run_config for the key set.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

// Canonical one-line-per-key rendering; the config hash is FNV-1a over it.
std::string serialize_run_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// Scores CSV: `# config=<hash>` provenance line, `user,item,label,score,
// defined` header, scores at 9 significant digits.
void write_scores_csv(std::ostream& out, const std::vector<ScoredRow>& rows,
                      const std::string& hash);
std::vector<ScoredRow> read_scores_csv(std::istream& in);

struct FoldResult {
    int fold = 0;
    std::map<std::string, MetricReport> reports;
};

struct RunResult {
    std::string hash;
    std::vector<FoldResult> folds;
    // Fold means and the fold-to-fold standard deviation of AUROC.
    std::map<std::string, MetricReport> mean;
    std::map<std::string, double> auroc_std;
};

// Aggregates per-fold reports into means and AUROC standard deviations.
RunResult aggregate(const std::string& hash,
                    std::vector<FoldResult> folds);

// Full pipeline. Writes fold<k>_<measure>.csv per fold and measure plus
// report.json and report.txt into cfg.out_dir (created if missing).
// Negatives for fold k are drawn with seed candidate_seed + k.
RunResult run_pipeline(const RunConfig& cfg);

// Re-evaluates previously written fold<k>_<measure>.csv files.
RunResult evaluate_scores_dir(const std::string& dir, double halflife = 5.0);

// Aligned text table, measures sorted by mean AUROC descending.
std::string report_table(const RunResult& result);
std::string report_json(const RunConfig& cfg, const RunResult& result);

// The k highest-scoring items the user has not rated, ties broken by item
// id ascending; fewer than k when the user has rated almost everything.
std::vector<ScoredPair> recommend_top_k(const BipartiteGraph& g, UserId user,
                                        int k, const std::string& measure,
                                        const BatchConfig& cfg = {});

}  // namespace linkrec

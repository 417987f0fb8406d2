#pragma once

#include <map>
#include <string>
#include <vector>

#include "linkrec/cf.hpp"
#include "linkrec/eval.hpp"
#include "linkrec/pgm.hpp"
#include "linkrec/temporal.hpp"
#include "linkrec/topological.hpp"

namespace linkrec {

struct BatchConfig {
    ScorerConfig scorer;
    TemporalConfig temporal;
    CopConfig cop;
    CFConfig cf;
    int threads = 1;
};

// Every measure name understood by the batch scorer, in report order:
// cn jc aa pa katz rpr pf ts ls tf cop tcop ucf icf.
const std::vector<std::string>& all_measures();
bool is_known_measure(const std::string& name);

// Scores every candidate pair under each requested measure. Semantically
// identical to calling the per-pair scorers pair by pair, but grouped per
// user so expensive state (3-hop neighborhoods, one path DFS per user,
// random-walk vectors, similarity caches) is shared across that user's
// candidates. Pairs whose user or item is absent from the graph - and
// B-COP/TCOP pairs with no connecting path within the length bound - come
// back with defined=false. Output order matches cs.pairs and is
// independent of cfg.threads.
std::map<std::string, std::vector<ScoredRow>> score_measures(
    const BipartiteGraph& g, const CandidateSet& cs,
    const std::vector<std::string>& measures, const BatchConfig& cfg = {});

std::vector<ScoredRow> score_candidates(const BipartiteGraph& g,
                                        const CandidateSet& cs,
                                        const std::string& measure,
                                        const BatchConfig& cfg = {});

}  // namespace linkrec

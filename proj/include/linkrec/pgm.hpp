#pragma once

#include <iosfwd>
#include <vector>

#include "linkrec/graph.hpp"
#include "linkrec/junction_tree.hpp"
#include "linkrec/temporal.hpp"

namespace linkrec {

// Complete bipartite subgraph; both sides sorted, as internal node indices.
struct BClique {
    std::vector<int> users;
    std::vector<int> items;

    friend bool operator==(const BClique&, const BClique&) = default;
};

struct CopConfig {
    int bcns_max_len = 9;      // odd bound for BCNS path enumeration
    int bcns_max_size = 5;     // central neighborhood size threshold
    int clique_var_cap = 10;   // potential scope cap
    int cluster_size_cap = 20; // junction-tree cluster cap
    double smoothing = 1.0;    // Laplace constant added to every cell
    TemporalConfig temporal;   // used by the temporal (TCOP) variant
};

// Maximal complete bipartite subgraphs reachable from the item side: for
// each item i, the users who rated i together with every item all of them
// rated. Deduplicated, deterministic order.
std::vector<BClique> extract_bcliques(const BipartiteGraph& g);

// Plain-text clique cache, one `users|items` comma-separated line each.
void write_bclique_cache(std::ostream& out, const BipartiteGraph& g,
                         const std::vector<BClique>& cliques);
std::vector<BClique> read_bclique_cache(std::istream& in,
                                        const BipartiteGraph& g);

// Bipartite central neighborhood set in insertion order. Paths of odd
// length <= max_len are ranked by (length asc, frequency-score desc,
// lexicographic node sequence); node occurrence counts exclude the
// endpoints. Whole paths are added until the size threshold is reached.
// Throws UndefinedScoreError("disjoint") when no path connects u and p.
std::vector<int> compute_bcns(const BipartiteGraph& g, int u_node, int p_node,
                              int max_len, int max_size);

// One potential scope per distinct restriction of a clique to the BCNS
// (kept only when at least one user and one item survive). Each table cell
// is estimated as a product of smoothed per-edge factors: each in-scope
// (user, item) edge contributes its event count plus the smoothing
// constant when both endpoints participate in the assignment and the
// smoothing constant alone otherwise; with temporal=true each event
// contributes beta^{(now - t)/time_unit} instead of 1.
std::vector<CliquePotential> build_potentials(
    const BipartiteGraph& g, const std::vector<BClique>& restricted,
    bool temporal, const CopConfig& cfg);

// Intersects cliques with the BCNS and caps each one's variable count,
// preferring high-degree nodes. Nodes listed in `keep` (the query
// endpoints) are never dropped by the cap.
std::vector<BClique> restrict_cliques(const std::vector<BClique>& cliques,
                                      const std::vector<int>& bcns,
                                      const BipartiteGraph& g,
                                      int clique_var_cap,
                                      const std::vector<int>& keep = {});

// Shares one clique extraction across many pair queries.
class CopScorer {
public:
    CopScorer(const BipartiteGraph& g, CopConfig cfg);
    CopScorer(const BipartiteGraph& g, CopConfig cfg,
              std::vector<BClique> cliques);

    // Throws UndefinedScoreError when u and p are in disjoint components.
    double score(UserId u, ItemId p, bool temporal) const;
    double score_nodes(int u_node, int p_node, bool temporal) const;

    // Reuses already-enumerated paths between the pair (as produced by
    // enumerate_paths) instead of enumerating again.
    double score_with_paths(int u_node, int p_node,
                            const std::vector<PathView>& paths,
                            bool temporal) const;

    const std::vector<BClique>& cliques() const { return cliques_; }

private:
    const BipartiteGraph& g_;
    CopConfig cfg_;
    std::vector<BClique> cliques_;
    std::vector<std::vector<int>> cliques_of_node_;  // node -> clique ids
};

// Ranks paths and assembles the BCNS from an explicit path list
// (building block shared by compute_bcns and the batch scorer).
std::vector<int> bcns_from_paths(const std::vector<PathView>& paths, int u_node,
                                 int p_node, int max_size);
std::vector<int> bcns_from_paths(const std::vector<Path>& paths, int u_node,
                                 int p_node, int max_size);

double score_cop(const BipartiteGraph& g, UserId u, ItemId p,
                 const CopConfig& cfg);
double score_tcop(const BipartiteGraph& g, UserId u, ItemId p,
                  const CopConfig& cfg);

}  // namespace linkrec

#include "linkrec/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace linkrec {

std::vector<BClique> extract_bcliques(const BipartiteGraph& g) {
    std::vector<BClique> out;
    for (int i = g.num_users(); i < g.num_nodes(); ++i) {
        BClique c;
        for (const auto& e : g.neighbors(i)) c.users.push_back(e.nbr);
        if (c.users.empty()) continue;
        // J = intersection of the item sets of every user who rated i;
        // always contains i itself.
        bool first = true;
        for (int v : c.users) {
            std::vector<int> items;
            if (first) {
                for (const auto& e : g.neighbors(v)) items.push_back(e.nbr);
            } else {
                for (const auto& e : g.neighbors(v))
                    if (std::binary_search(c.items.begin(), c.items.end(), e.nbr))
                        items.push_back(e.nbr);
            }
            c.items = std::move(items);
            first = false;
            if (c.items.size() == 1) break;  // only i left; cannot shrink more
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const BClique& a, const BClique& b) {
        if (a.users != b.users) return a.users < b.users;
        return a.items < b.items;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void write_bclique_cache(std::ostream& out, const BipartiteGraph& g,
                         const std::vector<BClique>& cliques) {
    for (const auto& c : cliques) {
        for (std::size_t k = 0; k < c.users.size(); ++k)
            out << (k ? "," : "") << g.user_id(c.users[k]).v;
        out << '|';
        for (std::size_t k = 0; k < c.items.size(); ++k)
            out << (k ? "," : "") << g.item_id(c.items[k]).v;
        out << '\n';
    }
}

std::vector<BClique> read_bclique_cache(std::istream& in,
                                        const BipartiteGraph& g) {
    std::vector<BClique> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto bar = line.find('|');
        if (bar == std::string::npos)
            throw ParseError("clique cache line " + std::to_string(lineno) +
                             ": missing '|'");
        BClique c;
        auto parse_side = [&](const std::string& part, bool user_side) {
            std::istringstream ss(part);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const std::int64_t id = std::stoll(tok);
                if (user_side)
                    c.users.push_back(g.user_node(UserId{id}));
                else
                    c.items.push_back(g.item_node(ItemId{id}));
            }
        };
        parse_side(line.substr(0, bar), true);
        parse_side(line.substr(bar + 1), false);
        std::sort(c.users.begin(), c.users.end());
        std::sort(c.items.begin(), c.items.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<int> bcns_from_paths(const std::vector<PathView>& paths, int u_node,
                                 int p_node, int max_size) {
    if (paths.empty())
        throw UndefinedScoreError("disjoint: no path between the pair");
    std::unordered_map<int, int> occurrence;
    for (const PathView& path : paths)
        for (int v : path.nodes)
            if (v != u_node && v != p_node) ++occurrence[v];
    std::vector<int> rank(paths.size());
    std::vector<long> fscore(paths.size(), 0);
    for (std::size_t k = 0; k < paths.size(); ++k) {
        rank[k] = static_cast<int>(k);
        for (int v : paths[k].nodes)
            if (v != u_node && v != p_node) fscore[k] += occurrence[v];
    }
    std::sort(rank.begin(), rank.end(), [&](int a, int b) {
        if (paths[a].length() != paths[b].length())
            return paths[a].length() < paths[b].length();
        if (fscore[a] != fscore[b]) return fscore[a] > fscore[b];
        return std::lexicographical_compare(
            paths[a].nodes.begin(), paths[a].nodes.end(),
            paths[b].nodes.begin(), paths[b].nodes.end());
    });
    std::vector<int> bcns;
    std::vector<char> in_bcns;
    auto add = [&](int v) {
        if (static_cast<std::size_t>(v) >= in_bcns.size())
            in_bcns.resize(v + 1, 0);
        if (!in_bcns[v]) {
            in_bcns[v] = 1;
            bcns.push_back(v);
        }
    };
    for (int k : rank) {
        if (static_cast<int>(bcns.size()) >= max_size) break;
        for (int v : paths[k].nodes) add(v);
    }
    return bcns;
}

std::vector<int> bcns_from_paths(const std::vector<Path>& paths, int u_node,
                                 int p_node, int max_size) {
    return bcns_from_paths(as_views(paths), u_node, p_node, max_size);
}

std::vector<int> compute_bcns(const BipartiteGraph& g, int u_node, int p_node,
                              int max_len, int max_size) {
    if (max_size < 2) throw std::invalid_argument("BCNS max_size must be >= 2");
    return bcns_from_paths(enumerate_paths(g, u_node, p_node, max_len), u_node,
                           p_node, max_size);
}

std::vector<BClique> restrict_cliques(const std::vector<BClique>& cliques,
                                      const std::vector<int>& bcns,
                                      const BipartiteGraph& g,
                                      int clique_var_cap,
                                      const std::vector<int>& keep) {
    std::vector<char> in_bcns;
    for (int v : bcns) {
        if (static_cast<std::size_t>(v) >= in_bcns.size())
            in_bcns.resize(v + 1, 0);
        in_bcns[v] = 1;
    }
    auto member = [&](int v) {
        return static_cast<std::size_t>(v) < in_bcns.size() && in_bcns[v];
    };
    std::vector<BClique> out;
    for (const auto& c : cliques) {
        BClique r;
        for (int v : c.users)
            if (member(v)) r.users.push_back(v);
        if (r.users.empty()) continue;
        for (int v : c.items)
            if (member(v)) r.items.push_back(v);
        if (r.items.empty()) continue;
        // Scope cap: keep the highest-degree nodes on each side, but never
        // drop a protected (query) node.
        const auto protected_node = [&](int v) {
            return std::find(keep.begin(), keep.end(), v) != keep.end();
        };
        auto truncate = [&](std::vector<int>& side, std::size_t want) {
            std::sort(side.begin(), side.end(), [&](int a, int b) {
                const bool pa = protected_node(a), pb = protected_node(b);
                if (pa != pb) return pa;
                if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
                return a < b;
            });
            side.resize(want);
            std::sort(side.begin(), side.end());
        };
        while (r.users.size() + r.items.size() >
               static_cast<std::size_t>(clique_var_cap)) {
            if (r.users.size() >= r.items.size() && r.users.size() > 1)
                truncate(r.users, r.users.size() - 1);
            else
                truncate(r.items, r.items.size() - 1);
        }
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const BClique& a, const BClique& b) {
        if (a.users != b.users) return a.users < b.users;
        return a.items < b.items;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<CliquePotential> build_potentials(
    const BipartiteGraph& g, const std::vector<BClique>& restricted,
    bool temporal, const CopConfig& cfg) {
    const double now = static_cast<double>(cfg.temporal.effective_now(g));
    std::vector<CliquePotential> out;
    out.reserve(restricted.size());
    for (const auto& c : restricted) {
        CliquePotential pot;
        pot.vars = c.users;
        pot.vars.insert(pot.vars.end(), c.items.begin(), c.items.end());
        std::sort(pot.vars.begin(), pot.vars.end());
        std::unordered_map<int, int> bit;
        for (std::size_t k = 0; k < pot.vars.size(); ++k)
            bit.emplace(pot.vars[k], static_cast<int>(k));
        // Recency-weighted transaction count per in-clique edge.
        struct PairCount {
            std::size_t mask;
            double count;
        };
        std::vector<PairCount> pairs;
        for (int u : c.users) {
            for (const auto& e : g.neighbors(u)) {
                const auto it = bit.find(e.nbr);
                if (it == bit.end()) continue;
                double w = 1.0;
                if (temporal)
                    w = std::pow(cfg.temporal.beta,
                                 (now - static_cast<double>(e.timestamp)) /
                                     cfg.temporal.time_unit);
                pairs.push_back({(std::size_t{1} << bit.at(u)) |
                                     (std::size_t{1} << it->second),
                                 w});
            }
        }
        // The table is estimated as a product of per-edge factors: an edge
        // whose endpoints both participate contributes its smoothed
        // transaction count, any other configuration the smoothing constant
        // alone. For a two-variable clique this reduces to the smoothed
        // count table; for larger cliques it couples exactly the pairs that
        // co-occur in transactions instead of spreading mass uniformly.
        pot.table.assign(std::size_t{1} << pot.vars.size(), 1.0);
        for (std::size_t a = 0; a < pot.table.size(); ++a) {
            double cell = 1.0;
            for (const auto& pc : pairs)
                cell *= (a & pc.mask) == pc.mask ? pc.count + cfg.smoothing
                                                 : cfg.smoothing;
            pot.table[a] = cell;
        }
        out.push_back(std::move(pot));
    }
    return out;
}

CopScorer::CopScorer(const BipartiteGraph& g, CopConfig cfg)
    : CopScorer(g, cfg, extract_bcliques(g)) {}

CopScorer::CopScorer(const BipartiteGraph& g, CopConfig cfg,
                     std::vector<BClique> cliques)
    : g_(g), cfg_(cfg), cliques_(std::move(cliques)) {
    cliques_of_node_.assign(g.num_nodes(), {});
    for (std::size_t c = 0; c < cliques_.size(); ++c) {
        for (int v : cliques_[c].users)
            cliques_of_node_[v].push_back(static_cast<int>(c));
        for (int v : cliques_[c].items)
            cliques_of_node_[v].push_back(static_cast<int>(c));
    }
}

double CopScorer::score(UserId u, ItemId p, bool temporal) const {
    return score_nodes(g_.user_node(u), g_.item_node(p), temporal);
}

double CopScorer::score_nodes(int u_node, int p_node, bool temporal) const {
    const auto paths = enumerate_paths(g_, u_node, p_node, cfg_.bcns_max_len);
    return score_with_paths(u_node, p_node, as_views(paths), temporal);
}

double CopScorer::score_with_paths(int u_node, int p_node,
                                   const std::vector<PathView>& paths,
                                   bool temporal) const {
    const auto bcns = bcns_from_paths(paths, u_node, p_node, cfg_.bcns_max_size);
    // Candidate cliques: any clique touching a BCNS node.
    std::vector<int> cand;
    for (int v : bcns)
        cand.insert(cand.end(), cliques_of_node_[v].begin(),
                    cliques_of_node_[v].end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<BClique> touching;
    touching.reserve(cand.size());
    for (int c : cand) touching.push_back(cliques_[c]);
    auto restricted = restrict_cliques(touching, bcns, g_, cfg_.clique_var_cap,
                                       {u_node, p_node});

    LocalMRF mrf;
    mrf.nodes = bcns;
    mrf.potentials = build_potentials(g_, restricted, temporal, cfg_);
    // The restricted cliques need not span the BCNS, so thread a chain of
    // flat pairwise potentials through it. A constant table leaves the
    // joint untouched while guaranteeing the MRF stays connected and every
    // BCNS node (the query endpoints included) appears in some potential.
    for (std::size_t k = 0; k + 1 < bcns.size(); ++k) {
        std::vector<int> vars{bcns[k], bcns[k + 1]};
        std::sort(vars.begin(), vars.end());
        mrf.potentials.push_back({std::move(vars), {1.0, 1.0, 1.0, 1.0}});
    }
    return infer_joint(mrf, u_node, p_node, cfg_.cluster_size_cap);
}

double score_cop(const BipartiteGraph& g, UserId u, ItemId p,
                 const CopConfig& cfg) {
    return CopScorer(g, cfg).score(u, p, false);
}

double score_tcop(const BipartiteGraph& g, UserId u, ItemId p,
                  const CopConfig& cfg) {
    return CopScorer(g, cfg).score(u, p, true);
}

}  // namespace linkrec

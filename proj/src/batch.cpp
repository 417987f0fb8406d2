#include "linkrec/batch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <stdexcept>
#include <thread>

namespace linkrec {

const std::vector<std::string>& all_measures() {
    static const std::vector<std::string> names = {
        "cn", "jc", "aa", "pa", "katz", "rpr", "pf",
        "ts", "ls", "tf", "cop", "tcop", "ucf", "icf"};
    return names;
}

bool is_known_measure(const std::string& name) {
    const auto& all = all_measures();
    return std::find(all.begin(), all.end(), name) != all.end();
}

namespace {

struct PairRef {
    int p_node;
    std::size_t row;
};

struct UserGroup {
    int u_node;
    std::vector<PairRef> pairs;
};

struct Prepared {
    std::vector<ScoredRow> base_rows;
    std::vector<UserGroup> groups;  // sorted by u_node
};

Prepared prepare(const BipartiteGraph& g, const CandidateSet& cs) {
    Prepared prep;
    prep.base_rows.reserve(cs.pairs.size());
    std::map<int, std::vector<PairRef>> by_user;
    for (std::size_t k = 0; k < cs.pairs.size(); ++k) {
        const auto& pr = cs.pairs[k];
        const bool defined = g.has_user(pr.user) && g.has_item(pr.item);
        prep.base_rows.push_back(
            {pr.user.v, pr.item.v, pr.positive ? 1 : 0, 0.0, defined});
        if (defined)
            by_user[g.user_node(pr.user)].push_back(
                {g.item_node(pr.item), k});
    }
    prep.groups.reserve(by_user.size());
    for (auto& [u_node, pairs] : by_user)
        prep.groups.push_back({u_node, std::move(pairs)});
    return prep;
}

bool wants(const std::vector<std::string>& measures, const char* name) {
    return std::find(measures.begin(), measures.end(), name) != measures.end();
}

// Runs fn(group_index) over all groups on `threads` workers. Each call
// writes only to its own rows, so the partition is purely a speed knob.
template <typename Fn>
void parallel_over_groups(std::size_t n_groups, int threads, Fn&& fn) {
    const int workers =
        std::max(1, std::min<int>(threads, static_cast<int>(n_groups)));
    if (workers == 1) {
        for (std::size_t k = 0; k < n_groups; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < n_groups; k += workers) fn(k);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

// ---- cn / jc / aa / pa -----------------------------------------------------

void score_gamma_family(const BipartiteGraph& g, const Prepared& prep,
                        const std::vector<std::string>& measures,
                        std::map<std::string, std::vector<ScoredRow>>& out) {
    const bool has_cn = wants(measures, "cn"), has_jc = wants(measures, "jc"),
               has_aa = wants(measures, "aa"), has_pa = wants(measures, "pa");
    if (has_pa) {
        auto& rows = out.at("pa");
        for (const auto& grp : prep.groups)
            for (const auto& ref : grp.pairs)
                rows[ref.row].score = static_cast<double>(g.degree(grp.u_node)) *
                                      static_cast<double>(g.degree(ref.p_node));
    }
    if (!has_cn && !has_jc && !has_aa) return;

    const int n = g.num_nodes();
    const int words = (n + 63) / 64;
    std::vector<double> invlog(n, 0.0);
    if (has_aa) {
        for (int v = 0; v < n; ++v) {
            const auto sz = g.neighbors_within(v, 3).size();
            if (sz > 1) invlog[v] = 1.0 / std::log(static_cast<double>(sz));
        }
    }
    // 3-hop bitsets, only for nodes that appear as candidate endpoints.
    std::vector<std::vector<std::uint64_t>> bits(n);
    auto gamma_bits = [&](int v) -> const std::vector<std::uint64_t>& {
        if (bits[v].empty()) {
            bits[v].assign(words, 0);
            for (int z : g.neighbors_within(v, 3))
                bits[v][z >> 6] |= std::uint64_t{1} << (z & 63);
        }
        return bits[v];
    };
    auto test_bit = [](const std::vector<std::uint64_t>& b, int v) {
        return (b[v >> 6] >> (v & 63)) & 1;
    };
    for (const auto& grp : prep.groups) {
        const auto& bu = gamma_bits(grp.u_node);
        for (const auto& ref : grp.pairs) {
            const auto& bp = gamma_bits(ref.p_node);
            long cn = 0, uni = 0;
            double aa = 0.0;
            for (int w = 0; w < words; ++w) {
                std::uint64_t both = bu[w] & bp[w];
                cn += std::popcount(both);
                if (has_jc) uni += std::popcount(bu[w] | bp[w]);
                if (has_aa)
                    while (both) {
                        const int z = (w << 6) + std::countr_zero(both);
                        aa += invlog[z];
                        both &= both - 1;
                    }
            }
            if (has_cn)
                out.at("cn")[ref.row].score = static_cast<double>(cn);
            if (has_jc) {
                // The endpoints are excluded from each other's sets.
                uni -= test_bit(bu, ref.p_node);
                uni -= test_bit(bp, grp.u_node);
                out.at("jc")[ref.row].score =
                    uni > 0 ? static_cast<double>(cn) / static_cast<double>(uni)
                            : 0.0;
            }
            if (has_aa) out.at("aa")[ref.row].score = aa;
        }
    }
}

// ---- katz / pf / ts / ls / tf / cop / tcop ---------------------------------

struct PathEnabled {
    bool katz = false, pf = false, ts = false, ls = false, tf = false;
    bool cop = false, tcop = false;
    int katz_len = 0, pf_len = 0, ts_len = 0, ls_len = 0, tf_len = 0;
    int cop_len = 0;
    int max_len = 0;
    bool any_cop() const { return cop || tcop; }
};

struct PathRec {
    std::size_t n_off;  // into the nodes arena; weights/timestamps use w_off
    std::size_t w_off;
    int len;
};

// Per-worker scratch for the shared per-user path DFS.
struct PathScratch {
    const BipartiteGraph& g;
    const PathEnabled& en;
    const BatchConfig& cfg;
    double now;
    int num_items;
    int n_ls_lens;

    std::vector<char> on_path;
    std::vector<int> node_stack;
    std::vector<double> w_stack;
    std::vector<std::int64_t> ts_stack;
    std::vector<double> pf_stack, tf_stack;  // flow after k steps

    std::vector<double> katz_acc, pf_acc, tf_acc, ts_acc;
    std::vector<double> ls_tpi;
    std::vector<int> ls_cnt;
    std::vector<char> is_cand;
    std::vector<double> katz_pow;  // beta^l by length

    // Path arena for B-COP/TCOP, reset per user.
    std::vector<int> arena_nodes;
    std::vector<double> arena_w;
    std::vector<std::int64_t> arena_ts;
    std::vector<std::vector<PathRec>> recs;  // by item offset
    std::vector<int> touched_items;

    PathScratch(const BipartiteGraph& g_, const PathEnabled& en_,
                const BatchConfig& cfg_)
        : g(g_), en(en_), cfg(cfg_),
          now(static_cast<double>(cfg_.temporal.effective_now(g_))),
          num_items(g_.num_items()),
          n_ls_lens(en_.ls ? (en_.ls_len - 1) / 2 : 0),
          on_path(g_.num_nodes(), 0),
          katz_acc(en_.katz ? num_items : 0, 0.0),
          pf_acc(en_.pf ? num_items : 0, 0.0),
          tf_acc(en_.tf ? num_items : 0, 0.0),
          ts_acc(en_.ts ? num_items : 0, 0.0),
          ls_tpi(static_cast<std::size_t>(n_ls_lens) * num_items, 0.0),
          ls_cnt(static_cast<std::size_t>(n_ls_lens) * num_items, 0),
          is_cand(en_.any_cop() ? num_items : 0, 0),
          katz_pow(en_.max_len + 1, 0.0),
          recs(en_.any_cop() ? num_items : 0) {
        for (int l = 0; l <= en.max_len; ++l)
            katz_pow[l] = std::pow(cfg.scorer.katz_beta, l);
    }

    void reset_user() {
        std::fill(katz_acc.begin(), katz_acc.end(), 0.0);
        std::fill(pf_acc.begin(), pf_acc.end(), 0.0);
        std::fill(tf_acc.begin(), tf_acc.end(), 0.0);
        std::fill(ts_acc.begin(), ts_acc.end(), 0.0);
        std::fill(ls_tpi.begin(), ls_tpi.end(), 0.0);
        std::fill(ls_cnt.begin(), ls_cnt.end(), 0);
        arena_nodes.clear();
        arena_w.clear();
        arena_ts.clear();
        for (int off : touched_items) recs[off].clear();
        touched_items.clear();
    }

    void accumulate(int item_node, int len) {
        const int off = item_node - g.num_users();
        if (en.katz && len >= 3 && len <= en.katz_len)
            katz_acc[off] += katz_pow[len];
        if (en.pf && len <= en.pf_len) pf_acc[off] += pf_stack[len];
        if (en.tf && len <= en.tf_len) tf_acc[off] += tf_stack[len];
        if ((en.ts && len <= en.ts_len) || (en.ls && len >= 3 && len <= en.ls_len)) {
            const std::int64_t now64 = static_cast<std::int64_t>(now);
            double inv = 0.0;
            bool zero_w = false;
            std::int64_t lo = ts_stack[0], hi = ts_stack[0];
            double age_sum = 0.0;
            for (int k = 0; k < len; ++k) {
                if (w_stack[k] == 0.0) zero_w = true;
                else inv += 1.0 / w_stack[k];
                lo = std::min(lo, ts_stack[k]);
                hi = std::max(hi, ts_stack[k]);
                age_sum += static_cast<double>(now64 - ts_stack[k]);
            }
            const double hmean = zero_w ? 0.0 : static_cast<double>(len) / inv;
            const double unit = cfg.temporal.time_unit;
            const double beta = cfg.temporal.beta;
            if (en.ts && len <= en.ts_len) {
                const double recency = (now - static_cast<double>(hi)) / unit;
                const double spread =
                    static_cast<double>(hi - lo) / unit;
                ts_acc[off] +=
                    hmean * std::pow(beta, recency) / (spread + 1.0);
            }
            if (en.ls && len >= 3 && len <= en.ls_len) {
                const double avg_age = age_sum / static_cast<double>(len);
                const double tpi =
                    hmean * std::pow(beta, avg_age / unit) /
                    (std::abs(static_cast<double>(now64 - hi)) / unit + 1.0);
                const std::size_t slot =
                    static_cast<std::size_t>((len - 3) / 2) * num_items + off;
                ls_tpi[slot] += tpi;
                ++ls_cnt[slot];
            }
        }
        if (en.any_cop() && len <= en.cop_len && is_cand[off]) {
            PathRec rec{arena_nodes.size(), arena_w.size(), len};
            arena_nodes.insert(arena_nodes.end(), node_stack.begin(),
                               node_stack.begin() + len + 1);
            arena_w.insert(arena_w.end(), w_stack.begin(),
                           w_stack.begin() + len);
            arena_ts.insert(arena_ts.end(), ts_stack.begin(),
                            ts_stack.begin() + len);
            if (recs[off].empty()) touched_items.push_back(off);
            recs[off].push_back(rec);
        }
    }

    void dfs(int v, int depth) {
        const double wdeg = g.weighted_degree(v);
        for (const auto& e : g.neighbors(v)) {
            if (on_path[e.nbr]) continue;
            const int len = depth + 1;
            node_stack[len] = e.nbr;
            w_stack[len - 1] = e.weight;
            ts_stack[len - 1] = e.timestamp;
            if (en.pf || en.tf) {
                // Same expression shape as the per-pair flow scorers, so
                // the results agree bitwise, not just approximately.
                pf_stack[len] = pf_stack[len - 1] * e.weight / wdeg;
                double out = tf_stack[len - 1] * e.weight / wdeg;
                if (en.tf && depth > 0) {
                    const double gap = std::abs(static_cast<double>(
                                          e.timestamp - ts_stack[len - 2])) /
                                      cfg.temporal.time_unit;
                    out *= std::pow(1.0 - cfg.temporal.alpha, gap);
                }
                tf_stack[len] = out;
            }
            const bool item = g.is_item_node(e.nbr);
            if (item) accumulate(e.nbr, len);
            // Another item lies 2 edges away from an item, 1 from a user.
            if (len + (item ? 2 : 1) <= en.max_len) {
                on_path[e.nbr] = 1;
                dfs(e.nbr, len);
                on_path[e.nbr] = 0;
            }
        }
    }

    void run_user(int u_node) {
        reset_user();
        node_stack.assign(en.max_len + 1, 0);
        w_stack.assign(en.max_len, 0.0);
        ts_stack.assign(en.max_len, 0);
        pf_stack.assign(en.max_len + 1, 0.0);
        tf_stack.assign(en.max_len + 1, 0.0);
        node_stack[0] = u_node;
        pf_stack[0] = tf_stack[0] = 1.0;
        on_path[u_node] = 1;
        dfs(u_node, 0);
        on_path[u_node] = 0;
    }
};

void check_temporal(const TemporalConfig& t) {
    if (!(t.beta > 0.0 && t.beta < 1.0))
        throw std::invalid_argument("temporal beta must be in (0,1)");
    if (!(t.alpha > 0.0 && t.alpha < 1.0))
        throw std::invalid_argument("temporal alpha must be in (0,1)");
}

void check_odd(int len, const char* what) {
    if (len < 1 || len % 2 == 0)
        throw std::invalid_argument(std::string(what) +
                                    " must be odd and >= 1");
}

void score_path_family(const BipartiteGraph& g, const Prepared& prep,
                       const std::vector<std::string>& measures,
                       const BatchConfig& cfg,
                       std::map<std::string, std::vector<ScoredRow>>& out) {
    PathEnabled en;
    en.katz = wants(measures, "katz");
    en.pf = wants(measures, "pf");
    en.ts = wants(measures, "ts");
    en.ls = wants(measures, "ls");
    en.tf = wants(measures, "tf");
    en.cop = wants(measures, "cop");
    en.tcop = wants(measures, "tcop");
    if (!(en.katz || en.pf || en.ts || en.ls || en.tf || en.any_cop())) return;

    en.katz_len = cfg.scorer.katz_max_len;
    en.pf_len = cfg.scorer.propflow_max_len;
    en.ts_len = cfg.temporal.time_score_max_len;
    en.ls_len = cfg.temporal.max_len;
    en.tf_len = cfg.temporal.max_len;
    en.cop_len = cfg.cop.bcns_max_len;
    if (en.katz) check_odd(en.katz_len, "katz_max_len");
    if (en.pf) check_odd(en.pf_len, "propflow_max_len");
    if (en.ts) check_odd(en.ts_len, "time_score_max_len");
    if (en.ls || en.tf) check_odd(en.ls_len, "temporal max_len");
    if (en.any_cop()) check_odd(en.cop_len, "bcns_max_len");
    if (en.ts || en.ls || en.tf || en.tcop) check_temporal(cfg.temporal);
    if (en.tcop) check_temporal(cfg.cop.temporal);
    en.max_len = 0;
    if (en.katz) en.max_len = std::max(en.max_len, en.katz_len);
    if (en.pf) en.max_len = std::max(en.max_len, en.pf_len);
    if (en.ts) en.max_len = std::max(en.max_len, en.ts_len);
    if (en.ls || en.tf) en.max_len = std::max(en.max_len, en.ls_len);
    if (en.any_cop()) en.max_len = std::max(en.max_len, en.cop_len);

    std::unique_ptr<CopScorer> cop_scorer;
    if (en.any_cop())
        cop_scorer = std::make_unique<CopScorer>(g, cfg.cop);

    const int workers = std::max(1, cfg.threads);
    std::vector<std::unique_ptr<PathScratch>> scratch;
    for (int w = 0; w < workers; ++w)
        scratch.push_back(std::make_unique<PathScratch>(g, en, cfg));

    auto run_group = [&](PathScratch& sc, const UserGroup& grp) {
        if (en.any_cop())
            for (const auto& ref : grp.pairs)
                sc.is_cand[ref.p_node - g.num_users()] = 1;
        sc.run_user(grp.u_node);
        for (const auto& ref : grp.pairs) {
            const int off = ref.p_node - g.num_users();
            if (en.katz) out.at("katz")[ref.row].score = sc.katz_acc[off];
            if (en.pf) out.at("pf")[ref.row].score = sc.pf_acc[off];
            if (en.tf) out.at("tf")[ref.row].score = sc.tf_acc[off];
            if (en.ts) out.at("ts")[ref.row].score = sc.ts_acc[off];
            if (en.ls) {
                double ls = 0.0;
                for (int li = 0; li < sc.n_ls_lens; ++li) {
                    const std::size_t slot =
                        static_cast<std::size_t>(li) * sc.num_items + off;
                    if (sc.ls_cnt[slot] > 0)
                        ls += sc.ls_tpi[slot] / sc.ls_cnt[slot] /
                              static_cast<double>(2 * li + 2);
                }
                out.at("ls")[ref.row].score = ls;
            }
            if (en.any_cop()) {
                std::vector<PathView> views;
                views.reserve(sc.recs[off].size());
                for (const auto& rec : sc.recs[off])
                    views.emplace_back(
                        std::span<const int>(sc.arena_nodes.data() + rec.n_off,
                                             rec.len + 1),
                        std::span<const double>(sc.arena_w.data() + rec.w_off,
                                                rec.len),
                        std::span<const std::int64_t>(
                            sc.arena_ts.data() + rec.w_off, rec.len));
                if (views.empty()) {
                    if (en.cop) out.at("cop")[ref.row].defined = false;
                    if (en.tcop) out.at("tcop")[ref.row].defined = false;
                } else {
                    if (en.cop)
                        out.at("cop")[ref.row].score =
                            cop_scorer->score_with_paths(grp.u_node, ref.p_node,
                                                         views, false);
                    if (en.tcop)
                        out.at("tcop")[ref.row].score =
                            cop_scorer->score_with_paths(grp.u_node, ref.p_node,
                                                         views, true);
                }
            }
        }
        if (en.any_cop())
            for (const auto& ref : grp.pairs)
                sc.is_cand[ref.p_node - g.num_users()] = 0;
    };

    if (workers == 1) {
        for (const auto& grp : prep.groups) run_group(*scratch[0], grp);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < prep.groups.size();
                         k += workers)
                        run_group(*scratch[w], prep.groups[k]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }
}

// ---- rpr -------------------------------------------------------------------

void score_rpr_family(const BipartiteGraph& g, const Prepared& prep,
                      const BatchConfig& cfg,
                      std::map<std::string, std::vector<ScoredRow>>& out) {
    auto& rows = out.at("rpr");
    parallel_over_groups(
        prep.groups.size(), cfg.threads, [&](std::size_t gi) {
            const auto& grp = prep.groups[gi];
            const auto pi =
                rwr_distribution(g, grp.u_node, cfg.scorer.pr_damping);
            const double du = g.weighted_degree(grp.u_node);
            for (const auto& ref : grp.pairs) {
                // pi_p(u) = pi_u(p) * wdeg(u) / wdeg(p): the walk kernel is a
                // diagonal similarity transform of a symmetric matrix.
                const double dp = g.weighted_degree(ref.p_node);
                rows[ref.row].score = pi[ref.p_node] * (1.0 + du / dp);
            }
        });
}

// ---- ucf / icf -------------------------------------------------------------

struct CFNeighbor {
    double sim;
    int node;
};

void cf_top_k(std::vector<CFNeighbor>& all, int k) {
    std::sort(all.begin(), all.end(),
              [](const CFNeighbor& a, const CFNeighbor& b) {
                  if (a.sim != b.sim) return a.sim > b.sim;
                  return a.node < b.node;
              });
    if (static_cast<int>(all.size()) > k) all.resize(k);
}

void score_cf_family(const BipartiteGraph& g, const Prepared& prep,
                     const std::vector<std::string>& measures,
                     const BatchConfig& cfg,
                     std::map<std::string, std::vector<ScoredRow>>& out) {
    const bool has_ucf = wants(measures, "ucf"), has_icf = wants(measures, "icf");
    if (!has_ucf && !has_icf) return;
    const auto [lo, hi] = detail::rating_range(g);
    const double global_mean = detail::global_mean_rating(g);
    std::vector<double> mean(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v)
        mean[v] = detail::mean_rating(g, v);
    auto clamp = [lo = lo, hi = hi](double x) { return std::clamp(x, lo, hi); };

    if (has_ucf) {
        auto& rows = out.at("ucf");
        // Per user: Pearson to each co-rater, computed once and reused for
        // every candidate item of that user.
        std::vector<double> usim(g.num_users(), 0.0);
        std::vector<char> usim_set(g.num_users(), 0);
        std::vector<int> touched;
        for (const auto& grp : prep.groups) {
            const int un = grp.u_node;
            auto sim_to = [&](int v) {
                if (!usim_set[v]) {
                    usim_set[v] = 1;
                    touched.push_back(v);
                    usim[v] =
                        detail::pearson_nodes(g, un, v, cfg.cf.min_overlap);
                }
                return usim[v];
            };
            for (const auto& ref : grp.pairs) {
                if (g.degree(un) == 0) {
                    rows[ref.row].score = clamp(global_mean);
                    continue;
                }
                std::vector<CFNeighbor> nbrs;
                for (const auto& e : g.neighbors(ref.p_node)) {
                    if (e.nbr == un) continue;
                    const double s = sim_to(e.nbr);
                    if (s != 0.0) nbrs.push_back({s, e.nbr});
                }
                cf_top_k(nbrs, cfg.cf.neighborhood_size);
                double num = 0, den = 0;
                for (const auto& nb : nbrs) {
                    const auto* e = g.find_edge(nb.node, ref.p_node);
                    num += nb.sim * (e->weight - mean[nb.node]);
                    den += std::abs(nb.sim);
                }
                rows[ref.row].score =
                    clamp(den == 0.0 ? mean[un] : mean[un] + num / den);
            }
            for (int v : touched) usim_set[v] = 0;
            touched.clear();
        }
    }

    if (has_icf) {
        auto& rows = out.at("icf");
        std::vector<double> norm(g.num_nodes(), 0.0);
        for (int in = g.num_users(); in < g.num_nodes(); ++in) {
            double s = 0;
            for (const auto& e : g.neighbors(in)) s += e.weight * e.weight;
            norm[in] = std::sqrt(s);
        }
        // Cosine rows cached per candidate item; the accumulation visits
        // co-raters in ascending node order, matching the pairwise merge.
        std::vector<std::vector<double>> sim_row(g.num_nodes());
        auto row_for = [&](int in) -> const std::vector<double>& {
            auto& row = sim_row[in];
            if (row.empty() && g.degree(in) > 0) {
                row.assign(g.num_nodes(), 0.0);
                for (const auto& ev : g.neighbors(in))
                    for (const auto& ej : g.neighbors(ev.nbr))
                        row[ej.nbr] += ev.weight * ej.weight;
                for (int j = g.num_users(); j < g.num_nodes(); ++j)
                    if (row[j] != 0.0) row[j] /= norm[in] * norm[j];
            }
            return row;
        };
        static const std::vector<double> empty_row;
        for (const auto& grp : prep.groups) {
            const int un = grp.u_node;
            for (const auto& ref : grp.pairs) {
                if (g.degree(un) == 0) {
                    rows[ref.row].score = clamp(global_mean);
                    continue;
                }
                const auto& srow =
                    g.degree(ref.p_node) > 0 ? row_for(ref.p_node) : empty_row;
                std::vector<CFNeighbor> nbrs;
                for (const auto& e : g.neighbors(un)) {
                    if (e.nbr == ref.p_node) continue;
                    const double s = srow.empty() ? 0.0 : srow[e.nbr];
                    if (s != 0.0) nbrs.push_back({s, e.nbr});
                }
                cf_top_k(nbrs, cfg.cf.neighborhood_size);
                double num = 0, den = 0;
                for (const auto& nb : nbrs) {
                    const auto* e = g.find_edge(un, nb.node);
                    num += nb.sim * e->weight;
                    den += std::abs(nb.sim);
                }
                rows[ref.row].score =
                    clamp(den == 0.0 ? mean[un] : num / den);
            }
        }
    }
}

}  // namespace

std::map<std::string, std::vector<ScoredRow>> score_measures(
    const BipartiteGraph& g, const CandidateSet& cs,
    const std::vector<std::string>& measures, const BatchConfig& cfg) {
    for (const auto& m : measures)
        if (!is_known_measure(m))
            throw std::invalid_argument("unknown measure: " + m);
    const Prepared prep = prepare(g, cs);
    std::map<std::string, std::vector<ScoredRow>> out;
    for (const auto& m : measures) out[m] = prep.base_rows;
    score_gamma_family(g, prep, measures, out);
    score_path_family(g, prep, measures, cfg, out);
    if (wants(measures, "rpr")) score_rpr_family(g, prep, cfg, out);
    score_cf_family(g, prep, measures, cfg, out);
    return out;
}

std::vector<ScoredRow> score_candidates(const BipartiteGraph& g,
                                        const CandidateSet& cs,
                                        const std::string& measure,
                                        const BatchConfig& cfg) {
    auto all = score_measures(g, cs, {measure}, cfg);
    return std::move(all.at(measure));
}

}  // namespace linkrec

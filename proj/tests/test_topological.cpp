#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "linkrec/topological.hpp"
#include "test_util.hpp"

#ifdef HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace linkrec;
using namespace testutil;

namespace {

// Independent within-3-hops sets with the opposite endpoint removed.
std::set<int> gamma3_oracle(const BipartiteGraph& g, int node, int other) {
    auto s = oracle_within(g, node, 3);
    s.erase(other);
    return s;
}

double pf_oracle(const BipartiteGraph& g, UserId u, ItemId p, int max_len) {
    double total = 0.0;
    for (const auto& seq :
         oracle_paths(g, g.user_node(u), g.item_node(p), max_len)) {
        double flow = 1.0;
        for (std::size_t k = 0; k + 1 < seq.size(); ++k)
            flow *= g.find_edge(seq[k], seq[k + 1])->weight /
                    g.weighted_degree(seq[k]);
        total += flow;
    }
    return total;
}

}  // namespace

TEST_CASE("neighborhood measures on the small example") {
    const auto g = graph(fig5_edges());
    const UserId u{1};
    const ItemId p{1};
    CHECK(score_cn(g, u, p) == 4.0);
    CHECK(score_jc(g, u, p) == 1.0);
    CHECK(score_pa(g, u, p) == 4.0);
    // Every common neighbor's 3-hop neighborhood has all 5 other nodes.
    CHECK(score_aa(g, u, p) == doctest::Approx(4.0 / std::log(5.0)));
}

TEST_CASE("neighborhood measures match set oracles on random graphs") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = graph(random_edges(rng, 7, 7, 0.3));
        if (g.num_users() == 0 || g.num_items() == 0) continue;
        for (int un = 0; un < g.num_users(); ++un)
            for (int in = g.num_users(); in < g.num_nodes(); ++in) {
                const UserId u = g.user_id(un);
                const ItemId p = g.item_id(in);
                const auto gu = gamma3_oracle(g, un, in);
                const auto gp = gamma3_oracle(g, in, un);
                std::set<int> inter, uni;
                std::set_intersection(gu.begin(), gu.end(), gp.begin(),
                                      gp.end(),
                                      std::inserter(inter, inter.end()));
                std::set_union(gu.begin(), gu.end(), gp.begin(), gp.end(),
                               std::inserter(uni, uni.end()));
                CHECK(score_cn(g, u, p) ==
                      static_cast<double>(inter.size()));
                const double want_jc =
                    uni.empty() ? 0.0
                                : static_cast<double>(inter.size()) /
                                      static_cast<double>(uni.size());
                CHECK(score_jc(g, u, p) == doctest::Approx(want_jc));
                double want_aa = 0.0;
                for (int z : inter) {
                    const auto sz = oracle_within(g, z, 3).size();
                    if (sz > 1) want_aa += 1.0 / std::log(double(sz));
                }
                CHECK(score_aa(g, u, p) == doctest::Approx(want_aa));
                CHECK(score_pa(g, u, p) ==
                      double(g.degree(un)) * double(g.degree(in)));
            }
    }
}

TEST_CASE("jaccard of two isolated-from-each-other nodes is 0") {
    // Two disjoint components; u and p share nothing.
    const auto g = graph({{1, 1}, {2, 2}});
    CHECK(score_jc(g, UserId{1}, ItemId{2}) == 0.0);
    CHECK(score_cn(g, UserId{1}, ItemId{2}) == 0.0);
}

TEST_CASE("katz sums beta^length over simple path counts") {
    const auto g = graph(fig5_edges());
    ScorerConfig cfg;
    cfg.katz_beta = 0.005;
    cfg.katz_max_len = 5;
    const double beta = cfg.katz_beta;
    CHECK(score_katz(g, UserId{1}, ItemId{1}, cfg) ==
          doctest::Approx(3 * beta * beta * beta +
                          std::pow(beta, 5)).epsilon(1e-12));

    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rg = graph(random_edges(rng, 6, 6, 0.3));
        if (rg.num_users() == 0 || rg.num_items() == 0) continue;
        const UserId u = rg.user_id(0);
        for (int in = rg.num_users(); in < rg.num_nodes(); ++in) {
            const ItemId p = rg.item_id(in);
            double want = 0.0;
            for (const auto& seq : oracle_paths(rg, 0, in, 5))
                if (seq.size() >= 4)
                    want += std::pow(beta, seq.size() - 1);
            CHECK(score_katz(rg, u, p, cfg) == doctest::Approx(want));
        }
    }
}

TEST_CASE("propflow splits flow over total weighted degree") {
    // Path graph u - i - v - p with unit weights: 1 * 1/2 * 1/2 = 0.25.
    const auto g = graph({{1, 1}, {2, 1}, {2, 2}});
    ScorerConfig cfg;
    cfg.propflow_max_len = 3;
    CHECK(score_propflow(g, UserId{1}, ItemId{2}, cfg) == 0.25);

    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rg = graph(random_edges(rng, 6, 6, 0.35));
        if (rg.num_users() == 0 || rg.num_items() == 0) continue;
        for (int in = rg.num_users(); in < rg.num_nodes(); ++in)
            CHECK(score_propflow(rg, rg.user_id(0), rg.item_id(in), cfg) ==
                  doctest::Approx(pf_oracle(rg, rg.user_id(0), rg.item_id(in),
                                            3)).epsilon(1e-12));
    }
}

TEST_CASE("measures ignore far-away components") {
    auto edges = fig5_edges();
    const auto g = graph(edges);
    // Same graph plus a disjoint block that u and p cannot reach.
    for (auto e : std::vector<Edge>{{10, 10}, {10, 11}, {11, 10}, {11, 11}})
        edges.push_back(e);
    const auto g2 = graph(edges);
    const UserId u{1};
    const ItemId p{1};
    ScorerConfig cfg;
    CHECK(score_cn(g, u, p) == score_cn(g2, u, p));
    CHECK(score_jc(g, u, p) == score_jc(g2, u, p));
    CHECK(score_aa(g, u, p) == score_aa(g2, u, p));
    CHECK(score_katz(g, u, p, cfg) == score_katz(g2, u, p, cfg));
    CHECK(score_propflow(g, u, p, cfg) == score_propflow(g2, u, p, cfg));
}

TEST_CASE("rooted walk distribution is a probability vector") {
    Rng rng(51);
    const auto g = graph(random_edges(rng, 8, 8, 0.3, 100));
    REQUIRE(g.num_nodes() > 0);
    const auto pi = rwr_distribution(g, 0, 0.15);
    double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (double x : pi) CHECK(x >= 0.0);
    CHECK(pi[0] > 0.15);  // the root keeps at least the restart mass
}

#ifdef HAVE_EIGEN
TEST_CASE("rooted walk matches a dense linear solve") {
    Rng rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = graph(random_edges(rng, 7, 7, 0.4, 100));
        const int n = g.num_nodes();
        if (n == 0) continue;
        const double alpha = 0.15;
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
        for (int v = 0; v < n; ++v)
            for (const auto& e : g.neighbors(v))
                P(v, e.nbr) = e.weight / g.weighted_degree(v);
        for (int root = 0; root < n; ++root) {
            if (g.degree(root) == 0) continue;
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
            e(root) = alpha;
            Eigen::MatrixXd A =
                Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * P.transpose();
            Eigen::VectorXd want = A.partialPivLu().solve(e);
            const auto got = rwr_distribution(g, root, alpha);
            for (int v = 0; v < n; ++v)
                CHECK(got[v] == doctest::Approx(want(v)).epsilon(1e-7));
        }
    }
}
#endif

TEST_CASE("reverse walk score follows the degree-reweighting identity") {
    Rng rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = graph(random_edges(rng, 7, 7, 0.4, 100));
        if (g.num_users() == 0 || g.num_items() == 0) continue;
        const double alpha = 0.15;
        for (int un = 0; un < std::min(3, g.num_users()); ++un) {
            if (g.degree(un) == 0) continue;
            const auto pi_u = rwr_distribution(g, un, alpha);
            for (int in = g.num_users(); in < g.num_nodes(); ++in) {
                if (g.degree(in) == 0) continue;
                const auto pi_p = rwr_distribution(g, in, alpha);
                CHECK(pi_p[un] ==
                      doctest::Approx(pi_u[in] * g.weighted_degree(un) /
                                      g.weighted_degree(in))
                          .epsilon(1e-6));
                ScorerConfig cfg;
                CHECK(score_rpr(g, g.user_id(un), g.item_id(in), cfg) ==
                      doctest::Approx(pi_u[in] + pi_p[un]));
            }
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linkrec/temporal.hpp"
#include "linkrec/topological.hpp"
#include "test_util.hpp"

using namespace linkrec;
using namespace testutil;

namespace {

std::vector<Edge> shifted(std::vector<Edge> edges, std::int64_t delta) {
    for (auto& e : edges) e.ts += delta;
    return edges;
}

}  // namespace

TEST_CASE("harmonic mean") {
    CHECK(harmonic_mean({}) == 0.0);
    CHECK(harmonic_mean({4.0}) == 4.0);
    CHECK(harmonic_mean({2.0, 2.0}) == doctest::Approx(2.0));
    CHECK(harmonic_mean({1.0, 3.0}) == doctest::Approx(1.5));
    CHECK(harmonic_mean({1.0, 0.0}) == 0.0);
}

TEST_CASE("temporal parameters are validated") {
    const auto g = graph(fig5_edges());
    TemporalConfig cfg;
    cfg.beta = 1.0;
    CHECK_THROWS(score_time_score(g, UserId{1}, ItemId{1}, cfg));
    cfg.beta = 0.5;
    cfg.alpha = 0.0;
    CHECK_THROWS(score_tflow(g, UserId{1}, ItemId{1}, cfg));
    cfg.alpha = 0.1;
    cfg.max_len = 4;
    CHECK_THROWS(score_tflow(g, UserId{1}, ItemId{1}, cfg));
}

TEST_CASE("time score on a single 3-path") {
    // One path u - i - v - p, weights 2,2,4, timestamps 1y, 2y, 3y ago 0.
    const double year = 86400.0 * 365.0;
    const auto yr = [&](double k) { return std::int64_t(k * year); };
    const auto g = graph({{1, 1, 2.0, yr(2)}, {2, 1, 2.0, yr(1)},
                          {2, 2, 4.0, yr(0)}});
    TemporalConfig cfg;
    cfg.beta = 0.5;
    cfg.now = yr(3);
    // hmean(2,2,4) = 2.4; latest = 2y (1y before now); spread = 2y.
    const double want = 2.4 * std::pow(0.5, 1.0) / (2.0 + 1.0);
    CHECK(score_time_score(g, UserId{1}, ItemId{2}, cfg) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("link score averages the index per length and discounts by length") {
    const double year = 86400.0 * 365.0;
    const auto yr = [&](double k) { return std::int64_t(k * year); };
    const auto g = graph({{1, 1, 2.0, yr(2)}, {2, 1, 2.0, yr(1)},
                          {2, 2, 4.0, yr(0)}});
    TemporalConfig cfg;
    cfg.beta = 0.5;
    cfg.now = yr(3);
    cfg.max_len = 3;
    // Single path: TPI = hmean * beta^{(now-avg)/unit} / (|now-latest|/unit+1)
    const double tpi = 2.4 * std::pow(0.5, 2.0) / (1.0 + 1.0);
    CHECK(score_link_score(g, UserId{1}, ItemId{2}, cfg) ==
          doctest::Approx(tpi / 2.0).epsilon(1e-12));

    // Two paths of length 3: the per-length mean, not the sum. The second
    // path has weights 3, 6, 4, so hmean = 3 / (1/3 + 1/6 + 1/4) = 4.
    const auto g2 = graph({{1, 1, 2.0, yr(2)}, {2, 1, 2.0, yr(1)},
                           {2, 2, 4.0, yr(0)}, {1, 3, 3.0, yr(2)},
                           {2, 3, 6.0, yr(1)}});
    cfg.max_len = 3;
    const double ls2 = score_link_score(g2, UserId{1}, ItemId{2}, cfg);
    const double tpi2 = 4.0 * std::pow(0.5, 2.0) / (1.0 + 1.0);
    CHECK(ls2 == doctest::Approx((tpi + tpi2) / 2.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("t-flow on a single path applies per-step decay") {
    const double year = 86400.0 * 365.0;
    const auto yr = [&](double k) { return std::int64_t(k * year); };
    const auto g = graph({{1, 1, 1.0, yr(0)}, {2, 1, 1.0, yr(1)},
                          {2, 2, 1.0, yr(3)}});
    TemporalConfig cfg;
    cfg.alpha = 0.1;
    cfg.max_len = 3;
    // PropFlow part 0.25; gaps after the first step: 1y then 2y.
    const double want = 0.25 * std::pow(0.9, 1.0) * std::pow(0.9, 2.0);
    CHECK(score_tflow(g, UserId{1}, ItemId{2}, cfg) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("t-flow with uniform timestamps equals propflow exactly") {
    Rng rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        auto edges = random_edges(rng, 7, 7, 0.35);
        for (auto& e : edges) e.ts = 12345;  // all equal
        const auto g = graph(edges);
        if (g.num_users() == 0 || g.num_items() == 0) continue;
        TemporalConfig tcfg;
        tcfg.alpha = 0.3;
        tcfg.max_len = 5;
        ScorerConfig scfg;
        scfg.propflow_max_len = 5;
        for (int in = g.num_users(); in < g.num_nodes(); ++in) {
            const auto u = g.user_id(0);
            const auto p = g.item_id(in);
            CHECK(score_tflow(g, u, p, tcfg) == score_propflow(g, u, p, scfg));
        }
    }
}

TEST_CASE("temporal scores are invariant under uniform time translation") {
    Rng rng(91);
    const double year = 86400.0 * 365.0;
    auto edges = random_edges(rng, 7, 7, 0.35, std::int64_t(3 * year));
    const auto g1 = graph(edges);
    const auto g2 = graph(shifted(edges, std::int64_t(10 * year)));
    REQUIRE(g1.num_users() > 0);
    TemporalConfig cfg;  // now = max timestamp, which shifts along
    for (int in = g1.num_users(); in < g1.num_nodes(); ++in) {
        const auto u = g1.user_id(0);
        const auto p = g1.item_id(in);
        CHECK(score_time_score(g1, u, p, cfg) == score_time_score(g2, u, p, cfg));
        CHECK(score_link_score(g1, u, p, cfg) == score_link_score(g2, u, p, cfg));
        CHECK(score_tflow(g1, u, p, cfg) == score_tflow(g2, u, p, cfg));
    }
}

TEST_CASE("pushing now further into the future shrinks time score") {
    const auto g = graph(fig5_edges());  // all timestamps 0
    TemporalConfig cfg;
    cfg.now = 0;
    const double s0 = score_time_score(g, UserId{1}, ItemId{1}, cfg);
    cfg.now = std::int64_t(86400.0 * 365.0);
    const double s1 = score_time_score(g, UserId{1}, ItemId{1}, cfg);
    CHECK(s0 > 0.0);
    CHECK(s1 < s0);
    CHECK(s1 == doctest::Approx(s0 * cfg.beta).epsilon(1e-12));
}

TEST_CASE("time score with fresh edges and unit weights reduces to path count scale") {
    // All weights 1, all timestamps equal to now: every 3-path contributes
    // exactly 1, so the score counts 3-paths.
    const auto g = graph(fig5_edges());
    TemporalConfig cfg;
    cfg.now = 0;
    CHECK(score_time_score(g, UserId{1}, ItemId{1}, cfg) ==
          doctest::Approx(3.0));
    cfg.time_score_max_len = 5;
    CHECK(score_time_score(g, UserId{1}, ItemId{1}, cfg) ==
          doctest::Approx(4.0));
}

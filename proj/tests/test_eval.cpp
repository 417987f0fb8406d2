#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "linkrec/eval.hpp"
#include "linkrec/rng.hpp"
#include "test_util.hpp"

using namespace linkrec;

namespace {

// O(n^2) pairwise-counting oracle.
double auroc_oracle(const std::vector<double>& s, const std::vector<int>& y) {
    double wins = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] == 0) continue;
        ++n_pos;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != 0) continue;
            if (s[i] > s[j]) wins += 1.0;
            else if (s[i] == s[j]) wins += 0.5;
        }
    }
    n_neg = s.size() - n_pos;
    return wins / (double(n_pos) * double(n_neg));
}

Dataset tiny_dataset(const std::vector<testutil::Edge>& edges) {
    return make_dataset(testutil::interactions(edges));
}

}  // namespace

TEST_CASE("auroc matches pairwise counting exactly") {
    Rng rng(151);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.next_below(60);
        std::vector<double> s;
        std::vector<int> y;
        for (std::size_t k = 0; k < n; ++k) {
            s.push_back(double(rng.next_below(8)));  // plenty of ties
            y.push_back(int(rng.next_below(2)));
        }
        bool has0 = false, has1 = false;
        for (int l : y) (l ? has1 : has0) = true;
        if (!has0 || !has1) continue;
        CHECK(auroc(s, y) == auroc_oracle(s, y));
    }
    CHECK(auroc({1, 2}, {0, 1}) == 1.0);
    CHECK(auroc({2, 1}, {0, 1}) == 0.0);
    CHECK(auroc({1, 1}, {0, 1}) == 0.5);
    CHECK_THROWS(auroc({1, 2}, {1, 1}));
    CHECK_THROWS(auroc({1, 2}, {1}));
}

TEST_CASE("auroc is invariant under strictly monotone transforms") {
    Rng rng(161);
    std::vector<double> s;
    std::vector<int> y;
    for (int k = 0; k < 200; ++k) {
        s.push_back(rng.next_double() * 10 - 5);
        y.push_back(int(rng.next_below(2)));
    }
    y[0] = 0;
    y[1] = 1;
    std::vector<double> t;
    for (double x : s) t.push_back(std::exp(0.3 * x) + 7.0);
    CHECK(auroc(s, y) == auroc(t, y));
}

TEST_CASE("swapping labels mirrors auroc") {
    Rng rng(171);
    std::vector<double> s;
    std::vector<int> y, flip;
    for (int k = 0; k < 100; ++k) {
        s.push_back(double(rng.next_below(20)));
        y.push_back(int(rng.next_below(2)));
    }
    y[0] = 0;
    y[1] = 1;
    for (int l : y) flip.push_back(1 - l);
    CHECK(auroc(s, y) == doctest::Approx(1.0 - auroc(s, flip)).epsilon(1e-12));
}

TEST_CASE("aupr on the worked four-point example") {
    // Scores .9 .8 .7 .6 with labels 1 0 1 0: area 0.5*1 + 0.5*(2/3).
    CHECK(aupr({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0}) ==
          doctest::Approx(0.5 + 0.5 * (2.0 / 3.0)).epsilon(1e-12));
    CHECK(aupr({1, 2}, {0, 1}) == 1.0);
    // Ties collapse into a single sweep step: precision 0.5 at recall 1.
    CHECK(aupr({3, 3}, {0, 1}) == doctest::Approx(0.5));
    CHECK_THROWS(aupr({1, 2}, {1, 1}));
}

TEST_CASE("rank score closed forms") {
    CHECK(rankscore({{2}}, 5.0) ==
          doctest::Approx(std::exp2(-1.0 / 5.0)).epsilon(1e-12));
    CHECK(rankscore({{1}}, 5.0) == 1.0);
    CHECK(rankscore({{1, 2, 3}}, 5.0) == 1.0);  // best possible ordering
    // Two users average; the empty user is skipped.
    CHECK(rankscore({{1}, {2}, {}}, 5.0) ==
          doctest::Approx((1.0 + std::exp2(-0.2)) / 2.0));
    CHECK_THROWS(rankscore({{}}, 5.0));
    CHECK_THROWS(rankscore({{0}}, 5.0));
    CHECK_THROWS(rankscore({{1}}, 0.0));
}

TEST_CASE("rank score lives in [0,1] and ignores trailing irrelevants") {
    Rng rng(181);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<int>> users;
        for (int u = 0; u < 3; ++u) {
            std::set<int> ranks;
            const int n = 1 + int(rng.next_below(6));
            while (int(ranks.size()) < n)
                ranks.insert(1 + int(rng.next_below(40)));
            users.emplace_back(ranks.begin(), ranks.end());
        }
        const double rs = rankscore(users, 5.0);
        CHECK(rs >= 0.0);
        CHECK(rs <= 1.0);
    }
}

TEST_CASE("candidate generation is seeded and avoids edges") {
    const auto train = tiny_dataset({{1, 1}, {1, 2}, {2, 2}, {3, 1}});
    const auto test = tiny_dataset({{2, 1}, {3, 2}});
    const auto cs = generate_candidates(train, test, 7, 2);
    CHECK(cs.num_positives == 2);
    CHECK(cs.pairs[0].positive);
    CHECK(cs.pairs[1].positive);
    std::set<std::pair<std::int64_t, std::int64_t>> edges;
    for (const auto& d : {train, test})
        for (const auto& it : d.interactions)
            edges.insert({it.user.v, it.item.v});
    for (std::size_t k = cs.num_positives; k < cs.pairs.size(); ++k) {
        CHECK_FALSE(cs.pairs[k].positive);
        CHECK_FALSE(edges.count({cs.pairs[k].user.v, cs.pairs[k].item.v}));
    }
    // Deterministic for a seed, different across seeds (whp).
    const auto again = generate_candidates(train, test, 7, 2);
    REQUIRE(again.pairs.size() == cs.pairs.size());
    for (std::size_t k = 0; k < cs.pairs.size(); ++k) {
        CHECK(again.pairs[k].user == cs.pairs[k].user);
        CHECK(again.pairs[k].item == cs.pairs[k].item);
    }
}

TEST_CASE("candidate generation falls back to every non-edge") {
    // 3 users x 2 items = 6 cells, 5 edges -> only 1 non-edge available.
    const auto train = tiny_dataset({{1, 1}, {1, 2}, {2, 1}, {3, 2}});
    const auto test = tiny_dataset({{2, 2}});
    const auto cs = generate_candidates(train, test, 3, 100);
    CHECK(cs.num_positives == 1);
    CHECK(cs.num_negatives == 1);
    CHECK(cs.pairs[1].user.v == 3);
    CHECK(cs.pairs[1].item.v == 1);
    CHECK_THROWS(generate_candidates(train, test, 3, 0));
}

TEST_CASE("evaluate_rows ranks undefined scores last") {
    std::vector<ScoredRow> rows = {
        {1, 10, 1, 0.9, true},  {1, 11, 0, 0.8, true},
        {1, 12, 0, 0.0, false},  // undefined, must sink below everything
        {2, 10, 1, 0.1, true},  {2, 13, 0, 0.5, true},
    };
    const auto rep = evaluate_rows("x", rows);
    CHECK(rep.measure == "x");
    CHECK(rep.n_pairs == 5);
    CHECK(rep.n_undefined == 1);
    // Positives: 0.9 beats all three negatives; 0.1 beats only undefined.
    CHECK(rep.auroc == doctest::Approx((3.0 + 1.0) / 6.0));
    // User 1's relevant item ranks 1st; user 2's ranks 2nd.
    CHECK(rep.rankscore ==
          doctest::Approx((1.0 + std::exp2(-0.2)) / 2.0).epsilon(1e-12));
}

TEST_CASE("random scores produce chance-level auroc") {
    Rng rng(42);
    std::vector<double> s;
    std::vector<int> y;
    for (int k = 0; k < 10000; ++k) {
        s.push_back(rng.next_double());
        y.push_back(int(rng.next_below(2)));
    }
    CHECK(std::abs(auroc(s, y) - 0.5) < 0.02);
}

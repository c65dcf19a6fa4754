#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "socop/error.hpp"
#include "socop/hull.hpp"
#include "socop/oracle.hpp"
#include "test_util.hpp"

using namespace socop;
using socop::testing::kTenClassProbs;
using socop::testing::rel_close;
using socop::testing::RowGenerator;

namespace {

// Frozen from an independent O(K^2) max-min computation (lambda=0.1, k0=1).
const std::vector<double> kTenClassSlopes{0.49504950495049505, 2.1828103683492497,
                                          3.225806451612896, 3.7037037037036953,
                                          14.285714285714512};

}  // namespace

TEST_CASE("sort_dist orders descending with a stable tie-break") {
  SortedDist d = sort_dist(std::vector<double>{0.1, 0.7, 0.2});
  CHECK(d.values() == std::vector<double>{0.7, 0.2, 0.1});
  CHECK(d.perm() == std::vector<int>{1, 2, 0});
  CHECK(d.rank_of(0) == 3);

  SortedDist tie = sort_dist(std::vector<double>{0.5, 0.5});
  CHECK(tie.perm() == std::vector<int>{0, 1});

  SortedDist app = sort_dist(kTenClassProbs);
  std::vector<int> identity(10);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(app.perm() == identity);
  for (std::size_t i = 0; i < 10; ++i) CHECK(rel_close(app.values()[i], kTenClassProbs[i], 1e-12));
}

TEST_CASE("sort_dist validation") {
  CHECK_THROWS_AS(sort_dist(std::vector<double>{1.0}), ValidationError);
  CHECK_THROWS_AS(sort_dist(std::vector<double>{-0.1, 1.1}), ValidationError);
  CHECK_THROWS_AS(sort_dist(std::vector<double>{0.5, std::nan("")}), ValidationError);
  CHECK_THROWS_AS(sort_dist(std::vector<double>{0.5, 0.4}), ValidationError);

  // Float32-style rounding is renormalized away unless disabled.
  const SortedDist d = sort_dist(std::vector<double>{0.6005, 0.4});
  CHECK(d.values()[0] + d.values()[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sort_dist(std::vector<double>{0.6005, 0.4}, SortOptions{false}),
                  ValidationError);

  // Zeros are clamped so the prefix sums stay strictly increasing.
  const SortedDist z = sort_dist(std::vector<double>{1.0, 0.0, 0.0});
  CHECK(z.values()[2] > 0.0);
}

TEST_CASE("label_rank matches the sorted position") {
  RowGenerator gen(5);
  for (int t = 0; t < 200; ++t) {
    const auto p = gen.row(gen.uniform_int(2, 15));
    const SortedDist d = sort_dist(p);
    for (int y = 0; y < static_cast<int>(p.size()); ++y) {
      CHECK(label_rank(p, y) == d.rank_of(y));
    }
  }
}

TEST_CASE("build_hull on the ten-class example") {
  const HullProfile h = build_hull(sort_dist(kTenClassProbs), ScoreConfig{0.1, 1});
  CHECK(h.vertices == std::vector<int>{0, 1, 7, 8, 9, 10});
  REQUIRE(h.slopes.size() == kTenClassSlopes.size());
  for (std::size_t i = 0; i < h.slopes.size(); ++i) {
    CHECK(rel_close(h.slopes[i], kTenClassSlopes[i]));
  }
  CHECK(h.gamma_prefix.front() == 0.0);
  CHECK(h.gamma_prefix.back() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("build_hull at lambda=0 has vertices 0, 1, K") {
  RowGenerator gen(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t K = gen.uniform_int(2, 30);
    const SortedDist d = sort_dist(gen.row(K, false));
    const HullProfile h = build_hull(d, ScoreConfig{0.0, 1});
    CHECK(h.vertices == std::vector<int>{0, 1, static_cast<int>(K)});
    CHECK(h.slopes[0] == 0.0);
    CHECK(rel_close(h.slopes[1], 1.0 / (1.0 - d.values()[0])));
  }
}

TEST_CASE("build_hull two-class hand computation") {
  const HullProfile h = build_hull(sort_dist(std::vector<double>{0.5, 0.5}), ScoreConfig{0.1, 1});
  CHECK(h.vertices == std::vector<int>{0, 1, 2});
  CHECK(h.slopes[0] == doctest::Approx(0.2));
  CHECK(h.slopes[1] == doctest::Approx(2.2));
}

TEST_CASE("build_hull drops collinear points") {
  // Equal probabilities at large lambda put points 1..3 on one line.
  const HullProfile h =
      build_hull(sort_dist(std::vector<double>{0.25, 0.25, 0.25, 0.25}), ScoreConfig{0.0, 3});
  CHECK(h.vertices == std::vector<int>{0, 3, 4});
}

TEST_CASE("ScoreConfig validation") {
  const SortedDist d = sort_dist(std::vector<double>{0.5, 0.3, 0.2});
  CHECK_THROWS_AS(build_hull(d, ScoreConfig{-1.0, 1}), ConfigError);
  CHECK_THROWS_AS(build_hull(d, ScoreConfig{0.1, 0}), ConfigError);
  CHECK_THROWS_AS(build_hull(d, ScoreConfig{0.1, 3}), ConfigError);
}

TEST_CASE("kappa_at step function") {
  const HullProfile h = build_hull(sort_dist(kTenClassProbs), ScoreConfig{0.1, 1});
  CHECK(kappa_at(h, 0.4) == 0);
  CHECK(kappa_at(h, 3.0) == 7);
  CHECK(kappa_at(h, 0.0) == 0);
  CHECK(kappa_at(h, 1e6) == 10);
  // Left-continuity: at a breakpoint the smaller set is kept.
  CHECK(kappa_at(h, h.slopes[1]) == 1);
  CHECK(kappa_at(h, std::nextafter(h.slopes[1], 1e9)) == 7);
  KappaStep step(h);
  CHECK(step(2.5) == 7);
}

TEST_CASE("score_for_rank on the ten-class hull") {
  const HullProfile h = build_hull(sort_dist(kTenClassProbs), ScoreConfig{0.1, 1});
  CHECK(rel_close(score_for_rank(h, 1), kTenClassSlopes[0]));
  CHECK(rel_close(score_for_rank(h, 5), kTenClassSlopes[1]));
  CHECK(rel_close(score_for_rank(h, 8), kTenClassSlopes[2]));
  CHECK(rel_close(score_for_rank(h, 10), kTenClassSlopes[4]));
  CHECK_THROWS_AS(score_for_rank(h, 0), ValidationError);
  CHECK_THROWS_AS(score_for_rank(h, 11), ValidationError);

  const auto all = scores_by_rank(h);
  for (int r = 1; r <= 10; ++r) CHECK(all[r - 1] == score_for_rank(h, r));
}

TEST_CASE("score_for_rank closed form at lambda=0") {
  const HullProfile h = build_hull(sort_dist(std::vector<double>{0.6, 0.3, 0.1}), ScoreConfig{0.0, 1});
  CHECK(score_for_rank(h, 1) == 0.0);
  CHECK(score_for_rank(h, 2) == doctest::Approx(2.5));
  CHECK(score_for_rank(h, 3) == doctest::Approx(2.5));
}

TEST_CASE("socop_score") {
  const ScoreConfig cfg{0.1, 1};
  CHECK(rel_close(socop_score(kTenClassProbs, 0, cfg), kTenClassSlopes[0]));
  CHECK(rel_close(socop_score(kTenClassProbs, 9, cfg), kTenClassSlopes[4]));
  CHECK(socop_score(std::vector<double>{0.5, 0.3, 0.2}, 0, ScoreConfig{0.0, 1}) == 0.0);
  CHECK_THROWS_AS(socop_score(kTenClassProbs, 10, cfg), ValidationError);

  // Permuting the input permutes the label scores accordingly.
  const std::vector<double> shuffled{0.031, 0.202, 0.007, 0.157, 0.172,
                                     0.077, 0.143, 0.027, 0.127, 0.057};
  const auto scores = socop_label_scores(shuffled, cfg);
  CHECK(rel_close(scores[2], kTenClassSlopes[4]));
  CHECK(rel_close(scores[1], kTenClassSlopes[0]));
  CHECK(rel_close(scores[3], kTenClassSlopes[1]));
}

TEST_CASE("socop_score with a reused workspace matches the label scores") {
  RowGenerator gen(91);
  ScoreWorkspace ws;
  for (int t = 0; t < 500; ++t) {
    const std::size_t K = gen.uniform_int(2, 60);  // K changes between calls
    const auto p = gen.row(K);
    const ScoreConfig cfg{gen.uniform(0.0, 2.0), static_cast<int>(gen.uniform_int(1, K - 1))};
    const auto all = socop_label_scores(p, cfg);
    const int y = static_cast<int>(gen.uniform_int(0, K - 1));
    REQUIRE(socop_score(p, y, cfg, ws) == all[y]);
    REQUIRE(socop_score(p, y, cfg) == all[y]);
  }
  CHECK_THROWS_AS(socop_score(kTenClassProbs, -1, ScoreConfig{0.1, 1}, ws), ValidationError);
}

TEST_CASE("property: slopes strictly increase and non-vertices sit on or above the hull") {
  RowGenerator gen(21);
  const std::vector<double> lambdas{0.0, 0.01, 0.1, 1.0, 10.0};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t K = gen.uniform_int(2, 200);
    const SortedDist d = sort_dist(gen.row(K));
    const int k0 = static_cast<int>(gen.uniform_int(1, std::min<std::size_t>(3, K - 1)));
    const HullProfile h = build_hull(d, ScoreConfig{gen.pick(lambdas), k0});
    CHECK(h.vertices.front() == 0);
    CHECK(h.vertices.back() == static_cast<int>(K));
    CHECK(h.slopes.front() >= 0.0);
    for (std::size_t i = 1; i < h.slopes.size(); ++i) CHECK(h.slopes[i] > h.slopes[i - 1]);
    for (std::size_t e = 0; e + 1 < h.vertices.size(); ++e) {
      const int a = h.vertices[e], b = h.vertices[e + 1];
      for (int k = a + 1; k < b; ++k) {
        const double chord = h.g[a] + h.slopes[e] * (h.gamma_prefix[k] - h.gamma_prefix[a]);
        CHECK(h.g[k] >= chord - 1e-9 * std::max(1.0, std::abs(h.g[k])));
      }
    }
  }
}

TEST_CASE("property: hull agrees with the brute-force oracle") {
  RowGenerator gen(33);
  const std::vector<double> lambdas{0.0, 0.05, 0.5, 5.0};
  for (int t = 0; t < 300; ++t) {
    const std::size_t K = gen.uniform_int(2, 12);
    const SortedDist d = sort_dist(gen.row(K));
    const int k0 = static_cast<int>(gen.uniform_int(1, std::min<std::size_t>(2, K - 1)));
    const ScoreConfig cfg{gen.pick(lambdas), k0};
    const HullProfile h = build_hull(d, cfg);

    for (int r = 1; r <= static_cast<int>(K); ++r) {
      CHECK(rel_close(score_for_rank(h, r), oracle::oracle_score(d, cfg, r)));
    }
    std::vector<double> etas{0.0};
    for (double s : oracle::pairwise_slopes(d, cfg)) {
      etas.push_back(s + 1e-6);
      if (s > 1e-6) etas.push_back(s - 1e-6);
    }
    for (double eta : etas) CHECK(kappa_at(h, eta) == oracle::oracle_kappa(d, cfg, eta));
  }
}

TEST_CASE("property: limits in lambda and k0") {
  RowGenerator gen(44);
  for (int t = 0; t < 500; ++t) {
    const std::size_t K = gen.uniform_int(3, 20);
    const auto p = gen.row(K, false);
    const SortedDist d = sort_dist(p);
    const int k0 = static_cast<int>(gen.uniform_int(1, K - 1));
    double head = 0.0;
    for (int j = 0; j < k0; ++j) head += d.values()[j];

    const auto s0 = socop_label_scores(p, ScoreConfig{0.0, k0});
    for (int y = 0; y < static_cast<int>(K); ++y) {
      const double expected = d.rank_of(y) > k0 ? 1.0 / (1.0 - head) : 0.0;
      CHECK(s0[y] == expected);
    }

    const auto big = socop_label_scores(p, ScoreConfig{1e9, 1});
    std::vector<int> by_score(K), by_inv_prob(K);
    std::iota(by_score.begin(), by_score.end(), 0);
    std::iota(by_inv_prob.begin(), by_inv_prob.end(), 0);
    std::stable_sort(by_score.begin(), by_score.end(), [&](int a, int b) { return big[a] < big[b]; });
    std::stable_sort(by_inv_prob.begin(), by_inv_prob.end(),
                     [&](int a, int b) { return 1.0 / d.values()[d.rank_of(a) - 1] <
                                                1.0 / d.values()[d.rank_of(b) - 1]; });
    CHECK(by_score == by_inv_prob);
  }
}

TEST_CASE("property: kappa is nested in eta") {
  RowGenerator gen(55);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t K = gen.uniform_int(2, 40);
    const HullProfile h = build_hull(sort_dist(gen.row(K)),
                                     ScoreConfig{gen.uniform(0.0, 2.0), 1});
    const double top = 1.2 * h.slopes.back();
    double a = gen.uniform(0.0, top), b = gen.uniform(0.0, top);
    if (a > b) std::swap(a, b);
    CHECK(kappa_at(h, a) <= kappa_at(h, b));
  }
}

#include <doctest.h>

#include <algorithm>

#include "socop/oracle.hpp"
#include "test_util.hpp"

using namespace socop;
using namespace socop::oracle;
using socop::testing::kTenClassProbs;

TEST_CASE("oracle_kappa: exhaustive argmin on the ten-class example") {
  const SortedDist d = sort_dist(kTenClassProbs);
  const ScoreConfig cfg{0.1, 1};
  CHECK(oracle_kappa(d, cfg, 0.0) == 0);
  CHECK(oracle_kappa(d, cfg, 100.0) == 10);
  CHECK(oracle_kappa(d, cfg, 2.5) == 7);
}

TEST_CASE("oracle_score: known values") {
  const ScoreConfig cfg{0.1, 1};
  const SortedDist d = sort_dist(kTenClassProbs);
  // Independently computed in a separate scripting session.
  CHECK(oracle_score(d, cfg, 2) == doctest::Approx(2.1828103683492497).epsilon(1e-9));

  socop::testing::RowGenerator gen(7);
  for (int t = 0; t < 20; ++t) {
    const SortedDist r = sort_dist(gen.row(gen.uniform_int(2, 12)));
    CHECK(oracle_score(r, ScoreConfig{0.0, 1}, 1) == 0.0);
  }

  const SortedDist two = sort_dist(std::vector<double>{0.5, 0.5});
  CHECK(oracle_score(two, cfg, 2) == doctest::Approx(2.2));
}

TEST_CASE("oracle_score is non-decreasing in rank") {
  socop::testing::RowGenerator gen(11);
  for (int t = 0; t < 500; ++t) {
    const std::size_t K = gen.uniform_int(2, 12);
    const SortedDist d = sort_dist(gen.row(K));
    const ScoreConfig cfg{gen.pick(std::vector<double>{0, 0.05, 0.5, 5}),
                          static_cast<int>(gen.uniform_int(1, std::min<std::size_t>(2, K - 1)))};
    for (int r = 2; r <= static_cast<int>(K); ++r) {
      CHECK(oracle_score(d, cfg, r) >= oracle_score(d, cfg, r - 1));
    }
  }
}

TEST_CASE("oracle dense scan agrees with oracle_score") {
  socop::testing::RowGenerator gen(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t K = gen.uniform_int(2, 10);
    const SortedDist d = sort_dist(gen.row(K));
    const ScoreConfig cfg{gen.pick(std::vector<double>{0, 0.05, 0.5, 5}), 1};
    const auto slopes = pairwise_slopes(d, cfg);
    const double hi = 1.1 * *std::max_element(slopes.begin(), slopes.end());
    std::vector<double> scores;
    for (int r = 1; r <= static_cast<int>(K); ++r) scores.push_back(oracle_score(d, cfg, r));

    int prev = 0;
    for (int s = 0; s < 10000; ++s) {
      const double eta = hi * s / 9999.0;
      const int k = oracle_kappa(d, cfg, eta);
      CHECK(k >= prev);
      prev = k;
      for (int r = 1; r <= static_cast<int>(K); ++r) {
        // Strictly above the score the rank is reached, strictly below it is
        // not; samples within rounding of the breakpoint are skipped.
        const double margin = 1e-12 * std::max(1.0, scores[r - 1]);
        if (eta > scores[r - 1] + margin) CHECK(k >= r);
        if (eta < scores[r - 1] - margin) CHECK(k < r);
      }
    }
  }
}

TEST_CASE("oracle_profile collects the grid and scores") {
  const SortedDist d = sort_dist(kTenClassProbs);
  const std::vector<double> etas{0.0, 0.4, 2.5, 3.0, 100.0};
  const OracleResult res = oracle_profile(d, ScoreConfig{0.1, 1}, etas);
  CHECK(res.scores.size() == 10);
  CHECK(res.kappa_grid.at(0.4) == 0);
  CHECK(res.kappa_grid.at(3.0) == 7);
  int prev = 0;
  for (const auto& [eta, k] : res.kappa_grid) {
    CHECK(k >= prev);
    prev = k;
  }
}

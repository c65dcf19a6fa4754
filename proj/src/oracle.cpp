#include "socop/oracle.hpp"

#include <algorithm>
#include <limits>

namespace socop::oracle {
namespace {

struct Points {
  std::vector<double> gamma;
  std::vector<double> g;
};

Points make_points(const SortedDist& dist, const ScoreConfig& cfg) {
  const std::size_t K = dist.size();
  Points pts;
  pts.gamma.assign(K + 1, 0.0);
  pts.g.assign(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    pts.gamma[k] = pts.gamma[k - 1] + dist.values()[k - 1];
  }
  for (std::size_t k = 0; k <= K; ++k) {
    pts.g[k] = (static_cast<int>(k) > cfg.k0 ? 1.0 : 0.0) +
               cfg.lambda * static_cast<double>(k);
  }
  return pts;
}

double slope(const Points& pts, std::size_t j, std::size_t k) {
  return (pts.g[k] - pts.g[j]) / (pts.gamma[k] - pts.gamma[j]);
}

}  // namespace

int oracle_kappa(const SortedDist& dist, const ScoreConfig& cfg, double eta) {
  const Points pts = make_points(dist, cfg);
  int best = 0;
  double best_val = pts.g[0] - eta * pts.gamma[0];
  for (std::size_t k = 1; k < pts.g.size(); ++k) {
    const double v = pts.g[k] - eta * pts.gamma[k];
    if (v < best_val) {
      best_val = v;
      best = static_cast<int>(k);
    }
  }
  return best;
}

double oracle_score(const SortedDist& dist, const ScoreConfig& cfg, int rank) {
  const Points pts = make_points(dist, cfg);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = static_cast<std::size_t>(rank); k < pts.g.size(); ++k) {
    double first_optimal = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      first_optimal = std::max(first_optimal, slope(pts, j, k));
    }
    best = std::min(best, first_optimal);
  }
  return best;
}

OracleResult oracle_profile(const SortedDist& dist, const ScoreConfig& cfg,
                            std::span<const double> etas) {
  OracleResult out;
  for (double eta : etas) out.kappa_grid[eta] = oracle_kappa(dist, cfg, eta);
  for (int r = 1; r <= static_cast<int>(dist.size()); ++r) {
    out.scores.push_back(oracle_score(dist, cfg, r));
  }
  return out;
}

std::vector<double> pairwise_slopes(const SortedDist& dist,
                                    const ScoreConfig& cfg) {
  const Points pts = make_points(dist, cfg);
  std::vector<double> out;
  for (std::size_t k = 1; k < pts.g.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) out.push_back(slope(pts, j, k));
  }
  return out;
}

}  // namespace socop::oracle

#include "socop/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "socop/error.hpp"

namespace socop {

std::size_t conformal_rank(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  // The slack absorbs representation error in products like 0.95 * 20.
  const double target = (1.0 - alpha) * static_cast<double>(n + 1);
  const double rank = std::ceil(target - 1e-9);
  return static_cast<std::size_t>(std::max(rank, 1.0));
}

CalibrationResult calibrate(std::span<const double> scores, double alpha) {
  if (scores.empty()) throw ValidationError("no calibration scores");
  const std::size_t n = scores.size();
  const std::size_t rank = conformal_rank(n, alpha);
  CalibrationResult out{std::numeric_limits<double>::infinity(), alpha, n};
  if (rank <= n) {
    std::vector<double> sorted(scores.begin(), scores.end());
    auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(sorted.begin(), nth, sorted.end());
    out.q_hat = *nth;
  }
  return out;
}

PredictionSet predict_socop(std::span<const double> probs,
                            const CalibrationResult& q, const ScoreConfig& cfg) {
  const SortedDist dist = sort_dist(probs);
  const HullProfile hull = build_hull(dist, cfg);
  int k_final = 0;
  for (std::size_t j = 0; j < hull.slopes.size(); ++j) {
    if (hull.slopes[j] <= q.q_hat) {
      k_final = hull.vertices[j + 1];
    } else {
      break;
    }
  }
  PredictionSet out;
  out.members.assign(dist.perm().begin(), dist.perm().begin() + k_final);
  std::sort(out.members.begin(), out.members.end());
  return out;
}

PredictionSet predict_generic(std::span<const double> per_label_scores,
                              const CalibrationResult& q) {
  PredictionSet out;
  for (std::size_t y = 0; y < per_label_scores.size(); ++y) {
    if (per_label_scores[y] <= q.q_hat) out.members.push_back(static_cast<int>(y));
  }
  return out;
}

}  // namespace socop

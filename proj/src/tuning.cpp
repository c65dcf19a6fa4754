#include "socop/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "socop/conformal.hpp"
#include "socop/error.hpp"
#include "socop/metrics.hpp"
#include "socop/scoring.hpp"

namespace socop {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 100.0);
  for (int i = 2; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

TradeoffCurve sweep_lambda(const ProbMatrix& tune_data, double alpha,
                           std::span<const double> grid, int k0,
                           std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ConfigError("lambda grid entries must be finite and nonnegative");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw ConfigError("lambda grid must be strictly increasing");
    }
  }
  if (tune_data.rows() < 2) {
    throw ConfigError("tuning split needs at least 2 instances");
  }

  std::vector<std::size_t> idx = shuffled_indices(tune_data.rows(), seed, 0);
  const std::size_t n_cal = idx.size() / 2;
  const ProbMatrix cal = tune_data.subset(std::span(idx).first(n_cal));
  const ProbMatrix eval = tune_data.subset(std::span(idx).subspan(n_cal));

  TradeoffCurve curve;
  curve.alpha = alpha;
  for (double lambda : grid) {
    const ScoreConfig cfg{lambda, k0};
    const CalibrationResult q = calibrate(score_batch_socop(cal, cfg).values, alpha);
    std::vector<PredictionSet> sets;
    sets.reserve(eval.rows());
    for (std::size_t i = 0; i < eval.rows(); ++i) {
      sets.push_back(predict_socop(eval.row(i), q, cfg));
    }
    const EvalReport r = evaluate(sets, eval.labels(), k0);
    curve.points.push_back({lambda, r.avg_size, r.p_size_gt, r.coverage});
  }
  return curve;
}

std::size_t knee_index(const TradeoffCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3) {
    throw ConfigError("knee detection needs at least 3 curve points, got " +
                      std::to_string(pts.size()));
  }
  auto normalizer = [&pts](auto field) {
    auto [lo, hi] = std::minmax_element(
        pts.begin(), pts.end(),
        [&](const TradeoffPoint& a, const TradeoffPoint& b) { return field(a) < field(b); });
    const double min = field(*lo);
    const double range = field(*hi) - min;
    return [=](const TradeoffPoint& p) {
      return range > 0.0 ? (field(p) - min) / range : 0.0;
    };
  };
  const auto nx = normalizer([](const TradeoffPoint& p) { return p.avg_size; });
  const auto ny = normalizer([](const TradeoffPoint& p) { return p.p_size_gt; });

  const double x0 = nx(pts.front()), y0 = ny(pts.front());
  const double dx = nx(pts.back()) - x0, dy = ny(pts.back()) - y0;
  const double chord = std::hypot(dx, dy);

  constexpr double kTieTolerance = 1e-12;
  std::size_t best = 0;
  double best_dist = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double px = nx(pts[i]) - x0, py = ny(pts[i]) - y0;
    const double dist =
        chord > 0.0 ? std::abs(dx * py - dy * px) / chord : std::hypot(px, py);
    if (dist >= best_dist - kTieTolerance) {
      best = i;
      best_dist = std::max(best_dist, dist);
    }
  }
  return best;
}

double knee_point(const TradeoffCurve& curve) {
  return curve.points[knee_index(curve)].lambda;
}

}  // namespace socop

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "socop/data.hpp"

namespace socop {

struct TradeoffPoint {
  double lambda = 0.0;
  double avg_size = 0.0;
  double p_size_gt = 0.0;
  double coverage = 0.0;
};

/// Points sorted by strictly increasing lambda, all at the same alpha.
struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  double alpha = 0.1;
};

/// 0, 0.01, ..., 0.1, 0.2, ..., 1.0
std::vector<double> default_lambda_grid();

/// Splits tune_data 50/50 (seeded) into calibration and evaluation halves and
/// runs calibrate -> predict -> evaluate once per lambda.
TradeoffCurve sweep_lambda(const ProbMatrix& tune_data, double alpha,
                           std::span<const double> grid, int k0,
                           std::uint64_t seed = 0);

/// Index of the point farthest from the chord between the first and last
/// points, on min-max normalized (avg_size, p_size_gt). Ties go to the larger
/// lambda. Needs at least 3 points.
std::size_t knee_index(const TradeoffCurve& curve);
double knee_point(const TradeoffCurve& curve);

}  // namespace socop

#pragma once

#include <cstddef>
#include <span>

#include "socop/data.hpp"
#include "socop/hull.hpp"

namespace socop {

/// Split-conformal threshold. q_hat is the ceil((1-alpha)(n+1))-th smallest
/// calibration score, or +inf when that rank exceeds n.
struct CalibrationResult {
  double q_hat = 0.0;
  double alpha = 0.1;
  std::size_t n = 0;
};

/// Rank ceil((1-alpha)(n+1)), 1-based, possibly n+1.
std::size_t conformal_rank(std::size_t n, double alpha);

CalibrationResult calibrate(std::span<const double> scores, double alpha);

/// Walks the hull of the row and keeps the largest vertex whose incoming slope
/// is <= q_hat. The set can be empty when q_hat < eta_1.
PredictionSet predict_socop(std::span<const double> probs,
                            const CalibrationResult& q, const ScoreConfig& cfg);

/// { y : score(y) <= q_hat }.
PredictionSet predict_generic(std::span<const double> per_label_scores,
                              const CalibrationResult& q);

}  // namespace socop

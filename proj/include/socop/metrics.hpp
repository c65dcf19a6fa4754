#pragma once

#include <cstddef>
#include <map>
#include <span>

#include "socop/data.hpp"

namespace socop {

/// Set size -> empirical frequency.
using SizeHistogram = std::map<std::size_t, double>;

struct EvalReport {
  double coverage = 0.0;
  double avg_size = 0.0;
  double p_size_gt = 0.0;  // P(|C| > k0)
  double empty_rate = 0.0;
  SizeHistogram histogram;
  std::size_t n_eval = 0;
};

EvalReport evaluate(std::span<const PredictionSet> sets,
                    std::span<const int> labels, int k0);

/// Sum over sizes >= 2 of the positive part of hist_a - hist_b.
double excess_mass_delta(const SizeHistogram& hist_a,
                         const SizeHistogram& hist_b);

}  // namespace socop

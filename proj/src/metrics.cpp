#include "socop/metrics.hpp"

#include <algorithm>
#include <string>

#include "socop/error.hpp"

namespace socop {

EvalReport evaluate(std::span<const PredictionSet> sets,
                    std::span<const int> labels, int k0) {
  if (sets.size() != labels.size()) {
    throw ValidationError("got " + std::to_string(sets.size()) +
                          " prediction sets for " +
                          std::to_string(labels.size()) + " labels");
  }
  if (sets.empty()) throw ValidationError("nothing to evaluate");

  std::size_t covered = 0, total_size = 0, large = 0, empty = 0;
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::size_t s = sets[i].size();
    if (sets[i].contains(labels[i])) ++covered;
    total_size += s;
    if (s > static_cast<std::size_t>(k0)) ++large;
    if (s == 0) ++empty;
    ++counts[s];
  }

  const double n = static_cast<double>(sets.size());
  EvalReport r;
  r.n_eval = sets.size();
  r.coverage = static_cast<double>(covered) / n;
  r.avg_size = static_cast<double>(total_size) / n;
  r.p_size_gt = static_cast<double>(large) / n;
  r.empty_rate = static_cast<double>(empty) / n;
  for (const auto& [size, c] : counts) r.histogram[size] = static_cast<double>(c) / n;
  return r;
}

double excess_mass_delta(const SizeHistogram& hist_a,
                         const SizeHistogram& hist_b) {
  double delta = 0.0;
  for (const auto& [size, fa] : hist_a) {
    if (size < 2) continue;
    auto it = hist_b.find(size);
    const double fb = it == hist_b.end() ? 0.0 : it->second;
    delta += std::max(0.0, fa - fb);
  }
  return delta;
}

}  // namespace socop

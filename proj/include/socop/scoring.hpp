#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socop/data.hpp"
#include "socop/hull.hpp"

namespace socop {

enum class ScoreMethod { kSocop, kLas, kSingleton, kExternal };

std::string_view to_string(ScoreMethod m);
/// Throws ConfigError on unknown names.
ScoreMethod parse_score_method(std::string_view name);

struct ScoreVector {
  std::vector<double> values;
  ScoreMethod method = ScoreMethod::kSocop;
};

/// Per-instance scores of the true labels; rows are independent.
ScoreVector score_batch_socop(const ProbMatrix& data, const ScoreConfig& cfg);
/// 1 - p(label).
ScoreVector score_batch_las(const ProbMatrix& data);
/// 0 when the label is among the top k0, else 1 / (1 - top-k0 mass).
ScoreVector score_batch_singleton(const ProbMatrix& data, int k0);

/// Per-label scores of one row for the given method (index = original label).
std::vector<double> label_scores(std::span<const double> probs,
                                 ScoreMethod method, const ScoreConfig& cfg);

/// Smallest top-probability prefix with mass >= 1 - alpha. No coverage
/// guarantee; never goes through calibration.
PredictionSet plugin_set(std::span<const double> probs, double alpha);

}  // namespace socop

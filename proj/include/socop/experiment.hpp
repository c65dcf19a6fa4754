#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include "socop/data.hpp"
#include "socop/dataio.hpp"
#include "socop/metrics.hpp"

namespace socop {

enum class Method { kSocop, kLas, kSingleton, kPlugin, kExternal };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct SplitSizes {
  std::size_t n_tune = 0;
  std::size_t n_cal = 0;
  std::size_t n_eval = 0;

  std::size_t total() const { return n_tune + n_cal + n_eval; }
};

struct ExperimentConfig {
  double alpha = 0.1;
  std::optional<double> lambda = 0.1;  // nullopt selects lambda by knee on the tuning split
  int k0 = 1;
  Method method = Method::kSocop;
  SplitSizes splits;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::vector<double> lambda_grid;  // empty means the default grid

  /// Throws ConfigError.
  void validate(std::size_t dataset_rows) const;
};

struct DataSplit {
  ProbMatrix tune;
  ProbMatrix cal;
  ProbMatrix eval;
  std::vector<std::size_t> tune_idx, cal_idx, eval_idx;
};

/// Disjoint subsets drawn without replacement from a generator seeded by
/// (seed, trial).
DataSplit split_dataset(const ProbMatrix& data, const ExperimentConfig& cfg,
                        std::size_t trial);

struct TrialResult {
  std::size_t trial = 0;
  double lambda = 0.0;
  double q_hat = 0.0;
  EvalReport report;
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialResult> per_trial;
  MeanStderr coverage, avg_size, p_size_gt, empty_rate, lambda;
  SizeHistogram mean_histogram;
};

/// Per trial: split, optional lambda tuning, calibrate, predict, evaluate.
/// `external` must be given for Method::kExternal, aligned row-for-row with data.
ExperimentReport run_experiment(const ProbMatrix& data, const ExperimentConfig& cfg,
                                const ExternalScores* external = nullptr);

/// Sample standard deviation / sqrt(n); 0 for a single value.
MeanStderr mean_stderr(const std::vector<double>& xs);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const EvalReport& r);
nlohmann::json to_json(const ExperimentReport& r);

}  // namespace socop

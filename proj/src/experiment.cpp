#include "socop/experiment.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "socop/conformal.hpp"
#include "socop/error.hpp"
#include "socop/scoring.hpp"
#include "socop/tuning.hpp"

namespace socop {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kSocop: return "socop";
    case Method::kLas: return "las";
    case Method::kSingleton: return "singleton";
    case Method::kPlugin: return "plugin";
    case Method::kExternal: return "external";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "socop") return Method::kSocop;
  if (name == "las") return Method::kLas;
  if (name == "singleton") return Method::kSingleton;
  if (name == "plugin") return Method::kPlugin;
  if (name == "external") return Method::kExternal;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

void ExperimentConfig::validate(std::size_t dataset_rows) const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (k0 < 1) throw ConfigError("k0 must be >= 1");
  if (lambda && (!std::isfinite(*lambda) || *lambda < 0.0)) {
    throw ConfigError("lambda must be a finite nonnegative number or 'auto'");
  }
  if (splits.total() > dataset_rows) {
    throw ConfigError("split sizes sum to " + std::to_string(splits.total()) +
                      " but the dataset has " + std::to_string(dataset_rows) +
                      " rows");
  }
  if (splits.n_eval == 0) throw ConfigError("evaluation split is empty");
  if (method != Method::kPlugin && splits.n_cal == 0) {
    throw ConfigError("calibration split is empty");
  }
  if (method == Method::kSocop && !lambda) {
    if (splits.n_tune < 2) throw ConfigError("lambda=auto needs a tuning split of 2+ rows");
    if (!lambda_grid.empty() && lambda_grid.size() < 3) {
      throw ConfigError("lambda=auto needs a grid of 3+ values");
    }
  }
}

DataSplit split_dataset(const ProbMatrix& data, const ExperimentConfig& cfg,
                        std::size_t trial) {
  if (cfg.splits.total() > data.rows()) {
    throw ConfigError("split sizes exceed dataset size " + std::to_string(data.rows()));
  }
  // Stream 0 is reserved for the tuning sweep's internal split.
  const std::vector<std::size_t> idx =
      shuffled_indices(data.rows(), cfg.seed, trial + 1);
  DataSplit s;
  auto a = idx.begin();
  auto b = a + static_cast<std::ptrdiff_t>(cfg.splits.n_tune);
  auto c = b + static_cast<std::ptrdiff_t>(cfg.splits.n_cal);
  auto d = c + static_cast<std::ptrdiff_t>(cfg.splits.n_eval);
  s.tune_idx.assign(a, b);
  s.cal_idx.assign(b, c);
  s.eval_idx.assign(c, d);
  s.tune = data.subset(s.tune_idx);
  s.cal = data.subset(s.cal_idx);
  s.eval = data.subset(s.eval_idx);
  return s;
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

namespace {

ScoreMethod score_method(Method m) {
  switch (m) {
    case Method::kSocop: return ScoreMethod::kSocop;
    case Method::kLas: return ScoreMethod::kLas;
    case Method::kSingleton: return ScoreMethod::kSingleton;
    case Method::kExternal: return ScoreMethod::kExternal;
    case Method::kPlugin: break;
  }
  throw ConfigError("plugin sets have no nonconformity score");
}

TrialResult run_trial(const ProbMatrix& data, const ExperimentConfig& cfg,
                      const ExternalScores* external, std::size_t trial) {
  const DataSplit split = split_dataset(data, cfg, trial);
  TrialResult res;
  res.trial = trial;

  if (cfg.method == Method::kSocop) {
    if (cfg.lambda) {
      res.lambda = *cfg.lambda;
    } else {
      const std::vector<double> grid =
          cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
      const TradeoffCurve curve =
          sweep_lambda(split.tune, cfg.alpha, grid, cfg.k0, cfg.seed + trial);
      res.lambda = knee_point(curve);
    }
  }
  const ScoreConfig score_cfg{res.lambda, cfg.k0};

  std::vector<PredictionSet> sets;
  sets.reserve(split.eval.rows());
  if (cfg.method == Method::kPlugin) {
    res.q_hat = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < split.eval.rows(); ++i) {
      sets.push_back(plugin_set(split.eval.row(i), cfg.alpha));
    }
  } else if (cfg.method == Method::kExternal) {
    std::vector<double> cal_scores;
    for (std::size_t i = 0; i < split.cal.rows(); ++i) {
      auto row = external->row(split.cal_idx[i]);
      cal_scores.push_back(external->per_label() ? row[split.cal.label(i)] : row[0]);
    }
    const CalibrationResult q = calibrate(cal_scores, cfg.alpha);
    res.q_hat = q.q_hat;
    for (std::size_t idx : split.eval_idx) {
      sets.push_back(predict_generic(external->row(idx), q));
    }
  } else {
    ScoreVector cal_scores;
    switch (cfg.method) {
      case Method::kSocop: cal_scores = score_batch_socop(split.cal, score_cfg); break;
      case Method::kLas: cal_scores = score_batch_las(split.cal); break;
      default: cal_scores = score_batch_singleton(split.cal, cfg.k0); break;
    }
    const CalibrationResult q = calibrate(cal_scores.values, cfg.alpha);
    res.q_hat = q.q_hat;
    for (std::size_t i = 0; i < split.eval.rows(); ++i) {
      if (cfg.method == Method::kSocop) {
        sets.push_back(predict_socop(split.eval.row(i), q, score_cfg));
      } else {
        sets.push_back(predict_generic(
            label_scores(split.eval.row(i), score_method(cfg.method), score_cfg), q));
      }
    }
  }
  res.report = evaluate(sets, split.eval.labels(), cfg.k0);
  return res;
}

}  // namespace

ExperimentReport run_experiment(const ProbMatrix& data, const ExperimentConfig& cfg,
                                const ExternalScores* external) {
  cfg.validate(data.rows());
  if (!data.has_labels()) throw ValidationError("experiment needs a label column");
  if (cfg.k0 >= static_cast<int>(data.num_classes())) {
    throw ConfigError("k0 must be smaller than the number of classes");
  }
  if (cfg.method == Method::kExternal) {
    if (!external) throw ConfigError("method 'external' needs a scores file");
    if (external->rows() != data.rows()) {
      throw ValidationError("scores file has " + std::to_string(external->rows()) +
                            " rows, dataset has " + std::to_string(data.rows()));
    }
    if (!external->per_label()) {
      throw ValidationError("external experiments need a per-label score matrix (s_0..s_{K-1})");
    }
    if (external->num_classes != data.num_classes()) {
      throw ValidationError("score matrix width does not match K");
    }
  }

  ExperimentReport rep;
  rep.config = cfg;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    rep.per_trial.push_back(run_trial(data, cfg, external, t));
  }

  std::vector<double> cov, size, large, empty, lam;
  for (const auto& t : rep.per_trial) {
    cov.push_back(t.report.coverage);
    size.push_back(t.report.avg_size);
    large.push_back(t.report.p_size_gt);
    empty.push_back(t.report.empty_rate);
    lam.push_back(t.lambda);
    for (const auto& [s, f] : t.report.histogram) rep.mean_histogram[s] += f;
  }
  for (auto& [s, f] : rep.mean_histogram) f /= static_cast<double>(cfg.trials);
  rep.coverage = mean_stderr(cov);
  rep.avg_size = mean_stderr(size);
  rep.p_size_gt = mean_stderr(large);
  rep.empty_rate = mean_stderr(empty);
  rep.lambda = mean_stderr(lam);
  return rep;
}

namespace {

nlohmann::json number_or_tag(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json histogram_json(const SizeHistogram& h) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [size, f] : h) j[std::to_string(size)] = f;
  return j;
}

nlohmann::json to_json(const MeanStderr& m) {
  return {{"mean", m.mean}, {"stderr", m.stderr_}};
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["alpha"] = cfg.alpha;
  j["lambda"] = cfg.lambda ? nlohmann::json(*cfg.lambda) : nlohmann::json("auto");
  j["k0"] = cfg.k0;
  j["method"] = std::string(to_string(cfg.method));
  j["splits"] = {cfg.splits.n_tune, cfg.splits.n_cal, cfg.splits.n_eval};
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["lambda_grid"] = cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
  return j;
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"coverage", r.coverage},     {"avg_size", r.avg_size},
          {"p_size_gt", r.p_size_gt},   {"empty_rate", r.empty_rate},
          {"n_eval", r.n_eval},         {"histogram", histogram_json(r.histogram)}};
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : r.per_trial) {
    nlohmann::json jt = to_json(t.report);
    jt["trial"] = t.trial;
    jt["lambda"] = t.lambda;
    jt["q_hat"] = number_or_tag(t.q_hat);
    trials.push_back(std::move(jt));
  }
  nlohmann::json agg;
  agg["coverage"] = to_json(r.coverage);
  agg["avg_size"] = to_json(r.avg_size);
  agg["p_size_gt"] = to_json(r.p_size_gt);
  agg["empty_rate"] = to_json(r.empty_rate);
  agg["lambda"] = to_json(r.lambda);
  agg["histogram"] = histogram_json(r.mean_histogram);
  agg["trials"] = r.per_trial.size();
  return {{"config", to_json(r.config)}, {"per_trial", trials}, {"aggregate", agg}};
}

}  // namespace socop

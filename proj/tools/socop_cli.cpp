// socop: command-line front end for scoring, calibration, prediction,
// evaluation, lambda sweeps and the split-conformal experiment protocol.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "socop/conformal.hpp"
#include "socop/dataio.hpp"
#include "socop/error.hpp"
#include "socop/experiment.hpp"
#include "socop/metrics.hpp"
#include "socop/scoring.hpp"
#include "socop/tuning.hpp"

namespace {

using namespace socop;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitConfig = 3;

struct Options {
  std::string input;
  std::string out;
  std::string method = "socop";
  std::string lambda = "0.1";
  int k0 = 1;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::string splits;
  std::string scores_file;
  std::string calibration;
  std::string sets;
  std::string baseline_sets;
  std::string grid;
  bool all_labels = false;
  std::size_t classes = 10;
  std::size_t rows = 1000;
  std::string concentration = "1";
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

std::optional<double> parse_lambda(const std::string& text) {
  if (text == "auto") return std::nullopt;
  const auto v = parse_list(text, "--lambda");
  if (v.size() != 1) throw ConfigError("--lambda takes one number or 'auto'");
  return v[0];
}

double fixed_lambda(const Options& o) {
  auto l = parse_lambda(o.lambda);
  if (!l) throw ConfigError("--lambda auto is only available for 'experiment'");
  return *l;
}

// Writes to --out when given, otherwise stdout.
template <typename F>
void emit(const Options& o, F&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output '" + o.out + "'");
  write(f);
}

ProbMatrix load_input(const Options& o) {
  if (o.input.empty()) throw ConfigError("--input is required");
  return load_probs_csv(o.input);
}

json calibration_json(const CalibrationResult& q, const Options& o,
                      double lambda) {
  json j;
  j["q_hat"] = std::isinf(q.q_hat) ? json("inf") : json(q.q_hat);
  j["alpha"] = q.alpha;
  j["n"] = q.n;
  j["method"] = o.method;
  j["lambda"] = lambda;
  j["k0"] = o.k0;
  return j;
}

ScoreVector true_label_scores(const ProbMatrix& data, ScoreMethod method,
                              const ScoreConfig& cfg) {
  switch (method) {
    case ScoreMethod::kSocop: return score_batch_socop(data, cfg);
    case ScoreMethod::kLas: return score_batch_las(data);
    case ScoreMethod::kSingleton: return score_batch_singleton(data, cfg.k0);
    case ScoreMethod::kExternal: break;
  }
  throw ConfigError("external scores are read with --scores-file");
}

int cmd_synth(const Options& o) {
  SyntheticSpec spec;
  spec.num_classes = o.classes;
  spec.num_rows = o.rows;
  spec.concentration = parse_list(o.concentration, "--concentration");
  spec.seed = o.seed;
  const ProbMatrix data = generate_synthetic(spec);
  emit(o, [&](std::ostream& os) { write_probs_csv(os, data); });
  return 0;
}

int cmd_score(const Options& o) {
  const ProbMatrix data = load_input(o);
  const ScoreMethod method = parse_score_method(o.method);
  const ScoreConfig cfg{method == ScoreMethod::kSocop ? fixed_lambda(o) : 0.0, o.k0};
  cfg.validate(data.num_classes());

  if (data.has_labels() && !o.all_labels) {
    const ScoreVector s = true_label_scores(data, method, cfg);
    emit(o, [&](std::ostream& os) {
      os << "score\n";
      for (double v : s.values) os << format_double(v) << '\n';
    });
    return 0;
  }
  emit(o, [&](std::ostream& os) {
    for (std::size_t c = 0; c < data.num_classes(); ++c) os << (c ? "," : "") << "s_" << c;
    os << '\n';
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto s = label_scores(data.row(i), method, cfg);
      for (std::size_t c = 0; c < s.size(); ++c) os << (c ? "," : "") << format_double(s[c]);
      os << '\n';
    }
  });
  return 0;
}

int cmd_calibrate(const Options& o) {
  const ScoreMethod method = parse_score_method(o.method);
  std::vector<double> scores;
  double lambda = 0.0;
  if (method == ScoreMethod::kExternal) {
    if (o.scores_file.empty()) throw ConfigError("method 'external' needs --scores-file");
    const ExternalScores ext = load_scores_csv(o.scores_file);
    if (ext.per_label()) {
      const ProbMatrix data = load_input(o);
      if (ext.rows() != data.rows()) {
        throw ValidationError("scores file and --input disagree on the row count");
      }
      for (std::size_t i = 0; i < ext.rows(); ++i) {
        scores.push_back(ext.row(i)[static_cast<std::size_t>(data.label(i))]);
      }
    } else {
      scores = ext.values;
    }
  } else {
    const ProbMatrix data = load_input(o);
    if (method == ScoreMethod::kSocop) lambda = fixed_lambda(o);
    const ScoreConfig cfg{lambda, o.k0};
    cfg.validate(data.num_classes());
    scores = true_label_scores(data, method, cfg).values;
  }
  const CalibrationResult q = calibrate(scores, o.alpha);
  emit(o, [&](std::ostream& os) { os << calibration_json(q, o, lambda).dump(2) << '\n'; });
  return 0;
}

int cmd_predict(const Options& o) {
  const ProbMatrix data = load_input(o);
  std::vector<PredictionSet> sets;
  if (o.method == "plugin") {
    for (std::size_t i = 0; i < data.rows(); ++i) sets.push_back(plugin_set(data.row(i), o.alpha));
  } else {
    if (o.calibration.empty()) throw ConfigError("predict needs --calibration (or --method plugin)");
    std::ifstream f(o.calibration);
    if (!f) throw ValidationError("cannot open '" + o.calibration + "'");
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw ValidationError("calibration file: " + std::string(e.what()));
    }
    CalibrationResult q;
    q.q_hat = j.at("q_hat").is_string() ? std::numeric_limits<double>::infinity()
                                        : j.at("q_hat").get<double>();
    q.alpha = j.at("alpha").get<double>();
    q.n = j.at("n").get<std::size_t>();
    const ScoreMethod method = parse_score_method(j.at("method").get<std::string>());
    const ScoreConfig cfg{j.at("lambda").get<double>(), j.at("k0").get<int>()};

    if (method == ScoreMethod::kExternal) {
      if (o.scores_file.empty()) throw ConfigError("external predictions need --scores-file");
      const ExternalScores ext = load_scores_csv(o.scores_file);
      if (!ext.per_label() || ext.rows() != data.rows()) {
        throw ValidationError("--scores-file must be an N x K matrix aligned with --input");
      }
      for (std::size_t i = 0; i < ext.rows(); ++i) sets.push_back(predict_generic(ext.row(i), q));
    } else {
      cfg.validate(data.num_classes());
      for (std::size_t i = 0; i < data.rows(); ++i) {
        if (method == ScoreMethod::kSocop) {
          sets.push_back(predict_socop(data.row(i), q, cfg));
        } else {
          sets.push_back(predict_generic(label_scores(data.row(i), method, cfg), q));
        }
      }
    }
  }
  emit(o, [&](std::ostream& os) { write_sets_csv(os, sets); });
  return 0;
}

std::vector<PredictionSet> load_sets(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  return read_sets_csv(f);
}

int cmd_evaluate(const Options& o) {
  const ProbMatrix data = load_input(o);
  if (o.sets.empty()) throw ConfigError("--sets is required");
  const auto sets = load_sets(o.sets);
  const EvalReport r = evaluate(sets, data.labels(), o.k0);
  json j = to_json(r);
  if (!o.baseline_sets.empty()) {
    const EvalReport base = evaluate(load_sets(o.baseline_sets), data.labels(), o.k0);
    j["excess_mass_delta"] = excess_mass_delta(r.histogram, base.histogram);
  }
  emit(o, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

int cmd_sweep(const Options& o) {
  const ProbMatrix data = load_input(o);
  const std::vector<double> grid =
      o.grid.empty() ? default_lambda_grid() : parse_list(o.grid, "--grid");
  ScoreConfig{0.0, o.k0}.validate(data.num_classes());
  const TradeoffCurve curve = sweep_lambda(data, o.alpha, grid, o.k0, o.seed);
  emit(o, [&](std::ostream& os) {
    os << "lambda,avg_size,p_size_gt,coverage\n";
    for (const auto& p : curve.points) {
      os << format_double(p.lambda) << ',' << format_double(p.avg_size) << ','
         << format_double(p.p_size_gt) << ',' << format_double(p.coverage) << '\n';
    }
  });
  if (curve.points.size() >= 3) {
    std::cerr << "knee_lambda=" << format_double(knee_point(curve)) << '\n';
  }
  return 0;
}

int cmd_experiment(const Options& o) {
  const ProbMatrix data = load_input(o);
  ExperimentConfig cfg;
  cfg.alpha = o.alpha;
  cfg.lambda = parse_lambda(o.lambda);
  cfg.k0 = o.k0;
  cfg.method = parse_method(o.method);
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  if (!o.grid.empty()) cfg.lambda_grid = parse_list(o.grid, "--grid");
  if (o.splits.empty()) {
    cfg.splits = {0, data.rows() / 2, data.rows() - data.rows() / 2};
  } else {
    const auto s = parse_list(o.splits, "--splits");
    if (s.size() != 3) throw ConfigError("--splits takes n_tune,n_cal,n_eval");
    for (double v : s) {
      if (v < 0 || v != std::floor(v)) throw ConfigError("--splits entries must be counts");
    }
    cfg.splits = {static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1]),
                  static_cast<std::size_t>(s[2])};
  }
  std::optional<ExternalScores> ext;
  if (cfg.method == Method::kExternal) {
    if (o.scores_file.empty()) throw ConfigError("method 'external' needs --scores-file");
    ext = load_scores_csv(o.scores_file);
  }
  const ExperimentReport rep = run_experiment(data, cfg, ext ? &*ext : nullptr);
  emit(o, [&](std::ostream& os) { os << to_json(rep).dump(2) << '\n'; });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singleton-optimized conformal prediction"};
  app.require_subcommand(1);
  Options o;

  auto add_io = [&o](CLI::App* sub) {
    sub->add_option("--input", o.input, "Probability CSV (p_0..p_{K-1}[,label])");
    sub->add_option("--out", o.out, "Output file (default: stdout)");
  };
  auto add_score = [&o](CLI::App* sub) {
    sub->add_option("--method", o.method, "socop | las | singleton | external");
    sub->add_option("--lambda", o.lambda, "Penalty on set size");
    sub->add_option("--k0", o.k0, "Size threshold of the singleton term");
  };

  auto* synth = app.add_subcommand("synth", "Generate Dirichlet synthetic probabilities");
  synth->add_option("--classes", o.classes, "Number of classes K");
  synth->add_option("--rows", o.rows, "Number of instances N");
  synth->add_option("--concentration", o.concentration, "Scalar or K comma-separated values");
  synth->add_option("--seed", o.seed);
  synth->add_option("--out", o.out);

  auto* score = app.add_subcommand("score", "Per-instance nonconformity scores");
  add_io(score);
  add_score(score);
  score->add_flag("--all-labels", o.all_labels, "Emit the N x K score matrix");

  auto* cal = app.add_subcommand("calibrate", "Split-conformal threshold");
  add_io(cal);
  add_score(cal);
  cal->add_option("--alpha", o.alpha);
  cal->add_option("--scores-file", o.scores_file, "External scores (score column or s_* matrix)");

  auto* pred = app.add_subcommand("predict", "Prediction sets");
  add_io(pred);
  pred->add_option("--calibration", o.calibration, "JSON written by 'calibrate'");
  pred->add_option("--method", o.method, "Set to 'plugin' to skip calibration");
  pred->add_option("--alpha", o.alpha, "Level for plugin sets");
  pred->add_option("--scores-file", o.scores_file);

  auto* eval = app.add_subcommand("evaluate", "Coverage / size metrics of prediction sets");
  add_io(eval);
  eval->add_option("--sets", o.sets, "CSV written by 'predict'");
  eval->add_option("--baseline-sets", o.baseline_sets, "Reference sets for the excess mass");
  eval->add_option("--k0", o.k0);

  auto* sweep = app.add_subcommand("sweep", "Lambda trade-off curve and knee");
  add_io(sweep);
  sweep->add_option("--alpha", o.alpha);
  sweep->add_option("--k0", o.k0);
  sweep->add_option("--grid", o.grid, "Comma-separated lambdas");
  sweep->add_option("--seed", o.seed);

  auto* exp = app.add_subcommand("experiment", "Repeated tune/calibrate/evaluate splits");
  add_io(exp);
  add_score(exp);
  exp->add_option("--alpha", o.alpha);
  exp->add_option("--seed", o.seed);
  exp->add_option("--trials", o.trials);
  exp->add_option("--splits", o.splits, "n_tune,n_cal,n_eval");
  exp->add_option("--grid", o.grid, "Lambda grid for --lambda auto");
  exp->add_option("--scores-file", o.scores_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(o);
    if (*score) return cmd_score(o);
    if (*cal) return cmd_calibrate(o);
    if (*pred) return cmd_predict(o);
    if (*eval) return cmd_evaluate(o);
    if (*sweep) return cmd_sweep(o);
    if (*exp) return cmd_experiment(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "socop/conformal.hpp"
#include "socop/dataio.hpp"
#include "socop/error.hpp"
#include "socop/experiment.hpp"
#include "socop/hull.hpp"
#include "socop/metrics.hpp"
#include "socop/scoring.hpp"
#include "socop/tuning.hpp"

namespace py = pybind11;
using namespace socop;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

ProbMatrix to_matrix(const DoubleArray& probs, std::optional<IntArray> labels) {
  if (probs.ndim() != 2) throw py::value_error("probabilities must be a 2-D array");
  const auto K = static_cast<std::size_t>(probs.shape(1));
  std::vector<double> data(probs.data(), probs.data() + probs.size());
  std::optional<std::vector<int>> lab;
  if (labels) lab.emplace(labels->data(), labels->data() + labels->size());
  ProbMatrix m(K, std::move(data), std::move(lab));
  m.validate();
  return m;
}

DoubleArray to_array(const std::vector<double>& v) {
  DoubleArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<PredictionSet> to_sets(const std::vector<std::vector<int>>& members) {
  std::vector<PredictionSet> sets;
  for (auto m : members) {
    std::sort(m.begin(), m.end());
    sets.push_back(PredictionSet{std::move(m)});
  }
  return sets;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Singleton-optimized conformal prediction (C++ core).";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    }
  });

  py::class_<ScoreConfig>(m, "ScoreConfig")
      .def(py::init([](double lambda, int k0) { return ScoreConfig{lambda, k0}; }),
           py::arg("lam") = 0.0, py::arg("k0") = 1)
      .def_readwrite("lam", &ScoreConfig::lambda)
      .def_readwrite("k0", &ScoreConfig::k0)
      .def("__repr__", [](const ScoreConfig& c) {
        return "ScoreConfig(lam=" + format_double(c.lambda) + ", k0=" + std::to_string(c.k0) + ")";
      });

  py::class_<SortedDist>(m, "SortedDist")
      .def_property_readonly("values", &SortedDist::values)
      .def_property_readonly("perm", &SortedDist::perm)
      .def("rank_of", &SortedDist::rank_of, py::arg("label"))
      .def("__len__", &SortedDist::size);

  py::class_<HullProfile>(m, "HullProfile")
      .def_readonly("gamma_prefix", &HullProfile::gamma_prefix)
      .def_readonly("g", &HullProfile::g)
      .def_readonly("vertices", &HullProfile::vertices)
      .def_readonly("slopes", &HullProfile::slopes);

  py::class_<CalibrationResult>(m, "CalibrationResult")
      .def(py::init([](double q_hat, double alpha, std::size_t n) {
             return CalibrationResult{q_hat, alpha, n};
           }),
           py::arg("q_hat"), py::arg("alpha"), py::arg("n"))
      .def_readonly("q_hat", &CalibrationResult::q_hat)
      .def_readonly("alpha", &CalibrationResult::alpha)
      .def_readonly("n", &CalibrationResult::n);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("coverage", &EvalReport::coverage)
      .def_readonly("avg_size", &EvalReport::avg_size)
      .def_readonly("p_size_gt", &EvalReport::p_size_gt)
      .def_readonly("empty_rate", &EvalReport::empty_rate)
      .def_readonly("histogram", &EvalReport::histogram)
      .def_readonly("n_eval", &EvalReport::n_eval);

  m.def("sort_dist",
        [](const DoubleArray& p, bool renormalize) {
          return sort_dist(to_vector(p), SortOptions{renormalize});
        },
        py::arg("probs"), py::arg("renormalize") = true);
  m.def("build_hull", &build_hull, py::arg("dist"), py::arg("cfg"));
  m.def("kappa_at", &kappa_at, py::arg("hull"), py::arg("eta"));
  m.def("score_for_rank", &score_for_rank, py::arg("hull"), py::arg("rank"));
  m.def("socop_score",
        [](const DoubleArray& p, int label, const ScoreConfig& cfg) {
          return socop_score(to_vector(p), label, cfg);
        },
        py::arg("probs"), py::arg("label"), py::arg("cfg"));
  m.def("socop_label_scores",
        [](const DoubleArray& p, const ScoreConfig& cfg) {
          return to_array(socop_label_scores(to_vector(p), cfg));
        },
        py::arg("probs"), py::arg("cfg"));

  m.def("score_batch_socop",
        [](const DoubleArray& probs, const IntArray& labels, const ScoreConfig& cfg) {
          return to_array(score_batch_socop(to_matrix(probs, labels), cfg).values);
        },
        py::arg("probs"), py::arg("labels"), py::arg("cfg"));
  m.def("score_batch_las",
        [](const DoubleArray& probs, const IntArray& labels) {
          return to_array(score_batch_las(to_matrix(probs, labels)).values);
        },
        py::arg("probs"), py::arg("labels"));
  m.def("score_batch_singleton",
        [](const DoubleArray& probs, const IntArray& labels, int k0) {
          return to_array(score_batch_singleton(to_matrix(probs, labels), k0).values);
        },
        py::arg("probs"), py::arg("labels"), py::arg("k0") = 1);
  m.def("plugin_set",
        [](const DoubleArray& p, double alpha) { return plugin_set(to_vector(p), alpha).members; },
        py::arg("probs"), py::arg("alpha"));

  m.def("calibrate",
        [](const DoubleArray& scores, double alpha) { return calibrate(to_vector(scores), alpha); },
        py::arg("scores"), py::arg("alpha"));
  m.def("predict_socop",
        [](const DoubleArray& p, const CalibrationResult& q, const ScoreConfig& cfg) {
          return predict_socop(to_vector(p), q, cfg).members;
        },
        py::arg("probs"), py::arg("q"), py::arg("cfg"));
  m.def("predict_generic",
        [](const DoubleArray& scores, const CalibrationResult& q) {
          return predict_generic(to_vector(scores), q).members;
        },
        py::arg("scores"), py::arg("q"));

  m.def("evaluate",
        [](const std::vector<std::vector<int>>& sets, const std::vector<int>& labels, int k0) {
          return evaluate(to_sets(sets), labels, k0);
        },
        py::arg("sets"), py::arg("labels"), py::arg("k0") = 1);
  m.def("excess_mass_delta", &excess_mass_delta, py::arg("hist_a"), py::arg("hist_b"));

  m.def("default_lambda_grid", &default_lambda_grid);
  m.def("sweep_lambda",
        [](const DoubleArray& probs, const IntArray& labels, double alpha,
           std::vector<double> grid, int k0, std::uint64_t seed) {
          const TradeoffCurve c = sweep_lambda(to_matrix(probs, labels), alpha, grid, k0, seed);
          py::list out;
          for (const auto& p : c.points) {
            out.append(py::make_tuple(p.lambda, p.avg_size, p.p_size_gt, p.coverage));
          }
          return out;
        },
        py::arg("probs"), py::arg("labels"), py::arg("alpha"), py::arg("grid"),
        py::arg("k0") = 1, py::arg("seed") = 0);
  m.def("knee_point",
        [](const std::vector<std::tuple<double, double, double, double>>& points) {
          TradeoffCurve c;
          for (auto [l, s, p, cov] : points) c.points.push_back({l, s, p, cov});
          return knee_point(c);
        },
        py::arg("curve"), "Curve rows are (lambda, avg_size, p_size_gt, coverage).");

  m.def("generate_synthetic",
        [](std::size_t num_classes, std::size_t num_rows, std::vector<double> concentration,
           std::uint64_t seed) {
          const ProbMatrix data =
              generate_synthetic({num_classes, num_rows, std::move(concentration), seed});
          DoubleArray probs({static_cast<py::ssize_t>(num_rows), static_cast<py::ssize_t>(num_classes)});
          std::copy(data.data().begin(), data.data().end(), probs.mutable_data());
          IntArray labels(static_cast<py::ssize_t>(num_rows));
          std::copy(data.labels().begin(), data.labels().end(), labels.mutable_data());
          return py::make_tuple(probs, labels);
        },
        py::arg("num_classes"), py::arg("num_rows"), py::arg("concentration") = std::vector<double>{1.0},
        py::arg("seed") = 0);

  m.def("run_experiment_json",
        [](const DoubleArray& probs, const IntArray& labels, const std::string& method,
           double alpha, std::optional<double> lambda, int k0,
           std::tuple<std::size_t, std::size_t, std::size_t> splits, std::uint64_t seed,
           std::size_t trials) {
          ExperimentConfig cfg;
          cfg.method = parse_method(method);
          cfg.alpha = alpha;
          cfg.lambda = lambda;
          cfg.k0 = k0;
          cfg.splits = {std::get<0>(splits), std::get<1>(splits), std::get<2>(splits)};
          cfg.seed = seed;
          cfg.trials = trials;
          return to_json(run_experiment(to_matrix(probs, labels), cfg)).dump();
        },
        py::arg("probs"), py::arg("labels"), py::arg("method"), py::arg("alpha"),
        py::arg("lam"), py::arg("k0"), py::arg("splits"), py::arg("seed"), py::arg("trials"));
}

#include "socop/scoring.hpp"

#include <algorithm>
#include <string>

#include "socop/error.hpp"

namespace socop {

ProbMatrix::ProbMatrix(std::size_t num_classes, std::vector<double> data,
                       std::optional<std::vector<int>> labels)
    : num_classes_(num_classes), data_(std::move(data)), labels_(std::move(labels)) {
  if (num_classes_ == 0 || data_.size() % num_classes_ != 0) {
    throw ValidationError("probability matrix size is not a multiple of K");
  }
  if (labels_ && labels_->size() != rows()) {
    throw ValidationError("label count " + std::to_string(labels_->size()) +
                          " does not match row count " + std::to_string(rows()));
  }
}

const std::vector<int>& ProbMatrix::labels() const {
  if (!labels_) throw ValidationError("dataset has no label column");
  return *labels_;
}

ProbMatrix ProbMatrix::subset(std::span<const std::size_t> indices) const {
  std::vector<double> data;
  data.reserve(indices.size() * num_classes_);
  std::optional<std::vector<int>> labels;
  if (labels_) labels.emplace().reserve(indices.size());
  for (std::size_t idx : indices) {
    auto r = row(idx);
    data.insert(data.end(), r.begin(), r.end());
    if (labels) labels->push_back((*labels_)[idx]);
  }
  return ProbMatrix(num_classes_, std::move(data), std::move(labels));
}

void ProbMatrix::validate() const {
  for (std::size_t i = 0; i < rows(); ++i) {
    try {
      normalize_probs(row(i));
    } catch (const ValidationError& e) {
      throw ValidationError("row " + std::to_string(i + 1) + ": " + e.what());
    }
    if (labels_) {
      const int y = (*labels_)[i];
      if (y < 0 || static_cast<std::size_t>(y) >= num_classes_) {
        throw ValidationError("row " + std::to_string(i + 1) + ": label " +
                              std::to_string(y) + " out of range [0, " +
                              std::to_string(num_classes_ - 1) + "]");
      }
    }
  }
}

bool PredictionSet::contains(int label) const {
  return std::binary_search(members.begin(), members.end(), label);
}

std::string_view to_string(ScoreMethod m) {
  switch (m) {
    case ScoreMethod::kSocop: return "socop";
    case ScoreMethod::kLas: return "las";
    case ScoreMethod::kSingleton: return "singleton";
    case ScoreMethod::kExternal: return "external";
  }
  return "unknown";
}

ScoreMethod parse_score_method(std::string_view name) {
  if (name == "socop") return ScoreMethod::kSocop;
  if (name == "las") return ScoreMethod::kLas;
  if (name == "singleton") return ScoreMethod::kSingleton;
  if (name == "external") return ScoreMethod::kExternal;
  throw ConfigError("unknown score method '" + std::string(name) + "'");
}

namespace {

double singleton_score(const SortedDist& dist, int rank, int k0) {
  if (rank <= k0) return 0.0;
  double head = 0.0;
  for (int j = 0; j < k0; ++j) head += dist.values()[j];
  return 1.0 / (1.0 - head);
}

}  // namespace

ScoreVector score_batch_socop(const ProbMatrix& data, const ScoreConfig& cfg) {
  cfg.validate(data.num_classes());
  ScoreVector out{std::vector<double>(data.rows()), ScoreMethod::kSocop};
  ScoreWorkspace ws;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out.values[i] = socop_score(data.row(i), data.label(i), cfg, ws);
  }
  return out;
}

ScoreVector score_batch_las(const ProbMatrix& data) {
  ScoreVector out{std::vector<double>(data.rows()), ScoreMethod::kLas};
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const int y = data.label(i);
    std::vector<double> p = normalize_probs(data.row(i));
    out.values[i] = 1.0 - p.at(static_cast<std::size_t>(y));
  }
  return out;
}

ScoreVector score_batch_singleton(const ProbMatrix& data, int k0) {
  ScoreConfig{0.0, k0}.validate(data.num_classes());
  ScoreVector out{std::vector<double>(data.rows()), ScoreMethod::kSingleton};
  for (std::size_t i = 0; i < data.rows(); ++i) {
    SortedDist dist = sort_dist(data.row(i));
    out.values[i] = singleton_score(dist, dist.rank_of(data.label(i)), k0);
  }
  return out;
}

std::vector<double> label_scores(std::span<const double> probs,
                                 ScoreMethod method, const ScoreConfig& cfg) {
  switch (method) {
    case ScoreMethod::kSocop:
      return socop_label_scores(probs, cfg);
    case ScoreMethod::kLas: {
      std::vector<double> p = normalize_probs(probs);
      for (double& v : p) v = 1.0 - v;
      return p;
    }
    case ScoreMethod::kSingleton: {
      cfg.validate(probs.size());
      SortedDist dist = sort_dist(probs);
      std::vector<double> out(dist.size());
      for (std::size_t r = 0; r < dist.size(); ++r) {
        out[dist.perm()[r]] = singleton_score(dist, static_cast<int>(r) + 1, cfg.k0);
      }
      return out;
    }
    case ScoreMethod::kExternal:
      break;
  }
  throw ConfigError("external scores cannot be computed from probabilities");
}

PredictionSet plugin_set(std::span<const double> probs, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  SortedDist dist = sort_dist(probs);
  PredictionSet out;
  double mass = 0.0;
  for (std::size_t r = 0; r < dist.size(); ++r) {
    out.members.push_back(dist.perm()[r]);
    mass += dist.values()[r];
    if (mass >= 1.0 - alpha) break;
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace socop

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace socop {

/// Probabilities below this floor are raised to it before renormalization,
/// which keeps the cumulative sums strictly increasing.
inline constexpr double kProbFloor = 1e-12;
/// Accepted deviation of the raw row sum from 1 when renormalizing.
inline constexpr double kRenormTolerance = 1e-3;
/// Accepted deviation of the raw row sum from 1 when renormalization is off.
inline constexpr double kStrictSumTolerance = 1e-6;

/// Objective family g_k = I(k > k0) + lambda * k.
struct ScoreConfig {
  double lambda = 0.0;
  int k0 = 1;

  /// Throws ConfigError unless lambda >= 0 (finite) and 1 <= k0 < num_classes.
  void validate(std::size_t num_classes) const;
};

struct SortOptions {
  bool renormalize = true;
};

/// A probability vector sorted in descending order together with the
/// permutation back to the original label indices.
class SortedDist {
 public:
  SortedDist(std::vector<double> values, std::vector<int> perm);

  const std::vector<double>& values() const { return values_; }
  const std::vector<int>& perm() const { return perm_; }
  std::size_t size() const { return values_.size(); }

  /// 1-based position of an original label in the sorted order.
  int rank_of(int label) const;

 private:
  std::vector<double> values_;
  std::vector<int> perm_;
};

/// Validates, clamps and (optionally) renormalizes a row; throws ValidationError.
std::vector<double> normalize_probs(std::span<const double> probs,
                                    SortOptions opts = {});

/// Stable descending sort: equal probabilities keep the smaller label first.
SortedDist sort_dist(std::span<const double> probs, SortOptions opts = {});

/// 1-based rank a label would receive from sort_dist, in O(K) without sorting.
int label_rank(std::span<const double> probs, int label);

/// Lower convex hull of the points P_k = (Gamma_k, g_k), k = 0..K.
struct HullProfile {
  std::vector<double> gamma_prefix;  // Gamma_0..Gamma_K, Gamma_0 = 0
  std::vector<double> g;             // g_0..g_K
  std::vector<int> vertices;         // v_0 = 0 < ... < v_m = K
  std::vector<double> slopes;        // eta_1..eta_m, strictly increasing

  std::size_t num_classes() const { return g.empty() ? 0 : g.size() - 1; }
};

/// Monotone chain over the K+1 points; collinear points are dropped.
HullProfile build_hull(const SortedDist& dist, const ScoreConfig& cfg);

/// Optimal top-k size at dual value eta: 0 on [0, eta_1], v_i on
/// (eta_i, eta_{i+1}], K above eta_m.
int kappa_at(const HullProfile& hull, double eta);

/// Smallest hull slope whose vertex reaches the given 1-based rank.
double score_for_rank(const HullProfile& hull, int rank);

/// Scores of every rank 1..K (index 0 holds rank 1), in one pass over the hull.
std::vector<double> scores_by_rank(const HullProfile& hull);

/// Non-owning view of the optimal-index step function of one hull.
class KappaStep {
 public:
  explicit KappaStep(const HullProfile& hull) : hull_(&hull) {}
  int operator()(double eta) const { return kappa_at(*hull_, eta); }

 private:
  const HullProfile* hull_;
};

/// Scratch buffers for repeated scoring; reusing one avoids a fresh
/// allocation of O(K) memory per call.
struct ScoreWorkspace {
  std::vector<double> values;
  HullProfile hull;
};

/// Singleton-optimized nonconformity score of one (row, label) pair.
double socop_score(std::span<const double> probs, int label,
                   const ScoreConfig& cfg);
double socop_score(std::span<const double> probs, int label,
                   const ScoreConfig& cfg, ScoreWorkspace& ws);

/// Scores of all labels of one row, indexed by original label.
std::vector<double> socop_label_scores(std::span<const double> probs,
                                       const ScoreConfig& cfg);

}  // namespace socop

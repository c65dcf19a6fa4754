#include "socop/hull.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "socop/error.hpp"

namespace socop {

void ScoreConfig::validate(std::size_t num_classes) const {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ConfigError("lambda must be a finite nonnegative number, got " +
                      std::to_string(lambda));
  }
  if (k0 < 1 || static_cast<std::size_t>(k0) >= num_classes) {
    throw ConfigError("k0 must lie in [1, K-1] (K=" +
                      std::to_string(num_classes) + "), got " +
                      std::to_string(k0));
  }
}

SortedDist::SortedDist(std::vector<double> values, std::vector<int> perm)
    : values_(std::move(values)), perm_(std::move(perm)) {}

int SortedDist::rank_of(int label) const {
  auto it = std::find(perm_.begin(), perm_.end(), label);
  if (it == perm_.end()) {
    throw ValidationError("label " + std::to_string(label) +
                          " is not a class index");
  }
  return static_cast<int>(it - perm_.begin()) + 1;
}

namespace {

void normalize_into(std::span<const double> probs, SortOptions opts,
                    std::vector<double>& out) {
  if (probs.size() < 2) {
    throw ValidationError("need at least 2 classes, got " +
                          std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p)) throw ValidationError("probability is not finite");
    if (p < 0.0) {
      throw ValidationError("negative probability " + std::to_string(p));
    }
    sum += p;
  }
  const double tol = opts.renormalize ? kRenormTolerance : kStrictSumTolerance;
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError("probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }

  out.assign(probs.begin(), probs.end());
  double clamped_sum = 0.0;
  for (double& p : out) {
    p = std::max(p, kProbFloor);
    clamped_sum += p;
  }
  if (opts.renormalize) {
    for (double& p : out) p /= clamped_sum;
  }
}

}  // namespace

std::vector<double> normalize_probs(std::span<const double> probs,
                                    SortOptions opts) {
  std::vector<double> out;
  normalize_into(probs, opts, out);
  return out;
}

SortedDist sort_dist(std::span<const double> probs, SortOptions opts) {
  const std::vector<double> p = normalize_probs(probs, opts);
  // (value desc, label asc) is a total order, so an unstable sort of
  // contiguous pairs reproduces the stable order.
  std::vector<std::pair<double, int>> keyed(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) keyed[i] = {p[i], static_cast<int>(i)};
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  std::vector<double> values(p.size());
  std::vector<int> perm(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    values[i] = keyed[i].first;
    perm[i] = keyed[i].second;
  }
  return SortedDist(std::move(values), std::move(perm));
}

int label_rank(std::span<const double> probs, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw ValidationError("label " + std::to_string(label) +
                          " out of range for K=" + std::to_string(probs.size()));
  }
  const double mine = probs[label];
  int ahead = 0;
  for (int j = 0; j < static_cast<int>(probs.size()); ++j) {
    if (probs[j] > mine || (probs[j] == mine && j < label)) ++ahead;
  }
  return ahead + 1;
}

namespace {

// Relative size below which an orientation is treated as collinear. Tied
// probabilities give collinear points whose prefix-sum differences only agree
// up to rounding.
constexpr double kCollinearTolerance = 1e-12;

// True when i is not strictly below the chord from j to k, i.e. the monotone-chain
// pop condition cross(j, i, k) <= 0 evaluated with a rounding allowance.
bool not_below_chord(const HullProfile& h, int j, int i, int k) {
  const double lhs = (h.gamma_prefix[i] - h.gamma_prefix[j]) * (h.g[k] - h.g[i]);
  const double rhs = (h.g[i] - h.g[j]) * (h.gamma_prefix[k] - h.gamma_prefix[i]);
  return lhs - rhs <= kCollinearTolerance * (std::abs(lhs) + std::abs(rhs));
}

// Fills h in place so that a reused profile keeps its capacity.
void hull_into(std::span<const double> sorted, const ScoreConfig& cfg, HullProfile& h) {
  const std::size_t K = sorted.size();
  cfg.validate(K);

  h.gamma_prefix.resize(K + 1);
  h.g.resize(K + 1);
  h.vertices.clear();
  h.vertices.reserve(K + 1);
  // Prefix sums, penalties and the monotone chain in a single pass: the chain
  // only looks at points up to k.
  for (std::size_t k = 0; k <= K; ++k) {
    h.gamma_prefix[k] = k == 0 ? 0.0 : h.gamma_prefix[k - 1] + sorted[k - 1];
    // A renormalized row sums to 1 up to rounding; pinning the total makes the
    // tail masses 1 - Gamma_k exact.
    if (k == K && std::abs(h.gamma_prefix[K] - 1.0) <= 1e-12) h.gamma_prefix[K] = 1.0;
    h.g[k] = (static_cast<int>(k) > cfg.k0 ? 1.0 : 0.0) + cfg.lambda * static_cast<double>(k);
    while (h.vertices.size() >= 2 &&
           not_below_chord(h, h.vertices[h.vertices.size() - 2], h.vertices.back(),
                           static_cast<int>(k))) {
      h.vertices.pop_back();
    }
    h.vertices.push_back(static_cast<int>(k));
  }

  h.slopes.resize(h.vertices.size() - 1);
  for (std::size_t i = 1; i < h.vertices.size(); ++i) {
    const int lo = h.vertices[i - 1];
    const int hi = h.vertices[i];
    h.slopes[i - 1] =
        (h.g[hi] - h.g[lo]) / (h.gamma_prefix[hi] - h.gamma_prefix[lo]);
  }
}

}  // namespace

HullProfile build_hull(const SortedDist& dist, const ScoreConfig& cfg) {
  HullProfile h;
  hull_into(dist.values(), cfg, h);
  return h;
}

int kappa_at(const HullProfile& hull, double eta) {
  // Number of slopes strictly below eta selects the vertex; at a breakpoint
  // the smaller set wins.
  auto it = std::lower_bound(hull.slopes.begin(), hull.slopes.end(), eta);
  return hull.vertices[static_cast<std::size_t>(it - hull.slopes.begin())];
}

double score_for_rank(const HullProfile& hull, int rank) {
  const int K = static_cast<int>(hull.num_classes());
  if (rank < 1 || rank > K) {
    throw ValidationError("rank " + std::to_string(rank) +
                          " out of range [1, " + std::to_string(K) + "]");
  }
  auto it = std::lower_bound(hull.vertices.begin() + 1, hull.vertices.end(),
                             rank);
  return hull.slopes[static_cast<std::size_t>(it - hull.vertices.begin()) - 1];
}

std::vector<double> scores_by_rank(const HullProfile& hull) {
  std::vector<double> out(hull.num_classes());
  std::size_t edge = 0;
  for (std::size_t r = 1; r <= out.size(); ++r) {
    while (hull.vertices[edge + 1] < static_cast<int>(r)) ++edge;
    out[r - 1] = hull.slopes[edge];
  }
  return out;
}

double socop_score(std::span<const double> probs, int label,
                   const ScoreConfig& cfg) {
  ScoreWorkspace ws;
  return socop_score(probs, label, cfg, ws);
}

double socop_score(std::span<const double> probs, int label,
                   const ScoreConfig& cfg, ScoreWorkspace& ws) {
  // Only the sorted values and the label's rank are needed, so skip the
  // permutation and sort plain doubles.
  normalize_into(probs, {}, ws.values);
  const int rank = label_rank(ws.values, label);
  std::sort(ws.values.begin(), ws.values.end(), std::greater<>());
  hull_into(ws.values, cfg, ws.hull);
  return score_for_rank(ws.hull, rank);
}

std::vector<double> socop_label_scores(std::span<const double> probs,
                                       const ScoreConfig& cfg) {
  SortedDist dist = sort_dist(probs);
  HullProfile hull = build_hull(dist, cfg);
  std::vector<double> by_rank = scores_by_rank(hull);
  std::vector<double> out(dist.size());
  for (std::size_t r = 0; r < dist.size(); ++r) out[dist.perm()[r]] = by_rank[r];
  return out;
}

}  // namespace socop

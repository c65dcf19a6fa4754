#pragma once

// Quadratic brute-force references for the hull-based scores. They share only
// the input types with hull.hpp and never call into the hull code.

#include <map>
#include <span>
#include <vector>

#include "socop/hull.hpp"

namespace socop::oracle {

struct OracleResult {
  std::map<double, int> kappa_grid;  // eta -> argmin index
  std::vector<double> scores;        // by rank, index 0 = rank 1
};

/// argmin_k I(k>k0) + lambda*k - eta*Gamma_k by exhaustive evaluation,
/// smallest k on ties.
int oracle_kappa(const SortedDist& dist, const ScoreConfig& cfg, double eta);

/// min_{k>=rank} max_{j<k} (g_k - g_j) / (Gamma_k - Gamma_j).
double oracle_score(const SortedDist& dist, const ScoreConfig& cfg, int rank);

OracleResult oracle_profile(const SortedDist& dist, const ScoreConfig& cfg,
                            std::span<const double> etas);

/// Every pairwise slope (g_k - g_j) / (Gamma_k - Gamma_j), j < k.
std::vector<double> pairwise_slopes(const SortedDist& dist,
                                    const ScoreConfig& cfg);

}  // namespace socop::oracle

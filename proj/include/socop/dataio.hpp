#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "socop/data.hpp"

namespace socop {

/// Header `p_0,...,p_{K-1}[,label]`, one instance per row. Rows are validated
/// with the same clamping/renormalization rules as the scorer.
ProbMatrix load_probs_csv(const std::filesystem::path& path);
ProbMatrix read_probs_csv(std::istream& in);
void write_probs_csv(std::ostream& out, const ProbMatrix& data);

/// Externally computed nonconformity scores. Either a full N x K matrix
/// (header `s_0,...,s_{K-1}`) or a single `score` column holding the score of
/// each instance's true label.
struct ExternalScores {
  std::size_t num_classes = 0;  // 1 for the single-column form
  std::vector<double> values;

  bool per_label() const { return num_classes > 1; }
  std::size_t rows() const { return num_classes ? values.size() / num_classes : 0; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * num_classes, num_classes};
  }
};

ExternalScores load_scores_csv(const std::filesystem::path& path);
ExternalScores read_scores_csv(std::istream& in);

/// CSV with columns `index,size,members`; members are `;`-separated labels.
void write_sets_csv(std::ostream& out, const std::vector<PredictionSet>& sets);
std::vector<PredictionSet> read_sets_csv(std::istream& in);

struct SyntheticSpec {
  std::size_t num_classes = 10;
  std::size_t num_rows = 1000;
  std::vector<double> concentration{1.0};  // one entry (symmetric) or K entries
  std::uint64_t seed = 0;
};

/// Rows ~ Dirichlet(concentration); each label is drawn from its own row, so
/// the probabilities are exactly calibrated.
ProbMatrix generate_synthetic(const SyntheticSpec& spec);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace socop

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace socop {

/// N x K row-major matrix of predicted class probabilities with optional labels.
class ProbMatrix {
 public:
  ProbMatrix() = default;
  ProbMatrix(std::size_t num_classes, std::vector<double> data,
             std::optional<std::vector<int>> labels = std::nullopt);

  std::size_t rows() const { return num_classes_ ? data_.size() / num_classes_ : 0; }
  std::size_t num_classes() const { return num_classes_; }
  bool has_labels() const { return labels_.has_value(); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * num_classes_, num_classes_};
  }
  const std::vector<int>& labels() const;
  int label(std::size_t i) const { return labels().at(i); }
  const std::vector<double>& data() const { return data_; }

  /// Rows in the given order (labels follow along).
  ProbMatrix subset(std::span<const std::size_t> indices) const;

  /// Checks every row and label; throws ValidationError naming the 1-based row.
  void validate() const;

 private:
  std::size_t num_classes_ = 0;
  std::vector<double> data_;
  std::optional<std::vector<int>> labels_;
};

/// Members are original label indices in ascending order.
struct PredictionSet {
  std::vector<int> members;

  std::size_t size() const { return members.size(); }
  bool contains(int label) const;
  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

}  // namespace socop

#include <cstdint>

namespace socop {

/// Random permutation of 0..n-1 drawn from a generator seeded by (seed, stream).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream);

}  // namespace socop

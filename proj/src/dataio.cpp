#include "socop/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "socop/error.hpp"
#include "socop/hull.hpp"

namespace socop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    cells.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::string where(std::size_t row) {
  return "row " + std::to_string(row) + " (line " + std::to_string(row + 1) + ")";
}

template <typename T>
T parse_number(std::string_view cell, std::size_t row, std::string_view column) {
  T value{};
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError(where(row) + ": column '" + std::string(column) +
                          "' is not a number: '" + std::string(cell) + "'");
  }
  return value;
}

// Reads the header and all data rows; returns false at EOF before a header.
bool read_table(std::istream& in, std::vector<std::string>& header,
                std::vector<std::vector<std::string>>& rows) {
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    for (auto c : split(line, ',')) cells.emplace_back(c);
    if (!have_header) {
      header = std::move(cells);
      have_header = true;
    } else {
      rows.push_back(std::move(cells));
    }
  }
  return have_header;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

ProbMatrix read_probs_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (!read_table(in, header, rows)) throw ValidationError("empty CSV input");

  const bool has_label = header.back() == "label";
  const std::size_t K = header.size() - (has_label ? 1 : 0);
  for (std::size_t c = 0; c < K; ++c) {
    if (header[c] != "p_" + std::to_string(c)) {
      throw ValidationError("header column " + std::to_string(c + 1) + " is '" +
                            header[c] + "', expected 'p_" + std::to_string(c) + "'");
    }
  }
  if (K < 2) throw ValidationError("need at least 2 probability columns");
  if (rows.empty()) throw ValidationError("CSV has a header but no rows");

  std::vector<double> data;
  data.reserve(rows.size() * K);
  std::vector<int> labels;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != header.size()) {
      throw ValidationError(where(r + 1) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < K; ++c) {
      data.push_back(parse_number<double>(cells[c], r + 1, header[c]));
    }
    if (has_label) labels.push_back(parse_number<int>(cells[K], r + 1, "label"));
  }

  ProbMatrix out(K, std::move(data),
                 has_label ? std::optional(std::move(labels)) : std::nullopt);
  out.validate();
  return out;
}

ProbMatrix load_probs_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_probs_csv(in);
}

void write_probs_csv(std::ostream& out, const ProbMatrix& data) {
  for (std::size_t c = 0; c < data.num_classes(); ++c) {
    out << (c ? "," : "") << "p_" << c;
  }
  if (data.has_labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto row = data.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_double(row[c]);
    }
    if (data.has_labels()) out << ',' << data.label(i);
    out << '\n';
  }
}

ExternalScores read_scores_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (!read_table(in, header, rows)) throw ValidationError("empty score file");

  ExternalScores out;
  if (header.size() == 1 && header[0] == "score") {
    out.num_classes = 1;
  } else {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] != "s_" + std::to_string(c)) {
        throw ValidationError("score header column " + std::to_string(c + 1) +
                              " is '" + header[c] + "', expected 's_" +
                              std::to_string(c) + "' or a single 'score' column");
      }
    }
    if (header.size() < 2) throw ValidationError("score matrix needs 2+ columns");
    out.num_classes = header.size();
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ValidationError(where(r + 1) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(rows[r].size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      out.values.push_back(parse_number<double>(rows[r][c], r + 1, header[c]));
    }
  }
  return out;
}

ExternalScores load_scores_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_scores_csv(in);
}

void write_sets_csv(std::ostream& out, const std::vector<PredictionSet>& sets) {
  out << "index,size,members\n";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out << i << ',' << sets[i].size() << ',';
    for (std::size_t j = 0; j < sets[i].members.size(); ++j) {
      out << (j ? ";" : "") << sets[i].members[j];
    }
    out << '\n';
  }
}

std::vector<PredictionSet> read_sets_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  if (!read_table(in, header, rows) ||
      header != std::vector<std::string>{"index", "size", "members"}) {
    throw ValidationError("prediction set file needs header 'index,size,members'");
  }
  std::vector<PredictionSet> sets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 3) {
      throw ValidationError(where(r + 1) + ": expected 3 cells");
    }
    PredictionSet s;
    if (!rows[r][2].empty()) {
      for (auto m : split(rows[r][2], ';')) {
        s.members.push_back(parse_number<int>(m, r + 1, "members"));
      }
    }
    std::sort(s.members.begin(), s.members.end());
    const auto size = parse_number<std::size_t>(rows[r][1], r + 1, "size");
    if (size != s.size()) {
      throw ValidationError(where(r + 1) + ": size column disagrees with members");
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Explicit Fisher-Yates so the permutation does not depend on the
  // standard library's shuffle.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

ProbMatrix generate_synthetic(const SyntheticSpec& spec) {
  const std::size_t K = spec.num_classes;
  if (K < 2) throw ConfigError("synthetic data needs K >= 2");
  if (spec.concentration.size() != 1 && spec.concentration.size() != K) {
    throw ConfigError("concentration must have 1 or K entries");
  }
  for (double a : spec.concentration) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ConfigError("concentration entries must be positive");
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::gamma_distribution<double>> gammas;
  for (std::size_t c = 0; c < K; ++c) {
    const double a = spec.concentration.size() == 1 ? spec.concentration[0]
                                                    : spec.concentration[c];
    gammas.emplace_back(a, 1.0);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> data(spec.num_rows * K);
  std::vector<int> labels(spec.num_rows);
  for (std::size_t i = 0; i < spec.num_rows; ++i) {
    double* row = data.data() + i * K;
    double sum = 0.0;
    while (sum <= 0.0) {
      sum = 0.0;
      for (std::size_t c = 0; c < K; ++c) {
        row[c] = gammas[c](rng);
        sum += row[c];
      }
    }
    for (std::size_t c = 0; c < K; ++c) row[c] /= sum;

    const double u = unif(rng);
    double acc = 0.0;
    int y = -1;
    for (std::size_t c = 0; c < K; ++c) {
      if (row[c] <= 0.0) continue;
      acc += row[c];
      y = static_cast<int>(c);
      if (u < acc) break;
    }
    labels[i] = y;
  }
  return ProbMatrix(K, std::move(data), std::move(labels));
}

}  // namespace socop

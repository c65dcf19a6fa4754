#include <doctest.h>

#include <sstream>

#include "socop/dataio.hpp"
#include "socop/error.hpp"
#include "socop/experiment.hpp"

using namespace socop;

TEST_CASE("read_probs_csv with and without labels") {
  std::istringstream with(
      "p_0,p_1,p_2,p_3,label\n"
      "0.1,0.2,0.3,0.4,3\n"
      "0.25,0.25,0.25,0.25,0\n"
      "0.7, 0.1, 0.1, 0.1,1\r\n");
  const ProbMatrix m = read_probs_csv(with);
  CHECK(m.rows() == 3);
  CHECK(m.num_classes() == 4);
  CHECK(m.labels() == std::vector<int>{3, 0, 1});
  CHECK(m.row(2)[0] == 0.7);

  std::istringstream without("p_0,p_1\n0.5,0.5\n0.9,0.1\n");
  const ProbMatrix u = read_probs_csv(without);
  CHECK_FALSE(u.has_labels());
  CHECK_THROWS_AS(u.labels(), ValidationError);
}

TEST_CASE("read_probs_csv errors name the row") {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_probs_csv(in);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("p_0,p_1,label\n0.5,0.5,0\n0.5,0.4,1\n").find("row 2") != std::string::npos);
  CHECK(error_of("p_0,p_1\n0.5,0.5\n0.5\n").find("row 2") != std::string::npos);
  CHECK(error_of("p_0,p_1\n0.5,abc\n").find("row 1") != std::string::npos);
  CHECK(error_of("p_0,p_1,label\n0.5,0.5,2\n").find("row 1") != std::string::npos);
  CHECK(error_of("p_0,q_1\n0.5,0.5\n").find("header") != std::string::npos);
  CHECK_FALSE(error_of("").empty());
}

TEST_CASE("probability CSV round trip is exact") {
  SyntheticSpec spec;
  spec.num_classes = 6;
  spec.num_rows = 50;
  spec.concentration = {0.3};
  spec.seed = 4;
  const ProbMatrix m = generate_synthetic(spec);
  std::stringstream ss;
  write_probs_csv(ss, m);
  const ProbMatrix back = read_probs_csv(ss);
  CHECK(back.data() == m.data());
  CHECK(back.labels() == m.labels());
}

TEST_CASE("score files: matrix and single column") {
  std::istringstream mat("s_0,s_1,s_2\n0.1,0.5,2\n1,1,1\n");
  const ExternalScores a = read_scores_csv(mat);
  CHECK(a.per_label());
  CHECK(a.rows() == 2);
  CHECK(a.row(0)[2] == 2.0);

  std::istringstream col("score\n0.3\n0.7\n");
  const ExternalScores b = read_scores_csv(col);
  CHECK_FALSE(b.per_label());
  CHECK(b.values == std::vector<double>{0.3, 0.7});
}

TEST_CASE("prediction set CSV round trip") {
  const std::vector<PredictionSet> sets{{{0, 3}}, {{}}, {{1}}};
  std::stringstream ss;
  write_sets_csv(ss, sets);
  CHECK(ss.str() == "index,size,members\n0,2,0;3\n1,0,\n2,1,1\n");
  CHECK(read_sets_csv(ss) == sets);
}

TEST_CASE("generate_synthetic") {
  SyntheticSpec spec;
  spec.num_classes = 2;
  spec.num_rows = 4;
  spec.concentration = {1.0, 1.0};
  spec.seed = 42;
  const ProbMatrix a = generate_synthetic(spec);
  const ProbMatrix b = generate_synthetic(spec);
  CHECK(a.rows() == 4);
  CHECK(a.data() == b.data());
  CHECK(a.labels() == b.labels());
  a.validate();

  spec.concentration = {-1.0};
  CHECK_THROWS_AS(generate_synthetic(spec), ConfigError);
  spec.concentration = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(generate_synthetic(spec), ConfigError);
}

TEST_CASE("generate_synthetic: small concentration gives peaked rows") {
  auto mean_max = [](double conc) {
    SyntheticSpec spec;
    spec.num_classes = 10;
    spec.num_rows = 10000;
    spec.concentration = {conc};
    spec.seed = 9;
    const ProbMatrix m = generate_synthetic(spec);
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double mx = 0.0;
      for (double p : m.row(i)) mx = std::max(mx, p);
      s += mx;
    }
    return s / static_cast<double>(m.rows());
  };
  CHECK(mean_max(0.3) > mean_max(1.0) + 0.1);
}

TEST_CASE("generate_synthetic labels follow the row distribution") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.num_rows = 20000;
  spec.concentration = {2.0, 1.0, 0.5};
  spec.seed = 12;
  const ProbMatrix m = generate_synthetic(spec);
  std::vector<double> expected(3, 0.0), observed(3, 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) expected[c] += m.row(i)[c];
    observed[m.label(i)] += 1.0;
  }
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(observed[c] / 20000.0 == doctest::Approx(expected[c] / 20000.0).epsilon(0.05));
  }
}

TEST_CASE("split_dataset") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.num_rows = 100;
  spec.seed = 1;
  const ProbMatrix data = generate_synthetic(spec);
  ExperimentConfig cfg;
  cfg.splits = {20, 40, 40};
  cfg.seed = 99;

  const DataSplit s0 = split_dataset(data, cfg, 0);
  std::vector<std::size_t> all;
  for (const auto* v : {&s0.tune_idx, &s0.cal_idx, &s0.eval_idx}) all.insert(all.end(), v->begin(), v->end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 100; ++i) CHECK(all[i] == i);
  CHECK(s0.tune.rows() == 20);
  CHECK(s0.cal.rows() == 40);
  CHECK(s0.eval.label(0) == data.label(s0.eval_idx[0]));

  const DataSplit s1 = split_dataset(data, cfg, 1);
  CHECK(s1.cal_idx != s0.cal_idx);
  CHECK(s1.cal.rows() == 40);
  CHECK(split_dataset(data, cfg, 0).cal_idx == s0.cal_idx);

  cfg.splits = {50, 40, 40};
  CHECK_THROWS_AS(split_dataset(data, cfg, 0), ConfigError);
}

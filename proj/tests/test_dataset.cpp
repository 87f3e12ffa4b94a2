#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "alime/dataset.hpp"
#include "alime/errors.hpp"

using namespace alime;

namespace {

std::string data_path(const std::string& file) {
  return std::string(ALIME_DATA_DIR) + "/" + file;
}

std::string write_temp_csv(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/alime_test_" + name + ".csv";
  std::ofstream out(path);
  out << body;
  return path;
}

// A minimal file in the breast_cancer layout: id, 9 features, label.
std::string tiny_breast_csv(int rows, const std::string& extra = "") {
  std::string body;
  for (int i = 0; i < rows; ++i) {
    const int label = i % 2 == 0 ? 2 : 4;
    body += std::to_string(1000 + i);
    for (int j = 0; j < 9; ++j) body += "," + std::to_string(1 + (i + j) % 10);
    body += "," + std::to_string(label) + "\n";
  }
  return body + extra;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("breast cancer file loads 699 rows with 9 predictors") {
  const RawDataset raw = load_csv(data_path("breast_cancer.csv"), "breast_cancer");
  CHECK(raw.row_count() == 699);
  CHECK(raw.feature_count() == 9);
  CHECK(raw.feature_names.front() == "clump_thickness");
  for (const auto& row : raw.rows) CHECK(row.size() == 9);
  CHECK(raw.labels.size() == raw.rows.size());
}

TEST_CASE("hepatitis file loads 155 rows with 19 predictors") {
  const RawDataset raw = load_csv(data_path("hepatitis.csv"), "hepatitis");
  CHECK(raw.row_count() == 155);
  CHECK(raw.feature_count() == 19);
}

TEST_CASE("liver file loads with 10 predictors") {
  const RawDataset raw = load_csv(data_path("liver.csv"), "liver");
  CHECK(raw.feature_count() == 10);
  CHECK(raw.row_count() == 583);
}

TEST_CASE("labels are binary and both classes present") {
  for (const std::string name : {"breast_cancer", "hepatitis", "liver"}) {
    const RawDataset raw = load_csv(data_path(name + std::string(".csv")), name);
    int pos = 0, neg = 0;
    for (int y : raw.labels) {
      REQUIRE((y == 0 || y == 1));
      (y == 1 ? pos : neg)++;
    }
    CHECK(pos >= 2);
    CHECK(neg >= 2);
  }
}

TEST_CASE("non-numeric cell raises malformed-input naming the line") {
  const std::string path = write_temp_csv(
      "badcell", tiny_breast_csv(12, "1099,1,2,3,oops,5,6,7,8,9,2\n"));
  try {
    load_csv(path, "breast_cancer");
    FAIL("expected MalformedInputError");
  } catch (const MalformedInputError& e) {
    CHECK(std::string(e.what()).find("13") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("unknown schema raises config error") {
  const std::string path = write_temp_csv("schema", tiny_breast_csv(12));
  CHECK_THROWS_AS(load_csv(path, "iris"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("missing path raises config error") {
  CHECK_THROWS_AS(load_csv("/nonexistent/nowhere.csv", "breast_cancer"),
                  ConfigError);
}

TEST_CASE("question marks and empty cells become absent") {
  const std::string path = write_temp_csv(
      "missing", tiny_breast_csv(10, "1100,?,2,3,,5,6,7,8,9,2\n"));
  const RawDataset raw = load_csv(path, "breast_cancer");
  REQUIRE(raw.row_count() == 11);
  CHECK_FALSE(raw.rows.back()[0].has_value());
  CHECK_FALSE(raw.rows.back()[3].has_value());
  CHECK(raw.rows.back()[1].has_value());
  std::remove(path.c_str());
}

TEST_CASE("imputation fills absent cells with the column mean") {
  const std::string path = write_temp_csv(
      "impute",
      "10,1,5,5,5,5,5,5,5,5,2\n"
      "11,?,5,5,5,5,5,5,5,5,2\n"
      "12,3,5,5,5,5,5,5,5,5,4\n"
      "13,3,5,5,5,5,5,5,5,5,4\n");
  const RawDataset filled = impute_missing(load_csv(path, "breast_cancer"));
  // column mean over present cells (1 + 3 + 3) / 3
  CHECK(filled.rows[1][0].value() == doctest::Approx(7.0 / 3.0));
  for (const auto& row : filled.rows)
    for (const auto& cell : row) CHECK(cell.has_value());
  std::remove(path.c_str());
}

TEST_CASE("imputation is the identity when nothing is absent") {
  const std::string path = write_temp_csv("noabsent", tiny_breast_csv(12));
  const RawDataset raw = load_csv(path, "breast_cancer");
  const RawDataset filled = impute_missing(raw);
  for (std::size_t i = 0; i < raw.rows.size(); ++i)
    for (std::size_t j = 0; j < raw.rows[i].size(); ++j)
      CHECK(filled.rows[i][j].value() == raw.rows[i][j].value());
  std::remove(path.c_str());
}

TEST_CASE("a fully absent column is a degenerate-column error") {
  std::string body;
  for (int i = 0; i < 6; ++i) {
    body += std::to_string(i);
    body += ",?";
    for (int j = 0; j < 8; ++j) body += ",1";
    body += i % 2 ? ",4\n" : ",2\n";
  }
  const std::string path = write_temp_csv("degenerate", body);
  CHECK_THROWS_AS(impute_missing(load_csv(path, "breast_cancer")),
                  DegenerateColumnError);
  std::remove(path.c_str());
}

TEST_CASE("699 rows split 70-30 into 490 train and 209 test") {
  const RawDataset raw = load_csv(data_path("breast_cancer.csv"), "breast_cancer");
  const TabularDataset data = standardize_and_split(impute_missing(raw), 0.30, 7);
  CHECK(data.train_idx.size() == 490);
  CHECK(data.test_idx.size() == 209);
}

TEST_CASE("split covers every row exactly once") {
  const RawDataset raw = load_csv(data_path("hepatitis.csv"), "hepatitis");
  const TabularDataset data = standardize_and_split(impute_missing(raw), 0.30, 3);
  std::vector<int> seen(data.row_count(), 0);
  for (const auto i : data.train_idx) seen[i]++;
  for (const auto i : data.test_idx) seen[i]++;
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("same seed reproduces the split, different seed moves it") {
  const RawDataset raw = load_csv(data_path("liver.csv"), "liver");
  const RawDataset filled = impute_missing(raw);
  const TabularDataset a = standardize_and_split(filled, 0.30, 11);
  const TabularDataset b = standardize_and_split(filled, 0.30, 11);
  const TabularDataset c = standardize_and_split(filled, 0.30, 12);
  CHECK(a.train_idx == b.train_idx);
  CHECK(a.test_idx == b.test_idx);
  CHECK(a.features == b.features);
  CHECK(a.train_idx != c.train_idx);
}

TEST_CASE("training columns standardize to mean 0 and std 1") {
  const RawDataset raw = load_csv(data_path("breast_cancer.csv"), "breast_cancer");
  const TabularDataset data = standardize_and_split(impute_missing(raw), 0.30, 7);
  const Eigen::MatrixXd train = data.train_features();
  const auto n = static_cast<double>(train.rows());
  for (Eigen::Index j = 0; j < train.cols(); ++j) {
    const double mean = train.col(j).mean();
    const double var = (train.col(j).array() - mean).square().sum() / (n - 1);
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
  }
}

TEST_CASE("test rows are transformed with training statistics") {
  const RawDataset raw = load_csv(data_path("liver.csv"), "liver");
  const RawDataset filled = impute_missing(raw);
  const TabularDataset data = standardize_and_split(filled, 0.30, 7);
  const Eigen::Index row = data.test_idx.front();
  for (Eigen::Index j = 0; j < data.feature_count(); ++j) {
    const double expected =
        (filled.rows[row][j].value() - data.means[j]) / data.stds[j];
    CHECK(data.features(row, j) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("destandardizing training rows round-trips the imputed values") {
  const RawDataset raw = load_csv(data_path("breast_cancer.csv"), "breast_cancer");
  const RawDataset filled = impute_missing(raw);
  const TabularDataset data = standardize_and_split(filled, 0.30, 5);
  for (const auto i : data.train_idx) {
    for (Eigen::Index j = 0; j < data.feature_count(); ++j) {
      const double back = data.features(i, j) * data.stds[j] + data.means[j];
      CHECK(back == doctest::Approx(filled.rows[i][j].value()).epsilon(1e-9));
    }
  }
}

TEST_CASE("a constant training column standardizes to zeros with std 1") {
  std::string body;
  for (int i = 0; i < 20; ++i) {
    body += std::to_string(i);
    body += ",7";  // constant column
    for (int j = 0; j < 8; ++j) body += "," + std::to_string(1 + (i * 3 + j) % 10);
    body += i % 2 ? ",4\n" : ",2\n";
  }
  const std::string path = write_temp_csv("constcol", body);
  const TabularDataset data =
      standardize_and_split(impute_missing(load_csv(path, "breast_cancer")), 0.3, 1);
  CHECK(data.stds[0] == 1.0);
  CHECK(data.features.col(0).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("fewer than 10 rows is an insufficient-data error") {
  const std::string path = write_temp_csv("tiny", tiny_breast_csv(8));
  CHECK_THROWS_AS(
      standardize_and_split(impute_missing(load_csv(path, "breast_cancer")), 0.3, 1),
      InsufficientDataError);
  std::remove(path.c_str());
}

}  // TEST_SUITE

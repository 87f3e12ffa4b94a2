#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alime/errors.hpp"

namespace alime {

// Column layout and label coding of one supported CSV schema.
struct DatasetSchema {
  std::string name;
  int id_column = -1;  // -1 when the file has no row-identifier column
  int label_column = -1;
  int column_count = 0;
  std::vector<std::string> feature_names;
  double positive_label = 0;  // raw value mapped to class 1
  double negative_label = 0;  // raw value mapped to class 0

  int feature_count() const {
    return static_cast<int>(feature_names.size());
  }
};

// Registered schemas: breast_cancer, hepatitis, liver.
// Throws ConfigError for anything else.
const DatasetSchema& schema_registry(const std::string& name);

using OptionalCell = std::optional<double>;

struct RawDataset {
  std::string name;
  std::vector<std::string> feature_names;
  std::vector<std::vector<OptionalCell>> rows;  // N rows of K cells
  std::vector<int> labels;                      // 0/1, aligned with rows

  Eigen::Index row_count() const {
    return static_cast<Eigen::Index>(rows.size());
  }
  Eigen::Index feature_count() const {
    return static_cast<Eigen::Index>(feature_names.size());
  }
};

// Standardized feature matrix plus the statistics and split that made it.
// means/stds are computed on training rows only and applied everywhere.
struct TabularDataset {
  std::string name;
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;  // N x K, standardized
  Eigen::VectorXi labels;    // length N, 0/1
  Eigen::VectorXd means;     // length K, original units
  Eigen::VectorXd stds;      // length K, original units, all > 0
  std::vector<Eigen::Index> train_idx;  // sorted ascending
  std::vector<Eigen::Index> test_idx;   // sorted ascending

  Eigen::Index row_count() const { return features.rows(); }
  Eigen::Index feature_count() const { return features.cols(); }

  // Training/test rows as dense matrices (row order follows the index sets).
  Eigen::MatrixXd train_features() const;
  Eigen::MatrixXd test_features() const;
};

// Reads a plain UTF-8 CSV with "?" or empty cells as missing markers. A
// header row is auto-detected (any cell that is neither numeric nor a missing
// marker). Throws MalformedInputError naming the 1-based line on bad content,
// ConfigError for unknown schema or unreadable path.
RawDataset load_csv(const std::string& path, const std::string& schema_name);

// Replaces every absent cell with the column mean over present cells.
// Throws DegenerateColumnError when a column has no present cells.
RawDataset impute_missing(const RawDataset& raw);

// Seeded uniform shuffle split (floor(N * test_fraction) test rows), then
// per-column standardization with statistics from the training rows only.
// A zero-variance training column is recorded with std 1 and the whole
// standardized column set to 0. Requires an imputed dataset.
TabularDataset standardize_and_split(const RawDataset& raw,
                                     double test_fraction = 0.30,
                                     std::uint64_t seed = 0);

}  // namespace alime

#include "alime/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "alime/rng.hpp"

namespace alime {

namespace {

std::vector<DatasetSchema> make_registry() {
  std::vector<DatasetSchema> reg;

  // UCI breast-cancer-wisconsin layout: sample id, nine 1..10 cytology
  // scores, class (2 = benign, 4 = malignant).
  DatasetSchema breast;
  breast.name = "breast_cancer";
  breast.id_column = 0;
  breast.label_column = 10;
  breast.column_count = 11;
  breast.feature_names = {
      "clump_thickness",        "uniformity_cell_size",
      "uniformity_cell_shape",  "marginal_adhesion",
      "single_epithelial_size", "bare_nuclei",
      "bland_chromatin",        "normal_nucleoli",
      "mitoses"};
  breast.positive_label = 4;  // malignant
  breast.negative_label = 2;
  reg.push_back(breast);

  // UCI hepatitis layout: class first (1 = die, 2 = live), 19 attributes.
  DatasetSchema hep;
  hep.name = "hepatitis";
  hep.id_column = -1;
  hep.label_column = 0;
  hep.column_count = 20;
  hep.feature_names = {
      "age",        "sex",        "steroid",       "antivirals",
      "fatigue",    "malaise",    "anorexia",      "liver_big",
      "liver_firm", "spleen_palpable", "spiders",  "ascites",
      "varices",    "bilirubin",  "alk_phosphate", "sgot",
      "albumin",    "protime",    "histology"};
  hep.positive_label = 1;  // die
  hep.negative_label = 2;
  reg.push_back(hep);

  // Indian liver patient layout: ten numeric attributes (gender pre-encoded
  // 1 = male, 0 = female), selector last (1 = liver patient, 2 = not).
  DatasetSchema liver;
  liver.name = "liver";
  liver.id_column = -1;
  liver.label_column = 10;
  liver.column_count = 11;
  liver.feature_names = {
      "age",         "gender",     "total_bilirubin", "direct_bilirubin",
      "alk_phosphate", "sgpt",     "sgot",            "total_proteins",
      "albumin",     "ag_ratio"};
  liver.positive_label = 1;  // liver patient
  liver.negative_label = 2;
  reg.push_back(liver);

  return reg;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

std::optional<double> parse_number(const std::string& cell) {
  double value = 0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

}  // namespace

const DatasetSchema& schema_registry(const std::string& name) {
  static const std::vector<DatasetSchema> registry = make_registry();
  for (const auto& schema : registry) {
    if (schema.name == name) return schema;
  }
  throw ConfigError("unknown dataset schema: " + name +
                    " (expected breast_cancer, hepatitis or liver)");
}

RawDataset load_csv(const std::string& path, const std::string& schema_name) {
  const DatasetSchema& schema = schema_registry(schema_name);

  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open dataset file: " + path);
  }

  RawDataset raw;
  raw.name = schema.name;
  raw.feature_names = schema.feature_names;

  std::string line;
  long line_no = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);

    if (first_content_row) {
      first_content_row = false;
      const bool header = std::any_of(
          cells.begin(), cells.end(), [](const std::string& c) {
            return !is_missing(c) && !parse_number(c).has_value();
          });
      if (header) continue;
    }

    if (static_cast<int>(cells.size()) != schema.column_count) {
      throw MalformedInputError(
          path + ":" + std::to_string(line_no) + ": expected " +
          std::to_string(schema.column_count) + " columns, got " +
          std::to_string(cells.size()));
    }

    std::vector<OptionalCell> row;
    row.reserve(schema.feature_names.size());
    for (int c = 0; c < schema.column_count; ++c) {
      if (c == schema.id_column) continue;
      const std::string& cell = cells[static_cast<std::size_t>(c)];
      if (c == schema.label_column) {
        const auto value = parse_number(cell);
        if (!value) {
          throw MalformedInputError(path + ":" + std::to_string(line_no) +
                                    ": unparseable label '" + cell + "'");
        }
        if (*value == schema.positive_label) {
          raw.labels.push_back(1);
        } else if (*value == schema.negative_label) {
          raw.labels.push_back(0);
        } else {
          throw MalformedInputError(path + ":" + std::to_string(line_no) +
                                    ": unexpected label value '" + cell + "'");
        }
        continue;
      }
      if (is_missing(cell)) {
        row.push_back(std::nullopt);
        continue;
      }
      const auto value = parse_number(cell);
      if (!value) {
        throw MalformedInputError(path + ":" + std::to_string(line_no) +
                                  ": non-numeric cell '" + cell + "'");
      }
      row.push_back(*value);
    }
    raw.rows.push_back(std::move(row));
  }

  int per_class[2] = {0, 0};
  for (int label : raw.labels) ++per_class[label];
  if (per_class[0] < 2 || per_class[1] < 2) {
    throw MalformedInputError(path + ": fewer than 2 rows in one class (" +
                              std::to_string(per_class[0]) + " vs " +
                              std::to_string(per_class[1]) + ")");
  }
  return raw;
}

RawDataset impute_missing(const RawDataset& raw) {
  const Eigen::Index n = raw.row_count();
  const Eigen::Index k = raw.feature_count();

  RawDataset out = raw;
  for (Eigen::Index c = 0; c < k; ++c) {
    double sum = 0;
    Eigen::Index present = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (raw.rows[r][c]) {
        sum += *raw.rows[r][c];
        ++present;
      }
    }
    if (present == 0) {
      throw DegenerateColumnError("column '" + raw.feature_names[c] +
                                  "' has no present cells");
    }
    if (present == n) continue;
    const double mean = sum / static_cast<double>(present);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (!out.rows[r][c]) out.rows[r][c] = mean;
    }
  }
  return out;
}

TabularDataset standardize_and_split(const RawDataset& raw,
                                     double test_fraction,
                                     std::uint64_t seed) {
  const Eigen::Index n = raw.row_count();
  const Eigen::Index k = raw.feature_count();
  if (n < 10) {
    throw InsufficientDataError("need at least 10 rows, got " +
                                std::to_string(n));
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0,1)");
  }

  Eigen::MatrixXd values(n, k);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      if (!raw.rows[r][c]) {
        throw ConfigError("standardize_and_split requires an imputed dataset");
      }
      values(r, c) = *raw.rows[r][c];
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(order);

  const auto n_test = static_cast<Eigen::Index>(
      std::floor(static_cast<double>(n) * test_fraction));
  const Eigen::Index n_train = n - n_test;

  TabularDataset out;
  out.name = raw.name;
  out.feature_names = raw.feature_names;
  out.train_idx.assign(order.begin(), order.begin() + n_train);
  out.test_idx.assign(order.begin() + n_train, order.end());
  std::sort(out.train_idx.begin(), out.train_idx.end());
  std::sort(out.test_idx.begin(), out.test_idx.end());

  out.labels.resize(n);
  for (Eigen::Index r = 0; r < n; ++r) out.labels(r) = raw.labels[r];

  // Training statistics only; sample std with divisor n_train - 1.
  out.means.resize(k);
  out.stds.resize(k);
  out.features.resize(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    double sum = 0;
    for (Eigen::Index i : out.train_idx) sum += values(i, c);
    const double mean = sum / static_cast<double>(n_train);
    double ss = 0;
    for (Eigen::Index i : out.train_idx) {
      const double d = values(i, c) - mean;
      ss += d * d;
    }
    const double var = ss / static_cast<double>(n_train - 1);
    const double sd = std::sqrt(var);
    out.means(c) = mean;
    if (sd < 1e-12 * std::max(1.0, std::abs(mean))) {
      out.stds(c) = 1.0;
      out.features.col(c).setZero();
    } else {
      out.stds(c) = sd;
      out.features.col(c) = (values.col(c).array() - mean) / sd;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = m.row(idx[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd TabularDataset::train_features() const {
  return gather_rows(features, train_idx);
}

Eigen::MatrixXd TabularDataset::test_features() const {
  return gather_rows(features, test_idx);
}

}  // namespace alime

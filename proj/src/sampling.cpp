#include "alime/sampling.hpp"

#include <utility>

#include "alime/rng.hpp"
#include "alime/util.hpp"

namespace alime {

namespace {

constexpr const char* kGeneratorTag = "mt19937_64/box-muller";

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("ragged matrix in pool document");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

}  // namespace

SamplePool sample_pool(Eigen::Index k, Eigen::Index m, std::uint64_t seed) {
  if (m < 2) throw ConfigError("pool size m must be at least 2");
  if (k < 1) throw ConfigError("feature count must be positive");

  SamplePool pool;
  pool.seed = seed;
  pool.points.resize(m, k);
  Rng rng(seed);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      pool.points(r, c) = rng.normal();
    }
  }
  return pool;
}

SamplePool attach_embeddings(SamplePool pool, const DenoisingAutoencoder& ae) {
  if (ae.encoder.input_dim != pool.points.cols()) {
    throw ConfigError("autoencoder input width does not match pool width");
  }
  pool.embeddings = embed_batch(ae, pool.points);
  pool.ae_fingerprint = autoencoder_fingerprint(ae);
  return pool;
}

std::uint64_t autoencoder_fingerprint(const DenoisingAutoencoder& ae) {
  return fnv1a(model_to_json(ae.encoder).dump());
}

Json pool_to_json(const SamplePool& pool) {
  Json j;
  j["format"] = "alime-pool";
  j["version"] = 1;
  j["generator"] = kGeneratorTag;
  j["seed"] = pool.seed;
  j["m"] = pool.points.rows();
  j["k"] = pool.points.cols();
  j["points"] = matrix_to_json(pool.points);
  if (pool.embeddings) {
    j["ae_fingerprint"] = pool.ae_fingerprint;
    j["embeddings"] = matrix_to_json(*pool.embeddings);
  } else {
    j["ae_fingerprint"] = 0;
    j["embeddings"] = nullptr;
  }
  return j;
}

SamplePool pool_from_json(const Json& j) {
  if (j.value("format", "") != "alime-pool" || j.value("version", 0) != 1) {
    throw ConfigError("not a version-1 alime-pool document");
  }
  if (j.value("generator", "") != kGeneratorTag) {
    throw ConfigError("pool was written by an unknown generator");
  }
  SamplePool pool;
  pool.seed = j.at("seed").get<std::uint64_t>();
  pool.points = matrix_from_json(j.at("points"));
  if (pool.points.rows() != j.at("m").get<Eigen::Index>() ||
      pool.points.cols() != j.at("k").get<Eigen::Index>()) {
    throw ConfigError("pool dimensions do not match document header");
  }
  if (!j.at("embeddings").is_null()) {
    pool.embeddings = matrix_from_json(j.at("embeddings"));
    pool.ae_fingerprint = j.at("ae_fingerprint").get<std::uint64_t>();
    if (pool.embeddings->rows() != pool.points.rows()) {
      throw ConfigError("embeddings do not row-align with points");
    }
  }
  return pool;
}

}  // namespace alime

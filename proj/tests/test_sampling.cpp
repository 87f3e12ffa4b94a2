#include <doctest.h>

#include <cmath>
#include <string>

#include "alime/dataset.hpp"
#include "alime/errors.hpp"
#include "alime/models.hpp"
#include "alime/neural.hpp"
#include "alime/sampling.hpp"

using namespace alime;

namespace {

std::string data_path(const std::string& file) {
  return std::string(ALIME_DATA_DIR) + "/" + file;
}

// A small but non-trivial autoencoder for embedding tests.
const DenoisingAutoencoder& tiny_ae() {
  static const DenoisingAutoencoder ae = [] {
    const TabularDataset data = standardize_and_split(
        impute_missing(load_csv(data_path("breast_cancer.csv"), "breast_cancer")),
        0.30, 7);
    TrainConfig cfg;
    cfg.seed = 9;
    cfg.epochs = 10;
    cfg.loss = Loss::kMse;
    return train_autoencoder(data, 8, 0.1, cfg);
  }();
  return ae;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("pool has the requested shape and records its seed") {
  const SamplePool pool = sample_pool(9, 500, 17);
  CHECK(pool.points.rows() == 500);
  CHECK(pool.points.cols() == 9);
  CHECK(pool.size() == 500);
  CHECK(pool.seed == 17);
  CHECK_FALSE(pool.embeddings.has_value());
}

TEST_CASE("pool generation is deterministic per seed") {
  const SamplePool a = sample_pool(6, 300, 42);
  const SamplePool b = sample_pool(6, 300, 42);
  const SamplePool c = sample_pool(6, 300, 43);
  CHECK((a.points - b.points).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((a.points - c.points).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("large pools match the standard normal moments") {
  const SamplePool pool = sample_pool(5, 100000, 11);
  const double n = static_cast<double>(pool.points.size());
  const double mean = pool.points.sum() / n;
  const double sd = std::sqrt(pool.points.array().square().sum() / n - mean * mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(sd - 1.0) < 0.02);
}

TEST_CASE("pool rejects fewer than two points") {
  CHECK_THROWS_AS(sample_pool(4, 1, 7), ConfigError);
  CHECK_THROWS_AS(sample_pool(4, 0, 7), ConfigError);
  CHECK_NOTHROW(sample_pool(4, 2, 7));
}

TEST_CASE("attach_embeddings caches one row per point") {
  const SamplePool pool =
      attach_embeddings(sample_pool(9, 200, 17), tiny_ae());
  REQUIRE(pool.embeddings.has_value());
  CHECK(pool.embeddings->rows() == 200);
  CHECK(pool.embeddings->cols() == tiny_ae().latent_dim);
  CHECK(pool.ae_fingerprint == autoencoder_fingerprint(tiny_ae()));
  // Row zero equals a direct encoder pass, bit for bit.
  const Eigen::VectorXd z0 = embed(tiny_ae(), pool.points.row(0));
  CHECK((pool.embeddings->row(0).transpose() - z0).lpNorm<Eigen::Infinity>() ==
        0.0);
}

TEST_CASE("attach_embeddings leaves the points untouched") {
  const SamplePool before = sample_pool(9, 150, 23);
  const SamplePool after = attach_embeddings(before, tiny_ae());
  CHECK((before.points - after.points).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(after.seed == before.seed);
}

TEST_CASE("attach_embeddings is idempotent for the same autoencoder") {
  const SamplePool once = attach_embeddings(sample_pool(9, 100, 29), tiny_ae());
  const SamplePool twice = attach_embeddings(once, tiny_ae());
  CHECK((*once.embeddings - *twice.embeddings).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("fingerprint distinguishes different autoencoders") {
  const TabularDataset data = standardize_and_split(
      impute_missing(load_csv(data_path("breast_cancer.csv"), "breast_cancer")),
      0.30, 7);
  TrainConfig cfg;
  cfg.seed = 51;
  cfg.epochs = 2;
  cfg.loss = Loss::kMse;
  const DenoisingAutoencoder other = train_autoencoder(data, 8, 0.1, cfg);
  CHECK(autoencoder_fingerprint(other) != autoencoder_fingerprint(tiny_ae()));
  CHECK(autoencoder_fingerprint(tiny_ae()) ==
        autoencoder_fingerprint(tiny_ae()));
}

TEST_CASE("pool json round trip is bitwise") {
  const SamplePool pool = attach_embeddings(sample_pool(9, 64, 31), tiny_ae());
  const SamplePool back = pool_from_json(pool_to_json(pool));
  CHECK((back.points - pool.points).lpNorm<Eigen::Infinity>() == 0.0);
  REQUIRE(back.embeddings.has_value());
  CHECK((*back.embeddings - *pool.embeddings).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(back.seed == pool.seed);
  CHECK(back.ae_fingerprint == pool.ae_fingerprint);
  CHECK(pool_to_json(back).dump() == pool_to_json(pool).dump());
}

}  // TEST_SUITE

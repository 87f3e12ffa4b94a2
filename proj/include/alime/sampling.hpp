#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "alime/models.hpp"

namespace alime {

// Pre-generated synthetic points shared by the explainers. For ALIME the
// latent embeddings of every point are cached here once.
struct SamplePool {
  Eigen::MatrixXd points;                      // m x K, standardized space
  std::optional<Eigen::MatrixXd> embeddings;   // m x L, row-aligned
  std::uint64_t seed = 0;
  std::uint64_t ae_fingerprint = 0;  // identifies the embedding autoencoder

  Eigen::Index size() const { return points.rows(); }
};

// m i.i.d. draws from N(0, I_K), filled row by row so a given seed always
// produces the same matrix. m < 2 is a ConfigError.
SamplePool sample_pool(Eigen::Index k, Eigen::Index m, std::uint64_t seed);

// Returns the pool with embeddings[i] = embed(ae, points[i]) for all i.
// Idempotent for the same autoencoder.
SamplePool attach_embeddings(SamplePool pool, const DenoisingAutoencoder& ae);

// Stable identity of an autoencoder's encoder, used to tag cached embeddings.
std::uint64_t autoencoder_fingerprint(const DenoisingAutoencoder& ae);

// Portable JSON dump (points + embeddings + seed + generator tag).
Json pool_to_json(const SamplePool& pool);
SamplePool pool_from_json(const Json& j);

}  // namespace alime

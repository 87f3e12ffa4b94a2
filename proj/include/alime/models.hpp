#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alime/dataset.hpp"
#include "alime/neural.hpp"
#include "alime/rng.hpp"

namespace alime {

// The classifier under explanation: K -> 30 -> 2 with relu then softmax.
// Only predict_proba is visible to the explainers.
struct BlackBoxPredictor {
  MlpModel model;
  int positive_class_index = 1;
  std::string dataset;     // schema name the model was trained on
  std::uint64_t seed = 0;  // seed of the training invocation (also the split)
};

// Encoder/decoder halves of the denoising autoencoder. The encoder output
// activation is identity, so latent space is unbounded and Euclidean.
struct DenoisingAutoencoder {
  MlpModel encoder;  // K -> hidden -> L
  MlpModel decoder;  // L -> hidden -> K
  Eigen::Index latent_dim = 0;
  double noise_sigma = 0;
  std::string dataset;
  std::uint64_t seed = 0;
};

inline Eigen::Index default_latent_dim(Eigen::Index k) {
  return std::min<Eigen::Index>(k - 1 > 0 ? k - 1 : 1, 8);
}

// Trains the hidden-width-30 classifier on the training rows with bce loss.
BlackBoxPredictor train_blackbox(const TabularDataset& data,
                                 const TrainConfig& cfg);

// Positive-class probability for one standardized instance / a batch of rows.
double predict_proba(const BlackBoxPredictor& predictor,
                     const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::VectorXd predict_proba_batch(
    const BlackBoxPredictor& predictor,
    const Eigen::Ref<const Eigen::MatrixXd>& rows);

// Fraction of rows (given by index into data) classified correctly at the
// 0.5 probability threshold.
double accuracy(const BlackBoxPredictor& predictor, const TabularDataset& data,
                const std::vector<Eigen::Index>& rows);

// x + additive white Gaussian noise drawn from the supplied generator,
// coordinate by coordinate.
Eigen::VectorXd corrupt(const Eigen::Ref<const Eigen::VectorXd>& x,
                        double sigma, Rng& rng);

// Trains encoder+decoder end to end on (corrupted, clean) training pairs
// with mse loss; the corruption is redrawn every epoch. Architecture:
// K -> max(K,8) -> L -> max(K,8) -> K, relu hidden, identity elsewhere.
// Noise draws come from the seed cfg.seed + 1 stream. When epoch_loss is
// given it receives the per-epoch denoising training loss.
DenoisingAutoencoder train_autoencoder(const TabularDataset& data,
                                       Eigen::Index latent_dim,
                                       double noise_sigma,
                                       const TrainConfig& cfg,
                                       std::vector<double>* epoch_loss = nullptr);

// Encoder forward pass only.
Eigen::VectorXd embed(const DenoisingAutoencoder& ae,
                      const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::MatrixXd embed_batch(const DenoisingAutoencoder& ae,
                            const Eigen::Ref<const Eigen::MatrixXd>& rows);

// Mean over rows and features of the squared reconstruction error on clean
// inputs. The predict-zero baseline scores ~1.0 in standardized space.
double reconstruction_mse(const DenoisingAutoencoder& ae,
                          const Eigen::Ref<const Eigen::MatrixXd>& rows);

Json blackbox_to_json(const BlackBoxPredictor& predictor);
BlackBoxPredictor blackbox_from_json(const Json& j);
Json autoencoder_to_json(const DenoisingAutoencoder& ae);
DenoisingAutoencoder autoencoder_from_json(const Json& j);

}  // namespace alime

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include <json.hpp>

#include "alime/errors.hpp"
#include "alime/rng.hpp"

namespace alime {

using Json = nlohmann::ordered_json;

enum class Activation { kRelu, kSigmoid, kIdentity, kSoftmax };
enum class Loss { kBce, kMse };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);
std::string to_string(Loss l);
Loss loss_from_string(const std::string& s);

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;     // out
  Activation activation = Activation::kIdentity;
};

struct MlpModel {
  std::vector<DenseLayer> layers;
  Eigen::Index input_dim = 0;

  Eigen::Index output_dim() const {
    return layers.empty() ? input_dim : layers.back().weights.rows();
  }
};

struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
  Loss loss = Loss::kMse;
};

struct LayerGrad {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};
using ModelGrad = std::vector<LayerGrad>;

struct TrainResult {
  MlpModel model;
  std::vector<double> epoch_loss;  // full-dataset loss after each epoch
};

// Seeded Glorot-style uniform init in +-sqrt(6 / (fan_in + fan_out)),
// weights filled row by row, biases zero. Softmax is only accepted on the
// final layer; a zero width is a ConfigError.
MlpModel init_model(const std::vector<Eigen::Index>& dims,
                    const std::vector<Activation>& activations,
                    std::uint64_t seed);

// Dense forward pass. Batched variants treat each ROW as one sample.
Eigen::VectorXd forward(const MlpModel& model,
                        const Eigen::Ref<const Eigen::VectorXd>& x);
Eigen::MatrixXd forward_batch(const MlpModel& model,
                              const Eigen::Ref<const Eigen::MatrixXd>& inputs);

// Mean loss over the batch and exact backprop gradients.
//   mse: mean over batch and components of (output - target)^2
//   bce: cross-entropy over the softmax output (head must be softmax),
//        probabilities clamped at 1e-12 inside the log
// Throws NumericOverflowError when the forward pass goes non-finite.
std::pair<double, ModelGrad> loss_and_grad(
    const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
    const Eigen::Ref<const Eigen::MatrixXd>& targets, Loss loss);

double evaluate_loss(const MlpModel& model,
                     const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                     const Eigen::Ref<const Eigen::MatrixXd>& targets,
                     Loss loss);

// One shuffled pass of mini-batch SGD; returns the mean per-sample loss seen
// during the pass. The caller owns the shuffle stream, so successive epochs
// draw different batch orders from one seed.
double sgd_epoch(MlpModel& model,
                 const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                 const Eigen::Ref<const Eigen::MatrixXd>& targets, Loss loss,
                 double learning_rate, int batch_size, Rng& rng);

// Plain mini-batch gradient descent with a seeded shuffle each epoch.
// Throws TrainingDivergedError naming the epoch if the loss goes non-finite.
TrainResult train(const MlpModel& model,
                  const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                  const Eigen::Ref<const Eigen::MatrixXd>& targets,
                  const TrainConfig& cfg);

// Versioned JSON document: layer dims, activation tags, row-major weights.
// Field names are pinned in docs/serialization.md.
Json model_to_json(const MlpModel& model);
MlpModel model_from_json(const Json& j);

}  // namespace alime

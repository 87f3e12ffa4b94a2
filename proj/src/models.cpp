#include "alime/models.hpp"

#include <cmath>
#include <utility>

namespace alime {

namespace {

Eigen::MatrixXd one_hot_targets(const TabularDataset& data,
                                const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd targets =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), 2);
  for (Eigen::Index i = 0; i < targets.rows(); ++i) {
    targets(i, data.labels(rows[static_cast<std::size_t>(i)])) = 1.0;
  }
  return targets;
}

}  // namespace

BlackBoxPredictor train_blackbox(const TabularDataset& data,
                                 const TrainConfig& cfg) {
  const Eigen::Index k = data.feature_count();
  MlpModel model = init_model({k, 30, 2},
                              {Activation::kRelu, Activation::kSoftmax},
                              cfg.seed);
  TrainConfig bce_cfg = cfg;
  bce_cfg.loss = Loss::kBce;
  TrainResult result = train(model, data.train_features(),
                             one_hot_targets(data, data.train_idx), bce_cfg);

  BlackBoxPredictor predictor;
  predictor.model = std::move(result.model);
  predictor.positive_class_index = 1;
  predictor.dataset = data.name;
  predictor.seed = cfg.seed;
  return predictor;
}

double predict_proba(const BlackBoxPredictor& predictor,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  return forward(predictor.model, x)(predictor.positive_class_index);
}

Eigen::VectorXd predict_proba_batch(
    const BlackBoxPredictor& predictor,
    const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  return forward_batch(predictor.model, rows)
      .col(predictor.positive_class_index);
}

double accuracy(const BlackBoxPredictor& predictor, const TabularDataset& data,
                const std::vector<Eigen::Index>& rows) {
  Eigen::Index correct = 0;
  for (Eigen::Index i : rows) {
    const double p = predict_proba(predictor, data.features.row(i));
    const int predicted = p >= 0.5 ? 1 : 0;
    if (predicted == data.labels(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

Eigen::VectorXd corrupt(const Eigen::Ref<const Eigen::VectorXd>& x,
                        double sigma, Rng& rng) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out(i) = x(i) + sigma * rng.normal();
  }
  return out;
}

DenoisingAutoencoder train_autoencoder(const TabularDataset& data,
                                       Eigen::Index latent_dim,
                                       double noise_sigma,
                                       const TrainConfig& cfg,
                                       std::vector<double>* epoch_loss) {
  const Eigen::Index k = data.feature_count();
  if (latent_dim < 1 || latent_dim > k) {
    throw ConfigError("latent_dim must lie in [1, feature count]");
  }
  if (noise_sigma <= 0) throw ConfigError("noise_sigma must be positive");

  const Eigen::Index hidden = std::max<Eigen::Index>(k, 8);
  MlpModel combined = init_model(
      {k, hidden, latent_dim, hidden, k},
      {Activation::kRelu, Activation::kIdentity, Activation::kRelu,
       Activation::kIdentity},
      cfg.seed);

  const Eigen::MatrixXd clean = data.train_features();
  if (cfg.batch_size < 1 || cfg.batch_size > clean.rows()) {
    throw ConfigError("batch_size must lie in [1, training-set size]");
  }
  if (cfg.epochs < 1) throw ConfigError("epochs must be positive");

  Rng shuffle_rng(cfg.seed);
  Rng noise_rng(cfg.seed + 1);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fresh corruption of the whole training set, row by row.
    Eigen::MatrixXd corrupted(clean.rows(), clean.cols());
    for (Eigen::Index r = 0; r < clean.rows(); ++r) {
      corrupted.row(r) = corrupt(clean.row(r), noise_sigma, noise_rng);
    }
    double loss = 0;
    try {
      loss = sgd_epoch(combined, corrupted, clean, Loss::kMse,
                       cfg.learning_rate, cfg.batch_size, shuffle_rng);
    } catch (const NumericOverflowError&) {
      throw TrainingDivergedError("autoencoder diverged at epoch " +
                                  std::to_string(epoch));
    }
    if (!std::isfinite(loss)) {
      throw TrainingDivergedError("autoencoder diverged at epoch " +
                                  std::to_string(epoch));
    }
    if (epoch_loss) epoch_loss->push_back(loss);
  }

  DenoisingAutoencoder ae;
  ae.encoder.input_dim = k;
  ae.encoder.layers = {combined.layers[0], combined.layers[1]};
  ae.decoder.input_dim = latent_dim;
  ae.decoder.layers = {combined.layers[2], combined.layers[3]};
  ae.latent_dim = latent_dim;
  ae.noise_sigma = noise_sigma;
  ae.dataset = data.name;
  ae.seed = cfg.seed;
  return ae;
}

Eigen::VectorXd embed(const DenoisingAutoencoder& ae,
                      const Eigen::Ref<const Eigen::VectorXd>& x) {
  return forward(ae.encoder, x);
}

Eigen::MatrixXd embed_batch(const DenoisingAutoencoder& ae,
                            const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  return forward_batch(ae.encoder, rows);
}

double reconstruction_mse(const DenoisingAutoencoder& ae,
                          const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  const Eigen::MatrixXd reconstructed =
      forward_batch(ae.decoder, embed_batch(ae, rows));
  return (reconstructed - rows).squaredNorm() /
         (static_cast<double>(rows.rows()) * static_cast<double>(rows.cols()));
}

Json blackbox_to_json(const BlackBoxPredictor& predictor) {
  Json j;
  j["format"] = "alime-blackbox";
  j["version"] = 1;
  j["dataset"] = predictor.dataset;
  j["seed"] = predictor.seed;
  j["positive_class_index"] = predictor.positive_class_index;
  j["model"] = model_to_json(predictor.model);
  return j;
}

BlackBoxPredictor blackbox_from_json(const Json& j) {
  if (j.value("format", "") != "alime-blackbox" || j.value("version", 0) != 1) {
    throw ConfigError("not a version-1 alime-blackbox document");
  }
  BlackBoxPredictor predictor;
  predictor.dataset = j.at("dataset").get<std::string>();
  predictor.seed = j.at("seed").get<std::uint64_t>();
  predictor.positive_class_index = j.at("positive_class_index").get<int>();
  predictor.model = model_from_json(j.at("model"));
  return predictor;
}

Json autoencoder_to_json(const DenoisingAutoencoder& ae) {
  Json j;
  j["format"] = "alime-autoencoder";
  j["version"] = 1;
  j["dataset"] = ae.dataset;
  j["seed"] = ae.seed;
  j["latent_dim"] = ae.latent_dim;
  j["noise_sigma"] = ae.noise_sigma;
  j["encoder"] = model_to_json(ae.encoder);
  j["decoder"] = model_to_json(ae.decoder);
  return j;
}

DenoisingAutoencoder autoencoder_from_json(const Json& j) {
  if (j.value("format", "") != "alime-autoencoder" ||
      j.value("version", 0) != 1) {
    throw ConfigError("not a version-1 alime-autoencoder document");
  }
  DenoisingAutoencoder ae;
  ae.dataset = j.at("dataset").get<std::string>();
  ae.seed = j.at("seed").get<std::uint64_t>();
  ae.latent_dim = j.at("latent_dim").get<Eigen::Index>();
  ae.noise_sigma = j.at("noise_sigma").get<double>();
  ae.encoder = model_from_json(j.at("encoder"));
  ae.decoder = model_from_json(j.at("decoder"));
  return ae;
}

}  // namespace alime

#include "alime/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace alime {

namespace {

constexpr double kProbClamp = 1e-12;

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kSigmoid:
      return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::kIdentity:
      return z;
    case Activation::kSoftmax: {
      // Row-wise stable softmax.
      Eigen::MatrixXd out(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const Eigen::ArrayXd shifted =
            z.row(r).array() - z.row(r).maxCoeff();
        const Eigen::ArrayXd e = shifted.exp();
        out.row(r) = (e / e.sum()).matrix().transpose();
      }
      return out;
    }
  }
  throw Error("unreachable activation");
}

// dL/dZ from dL/dA given the layer's activation.
Eigen::MatrixXd backprop_activation(Activation act, const Eigen::MatrixXd& z,
                                    const Eigen::MatrixXd& a,
                                    const Eigen::MatrixXd& da) {
  switch (act) {
    case Activation::kRelu:
      return (da.array() * (z.array() > 0.0).cast<double>()).matrix();
    case Activation::kSigmoid:
      return (da.array() * a.array() * (1.0 - a.array())).matrix();
    case Activation::kIdentity:
      return da;
    case Activation::kSoftmax: {
      // Full Jacobian per row: dz = p .* da - p * (p . da)
      Eigen::MatrixXd dz(a.rows(), a.cols());
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const double dot = a.row(r).dot(da.row(r));
        dz.row(r) = a.row(r).cwiseProduct(da.row(r)) - dot * a.row(r);
      }
      return dz;
    }
  }
  throw Error("unreachable activation");
}

void check_input_dim(const MlpModel& model, Eigen::Index cols) {
  if (cols != model.input_dim) {
    throw ShapeError("input width " + std::to_string(cols) +
                     " does not match model input_dim " +
                     std::to_string(model.input_dim));
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kIdentity: return "identity";
    case Activation::kSoftmax: return "softmax";
  }
  throw Error("unreachable activation");
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "sigmoid") return Activation::kSigmoid;
  if (s == "identity") return Activation::kIdentity;
  if (s == "softmax") return Activation::kSoftmax;
  throw ConfigError("unknown activation tag: " + s);
}

std::string to_string(Loss l) {
  return l == Loss::kBce ? "bce" : "mse";
}

Loss loss_from_string(const std::string& s) {
  if (s == "bce") return Loss::kBce;
  if (s == "mse") return Loss::kMse;
  throw ConfigError("unknown loss tag: " + s);
}

MlpModel init_model(const std::vector<Eigen::Index>& dims,
                    const std::vector<Activation>& activations,
                    std::uint64_t seed) {
  if (dims.size() < 2) {
    throw ConfigError("init_model needs at least 2 layer widths");
  }
  if (activations.size() != dims.size() - 1) {
    throw ConfigError("activations length must be dims length - 1");
  }
  for (Eigen::Index w : dims) {
    if (w <= 0) throw ConfigError("layer width must be positive");
  }
  for (std::size_t i = 0; i + 1 < activations.size(); ++i) {
    if (activations[i] == Activation::kSoftmax) {
      throw ConfigError("softmax is only permitted on the final layer");
    }
  }

  Rng rng(seed);
  MlpModel model;
  model.input_dim = dims.front();
  model.layers.reserve(activations.size());
  for (std::size_t l = 0; l < activations.size(); ++l) {
    const Eigen::Index fan_in = dims[l];
    const Eigen::Index fan_out = dims[l + 1];
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) {
        layer.weights(r, c) = rng.uniform(-limit, limit);
      }
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layer.activation = activations[l];
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Eigen::MatrixXd forward_batch(const MlpModel& model,
                              const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  check_input_dim(model, inputs.cols());
  Eigen::MatrixXd a = inputs;
  for (const DenseLayer& layer : model.layers) {
    Eigen::MatrixXd z = a * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    a = apply_activation(layer.activation, z);
  }
  return a;
}

Eigen::VectorXd forward(const MlpModel& model,
                        const Eigen::Ref<const Eigen::VectorXd>& x) {
  return forward_batch(model, x.transpose()).row(0);
}

std::pair<double, ModelGrad> loss_and_grad(
    const MlpModel& model, const Eigen::Ref<const Eigen::MatrixXd>& inputs,
    const Eigen::Ref<const Eigen::MatrixXd>& targets, Loss loss) {
  check_input_dim(model, inputs.cols());
  if (inputs.rows() != targets.rows()) {
    throw ShapeError("inputs and targets row counts differ");
  }
  if (targets.cols() != model.output_dim()) {
    throw ShapeError("target width does not match model output width");
  }
  if (loss == Loss::kBce &&
      model.layers.back().activation != Activation::kSoftmax) {
    throw ConfigError("bce loss requires a softmax output layer");
  }

  const auto batch = static_cast<double>(inputs.rows());
  const std::size_t depth = model.layers.size();

  // Forward, keeping pre-activations and activations for the backward pass.
  std::vector<Eigen::MatrixXd> zs(depth), as(depth + 1);
  as[0] = inputs;
  for (std::size_t l = 0; l < depth; ++l) {
    zs[l] = as[l] * model.layers[l].weights.transpose();
    zs[l].rowwise() += model.layers[l].bias.transpose();
    as[l + 1] = apply_activation(model.layers[l].activation, zs[l]);
  }
  const Eigen::MatrixXd& out = as[depth];
  if (!out.allFinite()) {
    throw NumericOverflowError("non-finite activations in forward pass");
  }

  double loss_value = 0;
  Eigen::MatrixXd dz;
  if (loss == Loss::kMse) {
    const Eigen::MatrixXd diff = out - targets;
    const double denom = batch * static_cast<double>(out.cols());
    loss_value = diff.squaredNorm() / denom;
    const Eigen::MatrixXd da = (2.0 / denom) * diff;
    dz = backprop_activation(model.layers.back().activation, zs.back(), out,
                             da);
  } else {
    const Eigen::ArrayXXd p = out.array().max(kProbClamp);
    loss_value = -(targets.array() * p.log()).sum() / batch;
    // Softmax + cross-entropy folds to (p - t) / batch.
    dz = (out - targets) / batch;
  }

  ModelGrad grad(depth);
  for (std::size_t l = depth; l-- > 0;) {
    grad[l].weights = dz.transpose() * as[l];
    grad[l].bias = dz.colwise().sum().transpose();
    if (l > 0) {
      const Eigen::MatrixXd da_prev = dz * model.layers[l].weights;
      dz = backprop_activation(model.layers[l - 1].activation, zs[l - 1],
                               as[l], da_prev);
    }
  }
  return {loss_value, std::move(grad)};
}

double evaluate_loss(const MlpModel& model,
                     const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                     const Eigen::Ref<const Eigen::MatrixXd>& targets,
                     Loss loss) {
  const Eigen::MatrixXd out = forward_batch(model, inputs);
  if (loss == Loss::kMse) {
    return (out - targets).squaredNorm() /
           (static_cast<double>(inputs.rows()) *
            static_cast<double>(out.cols()));
  }
  const Eigen::ArrayXXd p = out.array().max(kProbClamp);
  return -(targets.array() * p.log()).sum() /
         static_cast<double>(inputs.rows());
}

double sgd_epoch(MlpModel& model,
                 const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                 const Eigen::Ref<const Eigen::MatrixXd>& targets, Loss loss,
                 double learning_rate, int batch_size, Rng& rng) {
  const Eigen::Index n = inputs.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  rng.shuffle(order);

  double total = 0;
  for (Eigen::Index start = 0; start < n; start += batch_size) {
    const Eigen::Index size = std::min<Eigen::Index>(batch_size, n - start);
    Eigen::MatrixXd xb(size, inputs.cols());
    Eigen::MatrixXd tb(size, targets.cols());
    for (Eigen::Index i = 0; i < size; ++i) {
      xb.row(i) = inputs.row(order[static_cast<std::size_t>(start + i)]);
      tb.row(i) = targets.row(order[static_cast<std::size_t>(start + i)]);
    }
    auto [batch_loss, grad] = loss_and_grad(model, xb, tb, loss);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      model.layers[l].weights -= learning_rate * grad[l].weights;
      model.layers[l].bias -= learning_rate * grad[l].bias;
    }
    total += batch_loss * static_cast<double>(size);
  }
  return total / static_cast<double>(n);
}

TrainResult train(const MlpModel& model,
                  const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                  const Eigen::Ref<const Eigen::MatrixXd>& targets,
                  const TrainConfig& cfg) {
  if (inputs.rows() != targets.rows()) {
    throw ShapeError("inputs and targets row counts differ");
  }
  if (cfg.batch_size < 1 || cfg.batch_size > inputs.rows()) {
    throw ConfigError("batch_size must lie in [1, training-set size]");
  }
  if (cfg.epochs < 1) throw ConfigError("epochs must be positive");
  if (cfg.learning_rate < 0) throw ConfigError("learning_rate must be >= 0");

  TrainResult result;
  result.model = model;
  result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
  Rng rng(cfg.seed);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    try {
      sgd_epoch(result.model, inputs, targets, cfg.loss, cfg.learning_rate,
                cfg.batch_size, rng);
    } catch (const NumericOverflowError&) {
      throw TrainingDivergedError("training diverged at epoch " +
                                  std::to_string(epoch));
    }
    const double loss = evaluate_loss(result.model, inputs, targets, cfg.loss);
    if (!std::isfinite(loss)) {
      throw TrainingDivergedError("training diverged at epoch " +
                                  std::to_string(epoch));
    }
    result.epoch_loss.push_back(loss);
  }
  return result;
}

Json model_to_json(const MlpModel& model) {
  Json j;
  j["format"] = "mlp-model";
  j["version"] = 1;
  j["input_dim"] = model.input_dim;
  j["layers"] = Json::array();
  for (const DenseLayer& layer : model.layers) {
    Json lj;
    lj["in"] = layer.weights.cols();
    lj["out"] = layer.weights.rows();
    lj["activation"] = to_string(layer.activation);
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        w.push_back(layer.weights(r, c));
      }
    }
    lj["weights"] = w;
    lj["bias"] = std::vector<double>(layer.bias.begin(), layer.bias.end());
    j["layers"].push_back(std::move(lj));
  }
  return j;
}

MlpModel model_from_json(const Json& j) {
  if (j.value("format", "") != "mlp-model" || j.value("version", 0) != 1) {
    throw ConfigError("not a version-1 mlp-model document");
  }
  MlpModel model;
  model.input_dim = j.at("input_dim").get<Eigen::Index>();
  Eigen::Index prev = model.input_dim;
  for (const Json& lj : j.at("layers")) {
    const auto in = lj.at("in").get<Eigen::Index>();
    const auto out = lj.at("out").get<Eigen::Index>();
    if (in != prev) {
      throw ConfigError("layer widths in model document do not chain");
    }
    DenseLayer layer;
    layer.activation = activation_from_string(lj.at("activation"));
    const auto w = lj.at("weights").get<std::vector<double>>();
    const auto b = lj.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != in * out ||
        static_cast<Eigen::Index>(b.size()) != out) {
      throw ConfigError("weight/bias lengths do not match layer dims");
    }
    layer.weights.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) {
        layer.weights(r, c) = w[static_cast<std::size_t>(r * in + c)];
      }
    }
    layer.bias = Eigen::Map<const Eigen::VectorXd>(
        b.data(), static_cast<Eigen::Index>(b.size()));
    model.layers.push_back(std::move(layer));
    prev = out;
  }
  if (model.layers.empty()) {
    throw ConfigError("model document has no layers");
  }
  return model;
}

}  // namespace alime

#include "alime/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "alime/errors.hpp"
#include "alime/util.hpp"

namespace alime {

Eigen::VectorXd rowwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                  const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (rows.cols() != x.size()) {
    throw ShapeError("rowwise_distances: row width " +
                     std::to_string(rows.cols()) + " vs point length " +
                     std::to_string(x.size()));
  }
  return (rows.rowwise() - x.transpose()).rowwise().norm();
}

double exp_kernel(double distance, double scale) {
  if (!(scale > 0)) {
    throw ConfigError("kernel scale must be positive");
  }
  return std::exp(-distance / scale);
}

KernelWeights kernel_weights(const Eigen::VectorXd& distances, double scale) {
  if (!(scale > 0)) {
    throw ConfigError("kernel scale must be positive");
  }
  KernelWeights kw;
  kw.distances = distances;
  kw.weights = (-distances.array() / scale).exp();
  return kw;
}

Selection select_n_closest(const SamplePool& pool,
                           const Eigen::Ref<const Eigen::VectorXd>& x_embedding,
                           Eigen::Index n) {
  if (!pool.embeddings.has_value()) {
    throw ConfigError("select_n_closest: pool has no embeddings attached");
  }
  const Eigen::MatrixXd& emb = *pool.embeddings;
  if (emb.cols() != x_embedding.size()) {
    throw ShapeError("select_n_closest: embedding width " +
                     std::to_string(emb.cols()) + " vs query length " +
                     std::to_string(x_embedding.size()));
  }
  if (n < 1 || n > pool.size()) {
    throw ConfigError("select_n_closest: n = " + std::to_string(n) +
                      " outside [1, " + std::to_string(pool.size()) + "]");
  }
  const Eigen::VectorXd dist = rowwise_distances(emb, x_embedding);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(pool.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto closer = [&dist](Eigen::Index a, Eigen::Index b) {
    if (dist(a) != dist(b)) return dist(a) < dist(b);
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + n, order.end(), closer);
  order.resize(static_cast<std::size_t>(n));

  Selection sel;
  sel.indices = std::move(order);
  sel.distances.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sel.distances(i) = dist(sel.indices[static_cast<std::size_t>(i)]);
  }
  return sel;
}

RidgeFit weighted_ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::VectorXd>& w,
                            double alpha) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (y.size() != n || w.size() != n) {
    throw ShapeError("weighted_ridge_fit: X has " + std::to_string(n) +
                     " rows but y has " + std::to_string(y.size()) +
                     " and w has " + std::to_string(w.size()));
  }
  if (n < 2) {
    throw InsufficientDataError("weighted_ridge_fit: need at least 2 points");
  }
  if (alpha < 0) {
    throw ConfigError("ridge alpha must be non-negative");
  }
  if (!(w.array() > 0).all()) {
    throw ConfigError("weighted_ridge_fit: weights must be positive");
  }
  const double w_sum = w.sum();
  if (!std::isfinite(w_sum) || !(w_sum > 0)) {
    throw NumericOverflowError("weighted_ridge_fit: weight sum is not finite");
  }

  const Eigen::RowVectorXd x_mean = (w.transpose() * X) / w_sum;
  const double y_mean = w.dot(y) / w_sum;
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd gram = Xc.transpose() * (w.asDiagonal() * Xc);
  gram.diagonal().array() += alpha;
  const Eigen::VectorXd rhs = Xc.transpose() * (w.asDiagonal() * yc);

  RidgeFit fit;
  if (alpha > 0) {
    fit.coefficients = gram.ldlt().solve(rhs);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) {
      throw SingularFitError(
          "weighted_ridge_fit: singular system with alpha = 0");
    }
    fit.coefficients = lu.solve(rhs);
  }
  if (!fit.coefficients.allFinite()) {
    throw NumericOverflowError("weighted_ridge_fit: non-finite coefficients");
  }
  fit.intercept = y_mean - x_mean.dot(fit.coefficients);
  (void)k;
  return fit;
}

Explanation fit_local_surrogate(const BlackBoxPredictor& f,
                                const Eigen::Ref<const Eigen::VectorXd>& x,
                                const Eigen::Ref<const Eigen::MatrixXd>& points,
                                const Eigen::VectorXd& distances, double alpha,
                                double kernel_scale, std::string method,
                                std::uint64_t seed,
                                std::vector<std::string> feature_names) {
  if (points.rows() != distances.size()) {
    throw ShapeError("fit_local_surrogate: " + std::to_string(points.rows()) +
                     " points vs " + std::to_string(distances.size()) +
                     " distances");
  }
  if (points.cols() != x.size()) {
    throw ShapeError("fit_local_surrogate: point width " +
                     std::to_string(points.cols()) + " vs instance length " +
                     std::to_string(x.size()));
  }
  const KernelWeights kw = kernel_weights(distances, kernel_scale);
  const Eigen::VectorXd targets = predict_proba_batch(f, points);
  const RidgeFit fit = weighted_ridge_fit(points, targets, kw.weights, alpha);

  Explanation e;
  e.instance = x;
  e.coefficients = fit.coefficients;
  e.intercept = fit.intercept;
  e.method = std::move(method);
  e.n_points = points.rows();
  e.seed = seed;
  e.feature_names = std::move(feature_names);

  const Eigen::VectorXd predicted =
      (points * fit.coefficients).array() + fit.intercept;
  const Eigen::ArrayXd resid = (targets - predicted).array();
  const double w_sum = kw.weights.sum();
  const double y_mean = kw.weights.dot(targets) / w_sum;
  const double ss_res = (kw.weights.array() * resid.square()).sum();
  const double ss_tot =
      (kw.weights.array() * (targets.array() - y_mean).square()).sum();
  if (ss_tot > 0) {
    e.local_r2 = 1.0 - ss_res / ss_tot;
  } else {
    // Constant targets: perfect iff the residuals vanish too.
    e.local_r2 = ss_res <= 1e-24 ? 1.0 : 0.0;
  }

  const double g_at_x = fit.coefficients.dot(x) + fit.intercept;
  const double f_at_x = predict_proba(f, x);
  e.local_mse = (g_at_x - f_at_x) * (g_at_x - f_at_x);
  return e;
}

Explanation explain_lime(const BlackBoxPredictor& f,
                         const Eigen::Ref<const Eigen::VectorXd>& x,
                         Eigen::Index n, double alpha, std::uint64_t seed,
                         double kernel_scale,
                         std::vector<std::string> feature_names) {
  if (x.size() != f.model.input_dim) {
    throw ShapeError("explain_lime: instance length " +
                     std::to_string(x.size()) + " vs model input " +
                     std::to_string(f.model.input_dim));
  }
  const SamplePool pool = sample_pool(x.size(), n, seed);
  const Eigen::VectorXd dist = rowwise_distances(pool.points, x);
  return fit_local_surrogate(f, x, pool.points, dist, alpha, kernel_scale,
                             "lime", seed, std::move(feature_names));
}

Explanation explain_alime(const BlackBoxPredictor& f,
                          const DenoisingAutoencoder& ae,
                          const SamplePool& pool,
                          const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Index n, double alpha, double kernel_scale,
                          std::vector<std::string> feature_names) {
  if (x.size() != f.model.input_dim) {
    throw ShapeError("explain_alime: instance length " +
                     std::to_string(x.size()) + " vs model input " +
                     std::to_string(f.model.input_dim));
  }
  if (pool.points.cols() != x.size()) {
    throw ShapeError("explain_alime: pool width " +
                     std::to_string(pool.points.cols()) +
                     " vs instance length " + std::to_string(x.size()));
  }
  if (!pool.embeddings.has_value()) {
    throw ConfigError("explain_alime: pool has no embeddings attached");
  }
  if (pool.ae_fingerprint != autoencoder_fingerprint(ae)) {
    throw ConfigError(
        "explain_alime: pool embeddings were built with a different "
        "autoencoder");
  }
  const Eigen::VectorXd x_emb = embed(ae, x);
  const Selection sel = select_n_closest(pool, x_emb, n);

  Eigen::MatrixXd points(n, pool.points.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    points.row(i) = pool.points.row(sel.indices[static_cast<std::size_t>(i)]);
  }
  return fit_local_surrogate(f, x, points, sel.distances, alpha, kernel_scale,
                             "alime", pool.seed, std::move(feature_names));
}

Json explanation_to_json(const Explanation& e, double alpha) {
  Json j;
  j["format"] = "alime-explanation";
  j["version"] = 1;
  j["method"] = e.method;
  j["n_points"] = e.n_points;
  j["alpha"] = alpha;
  j["seed"] = e.seed;
  j["instance"] = Json::array();
  for (Eigen::Index i = 0; i < e.instance.size(); ++i) {
    j["instance"].push_back(e.instance(i));
  }
  j["feature_names"] = e.feature_names;
  j["coefficients"] = Json::array();
  for (Eigen::Index i = 0; i < e.coefficients.size(); ++i) {
    j["coefficients"].push_back(e.coefficients(i));
  }
  j["intercept"] = e.intercept;
  j["local_r2"] = e.local_r2;
  j["local_mse"] = e.local_mse;
  return j;
}

std::string explanation_bar_csv(const Explanation& e) {
  std::vector<Eigen::Index> order(
      static_cast<std::size_t>(e.coefficients.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&e](Eigen::Index a, Eigen::Index b) {
                     return std::abs(e.coefficients(a)) >
                            std::abs(e.coefficients(b));
                   });
  std::string csv = "feature,coefficient,sign\n";
  for (const Eigen::Index i : order) {
    const std::string name =
        static_cast<std::size_t>(i) < e.feature_names.size()
            ? e.feature_names[static_cast<std::size_t>(i)]
            : "f" + std::to_string(i);
    const double c = e.coefficients(i);
    csv += name + "," + format_double(c) + "," +
           (c >= 0 ? "positive" : "negative") + "\n";
  }
  return csv;
}

}  // namespace alime

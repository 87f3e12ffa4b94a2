#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "alime/errors.hpp"
#include "alime/explain.hpp"
#include "alime/models.hpp"
#include "alime/neural.hpp"
#include "alime/rng.hpp"
#include "alime/sampling.hpp"
#include "oracles.hpp"

using namespace alime;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Small random relu+softmax classifier over k inputs.
BlackBoxPredictor random_predictor(Eigen::Index k, std::uint64_t seed) {
  BlackBoxPredictor f;
  f.model = init_model({k, 6, 2}, {Activation::kRelu, Activation::kSoftmax},
                       seed);
  f.positive_class_index = 1;
  return f;
}

// Autoencoder whose encoder and decoder are exact identity maps.
DenoisingAutoencoder identity_ae(Eigen::Index k) {
  DenoisingAutoencoder ae;
  DenseLayer id;
  id.weights = Eigen::MatrixXd::Identity(k, k);
  id.bias = Eigen::VectorXd::Zero(k);
  id.activation = Activation::kIdentity;
  ae.encoder.layers = {id};
  ae.encoder.input_dim = k;
  ae.decoder.layers = {id};
  ae.decoder.input_dim = k;
  ae.latent_dim = k;
  ae.noise_sigma = 0.1;
  return ae;
}

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("exponential kernel fixes the unit scale") {
  CHECK(exp_kernel(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exp_kernel(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp_kernel(2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-15));
  CHECK(exp_kernel(1.0, 2.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("kernel weights stay in (0,1] and align with distances") {
  Rng rng(3);
  Eigen::VectorXd d(40);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::abs(rng.normal()) * 3;
  d[7] = 0.0;
  const KernelWeights kw = kernel_weights(d);
  REQUIRE(kw.weights.size() == d.size());
  CHECK((kw.distances - d).lpNorm<Eigen::Infinity>() == 0.0);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    CHECK(kw.weights[i] > 0.0);
    CHECK(kw.weights[i] <= 1.0);
    CHECK(kw.weights[i] == doctest::Approx(std::exp(-d[i])).epsilon(1e-15));
  }
  CHECK(kw.weights[7] == 1.0);
}

TEST_CASE("rowwise distances match the scalar helper") {
  Rng rng(5);
  const Eigen::MatrixXd rows = random_matrix(rng, 25, 6);
  const Eigen::VectorXd x = random_vector(rng, 6);
  const Eigen::VectorXd d = rowwise_distances(rows, x);
  REQUIRE(d.size() == 25);
  for (Eigen::Index i = 0; i < 25; ++i) {
    CHECK(d[i] == doctest::Approx(euclidean_distance(
                      rows.row(i).transpose(), x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(euclidean_distance(x, random_vector(rng, 5)), ShapeError);
}

TEST_CASE("weighted ridge agrees with the independent solver on 100 systems") {
  Rng rng(11);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(rng.below(7));
    const Eigen::Index n = 3 * k + static_cast<Eigen::Index>(rng.below(60));
    const Eigen::MatrixXd X = random_matrix(rng, n, k);
    const Eigen::VectorXd beta_true = random_vector(rng, k);
    Eigen::VectorXd y = X * beta_true;
    for (Eigen::Index i = 0; i < n; ++i) y[i] += 0.3 * rng.normal();
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = 0.05 + rng.uniform01();
    const double alphas[] = {0.0, 0.5, 1.0, 10.0};
    const double alpha = alphas[trial % 4];

    const RidgeFit fit = weighted_ridge_fit(X, y, w, alpha);
    const auto ref = oracle::weighted_ridge(X, y, w, alpha);
    REQUIRE(fit.coefficients.size() == k);
    CHECK((fit.coefficients - ref.beta).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(std::abs(fit.intercept - ref.intercept) < 1e-8);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("unweighted unregularized fit recovers an exact linear map") {
  Rng rng(13);
  const Eigen::MatrixXd X = random_matrix(rng, 60, 5);
  Eigen::VectorXd beta(5);
  beta << 1.5, -2.0, 0.25, 0.0, 3.0;
  const double b0 = -0.75;
  const Eigen::VectorXd y = (X * beta).array() + b0;
  const RidgeFit fit =
      weighted_ridge_fit(X, y, Eigen::VectorXd::Ones(60), 0.0);
  CHECK((fit.coefficients - beta).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(std::abs(fit.intercept - b0) < 1e-8);
}

TEST_CASE("huge regularization shrinks slopes but spares the intercept") {
  Rng rng(17);
  const Eigen::MatrixXd X = random_matrix(rng, 80, 4);
  const Eigen::VectorXd y = random_vector(rng, 80);
  Eigen::VectorXd w(80);
  for (Eigen::Index i = 0; i < 80; ++i) w[i] = 0.1 + rng.uniform01();
  const RidgeFit fit = weighted_ridge_fit(X, y, w, 1e8);
  CHECK(fit.coefficients.lpNorm<Eigen::Infinity>() < 1e-5);
  const double weighted_mean = w.dot(y) / w.sum();
  CHECK(fit.intercept == doctest::Approx(weighted_mean).epsilon(1e-4));
}

TEST_CASE("unregularized fit on a singular system throws") {
  Eigen::MatrixXd X(10, 2);
  for (Eigen::Index i = 0; i < 10; ++i) {
    X(i, 0) = static_cast<double>(i);
    X(i, 1) = 2.0 * static_cast<double>(i);  // exact duplicate direction
  }
  Rng rng(19);
  const Eigen::VectorXd y = random_vector(rng, 10);
  CHECK_THROWS_AS(
      weighted_ridge_fit(X, y, Eigen::VectorXd::Ones(10), 0.0),
      SingularFitError);
  CHECK_NOTHROW(weighted_ridge_fit(X, y, Eigen::VectorXd::Ones(10), 1.0));
}

TEST_CASE("nearest selection matches a full sort on 1000 queries") {
  Rng rng(23);
  SamplePool pool = sample_pool(4, 300, 31);
  // Latent space: three dimensions with duplicated rows to force ties.
  Eigen::MatrixXd z = random_matrix(rng, 300, 3);
  for (int dup = 0; dup < 30; ++dup) {
    const Eigen::Index a = static_cast<Eigen::Index>(rng.below(300));
    const Eigen::Index b = static_cast<Eigen::Index>(rng.below(300));
    z.row(a) = z.row(b);
  }
  pool.embeddings = z;
  int checked = 0;
  for (int q = 0; q < 1000; ++q) {
    Eigen::VectorXd xq;
    if (q % 5 == 0) {
      // Query sitting exactly on a duplicated pool point: distance ties.
      xq = z.row(static_cast<Eigen::Index>(rng.below(300)));
    } else {
      xq = random_vector(rng, 3);
    }
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(300));
    const Selection sel = select_n_closest(pool, xq, n);
    const Eigen::VectorXd dist = rowwise_distances(z, xq);
    const std::vector<Eigen::Index> ref = oracle::n_closest(dist, n);
    REQUIRE(sel.indices.size() == static_cast<std::size_t>(n));
    CHECK(sel.indices == ref);
    bool aligned = true;
    for (std::size_t i = 0; i < sel.indices.size(); ++i) {
      aligned = aligned && sel.distances[static_cast<Eigen::Index>(i)] ==
                               dist[sel.indices[i]];
    }
    CHECK(aligned);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("selection validates its inputs") {
  SamplePool pool = sample_pool(4, 50, 37);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(select_n_closest(pool, x, 10), ConfigError);  // no embeddings
  pool.embeddings = pool.points;
  CHECK_THROWS_AS(select_n_closest(pool, x, 51), ConfigError);  // n too large
  CHECK_NOTHROW(select_n_closest(pool, x, 50));
}

TEST_CASE("identity-encoder pipelines coincide when n equals the pool size") {
  // With an identity encoder, latent distances equal raw distances; selecting
  // the whole pool must reduce the adjacent pipeline to the plain one.
  const Eigen::Index k = 10;
  const DenoisingAutoencoder ae = identity_ae(k);
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const BlackBoxPredictor f = random_predictor(k, 100 + trial);
    const Eigen::VectorXd x = random_vector(rng, k);
    const std::uint64_t seed = 900 + trial;
    const Eigen::Index n = 150;
    const Explanation lime = explain_lime(f, x, n, 1.0, seed);
    const SamplePool pool = attach_embeddings(sample_pool(k, n, seed), ae);
    const Explanation alime = explain_alime(f, ae, pool, x, n, 1.0);
    CHECK((lime.coefficients - alime.coefficients).lpNorm<Eigen::Infinity>() <
          1e-10);
    CHECK(std::abs(lime.intercept - alime.intercept) < 1e-10);
    CHECK(std::abs(lime.local_r2 - alime.local_r2) < 1e-10);
    CHECK(std::abs(lime.local_mse - alime.local_mse) < 1e-10);
  }
}

TEST_CASE("lime is reproducible per seed and sensitive to it") {
  const BlackBoxPredictor f = random_predictor(6, 7);
  Rng rng(43);
  const Eigen::VectorXd x = random_vector(rng, 6);
  const Explanation a = explain_lime(f, x, 200, 1.0, 77);
  const Explanation b = explain_lime(f, x, 200, 1.0, 77);
  const Explanation c = explain_lime(f, x, 200, 1.0, 78);
  CHECK((a.coefficients - b.coefficients).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.intercept == b.intercept);
  CHECK((a.coefficients - c.coefficients).lpNorm<Eigen::Infinity>() > 0.0);
  CHECK(a.method == "lime");
  CHECK(a.n_points == 200);
  CHECK(a.seed == 77);
}

TEST_CASE("alime is a deterministic function of pool and autoencoder") {
  const Eigen::Index k = 6;
  const BlackBoxPredictor f = random_predictor(k, 7);
  const DenoisingAutoencoder ae = identity_ae(k);
  const SamplePool pool = attach_embeddings(sample_pool(k, 500, 17), ae);
  Rng rng(47);
  const Eigen::VectorXd x = random_vector(rng, k);
  const Explanation a = explain_alime(f, ae, pool, x, 120, 1.0);
  const Explanation b = explain_alime(f, ae, pool, x, 120, 1.0);
  CHECK((a.coefficients - b.coefficients).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(a.intercept == b.intercept);
  CHECK(a.method == "alime");
  CHECK(a.n_points == 120);
}

TEST_CASE("local mse is the squared surrogate error at the instance") {
  const Eigen::Index k = 5;
  const BlackBoxPredictor f = random_predictor(k, 9);
  Rng rng(53);
  const Eigen::VectorXd x = random_vector(rng, k);
  const Explanation e = explain_lime(f, x, 300, 1.0, 99);
  const double g_at_x = e.coefficients.dot(x) + e.intercept;
  const double err = g_at_x - predict_proba(f, x);
  CHECK(e.local_mse == doctest::Approx(err * err).epsilon(1e-12));
  CHECK(e.local_r2 <= 1.0 + 1e-12);
}

TEST_CASE("explanation json and bar csv carry the fitted story") {
  const Eigen::Index k = 3;
  const BlackBoxPredictor f = random_predictor(k, 15);
  Rng rng(59);
  const Eigen::VectorXd x = random_vector(rng, k);
  const Explanation e =
      explain_lime(f, x, 100, 1.0, 5, 1.0, {"alpha_f", "beta_f", "gamma_f"});
  const Json j = explanation_to_json(e, 1.0);
  CHECK(j.at("method").get<std::string>() == "lime");
  CHECK(j.at("coefficients").size() == 3);

  const std::string csv = explanation_bar_csv(e);
  CHECK(csv.rfind("feature,coefficient,sign\n", 0) == 0);
  // First data row names the largest-magnitude coefficient.
  Eigen::Index top;
  e.coefficients.cwiseAbs().maxCoeff(&top);
  const std::string names[] = {"alpha_f", "beta_f", "gamma_f"};
  const std::string first_row = csv.substr(csv.find('\n') + 1);
  CHECK(first_row.rfind(names[top] + ",", 0) == 0);
  // One header plus one row per feature.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

}  // TEST_SUITE

#include "alime/evaluation.hpp"

#include <cmath>
#include <utility>

#include "alime/errors.hpp"
#include "alime/rng.hpp"
#include "alime/util.hpp"

namespace alime {

namespace {

void check_n_values(const std::vector<Eigen::Index>& n_values) {
  if (n_values.empty()) {
    throw ConfigError("sweep needs at least one n value");
  }
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 2) {
      throw ConfigError("sweep n values must be at least 2, got " +
                        std::to_string(n_values[i]));
    }
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw ConfigError("sweep n values must be strictly increasing");
    }
  }
}

constexpr std::uint64_t kStabilityStride = 1000003;

}  // namespace

std::string method_to_string(Method m) {
  return m == Method::kLime ? "lime" : "alime";
}

Method method_from_string(const std::string& s) {
  if (s == "lime") return Method::kLime;
  if (s == "alime") return Method::kAlime;
  throw ConfigError("unknown method '" + s + "' (expected lime or alime)");
}

FidelityReport fidelity_sweep(const BlackBoxPredictor& f,
                              const DenoisingAutoencoder* ae,
                              const SamplePool* pool,
                              const TabularDataset& data, Method method,
                              const std::vector<Eigen::Index>& n_values,
                              double alpha, std::uint64_t seed,
                              double kernel_scale) {
  check_n_values(n_values);
  if (method == Method::kAlime) {
    if (ae == nullptr || pool == nullptr) {
      throw ConfigError("fidelity_sweep: alime needs an autoencoder and pool");
    }
    if (n_values.back() > pool->size()) {
      throw ConfigError("fidelity_sweep: n = " +
                        std::to_string(n_values.back()) +
                        " exceeds pool size " + std::to_string(pool->size()));
    }
  }
  const Eigen::MatrixXd test = data.test_features();
  const Eigen::Index n_test = test.rows();
  if (n_test < 1) {
    throw InsufficientDataError("fidelity_sweep: empty test set");
  }

  FidelityReport report;
  report.dataset = data.name;
  report.method = method_to_string(method);
  report.n_test = n_test;
  report.seed = seed;
  report.alpha = alpha;
  report.kernel_scale = kernel_scale;
  if (method == Method::kAlime) report.pool_seed = pool->seed;

  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    const Eigen::Index n = n_values[ni];
    double sum_r2 = 0;
    double sum_mse = 0;
    for (Eigen::Index t = 0; t < n_test; ++t) {
      const Eigen::VectorXd x = test.row(t);
      Explanation e;
      if (method == Method::kLime) {
        const std::uint64_t es =
            seed + static_cast<std::uint64_t>(ni) *
                       static_cast<std::uint64_t>(n_test) +
            static_cast<std::uint64_t>(t);
        e = explain_lime(f, x, n, alpha, es, kernel_scale);
      } else {
        e = explain_alime(f, *ae, *pool, x, n, alpha, kernel_scale);
      }
      sum_r2 += e.local_r2;
      sum_mse += e.local_mse;
    }
    FidelityPoint p;
    p.n = n;
    p.mean_r2 = sum_r2 / static_cast<double>(n_test);
    p.mean_mse = sum_mse / static_cast<double>(n_test);
    report.sweep.push_back(p);
  }
  return report;
}

Eigen::MatrixXd stability_run(const Explainer& explain_fn,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              int iterations, std::uint64_t base_seed) {
  if (iterations < 2) {
    throw ConfigError("stability_run: need at least 2 iterations");
  }
  Eigen::MatrixXd coeffs(iterations, x.size());
  for (int i = 0; i < iterations; ++i) {
    const Eigen::VectorXd c =
        explain_fn(x, base_seed + static_cast<std::uint64_t>(i));
    if (c.size() != x.size()) {
      throw ShapeError("stability_run: explainer returned " +
                       std::to_string(c.size()) + " coefficients for " +
                       std::to_string(x.size()) + " features");
    }
    coeffs.row(i) = c.array().abs();
  }
  return coeffs;
}

std::pair<double, double> stability_metrics(
    const Eigen::Ref<const Eigen::MatrixXd>& coeffs) {
  const Eigen::Index iters = coeffs.rows();
  const Eigen::Index k = coeffs.cols();
  if (iters < 2) {
    throw ConfigError("stability_metrics: need at least 2 iterations");
  }
  if (k < 1) {
    throw ConfigError("stability_metrics: need at least 1 feature");
  }
  double sum_std = 0;
  double sum_cv = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mean = coeffs.col(j).mean();
    const double ss = (coeffs.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(iters - 1));
    sum_std += sd;
    if (mean != 0) sum_cv += sd / mean;
  }
  return {sum_std / static_cast<double>(k), sum_cv / static_cast<double>(k)};
}

StabilityReport stability_sweep(const BlackBoxPredictor& f,
                                const DenoisingAutoencoder* ae,
                                const TabularDataset& data, Method method,
                                const std::vector<Eigen::Index>& n_values,
                                int iterations, double alpha,
                                Eigen::Index pool_m, std::uint64_t seed,
                                double kernel_scale) {
  check_n_values(n_values);
  if (iterations < 2) {
    throw ConfigError("stability_sweep: need at least 2 iterations");
  }
  if (method == Method::kAlime) {
    if (ae == nullptr) {
      throw ConfigError("stability_sweep: alime needs an autoencoder");
    }
    if (n_values.back() > pool_m) {
      throw ConfigError("stability_sweep: n = " +
                        std::to_string(n_values.back()) +
                        " exceeds pool size " + std::to_string(pool_m));
    }
  }
  if (data.test_idx.empty()) {
    throw InsufficientDataError("stability_sweep: empty test set");
  }

  Rng pick(seed);
  const std::uint64_t pos =
      pick.below(static_cast<std::uint64_t>(data.test_idx.size()));
  const Eigen::Index test_position = static_cast<Eigen::Index>(pos);
  const Eigen::Index row_id = data.test_idx[pos];
  const Eigen::VectorXd x = data.features.row(row_id);
  const Eigen::Index k = x.size();

  StabilityReport report;
  report.dataset = data.name;
  report.method = method_to_string(method);
  report.instance_index = row_id;
  report.instance_test_position = test_position;
  report.iterations = iterations;
  report.seed = seed;
  report.alpha = alpha;
  report.kernel_scale = kernel_scale;
  if (method == Method::kAlime) report.pool_m = pool_m;

  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    const Eigen::Index n = n_values[ni];
    Explainer explain_fn;
    if (method == Method::kLime) {
      explain_fn = [&f, n, alpha, kernel_scale](
                       const Eigen::Ref<const Eigen::VectorXd>& xi,
                       std::uint64_t s) {
        return explain_lime(f, xi, n, alpha, s, kernel_scale).coefficients;
      };
    } else {
      explain_fn = [&f, ae, n, alpha, kernel_scale, pool_m, k](
                       const Eigen::Ref<const Eigen::VectorXd>& xi,
                       std::uint64_t s) {
        const SamplePool pool = attach_embeddings(sample_pool(k, pool_m, s), *ae);
        return explain_alime(f, *ae, pool, xi, n, alpha, kernel_scale)
            .coefficients;
      };
    }
    const std::uint64_t base =
        seed + static_cast<std::uint64_t>(ni) * kStabilityStride;
    const Eigen::MatrixXd coeffs = stability_run(explain_fn, x, iterations, base);
    const auto [mean_std, mean_cv] = stability_metrics(coeffs);
    StabilityPoint p;
    p.n = n;
    p.mean_std = mean_std;
    p.mean_cv = mean_cv;
    report.sweep.push_back(p);
  }
  return report;
}

Json fidelity_report_to_json(const FidelityReport& r) {
  Json j;
  j["format"] = "alime-fidelity-report";
  j["version"] = 1;
  j["dataset"] = r.dataset;
  j["method"] = r.method;
  j["n_test"] = r.n_test;
  j["alpha"] = r.alpha;
  j["kernel_scale"] = r.kernel_scale;
  j["r2_weighting"] = "kernel-weighted on fit points";
  Json seeds;
  seeds["base"] = r.seed;
  seeds["scheme"] = "lime explanation seed = base + n_index * n_test + "
                    "instance_position; alime reuses the shared pool";
  if (r.pool_seed.has_value()) {
    seeds["pool"] = *r.pool_seed;
  } else {
    seeds["pool"] = nullptr;
  }
  j["seeds"] = std::move(seeds);
  j["sweep"] = Json::array();
  for (const FidelityPoint& p : r.sweep) {
    Json e;
    e["n"] = p.n;
    e["mean_r2"] = p.mean_r2;
    e["mean_mse"] = p.mean_mse;
    j["sweep"].push_back(std::move(e));
  }
  return j;
}

Json stability_report_to_json(const StabilityReport& r) {
  Json j;
  j["format"] = "alime-stability-report";
  j["version"] = 1;
  j["dataset"] = r.dataset;
  j["method"] = r.method;
  j["instance_index"] = r.instance_index;
  j["instance_test_position"] = r.instance_test_position;
  j["iterations"] = r.iterations;
  j["alpha"] = r.alpha;
  j["kernel_scale"] = r.kernel_scale;
  if (r.pool_m.has_value()) {
    j["pool_m"] = *r.pool_m;
  } else {
    j["pool_m"] = nullptr;
  }
  Json seeds;
  seeds["base"] = r.seed;
  seeds["scheme"] =
      "per-n base = seed + n_index * 1000003; iteration i adds i";
  j["seeds"] = std::move(seeds);
  j["sweep"] = Json::array();
  for (const StabilityPoint& p : r.sweep) {
    Json e;
    e["n"] = p.n;
    e["mean_std"] = p.mean_std;
    e["mean_cv"] = p.mean_cv;
    j["sweep"].push_back(std::move(e));
  }
  return j;
}

namespace {

std::string csv_row(const std::string& dataset, const std::string& method,
                    Eigen::Index n, const char* metric, double value) {
  return dataset + "," + method + "," + std::to_string(n) + "," + metric +
         "," + format_double(value) + "\n";
}

}  // namespace

std::string fidelity_report_csv(const FidelityReport& r) {
  std::string csv = "dataset,method,n,metric,value\n";
  for (const FidelityPoint& p : r.sweep) {
    csv += csv_row(r.dataset, r.method, p.n, "mean_r2", p.mean_r2);
    csv += csv_row(r.dataset, r.method, p.n, "mean_mse", p.mean_mse);
  }
  return csv;
}

std::string stability_report_csv(const StabilityReport& r) {
  std::string csv = "dataset,method,n,metric,value\n";
  for (const StabilityPoint& p : r.sweep) {
    csv += csv_row(r.dataset, r.method, p.n, "mean_std", p.mean_std);
    csv += csv_row(r.dataset, r.method, p.n, "mean_cv", p.mean_cv);
  }
  return csv;
}

}  // namespace alime

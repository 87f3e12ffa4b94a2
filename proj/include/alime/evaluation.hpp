#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alime/dataset.hpp"
#include "alime/explain.hpp"
#include "alime/models.hpp"
#include "alime/sampling.hpp"

namespace alime {

enum class Method { kLime, kAlime };

std::string method_to_string(Method m);
Method method_from_string(const std::string& s);

struct FidelityPoint {
  Eigen::Index n = 0;
  double mean_r2 = 0;
  double mean_mse = 0;
};

// Mean local R^2 / local MSE over the whole test set, per pool size n.
struct FidelityReport {
  std::string dataset;
  std::string method;
  std::vector<FidelityPoint> sweep;  // n strictly increasing
  Eigen::Index n_test = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> pool_seed;  // alime only
  double alpha = 1.0;
  double kernel_scale = 1.0;
};

struct StabilityPoint {
  Eigen::Index n = 0;
  double mean_std = 0;
  double mean_cv = 0;
};

// Coefficient spread over repeated explanations of one seeded-random test
// instance, per pool size n.
struct StabilityReport {
  std::string dataset;
  std::string method;
  Eigen::Index instance_index = 0;          // dataset row id
  Eigen::Index instance_test_position = 0;  // position within test_idx
  std::vector<StabilityPoint> sweep;
  int iterations = 10;
  std::uint64_t seed = 0;
  std::optional<Eigen::Index> pool_m;  // alime only
  double alpha = 1.0;
  double kernel_scale = 1.0;
};

// For LIME pass ae = nullptr, pool = nullptr. For ALIME both are required
// and the pool must carry embeddings; the pool is shared across instances.
// LIME redraws its pool per explanation with seed
// `seed + n_index * n_test + instance_position`.
FidelityReport fidelity_sweep(const BlackBoxPredictor& f,
                              const DenoisingAutoencoder* ae,
                              const SamplePool* pool,
                              const TabularDataset& data, Method method,
                              const std::vector<Eigen::Index>& n_values,
                              double alpha, std::uint64_t seed,
                              double kernel_scale = 1.0);

// One explainer invocation per iteration; iteration i uses base_seed + i.
// Rows hold the absolute values of the returned coefficients.
using Explainer = std::function<Eigen::VectorXd(
    const Eigen::Ref<const Eigen::VectorXd>& x, std::uint64_t seed)>;

Eigen::MatrixXd stability_run(const Explainer& explain_fn,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              int iterations, std::uint64_t base_seed);

// Per-feature sample std (divisor I-1) averaged over features, and the
// per-feature std/mean ratio averaged over features; a zero-mean feature
// contributes 0 to the ratio.
std::pair<double, double> stability_metrics(
    const Eigen::Ref<const Eigen::MatrixXd>& coeffs);

// One seeded-random test instance; per n, `iterations` repeated
// explanations with per-n base seed `seed + n_index * 1000003`. ALIME
// redraws its shared pool of size pool_m (and re-embeds) every iteration.
StabilityReport stability_sweep(const BlackBoxPredictor& f,
                                const DenoisingAutoencoder* ae,
                                const TabularDataset& data, Method method,
                                const std::vector<Eigen::Index>& n_values,
                                int iterations, double alpha,
                                Eigen::Index pool_m, std::uint64_t seed,
                                double kernel_scale = 1.0);

Json fidelity_report_to_json(const FidelityReport& r);
Json stability_report_to_json(const StabilityReport& r);
// Flat (dataset, method, n, metric, value) rows for plotting.
std::string fidelity_report_csv(const FidelityReport& r);
std::string stability_report_csv(const StabilityReport& r);

}  // namespace alime

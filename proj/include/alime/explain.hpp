#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "alime/models.hpp"
#include "alime/sampling.hpp"

namespace alime {

// Distances from the explained instance and the kernel weights exp(-d/s)
// derived from them. Weights always lie in (0, 1].
struct KernelWeights {
  Eigen::VectorXd distances;
  Eigen::VectorXd weights;
};

// Fitted local linear surrogate plus its provenance.
struct Explanation {
  Eigen::VectorXd instance;      // standardized, length K
  Eigen::VectorXd coefficients;  // length K
  double intercept = 0;
  double local_r2 = 0;   // weighted R^2 on the surrogate's own fit points
  double local_mse = 0;  // (surrogate(x) - blackbox(x))^2 at the instance
  std::string method;    // "lime" | "alime"
  Eigen::Index n_points = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;
};

template <typename DerivedA, typename DerivedB>
double euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                          const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw ShapeError("euclidean_distance: vector lengths differ");
  }
  double ss = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = a(i) - b(i);
    ss += d * d;
  }
  return std::sqrt(ss);
}

// Distance of every row to x.
Eigen::VectorXd rowwise_distances(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                  const Eigen::Ref<const Eigen::VectorXd>& x);

// exp(-d / scale); scale 1 is the plain exponential kernel.
double exp_kernel(double distance, double scale = 1.0);

KernelWeights kernel_weights(const Eigen::VectorXd& distances,
                             double scale = 1.0);

struct Selection {
  std::vector<Eigen::Index> indices;  // ascending (distance, index) order
  Eigen::VectorXd distances;          // aligned with indices
};

// The n pool indices nearest to x_embedding in latent space, ties broken by
// lower index. Requires attached embeddings and n <= pool size.
Selection select_n_closest(const SamplePool& pool,
                           const Eigen::Ref<const Eigen::VectorXd>& x_embedding,
                           Eigen::Index n);

struct RidgeFit {
  Eigen::VectorXd coefficients;
  double intercept = 0;
};

// Minimizes sum_i w_i (y_i - b.x_i - b0)^2 + alpha * |b|^2 with the
// intercept unpenalized, via weighted normal equations on centered data.
// alpha = 0 on a singular system throws SingularFitError.
RidgeFit weighted_ridge_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::VectorXd>& w,
                            double alpha);

// Shared back half of both explainers: black-box targets on the given
// points, kernel weights from the given distances, weighted ridge fit,
// local R^2 and instance MSE.
Explanation fit_local_surrogate(const BlackBoxPredictor& f,
                                const Eigen::Ref<const Eigen::VectorXd>& x,
                                const Eigen::Ref<const Eigen::MatrixXd>& points,
                                const Eigen::VectorXd& distances, double alpha,
                                double kernel_scale, std::string method,
                                std::uint64_t seed,
                                std::vector<std::string> feature_names);

// LIME: a fresh pool of n Gaussian points per call (seeded), distances in
// the raw standardized space.
Explanation explain_lime(const BlackBoxPredictor& f,
                         const Eigen::Ref<const Eigen::VectorXd>& x,
                         Eigen::Index n, double alpha, std::uint64_t seed,
                         double kernel_scale = 1.0,
                         std::vector<std::string> feature_names = {});

// ALIME: the n pool points closest to x in latent space, weighted by their
// latent distances. The pool must carry embeddings attached with this ae.
Explanation explain_alime(const BlackBoxPredictor& f,
                          const DenoisingAutoencoder& ae,
                          const SamplePool& pool,
                          const Eigen::Ref<const Eigen::VectorXd>& x,
                          Eigen::Index n, double alpha,
                          double kernel_scale = 1.0,
                          std::vector<std::string> feature_names = {});

Json explanation_to_json(const Explanation& e, double alpha);
// (feature, coefficient, sign) rows sorted by |coefficient| descending.
std::string explanation_bar_csv(const Explanation& e);

}  // namespace alime

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "genedesign/dataset.hpp"

namespace genedesign {

// Task covariance B = w w^T + diag(kappa); positive semi-definite by
// construction for kappa >= 0.
struct CoregionalizationMatrix {
  Eigen::Vector2d w;
  Eigen::Vector2d kappa;

  Eigen::Matrix2d realize() const {
    return w * w.transpose() + Eigen::Matrix2d(kappa.asDiagonal());
  }
};

// Kernel and likelihood parameters of the two-task model. The covariance of
// task pair (l, l') at inputs (x, x') is
//   B_lin[l,l'] * k_lin(x, x') + B_se[l,l'] * k_se(x, x'),
// with per-task Gaussian noise and per-task constant means.
struct ModelHyperparameters {
  CoregionalizationMatrix coreg_lin;
  CoregionalizationMatrix coreg_se;
  Eigen::VectorXd se_lengthscales;  // one per input dimension, > 0
  double lin_variance = 1.0;
  double se_variance = 1.0;
  Eigen::Vector2d noise = Eigen::Vector2d::Constant(0.1);  // variances, > 0
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();

  void validate(Eigen::Index dimension) const;
};

// Which parameters the optimizer moves and how they map onto the
// unconstrained vector (positive scales are log-transformed, w and mean are
// unconstrained). Defaults follow the tied-kappa, scale-in-B convention.
// A positive noise floor changes the noise mapping to floor + exp(theta),
// which keeps the MLE away from exact-interpolation collapse.
struct ParameterizationOptions {
  bool tie_kappa = true;
  bool fit_mean = false;
  bool fit_kernel_variances = false;
  Eigen::Vector2d noise_floor = Eigen::Vector2d::Zero();
};

class ParameterPacking {
 public:
  ParameterPacking(Eigen::Index dimension, ParameterizationOptions options);

  Eigen::Index size() const { return size_; }
  const ParameterizationOptions& options() const { return options_; }

  Eigen::VectorXd pack(const ModelHyperparameters& params) const;

  // Inverse of pack; `base` supplies every field the packing does not carry.
  ModelHyperparameters unpack(const Eigen::VectorXd& theta,
                              const ModelHyperparameters& base) const;

 private:
  Eigen::Index dimension_;
  ParameterizationOptions options_;
  Eigen::Index size_;
};

// Jitter policy for Cholesky factorizations of the training covariance.
inline constexpr double kInitialJitter = 1e-9;
inline constexpr double kMaxJitter = 1e-4;

// Cross-covariance of the stacked two-task process: a 2n x 2m matrix in
// task-major block layout (all task-alpha rows first). No noise term.
Eigen::MatrixXd build_covariance(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                                 const ModelHyperparameters& params);

struct LogMarginalResult {
  double value;
  Eigen::VectorXd gradient;  // with respect to the unconstrained vector
};

// Log marginal likelihood of the observed rates under the model, evaluated
// on the features exactly as given (no hidden standardization), plus its
// exact gradient in the packing defined by `options`. Throws
// FactorizationFailure when the covariance is not positive definite within
// the jitter policy.
LogMarginalResult log_marginal_likelihood(const ModelHyperparameters& params,
                                          const Dataset& data,
                                          const ParameterizationOptions& options = {});

double log_marginal_likelihood_value(const ModelHyperparameters& params,
                                     const Dataset& data);

// Per-feature affine transform to zero mean / unit variance; constant
// features keep scale 1 so they map to 0 rather than dividing by 0.
struct Standardizer {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;

  static Standardizer identity(Eigen::Index dimension);
  static Standardizer fit(const Eigen::MatrixXd& X);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct PosteriorPrediction {
  Eigen::Vector2d mean;  // (f_alpha, f_beta) at the query point
  Eigen::Matrix2d cov;   // 2x2 predictive covariance across the tasks
};

struct FitConfig {
  int max_iters = 1000;
  int n_restarts = 10;
  std::uint64_t seed = 0;
  ParameterizationOptions parameterization;
  bool standardize_features = true;
  // Per-task noise floor as a fraction of the observed task variance.
  double relative_noise_floor = 1e-6;
};

// Immutable fitted model: hyperparameters, the (raw) training data, the
// feature standardizer, and the cached factorization of the training
// covariance. Safe to share across threads.
class FittedModel {
 public:
  FittedModel(ModelHyperparameters params, Dataset data, Standardizer standardizer);

  const ModelHyperparameters& params() const { return params_; }
  const Dataset& data() const { return data_; }
  const Standardizer& standardizer() const { return standardizer_; }

  // Likelihood of the training data in the standardized feature space.
  double log_marginal() const { return log_marginal_; }

  // Best observed averaged rate; the expected-improvement incumbent.
  double incumbent() const { return data_.best_averaged_rate(); }

  // Exact posterior at each row of X_star (raw feature space).
  std::vector<PosteriorPrediction> predict(const Eigen::MatrixXd& X_star) const;
  PosteriorPrediction predict_one(const Eigen::VectorXd& x_star) const;

 private:
  ModelHyperparameters params_;
  Dataset data_;
  Standardizer standardizer_;
  Eigen::MatrixXd std_features_;
  std::vector<Eigen::Index> obs_rows_[kTaskCount];
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // K_yy^{-1} (y - m)
  double log_marginal_ = 0.0;
};

// Maximizes the log marginal likelihood with L-BFGS from one data-informed
// initialization plus n_restarts random ones (restart seeds derived from
// config.seed by index), and keeps the best result. Deterministic.
FittedModel fit(const Dataset& data, const FitConfig& config = {});

}  // namespace genedesign

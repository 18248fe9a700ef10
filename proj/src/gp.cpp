#include "genedesign/gp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "genedesign/errors.hpp"
#include "genedesign/kernels.hpp"
#include "genedesign/lbfgs.hpp"
#include "genedesign/rng.hpp"

namespace genedesign {

void ModelHyperparameters::validate(Eigen::Index dimension) const {
  if (se_lengthscales.size() != dimension)
    throw DimensionMismatch("se_lengthscales has " +
                            std::to_string(se_lengthscales.size()) +
                            " entries, input dimension is " + std::to_string(dimension));
  if ((se_lengthscales.array() <= 0.0).any())
    throw NonPositiveLengthscale("all SE lengthscales must be strictly positive");
  if (!(lin_variance > 0.0) || !(se_variance > 0.0))
    throw Error("NonPositiveVariance", "kernel variances must be strictly positive");
  if ((noise.array() <= 0.0).any())
    throw Error("NonPositiveVariance", "noise variances must be strictly positive");
  if ((coreg_lin.kappa.array() < 0.0).any() || (coreg_se.kappa.array() < 0.0).any())
    throw Error("NegativeKappa", "coregionalization kappa entries must be non-negative");
}

// ---------------------------------------------------------------------------
// Unconstrained parameterization
//
// Layout, in order: w_lin (2), log kappa_lin (1 tied / 2), w_se (2),
// log kappa_se (1 tied / 2), log lengthscales (p),
// [log lin_variance, log se_variance], log noise (2), [mean (2)].
// ---------------------------------------------------------------------------

ParameterPacking::ParameterPacking(Eigen::Index dimension, ParameterizationOptions options)
    : dimension_(dimension), options_(options) {
  const Eigen::Index kappa_terms = options_.tie_kappa ? 1 : 2;
  size_ = 2 + kappa_terms + 2 + kappa_terms + dimension_ +
          (options_.fit_kernel_variances ? 2 : 0) + 2 + (options_.fit_mean ? 2 : 0);
}

Eigen::VectorXd ParameterPacking::pack(const ModelHyperparameters& params) const {
  Eigen::VectorXd theta(size_);
  Eigen::Index k = 0;
  auto put_coreg = [&](const CoregionalizationMatrix& c) {
    theta[k++] = c.w[0];
    theta[k++] = c.w[1];
    if (options_.tie_kappa) {
      theta[k++] = std::log(c.kappa[0]);
    } else {
      theta[k++] = std::log(c.kappa[0]);
      theta[k++] = std::log(c.kappa[1]);
    }
  };
  put_coreg(params.coreg_lin);
  put_coreg(params.coreg_se);
  theta.segment(k, dimension_) = params.se_lengthscales.array().log();
  k += dimension_;
  if (options_.fit_kernel_variances) {
    theta[k++] = std::log(params.lin_variance);
    theta[k++] = std::log(params.se_variance);
  }
  for (int l = 0; l < kTaskCount; ++l) {
    if (!(params.noise[l] > options_.noise_floor[l]))
      throw Error("NoiseBelowFloor",
                  "cannot pack a noise variance at or below the configured floor");
    theta[k++] = std::log(params.noise[l] - options_.noise_floor[l]);
  }
  if (options_.fit_mean) {
    theta[k++] = params.mean[0];
    theta[k++] = params.mean[1];
  }
  return theta;
}

ModelHyperparameters ParameterPacking::unpack(const Eigen::VectorXd& theta,
                                              const ModelHyperparameters& base) const {
  if (theta.size() != size_)
    throw DimensionMismatch("parameter vector has wrong length");
  ModelHyperparameters params = base;
  Eigen::Index k = 0;
  auto get_coreg = [&](CoregionalizationMatrix& c) {
    c.w[0] = theta[k++];
    c.w[1] = theta[k++];
    if (options_.tie_kappa) {
      c.kappa.setConstant(std::exp(theta[k++]));
    } else {
      c.kappa[0] = std::exp(theta[k++]);
      c.kappa[1] = std::exp(theta[k++]);
    }
  };
  get_coreg(params.coreg_lin);
  get_coreg(params.coreg_se);
  params.se_lengthscales = theta.segment(k, dimension_).array().exp();
  k += dimension_;
  if (options_.fit_kernel_variances) {
    params.lin_variance = std::exp(theta[k++]);
    params.se_variance = std::exp(theta[k++]);
  }
  params.noise[0] = options_.noise_floor[0] + std::exp(theta[k++]);
  params.noise[1] = options_.noise_floor[1] + std::exp(theta[k++]);
  if (options_.fit_mean) {
    params.mean[0] = theta[k++];
    params.mean[1] = theta[k++];
  }
  return params;
}

// ---------------------------------------------------------------------------
// Covariance assembly
// ---------------------------------------------------------------------------

Eigen::MatrixXd build_covariance(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                                 const ModelHyperparameters& params) {
  if (X.cols() != Z.cols())
    throw DimensionMismatch("build_covariance: inputs have different dimensions");
  params.validate(X.cols());
  const Eigen::MatrixXd k_lin = linear_kernel(X, Z, params.lin_variance);
  const Eigen::MatrixXd k_se =
      se_ard_kernel(X, Z, params.se_variance, params.se_lengthscales);
  const Eigen::Matrix2d b_lin = params.coreg_lin.realize();
  const Eigen::Matrix2d b_se = params.coreg_se.realize();

  const Eigen::Index n = X.rows(), m = Z.rows();
  Eigen::MatrixXd K(2 * n, 2 * m);
  for (int l = 0; l < kTaskCount; ++l)
    for (int lp = 0; lp < kTaskCount; ++lp)
      K.block(l * n, lp * m, n, m) = b_lin(l, lp) * k_lin + b_se(l, lp) * k_se;
  return K;
}

namespace {

// Stacked training view: observed residuals in task-major order plus the
// factorized covariance (noise and jitter included).
struct TrainingSystem {
  std::vector<Eigen::Index> obs[kTaskCount];
  Eigen::Index offset[kTaskCount];
  Eigen::Index total = 0;
  bool fully_observed = false;
  Eigen::MatrixXd k_lin;  // N x N base kernels over all rows
  Eigen::MatrixXd k_se;
  Eigen::MatrixXd K;  // stacked covariance + noise
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd residual;
  Eigen::VectorXd alpha;
  double jitter = 0.0;
};

void factorize_with_jitter(TrainingSystem& sys) {
  for (double jitter = kInitialJitter; jitter <= kMaxJitter * (1.0 + 1e-12); jitter *= 10.0) {
    Eigen::MatrixXd K_try = sys.K;
    K_try.diagonal().array() += jitter;
    sys.llt.compute(K_try);
    if (sys.llt.info() == Eigen::Success) {
      sys.jitter = jitter;
      return;
    }
  }
  throw FactorizationFailure(
      "training covariance is not positive definite within the jitter policy");
}

TrainingSystem build_training_system(const Eigen::MatrixXd& X,
                                     const ModelHyperparameters& params,
                                     const Dataset& data) {
  TrainingSystem sys;
  for (int l = 0; l < kTaskCount; ++l) sys.obs[l] = data.observed_rows(l);
  sys.offset[0] = 0;
  sys.offset[1] = static_cast<Eigen::Index>(sys.obs[0].size());
  sys.total = static_cast<Eigen::Index>(sys.obs[0].size() + sys.obs[1].size());
  if (sys.total == 0) throw Error("NoObservations", "dataset has no observed rates");

  sys.k_lin = linear_kernel(X, X, params.lin_variance);
  sys.k_se = se_ard_kernel(X, X, params.se_variance, params.se_lengthscales);
  const Eigen::Matrix2d b_lin = params.coreg_lin.realize();
  const Eigen::Matrix2d b_se = params.coreg_se.realize();

  sys.K.resize(sys.total, sys.total);
  sys.residual.resize(sys.total);
  sys.fully_observed = data.fully_observed();
  if (sys.fully_observed) {
    const Eigen::Index n = X.rows();
    for (int l = 0; l < kTaskCount; ++l) {
      for (int lp = 0; lp < kTaskCount; ++lp)
        sys.K.block(l * n, lp * n, n, n) =
            b_lin(l, lp) * sys.k_lin + b_se(l, lp) * sys.k_se;
      sys.K.diagonal().segment(l * n, n).array() += params.noise[l];
      sys.residual.segment(l * n, n) = data.rates.col(l).array() - params.mean[l];
    }
  } else {
    for (int l = 0; l < kTaskCount; ++l) {
      const auto& rows_l = sys.obs[l];
      for (int lp = 0; lp < kTaskCount; ++lp) {
        const auto& rows_lp = sys.obs[lp];
        for (std::size_t a = 0; a < rows_l.size(); ++a)
          for (std::size_t b = 0; b < rows_lp.size(); ++b)
            sys.K(sys.offset[l] + static_cast<Eigen::Index>(a),
                  sys.offset[lp] + static_cast<Eigen::Index>(b)) =
                b_lin(l, lp) * sys.k_lin(rows_l[a], rows_lp[b]) +
                b_se(l, lp) * sys.k_se(rows_l[a], rows_lp[b]);
      }
      for (std::size_t a = 0; a < rows_l.size(); ++a) {
        const Eigen::Index i = sys.offset[l] + static_cast<Eigen::Index>(a);
        sys.K(i, i) += params.noise[l];
        sys.residual[i] = data.rates(rows_l[a], l) - params.mean[l];
      }
    }
  }

  factorize_with_jitter(sys);
  sys.alpha = sys.llt.solve(sys.residual);
  return sys;
}

double lml_value_from_system(const TrainingSystem& sys) {
  const double quad = sys.residual.dot(sys.alpha);
  const double half_logdet =
      sys.llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * quad - half_logdet -
         0.5 * static_cast<double>(sys.total) * std::log(2.0 * M_PI);
}

}  // namespace

double log_marginal_likelihood_value(const ModelHyperparameters& params,
                                     const Dataset& data) {
  params.validate(data.dimension());
  const TrainingSystem sys = build_training_system(data.features, params, data);
  return lml_value_from_system(sys);
}

LogMarginalResult log_marginal_likelihood(const ModelHyperparameters& params,
                                          const Dataset& data,
                                          const ParameterizationOptions& options) {
  params.validate(data.dimension());
  const Eigen::MatrixXd& X = data.features;
  const Eigen::Index n_rows = X.rows();
  const TrainingSystem sys = build_training_system(X, params, data);

  LogMarginalResult result;
  result.value = lml_value_from_system(sys);

  // A = alpha alpha^T - K^{-1}; for any symmetric dK,
  // dL = 1/2 sum(A .* dK).
  Eigen::MatrixXd A = -sys.llt.solve(
      Eigen::MatrixXd::Identity(sys.total, sys.total));
  A += sys.alpha * sys.alpha.transpose();

  const Eigen::Matrix2d b_lin = params.coreg_lin.realize();
  const Eigen::Matrix2d b_se = params.coreg_se.realize();

  // Per-task-pair contractions of A against each base kernel, and the
  // B_se-weighted scatter of A back onto data-row indices (for the
  // lengthscale derivatives).
  Eigen::Matrix2d g_lin = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d g_se = Eigen::Matrix2d::Zero();
  Eigen::MatrixXd weighted_A = Eigen::MatrixXd::Zero(n_rows, n_rows);
  for (int l = 0; l < kTaskCount; ++l) {
    const auto& rows_l = sys.obs[l];
    for (int lp = 0; lp < kTaskCount; ++lp) {
      const auto& rows_lp = sys.obs[lp];
      double acc_lin = 0.0, acc_se = 0.0;
      for (std::size_t a = 0; a < rows_l.size(); ++a) {
        for (std::size_t b = 0; b < rows_lp.size(); ++b) {
          const double a_ab = A(sys.offset[l] + static_cast<Eigen::Index>(a),
                                sys.offset[lp] + static_cast<Eigen::Index>(b));
          acc_lin += a_ab * sys.k_lin(rows_l[a], rows_lp[b]);
          acc_se += a_ab * sys.k_se(rows_l[a], rows_lp[b]);
          weighted_A(rows_l[a], rows_lp[b]) += b_se(l, lp) * a_ab;
        }
      }
      g_lin(l, lp) = acc_lin;
      g_se(l, lp) = acc_se;
    }
  }

  // Natural-space derivatives.
  const Eigen::Vector2d d_w_lin = g_lin * params.coreg_lin.w;
  const Eigen::Vector2d d_w_se = g_se * params.coreg_se.w;
  const Eigen::Vector2d d_kappa_lin(0.5 * g_lin(0, 0), 0.5 * g_lin(1, 1));
  const Eigen::Vector2d d_kappa_se(0.5 * g_se(0, 0), 0.5 * g_se(1, 1));
  const double d_lin_variance =
      0.5 * (b_lin.array() * g_lin.array()).sum() / params.lin_variance;
  const double d_se_variance =
      0.5 * (b_se.array() * g_se.array()).sum() / params.se_variance;

  // d/d ell_d = [sum_i s_i x_id^2 - x_d^T W x_d] / ell_d^3 with
  // W = weighted_A .* k_se.
  const Eigen::MatrixXd W = weighted_A.cwiseProduct(sys.k_se);
  const Eigen::VectorXd s = W.rowwise().sum();
  const Eigen::VectorXd u = X.cwiseProduct(X).transpose() * s;
  const Eigen::MatrixXd T = X.transpose() * W;
  const Eigen::VectorXd v = T.cwiseProduct(X.transpose()).rowwise().sum();
  const Eigen::VectorXd d_lengthscales =
      (u - v).array() / params.se_lengthscales.array().cube();

  Eigen::Vector2d d_noise, d_mean;
  for (int l = 0; l < kTaskCount; ++l) {
    const Eigen::Index n_l = static_cast<Eigen::Index>(sys.obs[l].size());
    d_noise[l] = 0.5 * A.diagonal().segment(sys.offset[l], n_l).sum();
    d_mean[l] = sys.alpha.segment(sys.offset[l], n_l).sum();
  }

  // Chain rule onto the unconstrained vector; mirrors ParameterPacking.
  const ParameterPacking packing(X.cols(), options);
  Eigen::VectorXd grad(packing.size());
  Eigen::Index k = 0;
  auto put_coreg = [&](const Eigen::Vector2d& dw, const Eigen::Vector2d& dk,
                       const CoregionalizationMatrix& c) {
    grad[k++] = dw[0];
    grad[k++] = dw[1];
    if (options.tie_kappa) {
      grad[k++] = (dk[0] + dk[1]) * c.kappa[0];
    } else {
      grad[k++] = dk[0] * c.kappa[0];
      grad[k++] = dk[1] * c.kappa[1];
    }
  };
  put_coreg(d_w_lin, d_kappa_lin, params.coreg_lin);
  put_coreg(d_w_se, d_kappa_se, params.coreg_se);
  grad.segment(k, X.cols()) =
      d_lengthscales.array() * params.se_lengthscales.array();
  k += X.cols();
  if (options.fit_kernel_variances) {
    grad[k++] = d_lin_variance * params.lin_variance;
    grad[k++] = d_se_variance * params.se_variance;
  }
  grad[k++] = d_noise[0] * (params.noise[0] - options.noise_floor[0]);
  grad[k++] = d_noise[1] * (params.noise[1] - options.noise_floor[1]);
  if (options.fit_mean) {
    grad[k++] = d_mean[0];
    grad[k++] = d_mean[1];
  }
  result.gradient = std::move(grad);
  return result;
}

// ---------------------------------------------------------------------------
// Standardization
// ---------------------------------------------------------------------------

Standardizer Standardizer::identity(Eigen::Index dimension) {
  return {Eigen::VectorXd::Zero(dimension), Eigen::VectorXd::Ones(dimension)};
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  Standardizer s;
  s.center = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - s.center.transpose();
  s.scale = (centered.array().square().colwise().mean()).sqrt();
  for (Eigen::Index d = 0; d < s.scale.size(); ++d)
    if (s.scale[d] < 1e-12) s.scale[d] = 1.0;  // constant feature
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  if (X.cols() != center.size())
    throw DimensionMismatch("standardizer dimension does not match input");
  return (X.rowwise() - center.transpose()).array().rowwise() /
         scale.transpose().array();
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
  if (x.size() != center.size())
    throw DimensionMismatch("standardizer dimension does not match input");
  return (x - center).cwiseQuotient(scale);
}

// ---------------------------------------------------------------------------
// Fitted model
// ---------------------------------------------------------------------------

FittedModel::FittedModel(ModelHyperparameters params, Dataset data,
                         Standardizer standardizer)
    : params_(std::move(params)),
      data_(std::move(data)),
      standardizer_(std::move(standardizer)) {
  params_.validate(data_.dimension());
  std_features_ = standardizer_.apply(data_.features);
  TrainingSystem sys = build_training_system(std_features_, params_, data_);
  log_marginal_ = lml_value_from_system(sys);
  for (int l = 0; l < kTaskCount; ++l) obs_rows_[l] = std::move(sys.obs[l]);
  llt_ = std::move(sys.llt);
  alpha_ = std::move(sys.alpha);
}

std::vector<PosteriorPrediction> FittedModel::predict(
    const Eigen::MatrixXd& X_star) const {
  if (X_star.cols() != data_.dimension())
    throw DimensionMismatch("prediction inputs have dimension " +
                            std::to_string(X_star.cols()) + ", model expects " +
                            std::to_string(data_.dimension()));
  const Eigen::MatrixXd Xs = standardizer_.apply(X_star);
  const Eigen::MatrixXd k_lin_star =
      linear_kernel(Xs, std_features_, params_.lin_variance);
  const Eigen::MatrixXd k_se_star =
      se_ard_kernel(Xs, std_features_, params_.se_variance, params_.se_lengthscales);
  const Eigen::Matrix2d b_lin = params_.coreg_lin.realize();
  const Eigen::Matrix2d b_se = params_.coreg_se.realize();

  const Eigen::Index total = alpha_.size();
  const Eigen::Index offset[kTaskCount] = {
      0, static_cast<Eigen::Index>(obs_rows_[0].size())};

  std::vector<PosteriorPrediction> predictions;
  predictions.reserve(static_cast<std::size_t>(Xs.rows()));
  Eigen::MatrixXd k_star(kTaskCount, total);
  for (Eigen::Index i = 0; i < Xs.rows(); ++i) {
    for (int l = 0; l < kTaskCount; ++l)
      for (int lp = 0; lp < kTaskCount; ++lp) {
        const auto& rows_lp = obs_rows_[lp];
        for (std::size_t b = 0; b < rows_lp.size(); ++b)
          k_star(l, offset[lp] + static_cast<Eigen::Index>(b)) =
              b_lin(l, lp) * k_lin_star(i, rows_lp[b]) +
              b_se(l, lp) * k_se_star(i, rows_lp[b]);
      }

    PosteriorPrediction pred;
    pred.mean = params_.mean + k_star * alpha_;
    const Eigen::Matrix2d k_ss =
        b_lin * (params_.lin_variance * Xs.row(i).squaredNorm()) +
        b_se * params_.se_variance;
    // k_ss - V^T V with V = L^{-1} k_star^T: subtracting a Gram matrix keeps
    // the residual covariance PSD up to round-off.
    const Eigen::MatrixXd v =
        llt_.matrixL().solve(k_star.transpose());
    Eigen::Matrix2d cov = k_ss - v.transpose() * v;
    cov = 0.5 * (cov + cov.transpose());
    // Near-interpolation regimes can leave a round-off-negative eigenvalue;
    // project back onto the PSD cone.
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    if (es.eigenvalues().minCoeff() < 0.0)
      cov = es.eigenvectors() *
            es.eigenvalues().cwiseMax(0.0).asDiagonal() *
            es.eigenvectors().transpose();
    pred.cov = cov;
    predictions.push_back(std::move(pred));
  }
  return predictions;
}

PosteriorPrediction FittedModel::predict_one(const Eigen::VectorXd& x_star) const {
  return predict(x_star.transpose())[0];
}

// ---------------------------------------------------------------------------
// Hyperparameter fitting
// ---------------------------------------------------------------------------

namespace {

struct TaskMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d variance = Eigen::Vector2d::Ones();
};

TaskMoments observed_moments(const Dataset& data) {
  TaskMoments m;
  for (int l = 0; l < kTaskCount; ++l) {
    const auto rows = data.observed_rows(l);
    if (rows.empty()) continue;
    double sum = 0.0;
    for (auto i : rows) sum += data.rates(i, l);
    m.mean[l] = sum / static_cast<double>(rows.size());
    if (rows.size() >= 2) {
      double ss = 0.0;
      for (auto i : rows) {
        const double d = data.rates(i, l) - m.mean[l];
        ss += d * d;
      }
      const double var = ss / static_cast<double>(rows.size());
      m.variance[l] = var > 1e-12 ? var : 1.0;
    }
  }
  return m;
}

ModelHyperparameters default_initialization(const Dataset& data,
                                            const Eigen::MatrixXd& std_features,
                                            const TaskMoments& moments) {
  const Eigen::Index p = data.dimension();
  const double mean_sq_norm =
      std::max(1.0, std_features.rowwise().squaredNorm().mean());
  const double var_avg = 0.5 * (moments.variance[0] + moments.variance[1]);

  ModelHyperparameters params;
  params.coreg_lin.w =
      (0.3 * moments.variance.array() / mean_sq_norm).sqrt();
  params.coreg_lin.kappa.setConstant(0.05 * var_avg / mean_sq_norm);
  params.coreg_se.w = (0.3 * moments.variance.array()).sqrt();
  params.coreg_se.kappa.setConstant(0.05 * var_avg);
  params.se_lengthscales =
      Eigen::VectorXd::Constant(p, std::sqrt(static_cast<double>(p)));
  params.lin_variance = 1.0;
  params.se_variance = 1.0;
  params.noise = 0.3 * moments.variance;
  params.mean = moments.mean;
  return params;
}

// Restart draws: w entries from N(0,1); every transformed scale parameter
// from N(0,1) around the default initialization. Centering at the default
// matters in high dimension, where unit-scale lengthscales put the SE
// kernel into its white-noise regime and strand the optimizer there. Draw
// order is part of the determinism contract.
ModelHyperparameters random_initialization(const ModelHyperparameters& base,
                                           const ParameterizationOptions& opts,
                                           Rng& rng) {
  ModelHyperparameters params = base;
  auto draw_coreg = [&](CoregionalizationMatrix& c) {
    c.w[0] = rng.normal();
    c.w[1] = rng.normal();
    if (opts.tie_kappa) {
      c.kappa.setConstant(c.kappa[0] * std::exp(rng.normal()));
    } else {
      c.kappa[0] *= std::exp(rng.normal());
      c.kappa[1] *= std::exp(rng.normal());
    }
  };
  draw_coreg(params.coreg_lin);
  draw_coreg(params.coreg_se);
  for (Eigen::Index d = 0; d < params.se_lengthscales.size(); ++d)
    params.se_lengthscales[d] *= std::exp(rng.normal());
  for (int l = 0; l < kTaskCount; ++l)
    params.noise[l] = opts.noise_floor[l] +
                      (params.noise[l] - opts.noise_floor[l]) * std::exp(rng.normal());
  if (opts.fit_kernel_variances) {
    params.lin_variance *= std::exp(rng.normal());
    params.se_variance *= std::exp(rng.normal());
  }
  return params;
}

}  // namespace

FittedModel fit(const Dataset& data, const FitConfig& config) {
  if (config.max_iters < 1) throw ConfigError("fit: max_iters must be >= 1");
  if (config.n_restarts < 1) throw ConfigError("fit: n_restarts must be >= 1");

  const Standardizer standardizer = config.standardize_features
                                        ? Standardizer::fit(data.features)
                                        : Standardizer::identity(data.dimension());
  Dataset work = data;
  work.features = standardizer.apply(data.features);

  const TaskMoments moments = observed_moments(work);
  const ModelHyperparameters base =
      default_initialization(work, work.features, moments);
  ParameterizationOptions parameterization = config.parameterization;
  parameterization.noise_floor =
      config.relative_noise_floor * moments.variance;
  const ParameterPacking packing(work.dimension(), parameterization);

  const lbfgs::Objective objective = [&](const Eigen::VectorXd& theta,
                                         Eigen::VectorXd& grad) -> double {
    grad.setZero(packing.size());
    ModelHyperparameters params;
    try {
      params = packing.unpack(theta, base);
      const LogMarginalResult r =
          log_marginal_likelihood(params, work, parameterization);
      grad = -r.gradient;
      return -r.value;
    } catch (const FactorizationFailure&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  lbfgs::Options opt_options;
  opt_options.max_iterations = config.max_iters;

  double best_value = -std::numeric_limits<double>::infinity();
  ModelHyperparameters best_params;
  int failures = 0;
  for (int restart = 0; restart <= config.n_restarts; ++restart) {
    ModelHyperparameters init = base;
    if (restart > 0) {
      Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(restart)));
      init = random_initialization(base, parameterization, rng);
    }
    try {
      const lbfgs::Result r = lbfgs::minimize(objective, packing.pack(init), opt_options);
      const double value = -r.f;
      if (std::isfinite(value) && value > best_value) {
        best_value = value;
        best_params = packing.unpack(r.x, base);
      }
    } catch (const Error&) {
      ++failures;
    }
  }
  if (!std::isfinite(best_value))
    throw AllRestartsFailed("all " + std::to_string(config.n_restarts + 1) +
                            " optimizer starts failed to produce a finite likelihood");
  (void)failures;
  return FittedModel(std::move(best_params), data, standardizer);
}

}  // namespace genedesign

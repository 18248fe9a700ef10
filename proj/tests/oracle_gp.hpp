// Dense reference implementation used to cross-check the GP code: scalar
// kernel loops and explicit matrix inverses instead of vectorized kernels
// and Cholesky solves. Test-only; keep it independent of src/gp.cpp.
#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "genedesign/gp.hpp"

namespace gp_oracle {

inline double lin_k(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double var) {
  double dot = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) dot += x[d] * z[d];
  return var * dot;
}

inline double se_k(const Eigen::VectorXd& x, const Eigen::VectorXd& z, double var,
                   const Eigen::VectorXd& ell) {
  double q = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double u = (x[d] - z[d]) / ell[d];
    q += u * u;
  }
  return var * std::exp(-0.5 * q);
}

inline Eigen::Matrix2d coreg(const genedesign::CoregionalizationMatrix& c) {
  Eigen::Matrix2d b;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = c.w[i] * c.w[j] + (i == j ? c.kappa[i] : 0.0);
  return b;
}

inline double task_pair_cov(const genedesign::ModelHyperparameters& p,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                            int l, int lp) {
  return coreg(p.coreg_lin)(l, lp) * lin_k(x, z, p.lin_variance) +
         coreg(p.coreg_se)(l, lp) * se_k(x, z, p.se_variance, p.se_lengthscales);
}

// Fully observed training covariance, task-major stacking, with noise and
// the implementation's base jitter on the diagonal.
inline Eigen::MatrixXd training_cov(const genedesign::ModelHyperparameters& p,
                                    const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(2 * n, 2 * n);
  for (int l = 0; l < 2; ++l)
    for (int lp = 0; lp < 2; ++lp)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          K(l * n + i, lp * n + j) = task_pair_cov(
              p, X.row(i).transpose(), X.row(j).transpose(), l, lp);
  for (int l = 0; l < 2; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      K(l * n + i, l * n + i) += p.noise[l] + genedesign::kInitialJitter;
  return K;
}

inline Eigen::VectorXd stacked_residual(const genedesign::ModelHyperparameters& p,
                                        const Eigen::MatrixXd& Y) {
  const Eigen::Index n = Y.rows();
  Eigen::VectorXd r(2 * n);
  for (int l = 0; l < 2; ++l)
    for (Eigen::Index i = 0; i < n; ++i) r[l * n + i] = Y(i, l) - p.mean[l];
  return r;
}

inline double log_marginal(const genedesign::ModelHyperparameters& p,
                           const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  const Eigen::MatrixXd K = training_cov(p, X);
  const Eigen::MatrixXd Kinv = K.inverse();
  const Eigen::VectorXd r = stacked_residual(p, Y);
  const double logdet = std::log(K.determinant());
  return -0.5 * r.dot(Kinv * r) - 0.5 * logdet -
         0.5 * static_cast<double>(K.rows()) * std::log(2.0 * M_PI);
}

struct Posterior {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
};

inline Posterior predict(const genedesign::ModelHyperparameters& p,
                         const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                         const Eigen::VectorXd& x_star) {
  const Eigen::Index n = X.rows();
  const Eigen::MatrixXd Kinv = training_cov(p, X).inverse();
  const Eigen::VectorXd r = stacked_residual(p, Y);

  Eigen::MatrixXd k_star(2, 2 * n);
  for (int l = 0; l < 2; ++l)
    for (int lp = 0; lp < 2; ++lp)
      for (Eigen::Index j = 0; j < n; ++j)
        k_star(l, lp * n + j) =
            task_pair_cov(p, x_star, X.row(j).transpose(), l, lp);

  Eigen::Matrix2d k_ss;
  for (int l = 0; l < 2; ++l)
    for (int lp = 0; lp < 2; ++lp) k_ss(l, lp) = task_pair_cov(p, x_star, x_star, l, lp);

  Posterior post;
  post.mean = p.mean + k_star * (Kinv * r);
  post.cov = k_ss - k_star * Kinv * k_star.transpose();
  return post;
}

}  // namespace gp_oracle

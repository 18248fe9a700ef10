#include "genedesign/kernels.hpp"

#include "genedesign/errors.hpp"

namespace genedesign {

Eigen::MatrixXd linear_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                              double variance) {
  if (X.cols() != Z.cols())
    throw DimensionMismatch("linear_kernel: inputs have different dimensions");
  return variance * (X * Z.transpose());
}

Eigen::MatrixXd se_ard_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                              double variance, const Eigen::VectorXd& lengthscales) {
  if (X.cols() != Z.cols())
    throw DimensionMismatch("se_ard_kernel: inputs have different dimensions");
  if (lengthscales.size() != X.cols())
    throw DimensionMismatch("se_ard_kernel: lengthscale count does not match dimension");
  if ((lengthscales.array() <= 0.0).any())
    throw NonPositiveLengthscale("se_ard_kernel: lengthscales must be strictly positive");

  const Eigen::ArrayXd inv_ell = lengthscales.array().inverse();
  const Eigen::MatrixXd Xs = X.array().rowwise() * inv_ell.transpose();
  const Eigen::MatrixXd Zs = Z.array().rowwise() * inv_ell.transpose();
  const Eigen::VectorXd xn = Xs.rowwise().squaredNorm();
  const Eigen::VectorXd zn = Zs.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = xn.replicate(1, Zs.rows()) +
                       zn.transpose().replicate(Xs.rows(), 1) -
                       2.0 * (Xs * Zs.transpose());
  d2 = d2.cwiseMax(0.0);  // guard round-off on near-identical rows
  return variance * (-0.5 * d2.array()).exp().matrix();
}

}  // namespace genedesign

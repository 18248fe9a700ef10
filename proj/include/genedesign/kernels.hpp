#pragma once

#include <Eigen/Core>

namespace genedesign {

// Linear kernel: k(x, z) = variance * <x, z>.
Eigen::MatrixXd linear_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                              double variance);

// Squared-exponential kernel with one lengthscale per input dimension:
// k(x, z) = variance * exp(-1/2 * sum_d ((x_d - z_d) / ell_d)^2).
Eigen::MatrixXd se_ard_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                              double variance, const Eigen::VectorXd& lengthscales);

}  // namespace genedesign

#pragma once

#include <Eigen/Core>

#include "genedesign/dataset.hpp"
#include "genedesign/gp.hpp"
#include "genedesign/rng.hpp"

namespace test_util {

struct Instance {
  genedesign::Dataset data;
  genedesign::ModelHyperparameters params;
};

// Moderately scaled parameters: conditioning stays benign, which keeps
// finite-difference comparisons meaningful.
inline genedesign::ModelHyperparameters moderate_params(genedesign::Rng& rng,
                                                        Eigen::Index p) {
  genedesign::ModelHyperparameters params;
  params.coreg_lin.w = Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  params.coreg_lin.kappa.setConstant(std::exp(rng.uniform(-0.7, 0.3)));
  params.coreg_se.w = Eigen::Vector2d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  params.coreg_se.kappa.setConstant(std::exp(rng.uniform(-0.7, 0.3)));
  params.se_lengthscales.resize(p);
  for (Eigen::Index d = 0; d < p; ++d)
    params.se_lengthscales[d] = std::exp(rng.uniform(-0.3, 0.7));
  params.lin_variance = std::exp(rng.uniform(-0.5, 0.5));
  params.se_variance = std::exp(rng.uniform(-0.5, 0.5));
  params.noise = Eigen::Vector2d(std::exp(rng.uniform(-1.5, -0.3)),
                                 std::exp(rng.uniform(-1.5, -0.3)));
  params.mean = Eigen::Vector2d(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
  return params;
}

// Wide log-normal draws over every positive parameter (validity is the only
// constraint).
inline genedesign::ModelHyperparameters wide_params(genedesign::Rng& rng,
                                                    Eigen::Index p) {
  genedesign::ModelHyperparameters params;
  params.coreg_lin.w = Eigen::Vector2d(rng.normal(), rng.normal());
  params.coreg_lin.kappa = Eigen::Vector2d(std::exp(rng.normal()), std::exp(rng.normal()));
  params.coreg_se.w = Eigen::Vector2d(rng.normal(), rng.normal());
  params.coreg_se.kappa = Eigen::Vector2d(std::exp(rng.normal()), std::exp(rng.normal()));
  params.se_lengthscales.resize(p);
  for (Eigen::Index d = 0; d < p; ++d) params.se_lengthscales[d] = std::exp(rng.normal());
  params.lin_variance = std::exp(rng.normal());
  params.se_variance = std::exp(rng.normal());
  params.noise = Eigen::Vector2d(std::exp(rng.normal()), std::exp(rng.normal()));
  params.mean = Eigen::Vector2d(rng.normal(), rng.normal());
  return params;
}

inline genedesign::Dataset random_dataset(genedesign::Rng& rng, Eigen::Index n,
                                          Eigen::Index p) {
  Eigen::MatrixXd X(n, p), Y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index d = 0; d < p; ++d) X(i, d) = rng.uniform(-1.5, 1.5);
    Y(i, 0) = rng.uniform(-2.0, 2.0);
    Y(i, 1) = rng.uniform(-2.0, 2.0);
  }
  std::vector<std::string> ids;
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
  return genedesign::Dataset::create(std::move(ids), std::move(X), std::move(Y));
}

inline Instance random_instance(genedesign::Rng& rng, Eigen::Index max_n,
                                Eigen::Index max_p) {
  const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(
                                 static_cast<std::uint64_t>(max_n - 1)));
  const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.uniform_index(
                                 static_cast<std::uint64_t>(max_p)));
  Instance inst{random_dataset(rng, n, p), moderate_params(rng, p)};
  return inst;
}

}  // namespace test_util

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "genedesign/dataset.hpp"
#include "genedesign/gp.hpp"
#include "genedesign/oracle.hpp"
#include "genedesign/rng.hpp"
#include "genedesign/sequence.hpp"

namespace genedesign {

// Ground-truth cell simulator. Each task's rate is a fixed random function
// of the standardized features x~:
//   g(x) = a * <u, x~> + b * exp(-1/2 || (x~ - c) / ell ||^2)
// with u a random unit vector and c a random center near the data cloud.
// With relevant_dims = 0 the bump acts on every dimension
// (ell = bump_width * sqrt(p)); with relevant_dims = k > 0 it acts on k
// randomly chosen recodable dimensions (ell = bump_width * sqrt(k) there,
// effectively infinite elsewhere), giving the cell a sparse relevance
// profile. Observation noise is Gaussian per task.
class SyntheticCell : public ExperimentOracle {
 public:
  // The defaults keep rates comfortably positive over gene pools drawn by
  // sample_gene_pool, so log-rate thresholds stay well defined.
  struct Config {
    std::uint64_t seed = 0;
    double noise_std = 0.0;        // same std for both tasks
    double linear_weight = 0.6;    // a
    double bump_weight = 5.5;      // b
    double bump_width = 2.0;       // ell scale relative to sqrt(#active dims)
    double center_spread = 0.3;    // c entries drawn from N(0, center_spread)
    int relevant_dims = 0;         // 0 = bump over all dimensions
  };

  // The feature standardizer fixes the cell's internal x~ space; fit it on
  // a reference gene pool so rates land on a sensible scale.
  SyntheticCell(Standardizer feature_space, Config config);

  // Noise-free rates at raw features.
  RatePair ground_truth(const Eigen::VectorXd& features) const;
  RatePair ground_truth(const GeneSequence& seq) const;

  // Measured rates: ground truth plus per-call observation noise.
  RatePair run(const GeneSequence& seq) override;

  const Config& config() const { return config_; }
  const Standardizer& feature_space() const { return feature_space_; }
  const std::vector<Eigen::Index>& relevant_dimensions() const {
    return relevant_dims_;
  }

 private:
  Standardizer feature_space_;
  Config config_;
  Eigen::VectorXd direction_[kTaskCount];  // u, unit length
  Eigen::VectorXd bump_center_;
  Eigen::VectorXd bump_inv_lengthscale_;   // 0 on inactive dimensions
  std::vector<Eigen::Index> relevant_dims_;
  Rng noise_rng_;
};

// Deliberately misspecified oracle for robustness testing: rates come from
// a random cubic of the standardized features, outside the surrogate's
// linear-plus-SE family.
class RandomCubicCell : public ExperimentOracle {
 public:
  RandomCubicCell(Standardizer feature_space, std::uint64_t seed,
                  double noise_std = 0.0);

  RatePair ground_truth(const Eigen::VectorXd& features) const;
  RatePair run(const GeneSequence& seq) override;

 private:
  Standardizer feature_space_;
  double noise_std_;
  Eigen::VectorXd coeffs_[kTaskCount][3];  // per-degree projection vectors
  Rng noise_rng_;
};

// Random coding sequences for synthetic experiments: ATG start, a stop at
// the end, and interior codons drawn from a per-gene usage bias
// (log-normal weights over the 61 non-stop codons). bias_strength 0 gives
// uniform usage; larger values spread the pool out in feature space.
std::vector<GeneSequence> sample_gene_pool(int count, int codon_count,
                                           std::uint64_t seed,
                                           double bias_strength = 0.8);

// Measures every gene with the oracle and assembles the paired dataset.
Dataset measure_pool(const std::vector<GeneSequence>& genes, ExperimentOracle& oracle);

}  // namespace genedesign

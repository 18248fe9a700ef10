#include "genedesign/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "genedesign/codon_table.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"

namespace genedesign {

SyntheticCell::SyntheticCell(Standardizer feature_space, Config config)
    : feature_space_(std::move(feature_space)),
      config_(config),
      noise_rng_(Rng::derive_seed(config.seed, 0)) {
  const Eigen::Index p = feature_space_.center.size();
  Rng rng(Rng::derive_seed(config_.seed, 1));
  for (int l = 0; l < kTaskCount; ++l) {
    Eigen::VectorXd u(p);
    for (Eigen::Index d = 0; d < p; ++d) u[d] = rng.normal();
    direction_[l] = u / u.norm();
  }
  bump_center_.resize(p);
  for (Eigen::Index d = 0; d < p; ++d)
    bump_center_[d] = config_.center_spread * rng.normal();

  if (config_.relevant_dims > 0 && p == kFeatureDimension) {
    // Sparse relevance over recodable dimensions only; gene length (64)
    // cannot change under synonymous substitution.
    std::vector<Eigen::Index> recodable;
    for (Eigen::Index d = 0; d < p; ++d)
      if (d != kGeneLengthFeature) recodable.push_back(d);
    const auto picks = rng.sample_without_replacement(
        recodable.size(), static_cast<std::size_t>(std::min<Eigen::Index>(
                              config_.relevant_dims,
                              static_cast<Eigen::Index>(recodable.size()))));
    for (auto i : picks) relevant_dims_.push_back(recodable[i]);
    std::sort(relevant_dims_.begin(), relevant_dims_.end());
  } else if (config_.relevant_dims > 0) {
    for (Eigen::Index d = 0;
         d < std::min<Eigen::Index>(config_.relevant_dims, p); ++d)
      relevant_dims_.push_back(d);
  } else {
    for (Eigen::Index d = 0; d < p; ++d) relevant_dims_.push_back(d);
  }

  const double ell = config_.bump_width *
                     std::sqrt(static_cast<double>(relevant_dims_.size()));
  bump_inv_lengthscale_ = Eigen::VectorXd::Zero(p);
  for (auto d : relevant_dims_) bump_inv_lengthscale_[d] = 1.0 / ell;
}

RatePair SyntheticCell::ground_truth(const Eigen::VectorXd& features) const {
  const Eigen::VectorXd x = feature_space_.apply(features);
  const double d2 =
      ((x - bump_center_).cwiseProduct(bump_inv_lengthscale_)).squaredNorm();
  const double bump = config_.bump_weight * std::exp(-0.5 * d2);
  return {config_.linear_weight * direction_[0].dot(x) + bump,
          config_.linear_weight * direction_[1].dot(x) + bump};
}

RatePair SyntheticCell::ground_truth(const GeneSequence& seq) const {
  return ground_truth(extract_features(seq));
}

RatePair SyntheticCell::run(const GeneSequence& seq) {
  RatePair rates = ground_truth(seq);
  if (config_.noise_std > 0.0) {
    rates.alpha += config_.noise_std * noise_rng_.normal();
    rates.beta += config_.noise_std * noise_rng_.normal();
  }
  return rates;
}

RandomCubicCell::RandomCubicCell(Standardizer feature_space, std::uint64_t seed,
                                 double noise_std)
    : feature_space_(std::move(feature_space)),
      noise_std_(noise_std),
      noise_rng_(Rng::derive_seed(seed, 0)) {
  const Eigen::Index p = feature_space_.center.size();
  Rng rng(Rng::derive_seed(seed, 1));
  for (int l = 0; l < kTaskCount; ++l)
    for (int degree = 0; degree < 3; ++degree) {
      Eigen::VectorXd v(p);
      for (Eigen::Index d = 0; d < p; ++d) v[d] = rng.normal();
      coeffs_[l][degree] = v / v.norm();
    }
}

RatePair RandomCubicCell::ground_truth(const Eigen::VectorXd& features) const {
  const Eigen::VectorXd x = feature_space_.apply(features);
  RatePair rates{0.0, 0.0};
  double* out[kTaskCount] = {&rates.alpha, &rates.beta};
  for (int l = 0; l < kTaskCount; ++l) {
    const double t1 = coeffs_[l][0].dot(x);
    const double t2 = coeffs_[l][1].dot(x);
    const double t3 = coeffs_[l][2].dot(x);
    *out[l] = t1 + 0.5 * t2 * t2 + 0.2 * t3 * t3 * t3;
  }
  return rates;
}

RatePair RandomCubicCell::run(const GeneSequence& seq) {
  RatePair rates = ground_truth(extract_features(seq));
  if (noise_std_ > 0.0) {
    rates.alpha += noise_std_ * noise_rng_.normal();
    rates.beta += noise_std_ * noise_rng_.normal();
  }
  return rates;
}

std::vector<GeneSequence> sample_gene_pool(int count, int codon_count,
                                           std::uint64_t seed, double bias_strength) {
  if (count < 1 || codon_count < 3)
    throw ConfigError("gene pool needs count >= 1 and codon_count >= 3");
  const CodonTable& table = standard_codon_table();

  std::vector<std::string> coding_codons;
  for (int i = 0; i < kCodonCount; ++i)
    if (table.amino_acid(codon_at(i)) != kStopSymbol) coding_codons.push_back(codon_at(i));
  const std::vector<std::string>& stops = table.amino_to_codons().at(kStopSymbol);

  std::vector<GeneSequence> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int g = 0; g < count; ++g) {
    Rng rng(Rng::derive_seed(seed, static_cast<std::uint64_t>(g)));

    // Per-gene codon usage: log-normal weights, sampled by inverse CDF.
    std::vector<double> cumulative(coding_codons.size());
    double total = 0.0;
    for (std::size_t c = 0; c < coding_codons.size(); ++c) {
      total += std::exp(bias_strength * rng.normal());
      cumulative[c] = total;
    }

    std::string bases = "ATG";
    bases.reserve(3 * static_cast<std::size_t>(codon_count));
    for (int k = 0; k < codon_count - 2; ++k) {
      const double r = rng.uniform() * total;
      const std::size_t idx = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), r) -
          cumulative.begin());
      bases += coding_codons[std::min(idx, coding_codons.size() - 1)];
    }
    bases += stops[rng.uniform_index(stops.size())];

    char id[32];
    std::snprintf(id, sizeof(id), "g%04d", g);
    pool.emplace_back(id, std::move(bases));
  }
  return pool;
}

Dataset measure_pool(const std::vector<GeneSequence>& genes, ExperimentOracle& oracle) {
  if (genes.empty()) throw EmptyInput("measure_pool: no genes");
  std::vector<std::string> ids;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(genes.size()), kFeatureDimension);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(genes.size()), kTaskCount);
  for (std::size_t i = 0; i < genes.size(); ++i) {
    ids.push_back(genes[i].id());
    X.row(static_cast<Eigen::Index>(i)) = extract_features(genes[i]).transpose();
    const RatePair r = oracle.run(genes[i]);
    Y(static_cast<Eigen::Index>(i), 0) = r.alpha;
    Y(static_cast<Eigen::Index>(i), 1) = r.beta;
  }
  return Dataset::create(std::move(ids), std::move(X), std::move(Y));
}

}  // namespace genedesign

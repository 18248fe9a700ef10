#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "genedesign/acquisition.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"
#include "genedesign/gp.hpp"
#include "genedesign/rng.hpp"
#include "genedesign/synthetic.hpp"
#include "genedesign/variants.hpp"
#include "test_util.hpp"

using namespace genedesign;

namespace {

PosteriorPrediction make_pred(double m0, double m1, double c00, double c01,
                              double c11) {
  PosteriorPrediction p;
  p.mean << m0, m1;
  p.cov << c00, c01, c01, c11;
  return p;
}

// Reference EI with its own normal CDF (erf instead of erfc).
double reference_ei(double mean, double sigma, double incumbent) {
  const double d = mean - incumbent;
  if (sigma <= 0.0) return std::max(d, 0.0);
  const double z = d / sigma;
  const double cdf = 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return d * cdf + sigma * pdf;
}

// Small fitted model over a synthetic gene pool, shared across test cases.
struct ToyPipeline {
  std::vector<GeneSequence> genes;
  SyntheticCell cell;
  Dataset data;
  FittedModel model;

  static ToyPipeline make() {
    auto genes = sample_gene_pool(40, 30, 2024);
    Standardizer space = Standardizer::fit(extract_features(genes));
    SyntheticCell::Config cell_config;
    cell_config.seed = 5;
    cell_config.noise_std = 0.05;
    SyntheticCell cell(space, cell_config);
    Dataset data = measure_pool(genes, cell);
    FitConfig fit_config;
    fit_config.max_iters = 80;
    fit_config.n_restarts = 1;
    fit_config.seed = 9;
    FittedModel model = fit(data, fit_config);
    return ToyPipeline{std::move(genes), std::move(cell), std::move(data),
                       std::move(model)};
  }
};

const ToyPipeline& toy() {
  static const ToyPipeline pipeline = ToyPipeline::make();
  return pipeline;
}

std::vector<Candidate> pool_candidates(const Dataset& data) {
  std::vector<Candidate> pool;
  for (Eigen::Index i = 0; i < data.size(); ++i)
    pool.push_back({data.ids[static_cast<std::size_t>(i)],
                    data.features.row(i).transpose()});
  return pool;
}

}  // namespace

TEST_CASE("[averaged] mean and variance of the task average") {
  const AveragedObjective a =
      averaged_objective(make_pred(2.0, 4.0, 1.0, 0.0, 1.0));
  CHECK(a.mean == doctest::Approx(3.0));
  CHECK(a.variance == doctest::Approx(0.5));

  CHECK(averaged_objective(make_pred(0, 0, 1.0, 1.0, 1.0)).variance ==
        doctest::Approx(1.0));
  CHECK(averaged_objective(make_pred(0, 0, 1.0, -1.0, 1.0)).variance ==
        doctest::Approx(0.0));
}

TEST_CASE("[averaged] variance equals v^T K v with v = (1/2, 1/2)") {
  Rng rng(64);
  const Eigen::Vector2d v(0.5, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Matrix2d root;
    root << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    const Eigen::Matrix2d cov = root * root.transpose();
    PosteriorPrediction pred;
    pred.mean << rng.normal(), rng.normal();
    pred.cov = cov;
    CHECK(averaged_objective(pred).variance ==
          doctest::Approx(v.dot(cov * v)).epsilon(1e-12));
  }
}

TEST_CASE("[ei] closed-form anchor values") {
  CHECK(expected_improvement({5.0, 0.0}, 5.0) == 0.0);
  CHECK(expected_improvement({5.0, 1.0}, 5.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-10));
  CHECK(expected_improvement({8.0, 1e-18}, 5.0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(expected_improvement({2.0, 0.0}, 5.0) == 0.0);  // no improvement, no noise
}

TEST_CASE("[ei] non-negative and monotone in sigma below the incumbent") {
  for (double mean = -2.0; mean <= 0.0; mean += 0.25) {
    double previous = -1.0;
    for (double sigma = 0.0; sigma <= 3.0; sigma += 0.1) {
      const double ei = expected_improvement({mean, sigma * sigma}, 0.0);
      CHECK(ei >= 0.0);
      CHECK(ei >= previous - 1e-12);
      previous = ei;
    }
  }
}

TEST_CASE("[ei] agrees with Monte Carlo estimates") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const double mean = rng.uniform(-2.0, 2.0);
    const double sigma = rng.uniform(0.1, 2.0);
    const double incumbent = rng.uniform(-2.0, 2.0);

    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double gain = std::max(rng.normal(mean, sigma) - incumbent, 0.0);
      sum += gain;
      sum_sq += gain * gain;
    }
    const double mc = sum / n;
    const double se = std::sqrt((sum_sq / n - mc * mc) / n);
    const double analytic = expected_improvement({mean, sigma * sigma}, incumbent);
    CHECK(std::abs(analytic - mc) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("[propose] single candidate wins regardless of EI") {
  const auto& t = toy();
  const std::vector<Candidate> one = {pool_candidates(t.data)[0]};
  const DesignRules rules = propose(t.model, one, 1e9);
  CHECK(rules.provenance == one[0].id);
  CHECK(rules.acquisition_value >= 0.0);
}

TEST_CASE("[propose] matches an exhaustive independent recomputation") {
  const auto& t = toy();
  const auto pool = pool_candidates(t.data);
  const double incumbent = t.model.incumbent();
  const DesignRules rules = propose(t.model, pool, incumbent);

  std::size_t best = 0;
  double best_ei = -1.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PosteriorPrediction pred = t.model.predict_one(pool[i].features);
    const double m = 0.5 * (pred.mean[0] + pred.mean[1]);
    const double var = std::max(0.25 * pred.cov.sum(), 0.0);
    const double ei = reference_ei(m, std::sqrt(var), incumbent);
    if (ei > best_ei + 1e-12) {
      best_ei = ei;
      best = i;
    }
  }
  CHECK(rules.provenance == pool[best].id);
  CHECK(rules.acquisition_value == doctest::Approx(best_ei).epsilon(1e-9));
}

TEST_CASE("[propose] duplicating non-optimal candidates changes nothing") {
  const auto& t = toy();
  auto pool = pool_candidates(t.data);
  const DesignRules before = propose(t.model, pool, t.model.incumbent());
  std::vector<Candidate> padded = pool;
  for (const auto& c : pool)
    if (c.id != before.provenance) padded.push_back(c);
  const DesignRules after = propose(t.model, padded, t.model.incumbent());
  CHECK(after.provenance == before.provenance);
  CHECK(after.acquisition_value == before.acquisition_value);
}

TEST_CASE("[propose] rejects an empty pool") {
  CHECK_THROWS_AS(propose(toy().model, {}, 0.0), EmptyCandidates);
}

TEST_CASE("[weights] inverse lengthscales, strictly positive") {
  const auto& t = toy();
  const EvaluationWeights w = evaluation_weights(t.model);
  REQUIRE(w.w.size() == t.model.params().se_lengthscales.size());
  for (Eigen::Index j = 0; j < w.w.size(); ++j) {
    CHECK(w.w[j] > 0.0);
    CHECK(w.w[j] == doctest::Approx(1.0 / t.model.params().se_lengthscales[j]));
  }
}

TEST_CASE("[evaluate] weighted L1 arithmetic") {
  EvaluationWeights w{Eigen::Vector2d(1.0, 2.0)};
  CHECK(evaluate_sequence(Eigen::Vector2d(0.7, -0.3), Eigen::Vector2d(0.7, -0.3), w) ==
        0.0);
  CHECK(evaluate_sequence(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), w) ==
        doctest::Approx(3.0));
  CHECK_THROWS_AS(
      evaluate_sequence(Eigen::Vector2d(0, 0), Eigen::Vector3d(1, 1, 1).head(3), w),
      DimensionMismatch);
}

TEST_CASE("[evaluate] positive rescaling preserves the ordering") {
  Rng rng(3);
  EvaluationWeights w{Eigen::VectorXd::Ones(4)};
  for (Eigen::Index j = 0; j < 4; ++j) w.w[j] = std::exp(rng.normal());
  EvaluationWeights scaled{w.w * 7.3};
  const Eigen::VectorXd target = Eigen::VectorXd::Zero(4);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(4), b(4);
    for (Eigen::Index j = 0; j < 4; ++j) {
      a[j] = rng.normal();
      b[j] = rng.normal();
    }
    const double sa = evaluate_sequence(a, target, w);
    const double sb = evaluate_sequence(b, target, w);
    const double sa2 = evaluate_sequence(a, target, scaled);
    const double sb2 = evaluate_sequence(b, target, scaled);
    CHECK(sa2 == doctest::Approx(7.3 * sa).epsilon(1e-12));
    CHECK((sa < sb) == (sa2 < sb2));
  }
}

TEST_CASE("[rank] a candidate matching x* exactly ranks first with score 0") {
  const auto& t = toy();
  const auto variants =
      synonymous_variants(t.genes[3], 50, standard_codon_table(), 77);
  DesignRules rules{extract_features(variants[17]), variants[17].id(), 1.0};
  const auto ranked = rank_sequences(t.model, variants, rules);
  CHECK(ranked.front().sequence.id() == variants[17].id());
  CHECK(ranked.front().score == 0.0);
}

TEST_CASE("[rank] top pick matches exhaustive enumeration") {
  const auto& t = toy();
  const auto variants =
      synonymous_variants(t.genes[5], 1000, standard_codon_table(), 31);
  const DesignRules rules =
      propose(t.model, pool_candidates(t.data), t.model.incumbent());
  const auto ranked = rank_sequences(t.model, variants, rules);

  // Brute force with the public scoring pieces only.
  const EvaluationWeights w = evaluation_weights(t.model);
  const Eigen::VectorXd x_star = t.model.standardizer().apply(rules.x_star);
  double best = std::numeric_limits<double>::infinity();
  std::string best_id;
  for (const auto& v : variants) {
    const double s = evaluate_sequence(
        t.model.standardizer().apply(extract_features(v)), x_star, w);
    if (s < best) {
      best = s;
      best_id = v.id();
    }
  }
  CHECK(ranked.front().sequence.id() == best_id);
  CHECK(ranked.front().score == doctest::Approx(best).epsilon(1e-12));
  for (std::size_t i = 1; i < ranked.size(); ++i)
    CHECK(ranked[i - 1].score <= ranked[i].score);
}

TEST_CASE("[rank] permutation only reorders ties") {
  const auto& t = toy();
  auto variants = synonymous_variants(t.genes[7], 60, standard_codon_table(), 13);
  DesignRules rules{extract_features(t.genes[0]), t.genes[0].id(), 0.5};
  const auto ranked = rank_sequences(t.model, variants, rules);

  std::vector<GeneSequence> shuffled = variants;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto ranked2 = rank_sequences(t.model, shuffled, rules);

  std::multimap<double, std::string> a, b;
  for (const auto& r : ranked) a.emplace(r.score, r.sequence.id());
  for (const auto& r : ranked2) b.emplace(r.score, r.sequence.id());
  CHECK(a == b);
}

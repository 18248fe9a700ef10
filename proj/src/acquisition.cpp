#include "genedesign/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"

namespace genedesign {

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

AveragedObjective averaged_objective(const PosteriorPrediction& pred) {
  AveragedObjective obj;
  obj.mean = 0.5 * (pred.mean[0] + pred.mean[1]);
  obj.variance = 0.25 * pred.cov.sum();
  if (obj.variance < -1e-9)
    throw InternalError("averaged objective variance is negative beyond tolerance");
  obj.variance = std::max(obj.variance, 0.0);
  return obj;
}

double expected_improvement(const AveragedObjective& obj, double incumbent, double xi) {
  const double improvement = obj.mean - incumbent - xi;
  const double sigma = std::sqrt(obj.variance);
  if (sigma == 0.0) return std::max(improvement, 0.0);
  const double z = improvement / sigma;
  return improvement * normal_cdf(z) + sigma * normal_pdf(z);
}

DesignRules propose(const FittedModel& model, const std::vector<Candidate>& candidates,
                    double incumbent, double xi, std::vector<CandidateScore>* scores) {
  if (candidates.empty()) throw EmptyCandidates("propose: candidate pool is empty");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(candidates.size()),
                    candidates[0].features.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].features.size() != X.cols())
      throw DimensionMismatch("propose: candidate '" + candidates[i].id +
                              "' has inconsistent feature dimension");
    X.row(static_cast<Eigen::Index>(i)) = candidates[i].features.transpose();
  }
  const std::vector<PosteriorPrediction> preds = model.predict(X);

  std::size_t best_index = 0;
  double best_ei = -1.0;
  if (scores) scores->clear();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const AveragedObjective obj = averaged_objective(preds[i]);
    const double ei = expected_improvement(obj, incumbent, xi);
    if (scores)
      scores->push_back({candidates[i].id, ei, obj.mean, std::sqrt(obj.variance)});
    if (ei > best_ei) {
      best_ei = ei;
      best_index = i;
    }
  }
  return DesignRules{candidates[best_index].features, candidates[best_index].id,
                     best_ei};
}

DesignRules propose(const FittedModel& model, const std::vector<Candidate>& candidates) {
  return propose(model, candidates, model.incumbent());
}

EvaluationWeights evaluation_weights(const FittedModel& model) {
  return EvaluationWeights{model.params().se_lengthscales.cwiseInverse()};
}

double evaluate_sequence(const Eigen::VectorXd& x, const Eigen::VectorXd& x_star,
                         const EvaluationWeights& weights) {
  if (x.size() != x_star.size() || x.size() != weights.w.size())
    throw DimensionMismatch("evaluate_sequence: dimensions disagree");
  return weights.w.dot((x - x_star).cwiseAbs());
}

std::vector<RankedSequence> rank_sequences(const FittedModel& model,
                                           const std::vector<GeneSequence>& candidates,
                                           const DesignRules& rules) {
  if (candidates.empty()) throw EmptyCandidates("rank_sequences: no candidates");
  const EvaluationWeights weights = evaluation_weights(model);
  const Eigen::VectorXd x_star_std = model.standardizer().apply(rules.x_star);

  std::vector<RankedSequence> ranked;
  ranked.reserve(candidates.size());
  for (const auto& seq : candidates) {
    Eigen::VectorXd x = extract_features(seq);
    const double score =
        evaluate_sequence(model.standardizer().apply(x), x_star_std, weights);
    ranked.push_back({seq, score, std::move(x)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedSequence& a, const RankedSequence& b) {
                     return a.score < b.score;
                   });
  return ranked;
}

}  // namespace genedesign

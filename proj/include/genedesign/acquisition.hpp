#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "genedesign/gp.hpp"
#include "genedesign/sequence.hpp"

namespace genedesign {

// Scalarized two-task objective: mean and variance of the task average
// under the joint posterior.
struct AveragedObjective {
  double mean;
  double variance;  // >= 0 after construction
};

AveragedObjective averaged_objective(const PosteriorPrediction& pred);

// Expected improvement of the averaged objective over the incumbent
// (maximization). xi offsets the incumbent for extra exploration; 0 is the
// plain criterion.
double expected_improvement(const AveragedObjective& obj, double incumbent,
                            double xi = 0.0);

struct Candidate {
  std::string id;
  Eigen::VectorXd features;
};

// The proposed design rules x*: the feature vector of the acquisition
// argmax over a discrete candidate pool.
struct DesignRules {
  Eigen::VectorXd x_star;      // raw feature space
  std::string provenance;      // id of the winning candidate
  double acquisition_value;    // EI at the winner
};

struct CandidateScore {
  std::string id;
  double ei;
  double posterior_mean;
  double posterior_std;
};

// Scores every candidate with EI of the averaged objective and returns the
// argmax; ties go to the lowest index. Incumbent defaults to the model's
// best observed averaged rate.
DesignRules propose(const FittedModel& model, const std::vector<Candidate>& candidates,
                    double incumbent, double xi = 0.0,
                    std::vector<CandidateScore>* scores = nullptr);
DesignRules propose(const FittedModel& model, const std::vector<Candidate>& candidates);

// Per-feature ranking weights: inverse SE lengthscales, which live in the
// standardized feature space.
struct EvaluationWeights {
  Eigen::VectorXd w;  // > 0
};

EvaluationWeights evaluation_weights(const FittedModel& model);

// Weighted L1 distance between two points given in the same space as the
// weights; lower is better.
double evaluate_sequence(const Eigen::VectorXd& x, const Eigen::VectorXd& x_star,
                         const EvaluationWeights& weights);

struct RankedSequence {
  GeneSequence sequence;
  double score;
  Eigen::VectorXd features;  // raw feature space
};

// Extracts features for every candidate sequence, scores the weighted L1
// deviation from x* in the model's standardized space, and sorts ascending
// (stable, so ties keep input order).
std::vector<RankedSequence> rank_sequences(const FittedModel& model,
                                           const std::vector<GeneSequence>& candidates,
                                           const DesignRules& rules);

}  // namespace genedesign

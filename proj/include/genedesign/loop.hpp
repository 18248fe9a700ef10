#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genedesign/acquisition.hpp"
#include "genedesign/dataset.hpp"
#include "genedesign/gp.hpp"
#include "genedesign/oracle.hpp"
#include "genedesign/sequence.hpp"

namespace genedesign {

struct LoopConfig {
  int iterations = 20;
  int n_variants = 1000;
  int refit_every = 1;  // refit the surrogate every k-th iteration
  std::uint64_t seed = 0;
  double ei_xi = 0.0;
  FitConfig fit;
};

struct IterationRecord {
  int iteration;  // 1-based
  std::string proposed_id;
  double acquisition_value;
  Eigen::VectorXd x_star;  // design rules, raw feature space
  std::string selected_id;
  double y_alpha;
  double y_beta;
  double averaged_rate;
  double incumbent;            // best averaged rate after this iteration
  double wall_clock_seconds;   // in-memory only; kept out of serialized outputs
};

struct LoopHistory {
  std::vector<IterationRecord> records;
  Dataset final_data;   // initial rows plus one appended row per iteration
  double final_incumbent;
  std::string best_id;  // data row id achieving the final incumbent
  std::optional<GeneSequence> best_sequence;  // set when an evaluated variant won
};

// One closed-loop iteration: propose design rules over the pool, rank
// synonymous variants of the seed gene against them, measure the winner,
// and append the observation to the dataset.
struct BoStepResult {
  IterationRecord record;
  Dataset data;
  GeneSequence selected_sequence;
};

BoStepResult bo_step(const FittedModel& model, const std::vector<Candidate>& pool,
                     const GeneSequence& seed_gene, ExperimentOracle& oracle,
                     Dataset data, const LoopConfig& config, int iteration);

// The full optimization loop; seed genes are used round-robin across
// iterations. Deterministic given data, pool, seeds, the oracle's own
// seeding, and config.seed.
LoopHistory run_loop(const Dataset& initial, const std::vector<Candidate>& pool,
                     const std::vector<GeneSequence>& seed_genes,
                     ExperimentOracle& oracle, const LoopConfig& config);

// Matched-budget baseline: same variant generation, but the measured
// sequence is drawn uniformly instead of model-ranked.
LoopHistory random_search_loop(const Dataset& initial,
                               const std::vector<GeneSequence>& seed_genes,
                               ExperimentOracle& oracle, const LoopConfig& config);

// Ids of k genes sampled uniformly (without replacement) from those whose
// averaged natural-log rate falls below the threshold.
std::vector<std::string> select_difficult(const Dataset& data, double threshold,
                                          int k, std::uint64_t seed);

// One row per iteration; excludes wall-clock so reruns are byte-identical.
std::string history_to_csv(const LoopHistory& history);

}  // namespace genedesign

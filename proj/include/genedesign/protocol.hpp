#pragma once

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

struct ProtocolConfig {
  int n_train = 200;        // genes sampled into the training split
  double threshold = 1.5;   // averaged-log-rate cutoff for difficult genes
  int k_difficult = 10;
  int n_variants = 1000;
  std::uint64_t seed = 0;
  FitConfig fit;
};

// Per-gene acquisition scatter: EI against the observed averaged rate.
struct EiScatterRow {
  std::string id;
  double ei;
  double true_averaged_rate;
};

// One difficult gene: its measured rates, the model's posterior for the
// top-ranked recombinant variant (with 95% intervals), and the variant's
// ground-truth rates when an oracle is available.
struct DifficultGeneRow {
  std::string gene_id;
  double y_alpha;
  double y_beta;
  double averaged_rate;
  std::string variant_id;
  GeneSequence variant;
  double pred_alpha;
  double pred_beta;
  double pred_averaged;
  double pred_alpha_std;
  double pred_beta_std;
  double pred_alpha_lo;   // mean - 1.96 * std
  double pred_alpha_hi;
  double pred_beta_lo;
  double pred_beta_hi;
  std::optional<RatePair> true_variant_rates;
};

struct ProtocolReport {
  DesignRules rules;
  double fitted_log_marginal;
  std::vector<std::string> train_ids;
  std::vector<EiScatterRow> scatter;       // one row per gene in the data
  EvaluationWeights weights;               // inverse lengthscales
  std::vector<DifficultGeneRow> difficult; // one row per selected gene
};

// The offline experiment: split, fit on the training genes, take the EI
// argmax over every gene as the design rules, pick difficult genes, rank
// their synonymous variants, and predict the winners' rates with 95%
// intervals. `truth`, when given, also measures each winning variant.
ProtocolReport reproduce_protocol(const Dataset& data,
                                  const std::vector<GeneSequence>& sequences,
                                  const ProtocolConfig& config,
                                  ExperimentOracle* truth = nullptr);

std::string protocol_report_to_csv(const ProtocolReport& report);
std::string ei_scatter_to_csv(const std::vector<EiScatterRow>& scatter);
std::string weights_to_csv(const EvaluationWeights& weights);

}  // namespace genedesign

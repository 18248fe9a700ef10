#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "genedesign/gp.hpp"
#include "genedesign/run_config.hpp"

namespace genedesign {

// Command implementations behind the CLI. Each writes its outputs
// atomically under the given paths and throws genedesign errors on
// input problems; the binary maps those to exit codes.

void cmd_features(const std::string& fasta_path, const std::string& out_path);

struct FitSummary {
  double log_marginal;
  Eigen::Index n_genes;
  std::size_t unmatched_ids;
};
FitSummary cmd_fit(const std::string& features_path, const std::string& rates_path,
                   const std::string& model_out, const FitConfig& config,
                   std::ostream& diagnostics);

struct ProposeSummary {
  std::string winner_id;
  double acquisition_value;
};
ProposeSummary cmd_propose(const std::string& model_path,
                           const std::string& candidates_path,
                           const std::string& rates_path,  // may be empty
                           const std::string& out_dir);

struct RankSummary {
  std::string top_id;
  double top_score;
};
RankSummary cmd_rank(const std::string& model_path, const std::string& rules_path,
                     const std::string& seed_gene_path, int n_variants,
                     std::uint64_t seed, const std::string& out_dir);

struct LoopSummary {
  double initial_incumbent;
  double final_incumbent;
  std::string best_id;
};
LoopSummary cmd_loop(const RunConfig& config);

struct ProtocolSummary {
  int improved;  // difficult genes whose top variant beats the original (truth known)
  int total;
};
ProtocolSummary cmd_protocol(const RunConfig& config);

}  // namespace genedesign

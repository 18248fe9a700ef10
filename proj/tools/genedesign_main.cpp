// genedesign: Bayesian-optimization toolkit for synthetic gene design.
//
// Subcommands: features, fit, propose, rank, loop, protocol.
// Exit codes: 0 success, 1 input/domain error, 2 internal invariant failure.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>

#include "genedesign/commands.hpp"
#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/run_config.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int iters = 0;
  bool iters_set = false;
  int restarts = 0;
  bool restarts_set = false;
  int variants = 0;
  bool variants_set = false;
  double threshold = 0.0;
  bool threshold_set = false;
};

// Flags override whatever the config file provided.
genedesign::RunConfig resolve_config(const CommonFlags& flags) {
  genedesign::RunConfig config;
  if (!flags.config_path.empty())
    config = genedesign::RunConfig::from_file(flags.config_path);
  if (!flags.out_dir.empty()) config.paths.out_dir = flags.out_dir;
  if (flags.seed_set) {
    config.loop.seed = flags.seed;
    config.fit.seed = flags.seed;
    config.protocol.seed = flags.seed;
  }
  if (flags.iters_set) config.loop.iterations = flags.iters;
  if (flags.restarts_set) config.fit.n_restarts = flags.restarts;
  if (flags.variants_set) config.loop.n_variants = flags.variants;
  if (flags.threshold_set) config.loop.threshold = flags.threshold;
  config.validate();
  return config;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON run configuration");
  cmd->add_option("--out-dir", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "master seed (loop/fit/protocol)")
      ->each([&](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--iters", flags.iters, "loop iterations")
      ->each([&](const std::string&) { flags.iters_set = true; });
  cmd->add_option("--restarts", flags.restarts, "fit restarts")
      ->each([&](const std::string&) { flags.restarts_set = true; });
  cmd->add_option("--variants", flags.variants, "synonymous variants per gene")
      ->each([&](const std::string&) { flags.variants_set = true; });
  cmd->add_option("--threshold", flags.threshold, "difficult-gene log-rate threshold")
      ->each([&](const std::string&) { flags.threshold_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian-optimization toolkit for synthetic gene design"};
  app.require_subcommand(1);

  // features
  auto* features = app.add_subcommand("features", "extract 69-dim features from FASTA");
  std::string fasta_path, out_path = "features.csv";
  features->add_option("--fasta", fasta_path, "input FASTA")->required();
  features->add_option("--out", out_path, "output CSV");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit the two-task GP surrogate");
  std::string fit_features, fit_rates, model_out = "model.json";
  int fit_iters = 1000, fit_restarts = 10;
  std::uint64_t fit_seed = 0;
  fit_cmd->add_option("--features", fit_features, "feature CSV")->required();
  fit_cmd->add_option("--rates", fit_rates, "rates CSV (id,y_alpha,y_beta)")->required();
  fit_cmd->add_option("--out", model_out, "model output path");
  fit_cmd->add_option("--iters", fit_iters, "optimizer iterations");
  fit_cmd->add_option("--restarts", fit_restarts, "random restarts");
  fit_cmd->add_option("--seed", fit_seed, "restart seed");

  // propose
  auto* propose_cmd = app.add_subcommand("propose", "select design rules by EI");
  std::string propose_model, propose_candidates, propose_rates, propose_out = "out";
  propose_cmd->add_option("--model", propose_model, "model file")->required();
  propose_cmd->add_option("--candidates", propose_candidates, "candidate feature CSV")
      ->required();
  propose_cmd->add_option("--rates", propose_rates,
                          "observed rates CSV for the EI scatter");
  propose_cmd->add_option("--out-dir", propose_out, "output directory");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "rank synonymous variants of a gene");
  std::string rank_model, rank_rules, rank_gene, rank_out = "out";
  int rank_variants = 1000;
  std::uint64_t rank_seed = 0;
  rank_cmd->add_option("--model", rank_model, "model file")->required();
  rank_cmd->add_option("--rules", rank_rules, "design-rules file")->required();
  rank_cmd->add_option("--seed-gene", rank_gene, "FASTA with one seed gene")->required();
  rank_cmd->add_option("--variants", rank_variants, "variant count");
  rank_cmd->add_option("--seed", rank_seed, "variant generation seed");
  rank_cmd->add_option("--out-dir", rank_out, "output directory");

  // loop / protocol
  auto* loop_cmd = app.add_subcommand("loop", "run the closed optimization loop");
  CommonFlags loop_flags;
  add_common_flags(loop_cmd, loop_flags);
  auto* protocol_cmd =
      app.add_subcommand("protocol", "offline protocol: fit, propose, rank, predict");
  CommonFlags protocol_flags;
  add_common_flags(protocol_cmd, protocol_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 1;
  }

  try {
    if (features->parsed()) {
      genedesign::cmd_features(fasta_path, out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (fit_cmd->parsed()) {
      genedesign::FitConfig config;
      config.max_iters = fit_iters;
      config.n_restarts = fit_restarts;
      config.seed = fit_seed;
      const auto summary = genedesign::cmd_fit(fit_features, fit_rates, model_out,
                                               config, std::cerr);
      std::cout << "fitted " << summary.n_genes << " genes; log marginal likelihood "
                << genedesign::format_double(summary.log_marginal) << "\n";
    } else if (propose_cmd->parsed()) {
      const auto summary = genedesign::cmd_propose(propose_model, propose_candidates,
                                                   propose_rates, propose_out);
      std::cout << "design rules from '" << summary.winner_id << "' (EI "
                << genedesign::format_double(summary.acquisition_value) << ")\n";
    } else if (rank_cmd->parsed()) {
      const auto summary = genedesign::cmd_rank(rank_model, rank_rules, rank_gene,
                                                rank_variants, rank_seed, rank_out);
      std::cout << "top variant " << summary.top_id << " (score "
                << genedesign::format_double(summary.top_score) << ")\n";
    } else if (loop_cmd->parsed()) {
      const auto summary = genedesign::cmd_loop(resolve_config(loop_flags));
      std::cout << "incumbent " << genedesign::format_double(summary.initial_incumbent)
                << " -> " << genedesign::format_double(summary.final_incumbent)
                << " (best: " << summary.best_id << ")\n";
    } else if (protocol_cmd->parsed()) {
      const auto summary = genedesign::cmd_protocol(resolve_config(protocol_flags));
      std::cout << "recombinant beats original in " << summary.improved << "/"
                << summary.total << " difficult genes\n";
    }
  } catch (const genedesign::Error& e) {
    std::cerr << "error [" << e.name() << "]: " << e.what() << "\n";
    return 1;
  } catch (const genedesign::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

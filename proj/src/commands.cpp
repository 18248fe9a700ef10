#include "genedesign/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <memory>
#include <ostream>

#include "genedesign/acquisition.hpp"
#include "genedesign/csv.hpp"
#include "genedesign/dataset.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"
#include "genedesign/loop.hpp"
#include "genedesign/model_io.hpp"
#include "genedesign/oracle.hpp"
#include "genedesign/protocol.hpp"
#include "genedesign/synthetic.hpp"
#include "genedesign/variants.hpp"

namespace genedesign {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::vector<Candidate> candidates_from_csv(const std::string& path) {
  std::vector<std::string> ids;
  Eigen::MatrixXd X;
  read_features_csv(path, ids, X);
  std::vector<Candidate> pool;
  pool.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    pool.push_back({ids[i], X.row(static_cast<Eigen::Index>(i)).transpose()});
  return pool;
}

// Everything the loop and protocol commands need, assembled either from
// input files or from a seeded synthetic generation pass.
struct Workbench {
  std::vector<GeneSequence> genes;
  Dataset data;                    // measured genes (loop: the initial set)
  std::vector<Candidate> pool;     // acquisition candidates
  std::vector<GeneSequence> seeds; // genes targeted for recoding
  std::unique_ptr<ExperimentOracle> oracle;
  SyntheticCell* cell = nullptr;   // set when the oracle is the synthetic cell
};

Workbench assemble(const RunConfig& config, bool measure_all) {
  Workbench bench;
  if (config.paths.fasta.empty()) {
    // Synthetic generation; the loop measures only the first n_initial
    // genes, the protocol measures the whole pool.
    const auto& sd = config.synthetic_data;
    bench.genes = sample_gene_pool(sd.n_pool, sd.gene_codons, sd.seed, sd.bias_strength);
    const Standardizer space = Standardizer::fit(extract_features(bench.genes));
    auto cell = std::make_unique<SyntheticCell>(space, config.oracle.cell);
    bench.cell = cell.get();
    bench.oracle = std::move(cell);

    const std::vector<GeneSequence> measured(
        bench.genes.begin(),
        measure_all ? bench.genes.end() : bench.genes.begin() + sd.n_initial);
    bench.data = measure_pool(measured, *bench.oracle);
    for (const auto& g : bench.genes)
      bench.pool.push_back({g.id(), extract_features(g)});
    bench.seeds.assign(bench.genes.begin(), bench.genes.begin() + sd.n_seed_genes);
    return bench;
  }

  if (config.paths.rates.empty())
    throw ConfigError("paths.fasta requires paths.rates with measured rates");
  bench.genes = read_fasta_file(config.paths.fasta);
  std::vector<std::string> rate_ids;
  Eigen::MatrixXd rates;
  read_rates_csv(config.paths.rates, rate_ids, rates);
  std::vector<std::string> gene_ids;
  for (const auto& g : bench.genes) gene_ids.push_back(g.id());
  bench.data = join_features_rates(gene_ids, extract_features(bench.genes),
                                   rate_ids, rates);

  for (Eigen::Index i = 0; i < bench.data.size(); ++i)
    bench.pool.push_back({bench.data.ids[static_cast<std::size_t>(i)],
                          bench.data.features.row(i).transpose()});
  const int n_seeds =
      std::min<int>(config.synthetic_data.n_seed_genes,
                    static_cast<int>(bench.data.size()));
  for (const auto& g : bench.genes) {
    if (static_cast<int>(bench.seeds.size()) >= n_seeds) break;
    if (std::find(bench.data.ids.begin(), bench.data.ids.end(), g.id()) !=
        bench.data.ids.end())
      bench.seeds.push_back(g);
  }

  if (config.oracle.kind == "replay") {
    bench.oracle = std::make_unique<ReplayOracle>(
        ReplayOracle::from_json_file(config.oracle.replay_path));
  } else {
    const Standardizer space = Standardizer::fit(bench.data.features);
    auto cell = std::make_unique<SyntheticCell>(space, config.oracle.cell);
    bench.cell = cell.get();
    bench.oracle = std::move(cell);
  }
  return bench;
}

std::string format_deviation_columns(const Eigen::VectorXd& weighted_dev) {
  // The ten largest weighted deviations as name:value annotations.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(weighted_dev.size()));
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<Eigen::Index>(j);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return weighted_dev[a] > weighted_dev[b];
  });
  std::string out;
  const auto& names = feature_names();
  for (int k = 0; k < 10; ++k) {
    out += ',';
    if (k < static_cast<int>(order.size()))
      out += names[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] + ":" +
             format_double(weighted_dev[order[static_cast<std::size_t>(k)]]);
  }
  return out;
}

}  // namespace

void cmd_features(const std::string& fasta_path, const std::string& out_path) {
  const std::vector<GeneSequence> genes = read_fasta_file(fasta_path);
  std::vector<std::string> ids;
  for (const auto& g : genes) ids.push_back(g.id());
  atomic_write_file(out_path, features_to_csv(ids, extract_features(genes)));
}

FitSummary cmd_fit(const std::string& features_path, const std::string& rates_path,
                   const std::string& model_out, const FitConfig& config,
                   std::ostream& diagnostics) {
  std::vector<std::string> feature_ids, rate_ids;
  Eigen::MatrixXd X, Y;
  read_features_csv(features_path, feature_ids, X);
  read_rates_csv(rates_path, rate_ids, Y);

  std::vector<std::string> unmatched;
  const Dataset data = join_features_rates(feature_ids, X, rate_ids, Y, &unmatched);
  for (const auto& id : unmatched)
    diagnostics << "warning: id '" << id << "' present in only one input, skipped\n";
  if (data.size() < 2)
    throw Error("TooFewGenes", "joined dataset has fewer than 2 genes");

  const FittedModel model = fit(data, config);
  save_model(model_out, model);
  return FitSummary{model.log_marginal(), data.size(), unmatched.size()};
}

ProposeSummary cmd_propose(const std::string& model_path,
                           const std::string& candidates_path,
                           const std::string& rates_path,
                           const std::string& out_dir) {
  const FittedModel model = load_model(model_path);
  const std::vector<Candidate> pool = candidates_from_csv(candidates_path);

  std::vector<std::string> rate_ids;
  Eigen::MatrixXd rates;
  std::vector<std::pair<bool, double>> true_avg(pool.size(), {false, 0.0});
  if (!rates_path.empty()) {
    read_rates_csv(rates_path, rate_ids, rates);
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t r = 0; r < rate_ids.size(); ++r)
        if (rate_ids[r] == pool[i].id)
          true_avg[i] = {true, 0.5 * (rates(static_cast<Eigen::Index>(r), 0) +
                                      rates(static_cast<Eigen::Index>(r), 1))};
  }

  std::vector<CandidateScore> scores;
  const DesignRules rules = propose(model, pool, model.incumbent(), 0.0, &scores);

  ensure_out_dir(out_dir);
  save_design_rules(join_path(out_dir, "design_rules.json"), rules);

  std::string csv = "id,ei,posterior_mean,posterior_std,true_averaged_rate\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    csv += scores[i].id;
    csv += ',' + format_double(scores[i].ei);
    csv += ',' + format_double(scores[i].posterior_mean);
    csv += ',' + format_double(scores[i].posterior_std);
    csv += ',';
    if (true_avg[i].first) csv += format_double(true_avg[i].second);
    csv += '\n';
  }
  atomic_write_file(join_path(out_dir, "ei_scatter.csv"), csv);
  return ProposeSummary{rules.provenance, rules.acquisition_value};
}

RankSummary cmd_rank(const std::string& model_path, const std::string& rules_path,
                     const std::string& seed_gene_path, int n_variants,
                     std::uint64_t seed, const std::string& out_dir) {
  if (n_variants < 1) throw ConfigError("rank: --variants must be >= 1");
  const FittedModel model = load_model(model_path);
  const DesignRules rules = load_design_rules(rules_path);
  const std::vector<GeneSequence> genes = read_fasta_file(seed_gene_path);
  if (genes.size() != 1)
    throw Error("SeedGeneCount", "rank expects exactly one seed gene, got " +
                                     std::to_string(genes.size()));

  const std::vector<GeneSequence> variants =
      synonymous_variants(genes[0], n_variants, standard_codon_table(), seed);
  const std::vector<RankedSequence> ranked = rank_sequences(model, variants, rules);

  const EvaluationWeights weights = evaluation_weights(model);
  const Eigen::VectorXd x_star_std = model.standardizer().apply(rules.x_star);

  std::string csv = "rank,id,score";
  for (int k = 1; k <= 10; ++k) csv += ",top" + std::to_string(k);
  csv += '\n';
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const Eigen::VectorXd dev =
        (model.standardizer().apply(ranked[i].features) - x_star_std)
            .cwiseAbs()
            .cwiseProduct(weights.w);
    csv += std::to_string(i + 1);
    csv += ',' + ranked[i].sequence.id();
    csv += ',' + format_double(ranked[i].score);
    csv += format_deviation_columns(dev);
    csv += '\n';
  }
  ensure_out_dir(out_dir);
  atomic_write_file(join_path(out_dir, "ranking.csv"), csv);
  atomic_write_file(join_path(out_dir, "top_variant.fa"),
                    to_fasta({ranked.front().sequence}));
  return RankSummary{ranked.front().sequence.id(), ranked.front().score};
}

LoopSummary cmd_loop(const RunConfig& config) {
  config.validate();
  Workbench bench = assemble(config, /*measure_all=*/false);

  LoopConfig loop_config;
  loop_config.iterations = config.loop.iterations;
  loop_config.n_variants = config.loop.n_variants;
  loop_config.refit_every = config.loop.refit_every;
  loop_config.seed = config.loop.seed;
  loop_config.fit = config.fit;

  const double initial_incumbent = bench.data.best_averaged_rate();
  const LoopHistory history =
      run_loop(bench.data, bench.pool, bench.seeds, *bench.oracle, loop_config);

  ensure_out_dir(config.paths.out_dir);
  atomic_write_file(join_path(config.paths.out_dir, "history.csv"),
                    history_to_csv(history));
  atomic_write_file(join_path(config.paths.out_dir, "manifest.json"),
                    config.to_json());
  if (history.best_sequence)
    atomic_write_file(join_path(config.paths.out_dir, "best_sequence.fa"),
                      to_fasta({*history.best_sequence}));
  return LoopSummary{initial_incumbent, history.final_incumbent, history.best_id};
}

ProtocolSummary cmd_protocol(const RunConfig& config) {
  config.validate();
  Workbench bench = assemble(config, /*measure_all=*/true);

  ProtocolConfig pc;
  pc.n_train = config.protocol.n_train;
  pc.threshold = config.loop.threshold;
  pc.k_difficult = config.loop.k_difficult;
  pc.n_variants = config.loop.n_variants;
  pc.seed = config.protocol.seed;
  pc.fit = config.fit;

  // Ground-truth scoring of the recombinant picks uses the noise-free cell;
  // a replay oracle is used as-is (it may legitimately miss variants).
  std::unique_ptr<SyntheticCell> truth_cell;
  ExperimentOracle* truth = nullptr;
  if (bench.cell) {
    SyntheticCell::Config noise_free = bench.cell->config();
    noise_free.noise_std = 0.0;
    truth_cell =
        std::make_unique<SyntheticCell>(bench.cell->feature_space(), noise_free);
    truth = truth_cell.get();
  } else if (config.oracle.kind == "replay") {
    truth = bench.oracle.get();
  }

  const ProtocolReport report =
      reproduce_protocol(bench.data, bench.genes, pc, truth);

  ensure_out_dir(config.paths.out_dir);
  atomic_write_file(join_path(config.paths.out_dir, "report.csv"),
                    protocol_report_to_csv(report));
  atomic_write_file(join_path(config.paths.out_dir, "ei_scatter.csv"),
                    ei_scatter_to_csv(report.scatter));
  atomic_write_file(join_path(config.paths.out_dir, "weights.csv"),
                    weights_to_csv(report.weights));
  save_design_rules(join_path(config.paths.out_dir, "design_rules.json"),
                    report.rules);
  atomic_write_file(join_path(config.paths.out_dir, "manifest.json"),
                    config.to_json());

  ProtocolSummary summary{0, static_cast<int>(report.difficult.size())};
  for (const auto& row : report.difficult)
    if (row.true_variant_rates &&
        0.5 * (row.true_variant_rates->alpha + row.true_variant_rates->beta) >
            row.averaged_rate)
      ++summary.improved;
  return summary;
}

}  // namespace genedesign

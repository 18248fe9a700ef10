#include "genedesign/loop.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"
#include "genedesign/rng.hpp"
#include "genedesign/variants.hpp"

namespace genedesign {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string best_initial_id(const Dataset& data) {
  double best = -std::numeric_limits<double>::infinity();
  std::string id;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (!(data.observed(i, 0) && data.observed(i, 1))) continue;
    const double avg = 0.5 * (data.rates(i, 0) + data.rates(i, 1));
    if (avg > best) {
      best = avg;
      id = data.ids[static_cast<std::size_t>(i)];
    }
  }
  return id;
}

void validate_loop_config(const LoopConfig& config) {
  if (config.iterations < 0) throw ConfigError("loop: iterations must be >= 0");
  if (config.n_variants < 1) throw ConfigError("loop: n_variants must be >= 1");
  if (config.refit_every < 1) throw ConfigError("loop: refit_every must be >= 1");
}

}  // namespace

BoStepResult bo_step(const FittedModel& model, const std::vector<Candidate>& pool,
                     const GeneSequence& seed_gene, ExperimentOracle& oracle,
                     Dataset data, const LoopConfig& config, int iteration) {
  const auto start = std::chrono::steady_clock::now();
  const double incumbent = data.best_averaged_rate();

  const DesignRules rules = propose(model, pool, incumbent, config.ei_xi);

  const std::vector<GeneSequence> variants =
      synonymous_variants(seed_gene, config.n_variants, standard_codon_table(),
                          Rng::derive_seed(config.seed, static_cast<std::uint64_t>(iteration)));
  const std::vector<RankedSequence> ranked = rank_sequences(model, variants, rules);
  const RankedSequence& chosen = ranked.front();

  const RatePair rates = oracle.run(chosen.sequence);
  data.append(chosen.sequence.id(), chosen.features, rates.alpha, rates.beta);

  IterationRecord record;
  record.iteration = iteration;
  record.proposed_id = rules.provenance;
  record.acquisition_value = rules.acquisition_value;
  record.x_star = rules.x_star;
  record.selected_id = chosen.sequence.id();
  record.y_alpha = rates.alpha;
  record.y_beta = rates.beta;
  record.averaged_rate = 0.5 * (rates.alpha + rates.beta);
  record.incumbent = std::max(incumbent, record.averaged_rate);
  record.wall_clock_seconds = seconds_since(start);
  return BoStepResult{std::move(record), std::move(data), chosen.sequence};
}

LoopHistory run_loop(const Dataset& initial, const std::vector<Candidate>& pool,
                     const std::vector<GeneSequence>& seed_genes,
                     ExperimentOracle& oracle, const LoopConfig& config) {
  validate_loop_config(config);
  if (seed_genes.empty()) throw EmptyCandidates("run_loop: no seed genes");

  LoopHistory history;
  history.final_incumbent = initial.best_averaged_rate();
  history.best_id = best_initial_id(initial);

  Dataset data = initial;
  std::optional<FittedModel> model;
  for (int t = 1; t <= config.iterations; ++t) {
    try {
      if (!model || (t - 1) % config.refit_every == 0) model = fit(data, config.fit);
      const GeneSequence& seed_gene =
          seed_genes[static_cast<std::size_t>(t - 1) % seed_genes.size()];
      BoStepResult step = bo_step(*model, pool, seed_gene, oracle, std::move(data),
                                  config, t);
      data = std::move(step.data);
      if (step.record.averaged_rate > history.final_incumbent) {
        history.final_incumbent = step.record.averaged_rate;
        history.best_id = step.record.selected_id;
        history.best_sequence = std::move(step.selected_sequence);
      }
      history.records.push_back(std::move(step.record));
    } catch (const Error& e) {
      throw Error(e.name(), "iteration " + std::to_string(t) + ": " + e.what());
    }
  }
  history.final_data = std::move(data);
  return history;
}

LoopHistory random_search_loop(const Dataset& initial,
                               const std::vector<GeneSequence>& seed_genes,
                               ExperimentOracle& oracle, const LoopConfig& config) {
  validate_loop_config(config);
  if (seed_genes.empty()) throw EmptyCandidates("random_search_loop: no seed genes");

  LoopHistory history;
  history.final_incumbent = initial.best_averaged_rate();
  history.best_id = best_initial_id(initial);

  Dataset data = initial;
  // Distinct stream from the variant-generation seeds, shared across the
  // whole run, so selections are independent draws.
  Rng selector(Rng::derive_seed(config.seed, 0x5e1ec7));
  for (int t = 1; t <= config.iterations; ++t) {
    const GeneSequence& seed_gene =
        seed_genes[static_cast<std::size_t>(t - 1) % seed_genes.size()];
    const std::vector<GeneSequence> variants =
        synonymous_variants(seed_gene, config.n_variants, standard_codon_table(),
                            Rng::derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    const GeneSequence& chosen =
        variants[selector.uniform_index(variants.size())];
    const RatePair rates = oracle.run(chosen);
    data.append(chosen.id(), extract_features(chosen), rates.alpha, rates.beta);

    IterationRecord record;
    record.iteration = t;
    record.proposed_id = "";
    record.acquisition_value = 0.0;
    record.x_star = Eigen::VectorXd::Zero(data.dimension());
    record.selected_id = chosen.id();
    record.y_alpha = rates.alpha;
    record.y_beta = rates.beta;
    record.averaged_rate = 0.5 * (rates.alpha + rates.beta);
    record.incumbent = std::max(history.final_incumbent, record.averaged_rate);
    record.wall_clock_seconds = 0.0;
    if (record.averaged_rate > history.final_incumbent) {
      history.final_incumbent = record.averaged_rate;
      history.best_id = chosen.id();
      history.best_sequence = chosen;
    }
    history.records.push_back(std::move(record));
  }
  history.final_data = std::move(data);
  return history;
}

std::vector<std::string> select_difficult(const Dataset& data, double threshold,
                                          int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("select_difficult: k must be >= 1");
  std::vector<std::string> qualifying;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (!(data.observed(i, 0) && data.observed(i, 1))) continue;
    const double ya = data.rates(i, 0), yb = data.rates(i, 1);
    if (ya <= 0.0 || yb <= 0.0)
      throw NonPositiveRate("gene '" + data.ids[static_cast<std::size_t>(i)] +
                            "' has a non-positive rate; log ratio is undefined");
    if (0.5 * (std::log(ya) + std::log(yb)) < threshold)
      qualifying.push_back(data.ids[static_cast<std::size_t>(i)]);
  }
  if (qualifying.size() < static_cast<std::size_t>(k))
    throw NotEnoughDifficultGenes(qualifying.size(), static_cast<std::size_t>(k));

  Rng rng(seed);
  const auto picks =
      rng.sample_without_replacement(qualifying.size(), static_cast<std::size_t>(k));
  std::vector<std::string> ids;
  ids.reserve(picks.size());
  for (auto i : picks) ids.push_back(qualifying[i]);
  return ids;
}

std::string history_to_csv(const LoopHistory& history) {
  std::string out =
      "iteration,proposed_id,acquisition_value,selected_id,y_alpha,y_beta,"
      "averaged_rate,incumbent";
  for (const auto& name : feature_names()) out += ",xstar_" + name;
  out += '\n';
  for (const auto& r : history.records) {
    out += std::to_string(r.iteration);
    out += ',' + r.proposed_id;
    out += ',' + format_double(r.acquisition_value);
    out += ',' + r.selected_id;
    out += ',' + format_double(r.y_alpha);
    out += ',' + format_double(r.y_beta);
    out += ',' + format_double(r.averaged_rate);
    out += ',' + format_double(r.incumbent);
    for (Eigen::Index j = 0; j < r.x_star.size(); ++j)
      out += ',' + format_double(r.x_star[j]);
    out += '\n';
  }
  return out;
}

}  // namespace genedesign

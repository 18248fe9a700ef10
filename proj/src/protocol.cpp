#include "genedesign/protocol.hpp"

#include <cmath>
#include <unordered_map>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"
#include "genedesign/loop.hpp"
#include "genedesign/rng.hpp"
#include "genedesign/variants.hpp"

namespace genedesign {

ProtocolReport reproduce_protocol(const Dataset& data,
                                  const std::vector<GeneSequence>& sequences,
                                  const ProtocolConfig& config,
                                  ExperimentOracle* truth) {
  if (config.n_train < 2 || config.n_train > data.size())
    throw ConfigError("protocol: n_train must be in [2, dataset size]");
  if (config.k_difficult < 1 || config.n_variants < 1)
    throw ConfigError("protocol: k_difficult and n_variants must be >= 1");

  std::unordered_map<std::string, const GeneSequence*> by_id;
  for (const auto& s : sequences) by_id.emplace(s.id(), &s);
  for (const auto& id : data.ids)
    if (!by_id.count(id))
      throw Error("MissingSequence", "no sequence provided for gene '" + id + "'");

  // Train/test split.
  Rng split_rng(Rng::derive_seed(config.seed, 1));
  const auto train_rows = split_rng.sample_without_replacement<Eigen::Index>(
      static_cast<std::size_t>(data.size()), static_cast<std::size_t>(config.n_train));
  const Dataset train = data.subset(train_rows);

  ProtocolReport report;
  const FittedModel model = fit(train, config.fit);
  report.fitted_log_marginal = model.log_marginal();
  report.train_ids = train.ids;
  report.weights = evaluation_weights(model);

  // EI over every available gene, train and test alike.
  std::vector<Candidate> pool;
  pool.reserve(static_cast<std::size_t>(data.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i)
    pool.push_back({data.ids[static_cast<std::size_t>(i)],
                    data.features.row(i).transpose()});
  std::vector<CandidateScore> scores;
  report.rules = propose(model, pool, model.incumbent(), 0.0, &scores);
  for (Eigen::Index i = 0; i < data.size(); ++i)
    report.scatter.push_back(
        {scores[static_cast<std::size_t>(i)].id, scores[static_cast<std::size_t>(i)].ei,
         0.5 * (data.rates(i, 0) + data.rates(i, 1))});

  const std::vector<std::string> difficult_ids = select_difficult(
      data, config.threshold, config.k_difficult, Rng::derive_seed(config.seed, 2));

  std::unordered_map<std::string, Eigen::Index> row_of;
  for (Eigen::Index i = 0; i < data.size(); ++i)
    row_of.emplace(data.ids[static_cast<std::size_t>(i)], i);

  for (std::size_t g = 0; g < difficult_ids.size(); ++g) {
    const std::string& id = difficult_ids[g];
    const GeneSequence& gene = *by_id.at(id);
    const std::vector<GeneSequence> variants = synonymous_variants(
        gene, config.n_variants, standard_codon_table(),
        Rng::derive_seed(config.seed, 100 + static_cast<std::uint64_t>(g)));
    const std::vector<RankedSequence> ranked =
        rank_sequences(model, variants, report.rules);
    const RankedSequence& top = ranked.front();

    const PosteriorPrediction pred = model.predict_one(top.features);
    const double std_a = std::sqrt(std::max(pred.cov(0, 0), 0.0));
    const double std_b = std::sqrt(std::max(pred.cov(1, 1), 0.0));

    DifficultGeneRow row{
        id,
        data.rates(row_of.at(id), 0),
        data.rates(row_of.at(id), 1),
        0.5 * (data.rates(row_of.at(id), 0) + data.rates(row_of.at(id), 1)),
        top.sequence.id(),
        top.sequence,
        pred.mean[0],
        pred.mean[1],
        0.5 * (pred.mean[0] + pred.mean[1]),
        std_a,
        std_b,
        pred.mean[0] - 1.96 * std_a,
        pred.mean[0] + 1.96 * std_a,
        pred.mean[1] - 1.96 * std_b,
        pred.mean[1] + 1.96 * std_b,
        std::nullopt};
    if (truth) row.true_variant_rates = truth->run(top.sequence);
    report.difficult.push_back(std::move(row));
  }
  return report;
}

std::string protocol_report_to_csv(const ProtocolReport& report) {
  std::string out =
      "gene_id,y_alpha,y_beta,averaged_rate,variant_id,pred_alpha,pred_beta,"
      "pred_averaged,pred_alpha_std,pred_beta_std,pred_alpha_lo,pred_alpha_hi,"
      "pred_beta_lo,pred_beta_hi,variant_true_alpha,variant_true_beta\n";
  for (const auto& r : report.difficult) {
    out += r.gene_id;
    out += ',' + format_double(r.y_alpha);
    out += ',' + format_double(r.y_beta);
    out += ',' + format_double(r.averaged_rate);
    out += ',' + r.variant_id;
    out += ',' + format_double(r.pred_alpha);
    out += ',' + format_double(r.pred_beta);
    out += ',' + format_double(r.pred_averaged);
    out += ',' + format_double(r.pred_alpha_std);
    out += ',' + format_double(r.pred_beta_std);
    out += ',' + format_double(r.pred_alpha_lo);
    out += ',' + format_double(r.pred_alpha_hi);
    out += ',' + format_double(r.pred_beta_lo);
    out += ',' + format_double(r.pred_beta_hi);
    if (r.true_variant_rates) {
      out += ',' + format_double(r.true_variant_rates->alpha);
      out += ',' + format_double(r.true_variant_rates->beta);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

std::string ei_scatter_to_csv(const std::vector<EiScatterRow>& scatter) {
  std::string out = "id,ei,true_averaged_rate\n";
  for (const auto& r : scatter) {
    out += r.id;
    out += ',' + format_double(r.ei);
    out += ',' + format_double(r.true_averaged_rate);
    out += '\n';
  }
  return out;
}

std::string weights_to_csv(const EvaluationWeights& weights) {
  std::string out = "feature,inverse_lengthscale\n";
  const auto& names = feature_names();
  for (Eigen::Index j = 0; j < weights.w.size(); ++j) {
    out += j < static_cast<Eigen::Index>(names.size())
               ? names[static_cast<std::size_t>(j)]
               : "f" + std::to_string(j);
    out += ',' + format_double(weights.w[j]);
    out += '\n';
  }
  return out;
}

}  // namespace genedesign

#include "genedesign/run_config.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"

namespace genedesign {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& section) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw ConfigError("unknown key '" + key + "' in config section '" + section + "'");
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig config;
  reject_unknown_keys(
      doc, {"paths", "fit", "loop", "oracle", "synthetic_data", "protocol"}, "<root>");

  if (doc.contains("paths")) {
    const json& j = doc["paths"];
    reject_unknown_keys(j, {"fasta", "rates", "model", "out_dir"}, "paths");
    read_if(j, "fasta", config.paths.fasta);
    read_if(j, "rates", config.paths.rates);
    read_if(j, "model", config.paths.model);
    read_if(j, "out_dir", config.paths.out_dir);
  }
  if (doc.contains("fit")) {
    const json& j = doc["fit"];
    reject_unknown_keys(j, {"max_iters", "n_restarts", "seed"}, "fit");
    read_if(j, "max_iters", config.fit.max_iters);
    read_if(j, "n_restarts", config.fit.n_restarts);
    read_if(j, "seed", config.fit.seed);
  }
  if (doc.contains("loop")) {
    const json& j = doc["loop"];
    reject_unknown_keys(
        j, {"iterations", "n_variants", "threshold", "k", "refit_every", "seed"},
        "loop");
    read_if(j, "iterations", config.loop.iterations);
    read_if(j, "n_variants", config.loop.n_variants);
    read_if(j, "threshold", config.loop.threshold);
    read_if(j, "k", config.loop.k_difficult);
    read_if(j, "refit_every", config.loop.refit_every);
    read_if(j, "seed", config.loop.seed);
  }
  if (doc.contains("oracle")) {
    const json& j = doc["oracle"];
    reject_unknown_keys(j,
                        {"kind", "replay_path", "seed", "noise_std", "linear_weight",
                         "bump_weight", "bump_width", "center_spread", "relevant_dims"},
                        "oracle");
    read_if(j, "kind", config.oracle.kind);
    read_if(j, "replay_path", config.oracle.replay_path);
    read_if(j, "seed", config.oracle.cell.seed);
    read_if(j, "noise_std", config.oracle.cell.noise_std);
    read_if(j, "linear_weight", config.oracle.cell.linear_weight);
    read_if(j, "bump_weight", config.oracle.cell.bump_weight);
    read_if(j, "bump_width", config.oracle.cell.bump_width);
    read_if(j, "center_spread", config.oracle.cell.center_spread);
    read_if(j, "relevant_dims", config.oracle.cell.relevant_dims);
  }
  if (doc.contains("synthetic_data")) {
    const json& j = doc["synthetic_data"];
    reject_unknown_keys(j,
                        {"n_initial", "n_pool", "n_seed_genes", "gene_codons",
                         "bias_strength", "seed"},
                        "synthetic_data");
    read_if(j, "n_initial", config.synthetic_data.n_initial);
    read_if(j, "n_pool", config.synthetic_data.n_pool);
    read_if(j, "n_seed_genes", config.synthetic_data.n_seed_genes);
    read_if(j, "gene_codons", config.synthetic_data.gene_codons);
    read_if(j, "bias_strength", config.synthetic_data.bias_strength);
    read_if(j, "seed", config.synthetic_data.seed);
  }
  if (doc.contains("protocol")) {
    const json& j = doc["protocol"];
    reject_unknown_keys(j, {"n_train", "seed"}, "protocol");
    read_if(j, "n_train", config.protocol.n_train);
    read_if(j, "seed", config.protocol.seed);
  }
  config.validate();
  return config;
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_json(read_text_file(path));
}

std::string RunConfig::to_json() const {
  const json doc{
      {"paths",
       {{"fasta", paths.fasta},
        {"rates", paths.rates},
        {"model", paths.model},
        {"out_dir", paths.out_dir}}},
      {"fit",
       {{"max_iters", fit.max_iters},
        {"n_restarts", fit.n_restarts},
        {"seed", fit.seed}}},
      {"loop",
       {{"iterations", loop.iterations},
        {"n_variants", loop.n_variants},
        {"threshold", loop.threshold},
        {"k", loop.k_difficult},
        {"refit_every", loop.refit_every},
        {"seed", loop.seed}}},
      {"oracle",
       {{"kind", oracle.kind},
        {"replay_path", oracle.replay_path},
        {"seed", oracle.cell.seed},
        {"noise_std", oracle.cell.noise_std},
        {"linear_weight", oracle.cell.linear_weight},
        {"bump_weight", oracle.cell.bump_weight},
        {"bump_width", oracle.cell.bump_width},
        {"center_spread", oracle.cell.center_spread},
        {"relevant_dims", oracle.cell.relevant_dims}}},
      {"synthetic_data",
       {{"n_initial", synthetic_data.n_initial},
        {"n_pool", synthetic_data.n_pool},
        {"n_seed_genes", synthetic_data.n_seed_genes},
        {"gene_codons", synthetic_data.gene_codons},
        {"bias_strength", synthetic_data.bias_strength},
        {"seed", synthetic_data.seed}}},
      {"protocol", {{"n_train", protocol.n_train}, {"seed", protocol.seed}}},
  };
  return doc.dump(2) + "\n";
}

void RunConfig::validate() const {
  if (fit.max_iters < 1) throw ConfigError("fit.max_iters must be >= 1");
  if (fit.n_restarts < 1) throw ConfigError("fit.n_restarts must be >= 1");
  if (loop.iterations < 0) throw ConfigError("loop.iterations must be >= 0");
  if (loop.n_variants < 1) throw ConfigError("loop.n_variants must be >= 1");
  if (loop.k_difficult < 1) throw ConfigError("loop.k must be >= 1");
  if (loop.refit_every < 1) throw ConfigError("loop.refit_every must be >= 1");
  if (!std::isfinite(loop.threshold)) throw ConfigError("loop.threshold must be finite");
  if (oracle.kind != "synthetic" && oracle.kind != "replay")
    throw ConfigError("oracle.kind must be 'synthetic' or 'replay'");
  if (oracle.kind == "replay" && oracle.replay_path.empty())
    throw ConfigError("oracle.kind 'replay' requires oracle.replay_path");
  if (oracle.cell.noise_std < 0.0) throw ConfigError("oracle.noise_std must be >= 0");
  if (oracle.cell.relevant_dims < 0)
    throw ConfigError("oracle.relevant_dims must be >= 0");
  if (synthetic_data.n_initial < 2) throw ConfigError("synthetic_data.n_initial must be >= 2");
  if (synthetic_data.n_pool < synthetic_data.n_initial)
    throw ConfigError("synthetic_data.n_pool must be >= n_initial");
  if (synthetic_data.n_seed_genes < 1 ||
      synthetic_data.n_seed_genes > synthetic_data.n_initial)
    throw ConfigError("synthetic_data.n_seed_genes must be in [1, n_initial]");
  if (synthetic_data.gene_codons < 3)
    throw ConfigError("synthetic_data.gene_codons must be >= 3");
  if (protocol.n_train < 2) throw ConfigError("protocol.n_train must be >= 2");
}

}  // namespace genedesign

#include "genedesign/model_io.hpp"

#include <json.hpp>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"
#include "genedesign/features.hpp"

namespace genedesign {

namespace {

using nlohmann::json;

inline constexpr int kModelFormatVersion = 1;

json to_json_array(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& a, const std::string& field) {
  if (!a.is_array()) throw ConfigError("model document: '" + field + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ConfigError("model document: non-numeric entry in '" + field + "'");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

json coreg_to_json(const CoregionalizationMatrix& c) {
  return json{{"w", to_json_array(c.w)}, {"kappa", to_json_array(c.kappa)}};
}

CoregionalizationMatrix coreg_from_json(const json& j, const std::string& field) {
  const Eigen::VectorXd w = vector_from_json(j.at("w"), field + ".w");
  const Eigen::VectorXd kappa = vector_from_json(j.at("kappa"), field + ".kappa");
  if (w.size() != 2 || kappa.size() != 2)
    throw ConfigError("model document: coregionalization vectors must have 2 entries");
  return CoregionalizationMatrix{w, kappa};
}

const json& require(const json& doc, const std::string& key) {
  if (!doc.contains(key))
    throw ConfigError("model document is missing '" + key + "'");
  return doc.at(key);
}

}  // namespace

std::string model_to_json(const FittedModel& model) {
  const ModelHyperparameters& p = model.params();
  const Dataset& d = model.data();

  json features = json::array();
  json rates = json::array();
  json observed = json::array();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    features.push_back(to_json_array(d.features.row(i).transpose()));
    rates.push_back(json::array({d.rates(i, 0), d.rates(i, 1)}));
    observed.push_back(json::array({d.observed(i, 0), d.observed(i, 1)}));
  }

  const json doc{
      {"format", "genedesign-model"},
      {"format_version", kModelFormatVersion},
      {"feature_layout_version", kFeatureLayoutVersion},
      {"dimension", d.dimension()},
      {"hyperparameters",
       json{{"coreg_lin", coreg_to_json(p.coreg_lin)},
            {"coreg_se", coreg_to_json(p.coreg_se)},
            {"se_lengthscales", to_json_array(p.se_lengthscales)},
            {"lin_variance", p.lin_variance},
            {"se_variance", p.se_variance},
            {"noise", to_json_array(p.noise)},
            {"mean", to_json_array(p.mean)}}},
      {"standardization",
       json{{"center", to_json_array(model.standardizer().center)},
            {"scale", to_json_array(model.standardizer().scale)}}},
      {"training_data",
       json{{"ids", d.ids}, {"features", features}, {"rates", rates},
            {"observed", observed}}},
      {"data_fingerprint", d.fingerprint()},
      {"log_marginal_likelihood", model.log_marginal()},
  };
  return doc.dump(2) + "\n";
}

FittedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse model document: ") + e.what());
  }
  if (require(doc, "format").get<std::string>() != "genedesign-model")
    throw ConfigError("not a genedesign model document");
  if (require(doc, "format_version").get<int>() != kModelFormatVersion)
    throw ConfigError("unsupported model format version");
  if (require(doc, "feature_layout_version").get<int>() != kFeatureLayoutVersion)
    throw ConfigError("model was written with a different feature layout version");

  const json& h = require(doc, "hyperparameters");
  ModelHyperparameters params;
  params.coreg_lin = coreg_from_json(require(h, "coreg_lin"), "coreg_lin");
  params.coreg_se = coreg_from_json(require(h, "coreg_se"), "coreg_se");
  params.se_lengthscales = vector_from_json(require(h, "se_lengthscales"), "se_lengthscales");
  params.lin_variance = require(h, "lin_variance").get<double>();
  params.se_variance = require(h, "se_variance").get<double>();
  params.noise = vector_from_json(require(h, "noise"), "noise");
  params.mean = vector_from_json(require(h, "mean"), "mean");

  const json& st = require(doc, "standardization");
  Standardizer standardizer{vector_from_json(require(st, "center"), "center"),
                            vector_from_json(require(st, "scale"), "scale")};

  const json& td = require(doc, "training_data");
  const auto ids = require(td, "ids").get<std::vector<std::string>>();
  const json& jf = require(td, "features");
  const json& jr = require(td, "rates");
  const json& jo = require(td, "observed");
  const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
  const Eigen::Index p = require(doc, "dimension").get<Eigen::Index>();
  Eigen::MatrixXd features(n, p), rates(n, kTaskCount);
  Eigen::Matrix<bool, Eigen::Dynamic, kTaskCount> observed(n, kTaskCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd row =
        vector_from_json(jf.at(static_cast<std::size_t>(i)), "features");
    if (row.size() != p)
      throw ConfigError("model document: feature row has wrong dimension");
    features.row(i) = row.transpose();
    for (int l = 0; l < kTaskCount; ++l) {
      rates(i, l) = jr.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(l)).get<double>();
      observed(i, l) = jo.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(l)).get<bool>();
    }
  }
  Dataset data = Dataset::create(ids, std::move(features), std::move(rates),
                                 std::move(observed));

  const std::string fingerprint = require(doc, "data_fingerprint").get<std::string>();
  if (data.fingerprint() != fingerprint)
    throw ConfigError("model document fingerprint does not match its training data");

  return FittedModel(std::move(params), std::move(data), std::move(standardizer));
}

void save_model(const std::string& path, const FittedModel& model) {
  atomic_write_file(path, model_to_json(model));
}

FittedModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

std::string design_rules_to_json(const DesignRules& rules) {
  const json doc{
      {"format", "genedesign-design-rules"},
      {"format_version", kModelFormatVersion},
      {"feature_layout_version", kFeatureLayoutVersion},
      {"x_star", to_json_array(rules.x_star)},
      {"provenance", rules.provenance},
      {"acquisition_value", rules.acquisition_value},
  };
  return doc.dump(2) + "\n";
}

DesignRules design_rules_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse design-rules document: ") + e.what());
  }
  if (require(doc, "format").get<std::string>() != "genedesign-design-rules")
    throw ConfigError("not a genedesign design-rules document");
  if (require(doc, "feature_layout_version").get<int>() != kFeatureLayoutVersion)
    throw ConfigError("design rules use a different feature layout version");
  return DesignRules{vector_from_json(require(doc, "x_star"), "x_star"),
                     require(doc, "provenance").get<std::string>(),
                     require(doc, "acquisition_value").get<double>()};
}

void save_design_rules(const std::string& path, const DesignRules& rules) {
  atomic_write_file(path, design_rules_to_json(rules));
}

DesignRules load_design_rules(const std::string& path) {
  return design_rules_from_json(read_text_file(path));
}

}  // namespace genedesign

#include "genedesign/oracle.hpp"

#include <json.hpp>

#include "genedesign/csv.hpp"
#include "genedesign/errors.hpp"

namespace genedesign {

RatePair ReplayOracle::run(const GeneSequence& seq) {
  const auto it = by_bases_.find(seq.bases());
  if (it == by_bases_.end())
    throw Error("ReplayMiss", "replay oracle has no measurement for sequence '" +
                                  seq.id() + "'");
  return it->second;
}

// File format: {"measurements": [{"bases": "...", "y_alpha": r, "y_beta": r}, ...]}
ReplayOracle ReplayOracle::from_json_file(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse replay file " + path + ": " + e.what());
  }
  if (!doc.contains("measurements") || !doc["measurements"].is_array())
    throw ConfigError("replay file must contain a 'measurements' array: " + path);
  std::map<std::string, RatePair> by_bases;
  for (const auto& m : doc["measurements"]) {
    if (!m.contains("bases") || !m.contains("y_alpha") || !m.contains("y_beta"))
      throw ConfigError("replay measurement needs bases, y_alpha, y_beta: " + path);
    by_bases[m["bases"].get<std::string>()] = {m["y_alpha"].get<double>(),
                                               m["y_beta"].get<double>()};
  }
  return ReplayOracle(std::move(by_bases));
}

}  // namespace genedesign

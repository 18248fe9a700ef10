#pragma once

#include <string>

#include "genedesign/acquisition.hpp"
#include "genedesign/gp.hpp"

namespace genedesign {

// Self-describing JSON persistence: hyperparameters, standardization
// statistics, feature layout version, the training data, and its content
// fingerprint. Doubles are written in shortest round-trip form, so a
// reloaded model predicts identically to the in-memory one.
std::string model_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& text);

void save_model(const std::string& path, const FittedModel& model);
FittedModel load_model(const std::string& path);

std::string design_rules_to_json(const DesignRules& rules);
DesignRules design_rules_from_json(const std::string& text);

void save_design_rules(const std::string& path, const DesignRules& rules);
DesignRules load_design_rules(const std::string& path);

}  // namespace genedesign

#pragma once

#include <map>
#include <string>

#include "genedesign/sequence.hpp"

namespace genedesign {

struct RatePair {
  double alpha;  // transcription rate
  double beta;   // translation rate
};

// Anything that can measure the two rates of a sequence: the synthetic cell
// simulator, a recorded-measurement replay, or (eventually) a wet lab.
class ExperimentOracle {
 public:
  virtual ~ExperimentOracle() = default;
  virtual RatePair run(const GeneSequence& seq) = 0;
};

// Replays recorded measurements, keyed by exact base string. Unknown
// sequences are an error: a replay file cannot invent data.
class ReplayOracle : public ExperimentOracle {
 public:
  explicit ReplayOracle(std::map<std::string, RatePair> by_bases)
      : by_bases_(std::move(by_bases)) {}

  static ReplayOracle from_json_file(const std::string& path);

  RatePair run(const GeneSequence& seq) override;

 private:
  std::map<std::string, RatePair> by_bases_;
};

}  // namespace genedesign

#pragma once

#include <cstdint>
#include <string>

#include "genedesign/gp.hpp"
#include "genedesign/loop.hpp"
#include "genedesign/protocol.hpp"
#include "genedesign/synthetic.hpp"

namespace genedesign {

// Declarative run configuration for the loop and protocol commands. The
// JSON document mirrors this struct section by section; unknown keys are
// rejected so a typo cannot silently fall back to a default.
struct RunConfig {
  struct Paths {
    std::string fasta;    // empty -> generate synthetic genes
    std::string rates;
    std::string model;
    std::string out_dir = "out";
  } paths;

  FitConfig fit;

  struct Loop {
    int iterations = 20;
    int n_variants = 1000;
    double threshold = 1.5;
    int k_difficult = 10;
    int refit_every = 1;
    std::uint64_t seed = 0;
  } loop;

  struct Oracle {
    std::string kind = "synthetic";  // or "replay"
    std::string replay_path;
    SyntheticCell::Config cell;
  } oracle;

  struct SyntheticData {
    int n_initial = 30;
    int n_pool = 120;
    int n_seed_genes = 5;
    int gene_codons = 100;
    double bias_strength = 0.8;
    std::uint64_t seed = 0;
  } synthetic_data;

  struct Protocol {
    int n_train = 200;
    std::uint64_t seed = 0;
  } protocol;

  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::string& path);

  // Fully resolved document (every default materialized); written as the
  // run manifest and accepted back by from_json for exact replay.
  std::string to_json() const;

  void validate() const;
};

}  // namespace genedesign

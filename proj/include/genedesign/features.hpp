#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "genedesign/sequence.hpp"

namespace genedesign {

// Feature layout, fixed for model persistence:
//   [0..63]  codon frequencies in lexicographic codon order (AAA..TTT)
//   [64]     gene length
//   [65]     GC-content  (#G + #C) / length
//   [66]     AT-content  (#A + #T) / length
//   [67]     GC-ratio    #G / #C, 0 when #C == 0
//   [68]     AT-ratio    #A / #T, 0 when #T == 0
inline constexpr int kFeatureDimension = 69;
inline constexpr int kGeneLengthFeature = 64;

// Unit of the length feature. Bases is the assumed reading; switch to
// kCodons here if gene length should count codons instead.
enum class LengthUnit { kBases, kCodons };
inline constexpr LengthUnit kGeneLengthUnit = LengthUnit::kBases;

// Column names in layout order: 64 codon names, then the global features.
const std::vector<std::string>& feature_names();

// Bumped whenever the layout above changes; persisted with every model.
inline constexpr int kFeatureLayoutVersion = 1;

Eigen::VectorXd extract_features(const GeneSequence& seq);

// Row-per-sequence feature matrix.
Eigen::MatrixXd extract_features(const std::vector<GeneSequence>& seqs);

}  // namespace genedesign

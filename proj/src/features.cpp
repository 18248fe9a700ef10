#include "genedesign/features.hpp"

#include <array>

#include "genedesign/codon_table.hpp"

namespace genedesign {

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    n.reserve(kFeatureDimension);
    for (int i = 0; i < kCodonCount; ++i) n.push_back(codon_at(i));
    n.push_back("length");
    n.push_back("gc_content");
    n.push_back("at_content");
    n.push_back("gc_ratio");
    n.push_back("at_ratio");
    return n;
  }();
  return names;
}

Eigen::VectorXd extract_features(const GeneSequence& seq) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(kFeatureDimension);

  const std::string& b = seq.bases();
  std::array<double, 4> base_counts{};  // A, C, G, T
  for (char c : b) {
    switch (c) {
      case 'A': ++base_counts[0]; break;
      case 'C': ++base_counts[1]; break;
      case 'G': ++base_counts[2]; break;
      default: ++base_counts[3]; break;
    }
  }
  const double n_codons = static_cast<double>(seq.codon_count());
  for (std::size_t i = 0; i + 2 < b.size(); i += 3)
    x[codon_index(std::string_view(b).substr(i, 3))] += 1.0;
  x.head(kCodonCount) /= n_codons;

  const double length = static_cast<double>(b.size());
  x[kGeneLengthFeature] =
      kGeneLengthUnit == LengthUnit::kBases ? length : n_codons;
  x[65] = (base_counts[2] + base_counts[1]) / length;
  x[66] = (base_counts[0] + base_counts[3]) / length;
  x[67] = base_counts[1] > 0 ? base_counts[2] / base_counts[1] : 0.0;
  x[68] = base_counts[3] > 0 ? base_counts[0] / base_counts[3] : 0.0;
  return x;
}

Eigen::MatrixXd extract_features(const std::vector<GeneSequence>& seqs) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(seqs.size()), kFeatureDimension);
  for (std::size_t i = 0; i < seqs.size(); ++i)
    X.row(static_cast<Eigen::Index>(i)) = extract_features(seqs[i]).transpose();
  return X;
}

}  // namespace genedesign

#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "genedesign/sequence.hpp"

namespace genedesign {

inline constexpr int kCodonCount = 64;
inline constexpr char kStopSymbol = '*';

// Index of a codon in fixed lexicographic order over A < C < G < T
// (AAA = 0, AAC = 1, ..., TTT = 63). This ordering is load-bearing: the
// feature layout and model persistence both depend on it.
int codon_index(std::string_view codon);

// Codon string for a lexicographic index.
const std::string& codon_at(int index);

// The genetic code: 64 codons onto 20 amino acids plus stop ('*').
// Stop codons form their own synonym class.
class CodonTable {
 public:
  char amino_acid(std::string_view codon) const;

  // Codons encoding the same symbol as `codon`, in lexicographic order
  // (always includes `codon` itself).
  const std::vector<std::string>& synonyms(std::string_view codon) const;

  const std::map<std::string, char>& codon_to_amino() const { return codon_to_amino_; }
  const std::map<char, std::vector<std::string>>& amino_to_codons() const {
    return amino_to_codons_;
  }

  static CodonTable standard();

 private:
  CodonTable() = default;
  std::array<char, kCodonCount> amino_by_index_{};
  std::map<std::string, char> codon_to_amino_;
  std::map<char, std::vector<std::string>> amino_to_codons_;
};

// Shared instance of the standard genetic code.
const CodonTable& standard_codon_table();

// One amino-acid symbol per codon; stops map to '*'.
std::string translate(const GeneSequence& seq, const CodonTable& table);

}  // namespace genedesign

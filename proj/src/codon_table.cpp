#include "genedesign/codon_table.hpp"

#include <algorithm>

#include "genedesign/errors.hpp"

namespace genedesign {

namespace {

int base_index(char b) {
  switch (b) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

// NCBI translation table 1, codons enumerated with bases nested T, C, A, G.
constexpr char kNcbiBaseOrder[] = "TCAG";
constexpr char kNcbiAminoAcids[] =
    "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";

std::vector<std::string> make_codon_strings() {
  std::vector<std::string> codons(kCodonCount);
  const char lex[] = "ACGT";
  for (int i = 0; i < kCodonCount; ++i) {
    codons[i] = {lex[i / 16], lex[(i / 4) % 4], lex[i % 4]};
  }
  return codons;
}

const std::vector<std::string>& codon_strings() {
  static const std::vector<std::string> codons = make_codon_strings();
  return codons;
}

}  // namespace

int codon_index(std::string_view codon) {
  if (codon.size() != 3) throw InternalError("codon must have exactly 3 bases");
  const int a = base_index(codon[0]);
  const int b = base_index(codon[1]);
  const int c = base_index(codon[2]);
  if (a < 0 || b < 0 || c < 0)
    throw InternalError("codon contains a non-ACGT base: " + std::string(codon));
  return 16 * a + 4 * b + c;
}

const std::string& codon_at(int index) {
  if (index < 0 || index >= kCodonCount)
    throw InternalError("codon index out of range: " + std::to_string(index));
  return codon_strings()[static_cast<std::size_t>(index)];
}

CodonTable CodonTable::standard() {
  CodonTable table;
  for (int i1 = 0; i1 < 4; ++i1) {
    for (int i2 = 0; i2 < 4; ++i2) {
      for (int i3 = 0; i3 < 4; ++i3) {
        const std::string codon = {kNcbiBaseOrder[i1], kNcbiBaseOrder[i2],
                                   kNcbiBaseOrder[i3]};
        const char aa = kNcbiAminoAcids[16 * i1 + 4 * i2 + i3];
        table.amino_by_index_[static_cast<std::size_t>(codon_index(codon))] = aa;
        table.codon_to_amino_[codon] = aa;
        table.amino_to_codons_[aa].push_back(codon);
      }
    }
  }
  for (auto& [aa, codons] : table.amino_to_codons_) std::sort(codons.begin(), codons.end());
  return table;
}

const CodonTable& standard_codon_table() {
  static const CodonTable table = CodonTable::standard();
  return table;
}

char CodonTable::amino_acid(std::string_view codon) const {
  return amino_by_index_[static_cast<std::size_t>(codon_index(codon))];
}

const std::vector<std::string>& CodonTable::synonyms(std::string_view codon) const {
  return amino_to_codons_.at(amino_acid(codon));
}

std::string translate(const GeneSequence& seq, const CodonTable& table) {
  std::string protein;
  protein.reserve(seq.codon_count());
  const std::string& b = seq.bases();
  for (std::size_t i = 0; i + 2 < b.size(); i += 3)
    protein += table.amino_acid(std::string_view(b).substr(i, 3));
  return protein;
}

}  // namespace genedesign

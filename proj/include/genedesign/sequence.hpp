#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace genedesign {

// A validated coding DNA sequence: uppercase {A,C,G,T}, length a positive
// multiple of 3. Immutable after construction.
class GeneSequence {
 public:
  // Normalizes to uppercase and validates. Throws InvalidBase or
  // LengthNotMultipleOfThree with the offending record id.
  GeneSequence(std::string id, std::string bases);

  const std::string& id() const noexcept { return id_; }
  const std::string& bases() const noexcept { return bases_; }
  std::size_t length() const noexcept { return bases_.size(); }
  std::size_t codon_count() const noexcept { return bases_.size() / 3; }

  bool operator==(const GeneSequence& other) const = default;

 private:
  std::string id_;
  std::string bases_;
};

// Non-overlapping reading-frame triplets, in order.
std::vector<std::string> to_codons(const GeneSequence& seq);

// Parses FASTA text. Record ids run up to the first whitespace of the
// header; sequence lines are concatenated and uppercased. Any record that
// fails validation aborts the parse with the record's id in the error.
std::vector<GeneSequence> parse_fasta(std::string_view text);

std::vector<GeneSequence> read_fasta_file(const std::string& path);

std::string to_fasta(const std::vector<GeneSequence>& seqs);

}  // namespace genedesign

#include "genedesign/sequence.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "genedesign/errors.hpp"

namespace genedesign {

namespace {

bool is_valid_base(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

}  // namespace

GeneSequence::GeneSequence(std::string id, std::string bases)
    : id_(std::move(id)), bases_(std::move(bases)) {
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    bases_[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(bases_[i])));
    if (!is_valid_base(bases_[i])) throw InvalidBase(id_, i, bases_[i]);
  }
  if (bases_.empty() || bases_.size() % 3 != 0)
    throw LengthNotMultipleOfThree(id_, bases_.size());
}

std::vector<std::string> to_codons(const GeneSequence& seq) {
  std::vector<std::string> codons;
  codons.reserve(seq.codon_count());
  const std::string& b = seq.bases();
  for (std::size_t i = 0; i + 2 < b.size(); i += 3) codons.push_back(b.substr(i, 3));
  return codons;
}

std::vector<GeneSequence> parse_fasta(std::string_view text) {
  std::vector<GeneSequence> records;
  std::string header;
  std::string bases;
  bool in_record = false;

  auto flush = [&]() {
    if (!in_record) return;
    std::string id = header.substr(0, header.find_first_of(" \t"));
    records.emplace_back(std::move(id), std::move(bases));
    bases.clear();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      if (line.front() == '>') {
        flush();
        header = std::string(line.substr(1));
        in_record = true;
      } else if (in_record) {
        bases.append(line);
      } else {
        throw EmptyInput("sequence data before any FASTA header");
      }
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  flush();

  if (records.empty()) throw EmptyInput("no FASTA records found");
  return records;
}

std::vector<GeneSequence> read_fasta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FASTA file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fasta(buf.str());
}

std::string to_fasta(const std::vector<GeneSequence>& seqs) {
  std::string out;
  for (const auto& s : seqs) {
    out += '>';
    out += s.id();
    out += '\n';
    // 70-column wrap, the usual FASTA convention
    const std::string& b = s.bases();
    for (std::size_t i = 0; i < b.size(); i += 70) {
      out.append(b, i, std::min<std::size_t>(70, b.size() - i));
      out += '\n';
    }
  }
  return out;
}

}  // namespace genedesign

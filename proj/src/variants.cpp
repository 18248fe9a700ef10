#include "genedesign/variants.hpp"

#include <cstdio>

#include "genedesign/errors.hpp"
#include "genedesign/rng.hpp"

namespace genedesign {

std::vector<GeneSequence> synonymous_variants(const GeneSequence& seq, int n,
                                              const CodonTable& table,
                                              std::uint64_t rng_seed) {
  if (n < 1) throw Error("InvalidArgument", "variant count must be >= 1");

  // Resolve each position's synonym class once.
  const std::string& b = seq.bases();
  std::vector<const std::vector<std::string>*> classes;
  classes.reserve(seq.codon_count());
  for (std::size_t i = 0; i + 2 < b.size(); i += 3)
    classes.push_back(&table.synonyms(std::string_view(b).substr(i, 3)));

  Rng rng(rng_seed);
  std::vector<GeneSequence> variants;
  variants.reserve(static_cast<std::size_t>(n));
  std::string bases(b.size(), 'A');
  for (int v = 0; v < n; ++v) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto& options = *classes[c];
      const std::string& codon =
          options.size() == 1 ? options[0] : options[rng.uniform_index(options.size())];
      bases.replace(3 * c, 3, codon);
    }
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "_v%04d", v);
    variants.emplace_back(seq.id() + suffix, bases);
  }
  return variants;
}

}  // namespace genedesign

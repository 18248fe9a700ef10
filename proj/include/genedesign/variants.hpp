#pragma once

#include <cstdint>
#include <vector>

#include "genedesign/codon_table.hpp"
#include "genedesign/sequence.hpp"

namespace genedesign {

// Draws n synonymous recodings of seq: every codon is replaced by a codon
// sampled uniformly from its synonym class, independently per position and
// per variant. Variants keep the seed's translation exactly and are named
// "<id>_v<k>". Deterministic given rng_seed.
std::vector<GeneSequence> synonymous_variants(const GeneSequence& seq, int n,
                                              const CodonTable& table,
                                              std::uint64_t rng_seed);

}  // namespace genedesign

#ifndef OPINEX_SYNTHETIC_HPP_
#define OPINEX_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/relation.hpp"

namespace opinex {

// Template-generated opinion sentences. Holder, target and expression
// phrases come from disjoint vocabularies that no filler word shares, so a
// word-feature tagger can separate the roles. Tokens carry Universal POS
// tags. Covers single- and multi-target sentences, holder-less opinions and
// opinion-free sentences.
Dataset SyntheticOpinionCorpus(std::size_t sentences, std::uint64_t seed,
                               std::string name = "synthetic");

// Sentences with scattered entity and expression spans where an entity is
// linked to an expression iff their token distance is at most 2. Gold
// opinions record those links; `instances` holds the full labeled cross
// product (including entities linked to nothing, which opinions cannot
// represent).
struct DistanceCorpus {
  Dataset dataset;
  std::vector<RelationInstance> instances;
};

DistanceCorpus SyntheticDistanceCorpus(std::size_t sentences, std::uint64_t seed,
                                       std::string name = "distance");

}  // namespace opinex

#endif  // OPINEX_SYNTHETIC_HPP_

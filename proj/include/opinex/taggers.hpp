#ifndef OPINEX_TAGGERS_HPP_
#define OPINEX_TAGGERS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/span_codec.hpp"

namespace opinex {

enum class TaggerKind { kMostCommon, kPosChunk, kPerceptron, kExternal };

std::string_view TaggerKindName(TaggerKind kind);
TaggerKind ParseTaggerKind(std::string_view name);

// POS tag -> label. Only the role of the label matters; B/I is decided by
// the continuation rule when tagging.
using PosMap = std::map<std::string, Label>;

// Noun/proper noun -> TARGET, verb/adjective -> EXPRESSION,
// pronoun -> HOLDER. Covers Universal and Penn Treebank tags.
const PosMap& DefaultPosMap();

// Parses string-valued entries; throws InvalidArgument on a label outside
// the alphabet.
PosMap ParsePosMap(const std::map<std::string, std::string>& entries);

// Sparse per-label weights. Absent features score zero.
using LabelWeights = std::array<double, kNumLabels>;
using PerceptronWeights = std::unordered_map<std::string, LabelWeights>;

class TaggerModel {
 public:
  static TaggerModel MostCommon();
  static TaggerModel PosChunk(PosMap map = DefaultPosMap());
  static TaggerModel Perceptron(PerceptronWeights weights);
  // Placeholder for predictions produced outside this library; see
  // LoadExternalPredictions.
  static TaggerModel External();

  TaggerKind kind() const { return kind_; }
  const PosMap& pos_map() const { return pos_map_; }
  const PerceptronWeights& weights() const { return weights_; }

 private:
  TaggerModel(TaggerKind kind) : kind_(kind) {}

  TaggerKind kind_;
  PosMap pos_map_;
  PerceptronWeights weights_;
};

// Feature strings for token `i` that do not depend on earlier predictions:
// word, lowercase word, 3-char suffix, 2-char prefix, word shape, words at
// +-1 and +-2, POS at 0 and +-1 when present.
std::vector<std::string> StaticFeatures(const Sentence& sentence, std::size_t i);

// Word shape: X for upper, x for lower, d for digit, other characters kept,
// runs collapsed ("Hello-42" -> "Xx-d").
std::string WordShape(std::string_view word);

// Throws InvalidArgument for EXTERNAL models.
TagSequence Tag(const TaggerModel& model, const Sentence& sentence);

// Averaged structured perceptron with greedy, transition-constrained
// decoding. Sentences are visited in a seeded shuffled order each epoch.
// Training data must be free of cross-role overlaps.
TaggerModel TrainPerceptron(const Dataset& train, int epochs, std::uint64_t seed);

// Reads CoNLL predictions for every sentence of `ds`. Throws ValidationError
// naming the sentence on a missing id or a token count mismatch. Ill-formed
// BIO is accepted as is.
std::map<std::string, TagSequence> LoadExternalPredictions(const std::string& path,
                                                           const Dataset& ds);

std::string TaggerToJson(const TaggerModel& model);
TaggerModel TaggerFromJson(std::string_view content);

}  // namespace opinex

#endif  // OPINEX_TAGGERS_HPP_

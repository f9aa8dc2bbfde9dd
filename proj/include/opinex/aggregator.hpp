#ifndef OPINEX_AGGREGATOR_HPP_
#define OPINEX_AGGREGATOR_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/relation.hpp"
#include "opinex/span_codec.hpp"
#include "opinex/taggers.hpp"

namespace opinex {

// Opinion tuples of one sentence. Every tuple has exactly one expression,
// no two tuples share it, and polarity is never set.
struct SentimentGraph {
  std::string sentence_id;
  std::vector<OpinionTuple> tuples;

  bool operator==(const SentimentGraph&) const = default;
};

// (entity, expression) -> linked?
using DecisionMap = std::map<std::pair<Span, Span>, bool>;

// One tuple per expression, ordered by expression position. Holders and
// targets are the entities whose decision with that expression is true.
// Expressions with no linked entity still yield a tuple. Throws
// InvalidArgument naming the first pair missing from `decisions`.
SentimentGraph Aggregate(const Sentence& sentence, std::span<const Span> entities,
                         std::span<const Span> expressions, const DecisionMap& decisions);

// The graph a perfect tagger and relation model would produce: gold spans,
// gold links. Gold tuples sharing an expression are merged.
SentimentGraph GoldGraph(const Sentence& sentence);

// Everything the three stages produce for one sentence.
struct StageOutput {
  TagSequence tags;
  std::vector<RelationInstance> instances;
  std::vector<RelationDecision> decisions;
  SentimentGraph graph;
};

// decode -> instances -> classify -> aggregate, starting from given tags.
StageOutput RunStages(const Sentence& sentence, const TagSequence& tags,
                      const RelationModel& relation);

SentimentGraph EndToEnd(const Sentence& sentence, const TaggerModel& tagger,
                        const RelationModel& relation);
SentimentGraph EndToEnd(const Sentence& sentence, const TagSequence& tags,
                        const RelationModel& relation);

// Copy of `dataset` whose opinions are replaced by the graphs (matched by
// sentence id; sentences without a graph get no opinions).
Dataset WithGraphs(const Dataset& dataset, const std::vector<SentimentGraph>& graphs);

// Reads each sentence's opinions back as a graph: tuples are split per
// expression and merged on identical expressions, as in GoldGraph.
std::vector<SentimentGraph> GraphsFromDataset(const Dataset& dataset);

// One line per tuple: {"sentence_id", "holders", "targets", "expression"}.
std::string GraphsToJsonl(const std::vector<SentimentGraph>& graphs);

}  // namespace opinex

#endif  // OPINEX_AGGREGATOR_HPP_

#include "opinex/aggregator.hpp"

#include <set>
#include <unordered_map>

#include "json.hpp"
#include "opinex/error.hpp"

namespace opinex {

namespace {

std::string PairText(const Span& entity, const Span& expression) {
  return std::string(RoleName(entity.role)) + " [" + std::to_string(entity.start) + "," +
         std::to_string(entity.end) + ") / EXPRESSION [" + std::to_string(expression.start) +
         "," + std::to_string(expression.end) + ")";
}

}  // namespace

SentimentGraph Aggregate(const Sentence& sentence, std::span<const Span> entities,
                         std::span<const Span> expressions, const DecisionMap& decisions) {
  const std::set<Span> ents(entities.begin(), entities.end());
  const std::set<Span> exps(expressions.begin(), expressions.end());
  SentimentGraph graph{sentence.id, {}};
  for (const Span& x : exps) {
    OpinionTuple tuple;
    tuple.expressions.push_back(x);
    for (const Span& e : ents) {
      auto it = decisions.find({e, x});
      if (it == decisions.end()) {
        throw InvalidArgument("sentence " + sentence.id + ": no decision for " +
                              PairText(e, x));
      }
      if (!it->second) continue;
      (e.role == Role::kHolder ? tuple.holders : tuple.targets).push_back(e);
    }
    graph.tuples.push_back(std::move(tuple));
  }
  return graph;
}

SentimentGraph GoldGraph(const Sentence& sentence) {
  std::vector<Span> entities = DistinctSpans(sentence, Role::kHolder);
  std::vector<Span> targets = DistinctSpans(sentence, Role::kTarget);
  entities.insert(entities.end(), targets.begin(), targets.end());
  std::vector<Span> expressions = DistinctSpans(sentence, Role::kExpression);
  DecisionMap decisions;
  for (const RelationInstance& inst :
       GenerateInstances(sentence, entities, expressions, &sentence.opinions)) {
    decisions[{inst.entity, inst.expression}] = *inst.label;
  }
  return Aggregate(sentence, entities, expressions, decisions);
}

StageOutput RunStages(const Sentence& sentence, const TagSequence& tags,
                      const RelationModel& relation) {
  if (tags.size() != sentence.size()) {
    throw InvalidArgument("sentence " + sentence.id + ": " + std::to_string(tags.size()) +
                          " tags for " + std::to_string(sentence.size()) + " tokens");
  }
  StageOutput out;
  out.tags = tags;
  std::vector<Span> entities;
  std::vector<Span> expressions;
  for (const Span& span : Decode(tags)) {
    (span.role == Role::kExpression ? expressions : entities).push_back(span);
  }
  out.instances = GenerateInstances(sentence, entities, expressions);
  out.decisions = ClassifyAll(relation, sentence, out.instances);
  DecisionMap decisions;
  for (std::size_t i = 0; i < out.instances.size(); ++i) {
    decisions[{out.instances[i].entity, out.instances[i].expression}] =
        out.decisions[i].decision;
  }
  out.graph = Aggregate(sentence, entities, expressions, decisions);
  return out;
}

SentimentGraph EndToEnd(const Sentence& sentence, const TaggerModel& tagger,
                        const RelationModel& relation) {
  return RunStages(sentence, Tag(tagger, sentence), relation).graph;
}

SentimentGraph EndToEnd(const Sentence& sentence, const TagSequence& tags,
                        const RelationModel& relation) {
  return RunStages(sentence, tags, relation).graph;
}

Dataset WithGraphs(const Dataset& dataset, const std::vector<SentimentGraph>& graphs) {
  std::unordered_map<std::string, const SentimentGraph*> by_id;
  for (const SentimentGraph& g : graphs) by_id[g.sentence_id] = &g;
  Dataset out = dataset;
  for (Sentence& sentence : out.sentences) {
    auto it = by_id.find(sentence.id);
    sentence.opinions = it == by_id.end() ? std::vector<OpinionTuple>{} : it->second->tuples;
  }
  return out;
}

std::vector<SentimentGraph> GraphsFromDataset(const Dataset& dataset) {
  std::vector<SentimentGraph> graphs;
  graphs.reserve(dataset.sentences.size());
  for (const Sentence& sentence : dataset.sentences) graphs.push_back(GoldGraph(sentence));
  return graphs;
}

std::string GraphsToJsonl(const std::vector<SentimentGraph>& graphs) {
  using nlohmann::json;
  auto spans = [](const std::vector<Span>& v) {
    json array = json::array();
    for (const Span& s : v) array.push_back({s.start, s.end});
    return array;
  };
  std::string out;
  for (const SentimentGraph& graph : graphs) {
    for (const OpinionTuple& tuple : graph.tuples) {
      json line;
      line["sentence_id"] = graph.sentence_id;
      line["holders"] = spans(tuple.holders);
      line["targets"] = spans(tuple.targets);
      line["expression"] = {tuple.expressions.front().start, tuple.expressions.front().end};
      out += line.dump() + "\n";
    }
  }
  return out;
}

}  // namespace opinex

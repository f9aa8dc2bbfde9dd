#include <algorithm>

#include "doctest.h"
#include "opinex/aggregator.hpp"
#include "opinex/error.hpp"
#include "opinex/synthetic.hpp"
#include "opinex/taggers.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace opinex;
using namespace opinex::testing;

namespace {

std::vector<std::string> Keys(const SentimentGraph& g) {
  std::vector<std::string> keys;
  for (const auto& t : g.tuples) keys.push_back(oracle::TupleKey(t));
  std::sort(keys.begin(), keys.end());
  return keys;
}

RelationModel AlwaysTrue() {
  RelationModel m;
  m.kind = RelationKind::kAlwaysTrue;
  return m;
}

}  // namespace

TEST_CASE("holder, target and expression all linked") {
  Sentence s = Filler("a", 3);
  std::vector<Span> ents = {H(0, 1), T(2, 3)};
  std::vector<Span> exps = {E(1, 2)};
  DecisionMap d{{{H(0, 1), E(1, 2)}, true}, {{T(2, 3), E(1, 2)}, true}};
  SentimentGraph g = Aggregate(s, ents, exps, d);
  REQUIRE(g.tuples.size() == 1);
  CHECK(g.tuples[0] == Tuple({H(0, 1)}, {T(2, 3)}, {E(1, 2)}));
}

TEST_CASE("all decisions false gives expression-only tuples") {
  Sentence s = Filler("a", 5);
  std::vector<Span> ents = {T(0, 1)};
  std::vector<Span> exps = {E(2, 3), E(4, 5)};
  DecisionMap d{{{T(0, 1), E(2, 3)}, false}, {{T(0, 1), E(4, 5)}, false}};
  SentimentGraph g = Aggregate(s, ents, exps, d);
  REQUIRE(g.tuples.size() == 2);
  for (const auto& t : g.tuples) {
    CHECK(t.holders.empty());
    CHECK(t.targets.empty());
    CHECK(t.expressions.size() == 1);
  }
}

TEST_CASE("two expressions sharing one target") {
  Sentence s = Filler("a", 5);
  std::vector<Span> ents = {T(0, 1)};
  std::vector<Span> exps = {E(2, 3), E(4, 5)};
  DecisionMap d{{{T(0, 1), E(2, 3)}, true}, {{T(0, 1), E(4, 5)}, false}};
  SentimentGraph g = Aggregate(s, ents, exps, d);
  REQUIRE(g.tuples.size() == 2);
  CHECK(g.tuples[0].targets == std::vector<Span>{T(0, 1)});
  CHECK(g.tuples[1].targets.empty());
}

TEST_CASE("missing decision names the pair") {
  Sentence s = Filler("a", 3);
  std::vector<Span> ents = {T(0, 1)};
  std::vector<Span> exps = {E(2, 3)};
  try {
    Aggregate(s, ents, exps, {});
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    std::string what = e.what();
    CHECK(what.find("TARGET [0,1)") != std::string::npos);
    CHECK(what.find("EXPRESSION [2,3)") != std::string::npos);
  }
}

TEST_CASE("exhaustive agreement with the enumeration oracle") {
  Sentence s = Filler("x", 12);
  const std::vector<Span> entity_pool = {H(0, 1), T(2, 3), T(4, 6)};
  const std::vector<Span> expression_pool = {E(7, 8), E(9, 11)};
  std::size_t maps = 0;
  for (std::size_t ne = 0; ne <= 3; ++ne) {
    for (std::size_t nx = 0; nx <= 2; ++nx) {
      std::vector<Span> ents(entity_pool.begin(), entity_pool.begin() + ne);
      std::vector<Span> exps(expression_pool.begin(), expression_pool.begin() + nx);
      const std::size_t pairs = ne * nx;
      for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
        DecisionMap d;
        for (std::size_t i = 0; i < ne; ++i) {
          for (std::size_t j = 0; j < nx; ++j) d[{ents[i], exps[j]}] = (mask >> (i * nx + j)) & 1u;
        }
        REQUIRE(Keys(Aggregate(s, ents, exps, d)) == oracle::EnumerateGraph(ents, exps, d));
        ++maps;
      }
    }
  }
  CHECK(maps == 1 + 1 + 1 + 1 + 4 + 16 + 1 + 8 + 64 + 1 + 2 + 4);
}

TEST_CASE("gold graph merges tuples sharing an expression") {
  Sentence s = Filler("g", 6);
  s.opinions.push_back(Tuple({H(0, 1)}, {}, {E(3, 4)}));
  s.opinions.push_back(Tuple({}, {T(5, 6)}, {E(3, 4)}));
  SentimentGraph g = GoldGraph(s);
  REQUIRE(g.tuples.size() == 1);
  CHECK(g.tuples[0] == Tuple({H(0, 1)}, {T(5, 6)}, {E(3, 4)}));
}

TEST_CASE("gold-echo tags with ALWAYS_TRUE reproduce a one-pair gold graph") {
  Sentence s = Filler("e", 4);
  s.opinions.push_back(Tuple({}, {T(0, 2)}, {E(3, 4)}));
  SentimentGraph g = EndToEnd(s, Encode(s), AlwaysTrue());
  CHECK(g == GoldGraph(s));
}

TEST_CASE("MOST_COMMON yields an empty graph") {
  for (const Sentence& s : SyntheticOpinionCorpus(20, 2).sentences) {
    CHECK(EndToEnd(s, TaggerModel::MostCommon(), AlwaysTrue()).tuples.empty());
  }
}

TEST_CASE("end to end equals the manual composition") {
  Dataset ds = SyntheticOpinionCorpus(60, 5);
  TaggerModel tagger = TrainPerceptron(ds, 2, 1);
  DistanceCorpus rel = SyntheticDistanceCorpus(50, 1);
  RelationModel model = TrainLogistic(rel.instances, rel.dataset, LogisticOptions{});
  for (const Sentence& s : ds.sentences) {
    TagSequence tags = Tag(tagger, s);
    std::vector<Span> ents, exps;
    for (const Span& sp : Decode(tags)) (sp.role == Role::kExpression ? exps : ents).push_back(sp);
    auto inst = GenerateInstances(s, ents, exps);
    DecisionMap d;
    for (const auto& i : inst) {
      d[{i.entity, i.expression}] =
          Classify(model, s, i, ExpressionContext(inst, s.id)).decision;
    }
    CHECK(EndToEnd(s, tagger, model) == Aggregate(s, ents, exps, d));
  }
}

TEST_CASE("tag count must match the sentence") {
  CHECK_THROWS_AS(RunStages(Filler("a", 3), TagSequence(2, Label::kO), AlwaysTrue()),
                  InvalidArgument);
}

TEST_CASE("graphs round trip through a dataset") {
  Dataset ds = SyntheticOpinionCorpus(40, 6);
  std::vector<SentimentGraph> gold;
  for (const Sentence& s : ds.sentences) gold.push_back(GoldGraph(s));
  CHECK(GraphsFromDataset(WithGraphs(ds, gold)) == gold);
  std::string jsonl = GraphsToJsonl(gold);
  std::size_t tuples = 0;
  for (const auto& g : gold) tuples += g.tuples.size();
  CHECK(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) == tuples);
}

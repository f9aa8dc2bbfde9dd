#include <algorithm>
#include <random>

#include "doctest.h"
#include "opinex/error.hpp"
#include "opinex/metrics.hpp"
#include "opinex/relation.hpp"
#include "opinex/synthetic.hpp"
#include "support.hpp"

using namespace opinex;
using namespace opinex::testing;

namespace {

bool Has(const FeatureVector& f, const std::string& x) {
  return std::find(f.begin(), f.end(), x) != f.end();
}

// Independent labeling: walk every tuple and mark every pair it contains.
bool OracleLabel(const Sentence& s, const Span& entity, const Span& expression) {
  for (const OpinionTuple& t : s.opinions) {
    bool e_in = std::count(t.holders.begin(), t.holders.end(), entity) +
                    std::count(t.targets.begin(), t.targets.end(), entity) >
                0;
    bool x_in = std::count(t.expressions.begin(), t.expressions.end(), expression) > 0;
    if (e_in && x_in) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("instance generation") {
  Sentence s = Filler("s", 8);
  s.opinions.push_back(Tuple({}, {T(0, 1)}, {E(3, 4)}));

  SUBCASE("cross product size") {
    std::vector<Span> ents = {T(0, 1), T(5, 6)};
    std::vector<Span> exps = {E(3, 4)};
    CHECK(GenerateInstances(s, ents, exps).size() == 2);
  }
  SUBCASE("stray target is a negative") {
    std::vector<Span> ents = {T(5, 6), T(0, 1)};
    std::vector<Span> exps = {E(3, 4)};
    auto inst = GenerateInstances(s, ents, exps, &s.opinions);
    REQUIRE(inst.size() == 2);
    CHECK(inst[0].entity == T(0, 1));
    CHECK(inst[0].label == true);
    CHECK(inst[1].entity == T(5, 6));
    CHECK(inst[1].label == false);
  }
  SUBCASE("a single pair can only be positive") {
    auto inst = GoldInstances(s);
    REQUIRE(inst.size() == 1);
    CHECK(inst[0].label == true);
  }
  SUBCASE("unlabeled without gold") {
    std::vector<Span> ents = {T(0, 1)};
    std::vector<Span> exps = {E(3, 4)};
    CHECK_FALSE(GenerateInstances(s, ents, exps)[0].label.has_value());
  }
  SUBCASE("role violations") {
    std::vector<Span> bad_ent = {E(0, 1)};
    std::vector<Span> exps = {E(3, 4)};
    CHECK_THROWS_AS(GenerateInstances(s, bad_ent, exps), InvalidArgument);
    std::vector<Span> ents = {T(0, 1)};
    std::vector<Span> bad_exp = {T(3, 4)};
    CHECK_THROWS_AS(GenerateInstances(s, ents, bad_exp), InvalidArgument);
    std::vector<Span> out_of_range = {T(7, 9)};
    CHECK_THROWS(GenerateInstances(s, out_of_range, exps));
  }
}

TEST_CASE("gold labels agree with a tuple walk on synthetic data") {
  Dataset ds = SyntheticOpinionCorpus(300, 8);
  for (const Sentence& s : ds.sentences) {
    auto inst = GoldInstances(s);
    std::size_t n_ent = DistinctSpans(s, Role::kHolder).size() + DistinctSpans(s, Role::kTarget).size();
    CHECK(inst.size() == n_ent * DistinctSpans(s, Role::kExpression).size());
    for (const auto& i : inst) CHECK(*i.label == OracleLabel(s, i.entity, i.expression));
  }
}

TEST_CASE("features") {
  Sentence s = MakeSentence("f", {"Anna", "says", "the", "Big", "soup", "was", "awful", "."});
  SUBCASE("adjacent spans") {
    RelationInstance inst{"f", H(0, 1), E(1, 2), std::nullopt};
    FeatureVector f = Featurize(s, inst, std::vector<Span>{E(1, 2)});
    CHECK(Has(f, "dist=0"));
    CHECK(Has(f, "order=entity_first"));
    CHECK(Has(f, "erole=HOLDER"));
    CHECK(Has(f, "ew=anna"));
    CHECK(Has(f, "xw=says"));
  }
  SUBCASE("four tokens between") {
    RelationInstance inst{"f", H(0, 1), E(5, 6), std::nullopt};
    std::vector<Span> ctx = {E(1, 2), E(5, 6)};
    FeatureVector f = Featurize(s, inst, ctx);
    CHECK(Has(f, "dist=3-5"));
    CHECK(Has(f, "order=entity_first"));
    CHECK(Has(f, "bw=big"));
    CHECK(Has(f, "nexp_between=1"));
    CHECK(std::is_sorted(f.begin(), f.end()));
    CHECK(std::adjacent_find(f.begin(), f.end()) == f.end());
  }
  SUBCASE("expression first") {
    RelationInstance inst{"f", T(3, 5), E(6, 7), std::nullopt};
    RelationInstance back{"f", T(6, 7), E(1, 2), std::nullopt};
    CHECK(Has(Featurize(s, back, {}), "order=expression_first"));
    CHECK(Has(Featurize(s, inst, {}), "elen=2"));
  }
  SUBCASE("deterministic") {
    RelationInstance inst{"f", T(3, 5), E(6, 7), std::nullopt};
    CHECK(Featurize(s, inst, {}) == Featurize(s, inst, {}));
  }
}

TEST_CASE("distance buckets") {
  CHECK(DistanceBucket(0) == "0");
  CHECK(DistanceBucket(1) == "1");
  CHECK(DistanceBucket(2) == "2");
  CHECK(DistanceBucket(3) == "3-5");
  CHECK(DistanceBucket(5) == "3-5");
  CHECK(DistanceBucket(6) == "6-10");
  CHECK(DistanceBucket(10) == "6-10");
  CHECK(DistanceBucket(11) == ">10");
  CHECK(SpanDistance(T(0, 1), E(5, 6)) == 4);
  CHECK(SpanDistance(E(5, 6), T(0, 1)) == 4);
  CHECK(SpanDistance(T(0, 3), E(3, 4)) == 0);
}

TEST_CASE("classification rules") {
  Sentence s = Filler("c", 4);
  RelationInstance inst{"c", T(0, 1), E(2, 3), std::nullopt};
  RelationModel always;
  always.kind = RelationKind::kAlwaysTrue;
  RelationDecision d = Classify(always, s, inst, {});
  CHECK(d.decision);
  CHECK(d.score == 1.0);

  RelationModel zero;
  zero.kind = RelationKind::kLogistic;
  d = Classify(zero, s, inst, {});
  CHECK(d.score == 0.5);
  CHECK_FALSE(d.decision);
}

TEST_CASE("model validation") {
  RelationModel m;
  m.kind = RelationKind::kLogistic;
  m.threshold = 1.0;
  CHECK_THROWS_AS(Validate(m), InvalidArgument);
  m.threshold = 0.5;
  m.weights["x"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Validate(m), InvalidArgument);
}

TEST_CASE("logistic training on the distance corpus") {
  DistanceCorpus train = SyntheticDistanceCorpus(300, 1);
  DistanceCorpus test = SyntheticDistanceCorpus(150, 2);
  LogisticOptions opts;
  opts.seed = 4;
  std::vector<double> loss;
  RelationModel m = TrainLogistic(train.instances, train.dataset, opts, &loss);

  REQUIRE(loss.size() == static_cast<std::size_t>(opts.epochs));
  CHECK(loss.back() <= loss.front());

  std::vector<bool> pred;
  std::map<std::string, const Sentence*> by_id;
  for (const Sentence& s : test.dataset.sentences) by_id[s.id] = &s;
  for (const auto& inst : test.instances) {
    auto ctx = ExpressionContext(test.instances, inst.sentence_id);
    pred.push_back(Classify(m, *by_id.at(inst.sentence_id), inst, ctx).decision);
  }
  CHECK(RelationScores(test.instances, pred).positive.f1 >= 0.9);

  Sentence near = Filler("near", 6);
  RelationInstance one{"near", T(0, 1), E(2, 3), std::nullopt};
  CHECK(Classify(m, near, one, std::vector<Span>{E(2, 3)}).decision);
}

TEST_CASE("logistic training is deterministic and checks its input") {
  DistanceCorpus train = SyntheticDistanceCorpus(60, 5);
  LogisticOptions opts;
  opts.epochs = 3;
  CHECK(RelationToJson(TrainLogistic(train.instances, train.dataset, opts)) ==
        RelationToJson(TrainLogistic(train.instances, train.dataset, opts)));

  std::vector<RelationInstance> positives;
  for (const auto& i : train.instances) {
    if (*i.label) positives.push_back(i);
  }
  CHECK_THROWS_AS(TrainLogistic(positives, train.dataset, opts), InvalidArgument);

  auto unlabeled = train.instances;
  unlabeled[0].label.reset();
  CHECK_THROWS_AS(TrainLogistic(unlabeled, train.dataset, opts), InvalidArgument);
}

TEST_CASE("class balancing changes the fit") {
  DistanceCorpus train = SyntheticDistanceCorpus(80, 6);
  LogisticOptions plain;
  plain.epochs = 2;
  LogisticOptions balanced = plain;
  balanced.balance_classes = true;
  CHECK(RelationToJson(TrainLogistic(train.instances, train.dataset, plain)) !=
        RelationToJson(TrainLogistic(train.instances, train.dataset, balanced)));
}

TEST_CASE("relation model JSON round trip") {
  DistanceCorpus train = SyntheticDistanceCorpus(40, 7);
  RelationModel m = TrainLogistic(train.instances, train.dataset, LogisticOptions{});
  RelationModel back = RelationFromJson(RelationToJson(m));
  CHECK(back.kind == m.kind);
  CHECK(back.bias == m.bias);
  CHECK(back.weights == m.weights);
  CHECK(back.threshold == m.threshold);
  CHECK_THROWS(RelationFromJson(R"({"kind":"LOGISTIC","threshold":2,"bias":0,"weights":{}})"));
}

TEST_CASE("instances JSONL") {
  std::vector<RelationInstance> inst = {{"a", T(0, 1), E(2, 3), true}};
  std::vector<RelationDecision> dec = {{true, 0.75}};
  std::string line = InstancesToJsonl(inst, dec);
  CHECK(line.find("\"sentence_id\":\"a\"") != std::string::npos);
  CHECK(line.find("0.75") != std::string::npos);
  CHECK(std::count(line.begin(), line.end(), '\n') == 1);
}

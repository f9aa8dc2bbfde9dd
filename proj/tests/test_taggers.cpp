#include <algorithm>

#include "doctest.h"
#include "opinex/conll.hpp"
#include "opinex/error.hpp"
#include "opinex/synthetic.hpp"
#include "opinex/taggers.hpp"
#include "support.hpp"

using namespace opinex;
using namespace opinex::testing;

namespace {

const TagSequence kPronVerbNoun = {Label::kBHolder, Label::kBExp, Label::kBTarg};

}  // namespace

TEST_CASE("most common class tags everything O") {
  Dataset ds = SyntheticOpinionCorpus(20, 1);
  for (const Sentence& s : ds.sentences) {
    CHECK(Tag(TaggerModel::MostCommon(), s) == TagSequence(s.size(), Label::kO));
  }
}

TEST_CASE("POS chunk tagger with the default map") {
  TaggerModel m = TaggerModel::PosChunk();
  CHECK(Tag(m, MakeSentence("a", {"I", "love", "school"}, {"PRON", "VERB", "NOUN"})) ==
        kPronVerbNoun);
  CHECK(Tag(m, MakeSentence("b", {"school", "bus"}, {"NOUN", "NOUN"})) ==
        TagSequence{Label::kBTarg, Label::kITarg});
  CHECK(Tag(m, MakeSentence("c", {"run"}, {"VERB"})) == TagSequence{Label::kBExp});
  CHECK(Tag(m, MakeSentence("d", {"x", "y"})) == TagSequence{Label::kO, Label::kO});
  CHECK(Tag(m, MakeSentence("e", {"He", "likes", "Bob"}, {"PRP", "VBZ", "NNP"})) ==
        kPronVerbNoun);
  CHECK(Tag(m, MakeSentence("f", {"the", "dog"}, {"DET", "NOUN"})) ==
        TagSequence{Label::kO, Label::kBTarg});
}

TEST_CASE("POS chunk: verb then adjective is one expression run") {
  TaggerModel m = TaggerModel::PosChunk();
  CHECK(Tag(m, MakeSentence("a", {"is", "great"}, {"VERB", "ADJ"})) ==
        TagSequence{Label::kBExp, Label::kIExp});
}

TEST_CASE("custom POS maps") {
  PosMap map = ParsePosMap({{"X", "I-HOLDER"}, {"Y", "O"}});
  TaggerModel m = TaggerModel::PosChunk(map);
  CHECK(Tag(m, MakeSentence("a", {"a", "b", "c"}, {"X", "X", "Y"})) ==
        TagSequence{Label::kBHolder, Label::kIHolder, Label::kO});
  CHECK_THROWS_AS(ParsePosMap({{"X", "B-POLARITY"}}), InvalidArgument);
}

TEST_CASE("external tagger cannot tag directly") {
  CHECK_THROWS_AS(Tag(TaggerModel::External(), Filler("a", 2)), InvalidArgument);
}

TEST_CASE("word shape") {
  CHECK(WordShape("Hello-42") == "Xx-d");
  CHECK(WordShape("abc") == "x");
  CHECK(WordShape("") == "");
}

TEST_CASE("static features") {
  Sentence s = MakeSentence("a", {"I", "love", "school"}, {"PRON", "VERB", "NOUN"});
  auto f = StaticFeatures(s, 1);
  auto has = [&](const std::string& x) { return std::find(f.begin(), f.end(), x) != f.end(); };
  CHECK(has("w=love"));
  CHECK(has("pos=VERB"));
  CHECK(has("w-1=I"));
  CHECK(has("w+1=school"));
  Sentence bare = Filler("b", 2);
  auto g = StaticFeatures(bare, 0);
  CHECK(std::none_of(g.begin(), g.end(),
                     [](const std::string& x) { return x.rfind("pos", 0) == 0; }));
}

TEST_CASE("perceptron learns its training sentences") {
  Dataset train = SyntheticOpinionCorpus(200, 3);
  TaggerModel m = TrainPerceptron(train, 10, 1);
  CHECK(m.kind() == TaggerKind::kPerceptron);
  std::size_t exact = 0;
  for (const Sentence& s : train.sentences) exact += Tag(m, s) == Encode(s);
  CHECK(exact == train.sentences.size());
}

TEST_CASE("perceptron output is always well formed") {
  Dataset train = SyntheticOpinionCorpus(50, 3);
  TaggerModel m = TrainPerceptron(train, 2, 1);
  Sentence odd = MakeSentence("odd", {"zzz", "qqq", "loves", "the", "pizza", "!"});
  CHECK(IsWellFormed(Tag(m, odd)));
  CHECK(Tag(m, MakeSentence("e", {})).empty());
}

TEST_CASE("zero epochs gives a zero model that tags all O") {
  Dataset train = SyntheticOpinionCorpus(30, 3);
  TaggerModel m = TrainPerceptron(train, 0, 1);
  for (const auto& [feature, w] : m.weights()) {
    CHECK(std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; }));
  }
  for (const Sentence& s : train.sentences) CHECK(Tag(m, s) == TagSequence(s.size(), Label::kO));
}

TEST_CASE("perceptron training is deterministic per seed") {
  Dataset train = SyntheticOpinionCorpus(80, 9);
  CHECK(TaggerToJson(TrainPerceptron(train, 3, 5)) == TaggerToJson(TrainPerceptron(train, 3, 5)));
}

TEST_CASE("perceptron rejects bad input") {
  CHECK_THROWS_AS(TrainPerceptron(Dataset{"e", {}}, 5, 1), InvalidArgument);
  CHECK_THROWS_AS(TrainPerceptron(SyntheticOpinionCorpus(5, 1), -1, 1), InvalidArgument);
}

TEST_CASE("tagger JSON round trip") {
  Dataset train = SyntheticOpinionCorpus(40, 2);
  TaggerModel p = TrainPerceptron(train, 2, 1);
  TaggerModel back = TaggerFromJson(TaggerToJson(p));
  CHECK(back.weights() == p.weights());
  for (const Sentence& s : train.sentences) CHECK(Tag(back, s) == Tag(p, s));

  PosMap map = ParsePosMap({{"X", "B-EXP"}});
  CHECK(TaggerFromJson(TaggerToJson(TaggerModel::PosChunk(map))).pos_map() == map);
  CHECK(TaggerFromJson(TaggerToJson(TaggerModel::MostCommon())).kind() == TaggerKind::kMostCommon);
  CHECK_THROWS(TaggerFromJson("{\"kind\": \"CRF\"}"));
  CHECK_THROWS(TaggerFromJson("not json"));
}

TEST_CASE("external predictions") {
  auto dir = TempDir("taggers_external");
  Dataset ds = SyntheticOpinionCorpus(6, 4);
  std::vector<ConllSentence> rows;
  for (const Sentence& s : ds.sentences) rows.push_back(ToConll(s, Encode(s)));

  SUBCASE("mirror of gold decodes to gold spans") {
    WriteText(dir / "p.conll", WriteConll(rows));
    auto tags = LoadExternalPredictions((dir / "p.conll").string(), ds);
    for (const Sentence& s : ds.sentences) CHECK(Decode(tags.at(s.id)) == DistinctSpans(s));
  }
  SUBCASE("missing sentence is named") {
    std::string missing = rows[2].id;
    rows.erase(rows.begin() + 2);
    WriteText(dir / "p.conll", WriteConll(rows));
    try {
      LoadExternalPredictions((dir / "p.conll").string(), ds);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }
  }
  SUBCASE("length mismatch is named") {
    rows[1].rows.pop_back();
    WriteText(dir / "p.conll", WriteConll(rows));
    CHECK_THROWS_AS(LoadExternalPredictions((dir / "p.conll").string(), ds), ValidationError);
  }
  SUBCASE("ill-formed I- runs are accepted and repaired on decode") {
    for (auto& r : rows[0].rows) r.label = Label::kO;
    rows[0].rows[0].label = Label::kITarg;
    WriteText(dir / "p.conll", WriteConll(rows));
    auto tags = LoadExternalPredictions((dir / "p.conll").string(), ds);
    CHECK(tags.at(rows[0].id)[0] == Label::kITarg);
    CHECK(Decode(tags.at(rows[0].id)) == std::vector<Span>{T(0, 1)});
  }
}

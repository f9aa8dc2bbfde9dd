#include <random>
#include <set>

#include "doctest.h"
#include "opinex/conll.hpp"
#include "opinex/error.hpp"
#include "opinex/span_codec.hpp"
#include "support.hpp"

using namespace opinex;
using namespace opinex::testing;

namespace {

TagSequence Parse(std::initializer_list<const char*> names) {
  TagSequence out;
  for (const char* n : names) out.push_back(*ParseLabel(n));
  return out;
}

}  // namespace

TEST_CASE("label alphabet") {
  CHECK(kAllLabels.size() == 7);
  for (Label l : kAllLabels) CHECK(ParseLabel(LabelName(l)) == l);
  CHECK_FALSE(ParseLabel("B-POLARITY").has_value());
  CHECK_FALSE(ParseLabel("o").has_value());
  CHECK(LabelName(Label::kBHolder) == "B-HOLDER");
  CHECK(LabelName(Label::kITarg) == "I-TARG");
  CHECK(LabelName(Label::kBExp) == "B-EXP");
}

TEST_CASE("I love school") {
  Sentence s = MakeSentence("ex", {"I", "love", "school"});
  s.opinions.push_back(Tuple({H(0, 1)}, {T(2, 3)}, {E(1, 2)}));
  CHECK(Encode(s) == Parse({"B-HOLDER", "B-EXP", "B-TARG"}));
}

TEST_CASE("no opinions encode to all O") {
  CHECK(Encode(Filler("x", 4)) == TagSequence(4, Label::kO));
}

TEST_CASE("overlapping same-role spans are unioned") {
  Sentence s = Filler("u", 5);
  s.opinions.push_back(Tuple({}, {T(1, 3)}, {E(0, 1)}));
  s.opinions.push_back(Tuple({}, {T(2, 4)}, {E(0, 1)}));
  CHECK(Encode(s) == Parse({"B-EXP", "B-TARG", "I-TARG", "I-TARG", "O"}));
}

TEST_CASE("adjacent same-role spans stay separate") {
  std::vector<Span> spans = {T(0, 2), T(2, 3)};
  CHECK(EncodeSpans(3, spans) == Parse({"B-TARG", "I-TARG", "B-TARG"}));
  CHECK(Decode(EncodeSpans(3, spans)) == spans);
}

TEST_CASE("cross-role collision names the token and both roles") {
  Sentence s = Filler("c", 4);
  s.opinions.push_back(Tuple({}, {T(0, 3)}, {E(2, 4)}));
  try {
    Encode(s);
    FAIL("expected an encode error");
  } catch (const EncodeError& e) {
    std::string what = e.what();
    CHECK(what.find("token 2") != std::string::npos);
    CHECK(what.find("TARGET") != std::string::npos);
    CHECK(what.find("EXPRESSION") != std::string::npos);
  }
}

TEST_CASE("decode") {
  CHECK(Decode(Parse({"B-TARG", "I-TARG", "O"})) == std::vector<Span>{T(0, 2)});
  CHECK(Decode(Parse({"O", "I-EXP", "I-EXP"})) == std::vector<Span>{E(1, 3)});
  CHECK(Decode(Parse({"B-HOLDER", "I-TARG"})) == std::vector<Span>{H(0, 1), T(1, 2)});
  CHECK(Decode(Parse({"B-EXP", "B-EXP"})) == std::vector<Span>{E(0, 1), E(1, 2)});
  CHECK(Decode(TagSequence{}).empty());
}

TEST_CASE("transitions") {
  CHECK(IsLegalTransition(std::nullopt, Label::kBTarg));
  CHECK_FALSE(IsLegalTransition(std::nullopt, Label::kITarg));
  CHECK(IsLegalTransition(Label::kBTarg, Label::kITarg));
  CHECK(IsLegalTransition(Label::kITarg, Label::kITarg));
  CHECK_FALSE(IsLegalTransition(Label::kBExp, Label::kITarg));
  CHECK_FALSE(IsLegalTransition(Label::kO, Label::kIHolder));
  CHECK(IsWellFormed(Parse({"B-EXP", "I-EXP", "O", "B-TARG"})));
  CHECK_FALSE(IsWellFormed(Parse({"O", "I-EXP"})));
}

TEST_CASE("encode/decode round trip on random overlap-free sentences") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(0, 15);
  for (int trial = 0; trial < 1500; ++trial) {
    std::size_t n = len(rng);
    std::vector<Span> spans = RandomDisjointSpans(n, rng);
    TagSequence tags = EncodeSpans(n, spans);
    REQUIRE(IsWellFormed(tags));
    REQUIRE(Decode(tags) == spans);
  }
}

TEST_CASE("decode is total and re-encodes to a well-formed fixed point") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    TagSequence tags = RandomTags(trial % 13, rng);
    std::vector<Span> spans;
    REQUIRE_NOTHROW(spans = Decode(tags));
    TagSequence repaired = EncodeSpans(tags.size(), spans);
    REQUIRE(IsWellFormed(repaired));
    REQUIRE(Decode(repaired) == spans);
    if (IsWellFormed(tags)) REQUIRE(repaired == tags);
  }
}

TEST_CASE("CoNLL write and parse") {
  Sentence s = MakeSentence("s-1", {"I", "love", "school"}, {"PRON", "VERB", "NOUN"});
  s.opinions.push_back(Tuple({H(0, 1)}, {T(2, 3)}, {E(1, 2)}));
  std::string text = WriteConll({ToConll(s, Encode(s))});
  CHECK(text.find("# sent_id = s-1") != std::string::npos);
  CHECK(text.find("2\tlove\tVERB\tB-EXP") != std::string::npos);

  auto parsed = ParseConll(text);
  REQUIRE(parsed.size() == 1);
  Sentence back = FromConll(parsed[0]);
  CHECK(back.text == "I love school");
  CHECK(back.tokens == s.tokens);
  CHECK(DistinctSpans(back) == DistinctSpans(s));
}

TEST_CASE("CoNLL without POS and without expression") {
  Sentence s = Filler("np", 3);
  std::string text = WriteConll({ToConll(s, Parse({"B-TARG", "O", "O"}))});
  CHECK(text.find("1\tw0\t_\tB-TARG") != std::string::npos);
  Sentence back = FromConll(ParseConll(text)[0]);
  CHECK_FALSE(back.tokens[0].pos.has_value());
  CHECK(back.opinions.empty());
}

TEST_CASE("CoNLL parse errors carry a line number") {
  CHECK_THROWS_AS(ParseConll("1\ta\t_\tO\n"), ParseError);
  try {
    ParseConll("# sent_id = a\n1\ta\t_\tO\n2\tb\t_\tB-NOPE\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseConll("# sent_id = a\n1\ta\t_\tO\n3\tb\t_\tO\n"), ParseError);
  CHECK_THROWS_AS(ParseConll("# sent_id = a\n1\ta\tO\n"), ParseError);
}

TEST_CASE("CoNLL accepts space-separated columns and trailing blanks") {
  auto parsed = ParseConll("# sent_id = a\n1 good ADJ B-EXP\n2 food NOUN B-TARG\n\n\n");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].rows[1].label == Label::kBTarg);
  CHECK(parsed[0].rows[0].pos == "ADJ");
}

#include "opinex/synthetic.hpp"

#include <utility>

#include "opinex/rng.hpp"

namespace opinex {

namespace {

using Word = std::pair<const char*, const char*>;  // text, POS
using Phrase = std::vector<Word>;

const std::vector<Phrase>& Holders() {
  static const std::vector<Phrase> kPhrases = {
      {{"I", "PRON"}},
      {{"We", "PRON"}},
      {{"John", "PROPN"}},
      {{"Mary", "PROPN"}, {"Smith", "PROPN"}},
      {{"critics", "NOUN"}},
      {{"many", "DET"}, {"guests", "NOUN"}},
      {{"my", "PRON"}, {"family", "NOUN"}},
  };
  return kPhrases;
}

const std::vector<Phrase>& Targets() {
  static const std::vector<Phrase> kPhrases = {
      {{"hotel", "NOUN"}},
      {{"room", "NOUN"}},
      {{"breakfast", "NOUN"}},
      {{"front", "ADJ"}, {"desk", "NOUN"}},
      {{"swimming", "NOUN"}, {"pool", "NOUN"}},
      {{"university", "NOUN"}},
      {{"online", "ADJ"}, {"courses", "NOUN"}},
      {{"staff", "NOUN"}},
      {{"location", "NOUN"}},
      {{"wifi", "NOUN"}},
  };
  return kPhrases;
}

const std::vector<Phrase>& Expressions() {
  static const std::vector<Phrase> kPhrases = {
      {{"love", "VERB"}},
      {{"hate", "VERB"}},
      {{"enjoyed", "VERB"}},
      {{"disliked", "VERB"}},
      {{"adore", "VERB"}},
      {{"really", "ADV"}, {"liked", "VERB"}},
      {{"could", "AUX"}, {"not", "PART"}, {"stand", "VERB"}},
      {{"praised", "VERB"}},
      {{"amazing", "ADJ"}},
      {{"awful", "ADJ"}},
      {{"superb", "ADJ"}},
  };
  return kPhrases;
}

class SentenceBuilder {
 public:
  explicit SentenceBuilder(std::string id) { sentence_.id = std::move(id); }

  void Append(const char* text, const char* pos) {
    if (!sentence_.text.empty()) {
      sentence_.text += ' ';
      ++offset_;
    }
    sentence_.text += text;
    auto length = static_cast<std::int64_t>(CodePointCount(text));
    sentence_.tokens.push_back({text, offset_, offset_ + length, std::string(pos)});
    offset_ += length;
  }

  void Words(std::initializer_list<Word> words) {
    for (const auto& [text, pos] : words) Append(text, pos);
  }

  Span Add(const Phrase& phrase, Role role) {
    std::size_t start = sentence_.size();
    for (const auto& [text, pos] : phrase) Append(text, pos);
    return {start, sentence_.size(), role};
  }

  void Opinion(std::vector<Span> holders, std::vector<Span> targets, Span expression) {
    sentence_.opinions.push_back({std::move(holders), std::move(targets), {expression}, {}});
  }

  Sentence Take() { return std::move(sentence_); }

 private:
  Sentence sentence_;
  std::int64_t offset_ = 0;
};

const Phrase& Pick(const std::vector<Phrase>& phrases, Rng& rng) {
  return phrases[UniformIndex(rng, phrases.size())];
}

// Distinct phrases from one vocabulary.
std::vector<const Phrase*> PickDistinct(const std::vector<Phrase>& phrases, std::size_t n,
                                        Rng& rng) {
  std::vector<std::size_t> idx(phrases.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Shuffle(idx, rng);
  std::vector<const Phrase*> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(&phrases[idx[i]]);
  return out;
}

Sentence GenerateOpinionSentence(std::string id, Rng& rng) {
  SentenceBuilder b(std::move(id));
  auto targets = PickDistinct(Targets(), 3, rng);
  auto exps = PickDistinct(Expressions(), 2, rng);
  switch (UniformIndex(rng, 8)) {
    case 0: {  // H E the T .
      Span h = b.Add(Pick(Holders(), rng), Role::kHolder);
      Span e = b.Add(*exps[0], Role::kExpression);
      b.Append("the", "DET");
      Span t = b.Add(*targets[0], Role::kTarget);
      b.Append(".", "PUNCT");
      b.Opinion({h}, {t}, e);
      break;
    }
    case 1: {  // the T is E .
      b.Append("the", "DET");
      Span t = b.Add(*targets[0], Role::kTarget);
      b.Append("is", "AUX");
      Span e = b.Add(*exps[0], Role::kExpression);
      b.Append(".", "PUNCT");
      b.Opinion({}, {t}, e);
      break;
    }
    case 2: {  // H E the T but E2 the T2 .
      Span h = b.Add(Pick(Holders(), rng), Role::kHolder);
      Span e1 = b.Add(*exps[0], Role::kExpression);
      b.Append("the", "DET");
      Span t1 = b.Add(*targets[0], Role::kTarget);
      b.Append("but", "CCONJ");
      Span e2 = b.Add(*exps[1], Role::kExpression);
      b.Append("the", "DET");
      Span t2 = b.Add(*targets[1], Role::kTarget);
      b.Append(".", "PUNCT");
      b.Opinion({h}, {t1}, e1);
      b.Opinion({h}, {t2}, e2);
      break;
    }
    case 3: {  // the T and the T2 were E .
      b.Append("the", "DET");
      Span t1 = b.Add(*targets[0], Role::kTarget);
      b.Words({{"and", "CCONJ"}, {"the", "DET"}});
      Span t2 = b.Add(*targets[1], Role::kTarget);
      b.Append("were", "AUX");
      Span e = b.Add(*exps[0], Role::kExpression);
      b.Append(".", "PUNCT");
      b.Opinion({}, {t1, t2}, e);
      break;
    }
    case 4: {  // no opinion
      b.Words({{"it", "PRON"}, {"rained", "VERB"}, {"all", "DET"}, {"day", "NOUN"},
               {"yesterday", "ADV"}, {".", "PUNCT"}});
      break;
    }
    case 5: {  // H E it .
      Span h = b.Add(Pick(Holders(), rng), Role::kHolder);
      Span e = b.Add(*exps[0], Role::kExpression);
      b.Words({{"it", "PRON"}, {".", "PUNCT"}});
      b.Opinion({h}, {}, e);
      break;
    }
    case 6: {  // yesterday H E the T , and the T2 is E2 .
      b.Append("yesterday", "ADV");
      Span h = b.Add(Pick(Holders(), rng), Role::kHolder);
      Span e1 = b.Add(*exps[0], Role::kExpression);
      b.Append("the", "DET");
      Span t1 = b.Add(*targets[0], Role::kTarget);
      b.Words({{",", "PUNCT"}, {"and", "CCONJ"}, {"the", "DET"}});
      Span t2 = b.Add(*targets[1], Role::kTarget);
      b.Append("is", "AUX");
      Span e2 = b.Add(*exps[1], Role::kExpression);
      b.Append(".", "PUNCT");
      b.Opinion({h}, {t1}, e1);
      b.Opinion({}, {t2}, e2);
      break;
    }
    default: {  // the T , the T2 and the T3 are E .
      b.Append("the", "DET");
      Span t1 = b.Add(*targets[0], Role::kTarget);
      b.Words({{",", "PUNCT"}, {"the", "DET"}});
      Span t2 = b.Add(*targets[1], Role::kTarget);
      b.Words({{"and", "CCONJ"}, {"the", "DET"}});
      Span t3 = b.Add(*targets[2], Role::kTarget);
      b.Append("are", "AUX");
      Span e = b.Add(*exps[0], Role::kExpression);
      b.Append(".", "PUNCT");
      b.Opinion({}, {t1, t2, t3}, e);
      break;
    }
  }
  return b.Take();
}

}  // namespace

Dataset SyntheticOpinionCorpus(std::size_t sentences, std::uint64_t seed, std::string name) {
  Rng rng(seed);
  Dataset dataset;
  dataset.name = std::move(name);
  for (std::size_t i = 0; i < sentences; ++i) {
    dataset.sentences.push_back(
        GenerateOpinionSentence(dataset.name + "-" + std::to_string(i), rng));
  }
  return dataset;
}

DistanceCorpus SyntheticDistanceCorpus(std::size_t sentences, std::uint64_t seed,
                                       std::string name) {
  static const char* const kFiller[] = {"the", "a",    "of",   "and",  "to",  "in",
                                        "was", "very", "that", "with", "for", "on"};
  static const char* const kEntity[] = {"hotel", "staff", "room", "she", "they", "guide"};
  static const char* const kExpr[] = {"great", "poor", "liked", "hated", "nice", "bad"};

  Rng rng(seed);
  DistanceCorpus corpus;
  corpus.dataset.name = std::move(name);
  for (std::size_t n = 0; n < sentences; ++n) {
    const std::size_t length = 10 + UniformIndex(rng, 11);
    // Slot kinds: 0 filler, 1 entity, 2 expression. Spans are single tokens
    // so placements never collide.
    std::vector<int> kind(length, 0);
    auto place = [&](int k, std::size_t count) {
      for (std::size_t placed = 0; placed < count;) {
        std::size_t at = UniformIndex(rng, length);
        if (kind[at] != 0) continue;
        kind[at] = k;
        ++placed;
      }
    };
    place(1, 1 + UniformIndex(rng, 3));
    place(2, 1 + UniformIndex(rng, 2));

    SentenceBuilder b(corpus.dataset.name + "-" + std::to_string(n));
    std::vector<Span> entities;
    std::vector<Span> expressions;
    for (std::size_t i = 0; i < length; ++i) {
      if (kind[i] == 1) {
        Role role = UniformIndex(rng, 2) == 0 ? Role::kHolder : Role::kTarget;
        b.Append(kEntity[UniformIndex(rng, 6)], "NOUN");
        entities.push_back({i, i + 1, role});
      } else if (kind[i] == 2) {
        b.Append(kExpr[UniformIndex(rng, 6)], "ADJ");
        expressions.push_back({i, i + 1, Role::kExpression});
      } else {
        b.Append(kFiller[UniformIndex(rng, 12)], "X");
      }
    }
    for (const Span& x : expressions) {
      std::vector<Span> holders;
      std::vector<Span> targets;
      for (const Span& e : entities) {
        if (SpanDistance(e, x) > 2) continue;
        (e.role == Role::kHolder ? holders : targets).push_back(e);
      }
      b.Opinion(std::move(holders), std::move(targets), x);
    }
    Sentence sentence = b.Take();
    std::vector<RelationInstance> inst =
        GenerateInstances(sentence, entities, expressions, &sentence.opinions);
    corpus.instances.insert(corpus.instances.end(), inst.begin(), inst.end());
    corpus.dataset.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace opinex

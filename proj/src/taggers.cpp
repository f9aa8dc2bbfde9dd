#include "opinex/taggers.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opinex/conll.hpp"
#include "opinex/error.hpp"
#include "opinex/rng.hpp"

namespace opinex {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> CodePoints(std::string_view word) {
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < word.size();) {
    std::size_t j = i + 1;
    while (j < word.size() && (static_cast<unsigned char>(word[j]) & 0xC0) == 0x80) ++j;
    out.push_back(word.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string AsciiLower(std::string_view word) {
  std::string out(word);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Join(const std::vector<std::string_view>& pieces, std::size_t from,
                 std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) out += pieces[i];
  return out;
}

const std::string& WordAt(const Sentence& sentence, std::ptrdiff_t i) {
  static const std::string kBos = "<s>";
  static const std::string kEos = "</s>";
  if (i < 0) return kBos;
  if (static_cast<std::size_t>(i) >= sentence.size()) return kEos;
  return sentence.tokens[i].text;
}

std::optional<std::string> PosAt(const Sentence& sentence, std::ptrdiff_t i) {
  if (i < 0) return std::string("<s>");
  if (static_cast<std::size_t>(i) >= sentence.size()) return std::string("</s>");
  return sentence.tokens[i].pos;
}

void AddDynamicFeatures(const Sentence& sentence, std::size_t i,
                        std::optional<Label> prev, std::vector<std::string>& feats) {
  std::string_view prev_name = prev ? LabelName(*prev) : "<s>";
  feats.push_back("plbl=" + std::string(prev_name));
  feats.push_back("plbl_w=" + std::string(prev_name) + "|" + sentence.tokens[i].text);
}

// Highest-scoring label that may follow `prev`; lower label index wins ties.
Label BestLegal(const LabelWeights& scores, std::optional<Label> prev) {
  Label best = Label::kO;
  double best_score = scores[0];
  for (std::size_t l = 1; l < kNumLabels; ++l) {
    auto label = static_cast<Label>(l);
    if (!IsLegalTransition(prev, label)) continue;
    if (scores[l] > best_score) {
      best = label;
      best_score = scores[l];
    }
  }
  return best;
}

LabelWeights Score(const PerceptronWeights& weights, const std::vector<std::string>& feats) {
  LabelWeights scores{};
  for (const std::string& f : feats) {
    auto it = weights.find(f);
    if (it == weights.end()) continue;
    for (std::size_t l = 0; l < kNumLabels; ++l) scores[l] += it->second[l];
  }
  return scores;
}

TagSequence TagPosChunk(const PosMap& map, const Sentence& sentence) {
  TagSequence tags;
  std::optional<Role> prev_role;
  for (const Token& token : sentence.tokens) {
    std::optional<Role> role;
    if (token.pos) {
      auto it = map.find(*token.pos);
      if (it != map.end() && !IsOutside(it->second)) role = LabelRole(it->second);
    }
    if (!role) {
      tags.push_back(Label::kO);
    } else if (prev_role == role) {
      tags.push_back(InsideLabel(*role));
    } else {
      tags.push_back(BeginLabel(*role));
    }
    prev_role = role;
  }
  return tags;
}

TagSequence TagPerceptron(const PerceptronWeights& weights, const Sentence& sentence) {
  TagSequence tags;
  std::optional<Label> prev;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    std::vector<std::string> feats = StaticFeatures(sentence, i);
    AddDynamicFeatures(sentence, i, prev, feats);
    Label label = BestLegal(Score(weights, feats), prev);
    tags.push_back(label);
    prev = label;
  }
  return tags;
}

// Running sums for weight averaging. Totals are brought up to date lazily
// when a weight changes.
struct AveragedParam {
  LabelWeights weight{};
  LabelWeights total{};
  std::array<std::int64_t, kNumLabels> stamp{};

  void Update(std::size_t label, double delta, std::int64_t now) {
    total[label] += static_cast<double>(now - stamp[label]) * weight[label];
    stamp[label] = now;
    weight[label] += delta;
  }
};

}  // namespace

std::string_view TaggerKindName(TaggerKind kind) {
  switch (kind) {
    case TaggerKind::kMostCommon:
      return "MOST_COMMON";
    case TaggerKind::kPosChunk:
      return "POS_CHUNK";
    case TaggerKind::kPerceptron:
      return "PERCEPTRON";
    case TaggerKind::kExternal:
      return "EXTERNAL";
  }
  return "?";
}

TaggerKind ParseTaggerKind(std::string_view name) {
  for (TaggerKind kind : {TaggerKind::kMostCommon, TaggerKind::kPosChunk,
                          TaggerKind::kPerceptron, TaggerKind::kExternal}) {
    if (TaggerKindName(kind) == name) return kind;
  }
  throw InvalidArgument("unknown tagger kind '" + std::string(name) + "'");
}

const PosMap& DefaultPosMap() {
  static const PosMap kMap = [] {
    PosMap map;
    for (const char* tag : {"NOUN", "PROPN", "NN", "NNS", "NNP", "NNPS"}) {
      map[tag] = Label::kBTarg;
    }
    for (const char* tag : {"VERB", "ADJ", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "JJ",
                            "JJR", "JJS"}) {
      map[tag] = Label::kBExp;
    }
    for (const char* tag : {"PRON", "PRP", "PRP$"}) map[tag] = Label::kBHolder;
    return map;
  }();
  return kMap;
}

PosMap ParsePosMap(const std::map<std::string, std::string>& entries) {
  PosMap map;
  for (const auto& [pos, label_name] : entries) {
    std::optional<Label> label = ParseLabel(label_name);
    if (!label) {
      throw InvalidArgument("POS map entry '" + pos + "' has invalid label '" + label_name +
                            "'");
    }
    map[pos] = *label;
  }
  return map;
}

TaggerModel TaggerModel::MostCommon() { return TaggerModel(TaggerKind::kMostCommon); }

TaggerModel TaggerModel::PosChunk(PosMap map) {
  TaggerModel model(TaggerKind::kPosChunk);
  model.pos_map_ = std::move(map);
  return model;
}

TaggerModel TaggerModel::Perceptron(PerceptronWeights weights) {
  for (const auto& [feature, values] : weights) {
    if (feature.empty()) throw InvalidArgument("empty feature string");
    for (double v : values) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite weight for " + feature);
    }
  }
  TaggerModel model(TaggerKind::kPerceptron);
  model.weights_ = std::move(weights);
  return model;
}

TaggerModel TaggerModel::External() { return TaggerModel(TaggerKind::kExternal); }

std::string WordShape(std::string_view word) {
  std::string shape;
  for (char c : word) {
    auto u = static_cast<unsigned char>(c);
    char s = std::isupper(u) ? 'X' : std::islower(u) ? 'x' : std::isdigit(u) ? 'd' : c;
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

std::vector<std::string> StaticFeatures(const Sentence& sentence, std::size_t i) {
  const std::string& word = sentence.tokens[i].text;
  std::vector<std::string_view> cps = CodePoints(word);
  auto at = static_cast<std::ptrdiff_t>(i);

  std::vector<std::string> feats;
  feats.reserve(16);
  feats.push_back("w=" + word);
  feats.push_back("lw=" + AsciiLower(word));
  feats.push_back("suf3=" + Join(cps, cps.size() > 3 ? cps.size() - 3 : 0, cps.size()));
  feats.push_back("pre2=" + Join(cps, 0, std::min<std::size_t>(2, cps.size())));
  feats.push_back("shape=" + WordShape(word));
  feats.push_back("w-1=" + WordAt(sentence, at - 1));
  feats.push_back("w+1=" + WordAt(sentence, at + 1));
  feats.push_back("w-2=" + WordAt(sentence, at - 2));
  feats.push_back("w+2=" + WordAt(sentence, at + 2));
  if (sentence.tokens[i].pos) {
    feats.push_back("pos=" + *sentence.tokens[i].pos);
    if (auto p = PosAt(sentence, at - 1)) feats.push_back("pos-1=" + *p);
    if (auto p = PosAt(sentence, at + 1)) feats.push_back("pos+1=" + *p);
  }
  return feats;
}

TagSequence Tag(const TaggerModel& model, const Sentence& sentence) {
  switch (model.kind()) {
    case TaggerKind::kMostCommon:
      return TagSequence(sentence.size(), Label::kO);
    case TaggerKind::kPosChunk:
      return TagPosChunk(model.pos_map(), sentence);
    case TaggerKind::kPerceptron:
      return TagPerceptron(model.weights(), sentence);
    case TaggerKind::kExternal:
      break;
  }
  throw InvalidArgument(
      "EXTERNAL tagger cannot tag; load its output with LoadExternalPredictions");
}

TaggerModel TrainPerceptron(const Dataset& train, int epochs, std::uint64_t seed) {
  if (train.sentences.empty()) throw InvalidArgument("cannot train on an empty dataset");
  if (epochs < 0) throw InvalidArgument("epochs must be non-negative");

  std::vector<TagSequence> gold;
  std::vector<std::vector<std::vector<std::string>>> static_feats;
  for (const Sentence& sentence : train.sentences) {
    gold.push_back(Encode(sentence));
    auto& per_token = static_feats.emplace_back();
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      per_token.push_back(StaticFeatures(sentence, i));
    }
  }

  std::unordered_map<std::string, AveragedParam> params;
  std::int64_t now = 0;
  std::vector<std::size_t> order(train.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);

  auto score = [&](const std::vector<std::string>& feats) {
    LabelWeights scores{};
    for (const std::string& f : feats) {
      auto it = params.find(f);
      if (it == params.end()) continue;
      for (std::size_t l = 0; l < kNumLabels; ++l) scores[l] += it->second.weight[l];
    }
    return scores;
  };

  for (int epoch = 0; epoch < epochs; ++epoch) {
    Shuffle(order, rng);
    for (std::size_t s : order) {
      const Sentence& sentence = train.sentences[s];
      std::optional<Label> prev;
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        std::vector<std::string> feats = static_feats[s][i];
        AddDynamicFeatures(sentence, i, prev, feats);
        Label predicted = BestLegal(score(feats), prev);
        Label truth = gold[s][i];
        if (predicted != truth) {
          for (const std::string& f : feats) {
            AveragedParam& p = params[f];
            p.Update(static_cast<std::size_t>(truth), 1.0, now);
            p.Update(static_cast<std::size_t>(predicted), -1.0, now);
          }
        }
        ++now;
        prev = predicted;
      }
    }
  }

  PerceptronWeights averaged;
  if (now > 0) {
    for (auto& [feature, p] : params) {
      LabelWeights avg{};
      bool nonzero = false;
      for (std::size_t l = 0; l < kNumLabels; ++l) {
        double total = p.total[l] + static_cast<double>(now - p.stamp[l]) * p.weight[l];
        avg[l] = total / static_cast<double>(now);
        nonzero = nonzero || avg[l] != 0.0;
      }
      if (nonzero) averaged.emplace(feature, avg);
    }
  }
  return TaggerModel::Perceptron(std::move(averaged));
}

std::map<std::string, TagSequence> LoadExternalPredictions(const std::string& path,
                                                           const Dataset& ds) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();

  std::map<std::string, TagSequence> by_id;
  for (const ConllSentence& conll : ParseConll(buffer.str())) {
    TagSequence tags;
    for (const ConllRow& row : conll.rows) tags.push_back(row.label);
    by_id[conll.id] = std::move(tags);
  }
  std::map<std::string, TagSequence> out;
  for (const Sentence& sentence : ds.sentences) {
    auto it = by_id.find(sentence.id);
    if (it == by_id.end()) {
      throw ValidationError("external predictions missing sentence " + sentence.id);
    }
    if (it->second.size() != sentence.size()) {
      throw ValidationError("external predictions for sentence " + sentence.id + " have " +
                            std::to_string(it->second.size()) + " tokens, expected " +
                            std::to_string(sentence.size()));
    }
    out[sentence.id] = it->second;
  }
  return out;
}

std::string TaggerToJson(const TaggerModel& model) {
  json root;
  root["kind"] = std::string(TaggerKindName(model.kind()));
  if (model.kind() == TaggerKind::kPosChunk) {
    json map = json::object();
    for (const auto& [pos, label] : model.pos_map()) map[pos] = std::string(LabelName(label));
    root["map"] = std::move(map);
  } else if (model.kind() == TaggerKind::kPerceptron) {
    json weights = json::object();
    for (const auto& [feature, values] : model.weights()) {
      for (std::size_t l = 0; l < kNumLabels; ++l) {
        if (values[l] == 0.0) continue;
        weights[feature + "\t" + std::string(LabelName(static_cast<Label>(l)))] = values[l];
      }
    }
    root["weights"] = std::move(weights);
  }
  return root.dump(1) + "\n";
}

TaggerModel TaggerFromJson(std::string_view content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed tagger model: ") + e.what());
  }
  if (!root.is_object() || !root.contains("kind") || !root["kind"].is_string()) {
    throw ParseError("tagger model lacks a 'kind' string");
  }
  TaggerKind kind = ParseTaggerKind(root["kind"].get<std::string>());
  switch (kind) {
    case TaggerKind::kMostCommon:
      return TaggerModel::MostCommon();
    case TaggerKind::kExternal:
      return TaggerModel::External();
    case TaggerKind::kPosChunk: {
      if (!root.contains("map")) return TaggerModel::PosChunk();
      std::map<std::string, std::string> entries;
      for (const auto& [pos, label] : root["map"].items()) {
        if (!label.is_string()) throw ParseError("POS map value for '" + pos + "' not a string");
        entries[pos] = label.get<std::string>();
      }
      return TaggerModel::PosChunk(ParsePosMap(entries));
    }
    case TaggerKind::kPerceptron:
      break;
  }
  PerceptronWeights weights;
  if (root.contains("weights")) {
    for (const auto& [key, value] : root["weights"].items()) {
      std::size_t tab = key.rfind('\t');
      std::optional<Label> label =
          tab == std::string::npos ? std::nullopt : ParseLabel(key.substr(tab + 1));
      if (!label || !value.is_number()) throw ParseError("bad weight entry '" + key + "'");
      weights[key.substr(0, tab)][static_cast<std::size_t>(*label)] = value.get<double>();
    }
  }
  return TaggerModel::Perceptron(std::move(weights));
}

}  // namespace opinex

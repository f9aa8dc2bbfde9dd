#include "opinex/relation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "opinex/error.hpp"
#include "opinex/rng.hpp"

namespace opinex {

namespace {

using json = nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string LengthBucket(std::size_t length) {
  return length >= 5 ? "5+" : std::to_string(length);
}

bool Contains(const std::vector<Span>& spans, const Span& span) {
  return std::find(spans.begin(), spans.end(), span) != spans.end();
}

std::vector<Span> SortedUnique(std::span<const Span> spans) {
  std::set<Span> unique(spans.begin(), spans.end());
  return {unique.begin(), unique.end()};
}

double Dot(const RelationModel& model, const FeatureVector& feats) {
  double z = model.bias;
  for (const std::string& f : feats) {
    auto it = model.weights.find(f);
    if (it != model.weights.end()) z += it->second;
  }
  return z;
}

double LogLoss(double p, bool label) {
  constexpr double kEps = 1e-15;
  p = std::clamp(p, kEps, 1.0 - kEps);
  return label ? -std::log(p) : -std::log(1.0 - p);
}

}  // namespace

std::string_view RelationKindName(RelationKind kind) {
  return kind == RelationKind::kAlwaysTrue ? "ALWAYS_TRUE" : "LOGISTIC";
}

RelationKind ParseRelationKind(std::string_view name) {
  if (name == "ALWAYS_TRUE") return RelationKind::kAlwaysTrue;
  if (name == "LOGISTIC") return RelationKind::kLogistic;
  throw InvalidArgument("unknown relation kind '" + std::string(name) + "'");
}

void Validate(const RelationModel& model) {
  if (!(model.threshold > 0.0 && model.threshold < 1.0)) {
    throw InvalidArgument("relation threshold must lie in (0,1)");
  }
  if (!std::isfinite(model.bias)) throw InvalidArgument("non-finite relation bias");
  for (const auto& [feature, w] : model.weights) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite weight for " + feature);
  }
}

std::vector<RelationInstance> GenerateInstances(const Sentence& sentence,
                                                std::span<const Span> entities,
                                                std::span<const Span> expressions,
                                                const std::vector<OpinionTuple>* gold) {
  std::vector<Span> ents = SortedUnique(entities);
  std::vector<Span> exps = SortedUnique(expressions);
  for (const Span& e : ents) {
    if (e.role == Role::kExpression) {
      throw InvalidArgument("sentence " + sentence.id + ": entity span has role EXPRESSION");
    }
    if (e.start >= e.end || e.end > sentence.size()) {
      throw InvalidArgument("sentence " + sentence.id + ": entity span out of range");
    }
  }
  for (const Span& x : exps) {
    if (x.role != Role::kExpression) {
      throw InvalidArgument("sentence " + sentence.id + ": expression span has role " +
                            std::string(RoleName(x.role)));
    }
    if (x.start >= x.end || x.end > sentence.size()) {
      throw InvalidArgument("sentence " + sentence.id + ": expression span out of range");
    }
  }

  std::vector<RelationInstance> out;
  out.reserve(ents.size() * exps.size());
  for (const Span& e : ents) {
    for (const Span& x : exps) {
      RelationInstance inst{sentence.id, e, x, std::nullopt};
      if (gold) {
        bool linked = std::any_of(gold->begin(), gold->end(), [&](const OpinionTuple& t) {
          const auto& side = e.role == Role::kHolder ? t.holders : t.targets;
          return Contains(side, e) && Contains(t.expressions, x);
        });
        inst.label = linked;
      }
      out.push_back(std::move(inst));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RelationInstance& a, const RelationInstance& b) {
                     if (a.entity.start != b.entity.start) {
                       return a.entity.start < b.entity.start;
                     }
                     return a.expression.start < b.expression.start;
                   });
  return out;
}

std::vector<RelationInstance> GoldInstances(const Sentence& sentence) {
  std::vector<Span> entities = DistinctSpans(sentence, Role::kHolder);
  std::vector<Span> targets = DistinctSpans(sentence, Role::kTarget);
  entities.insert(entities.end(), targets.begin(), targets.end());
  std::vector<Span> expressions = DistinctSpans(sentence, Role::kExpression);
  return GenerateInstances(sentence, entities, expressions, &sentence.opinions);
}

std::vector<Span> ExpressionContext(std::span<const RelationInstance> instances,
                                    std::string_view sentence_id) {
  std::set<Span> spans;
  for (const RelationInstance& inst : instances) {
    if (inst.sentence_id == sentence_id) spans.insert(inst.expression);
  }
  return {spans.begin(), spans.end()};
}

std::size_t SpanDistance(const Span& a, const Span& b) {
  if (a.end <= b.start) return b.start - a.end;
  if (b.end <= a.start) return a.start - b.end;
  return 0;
}

std::string DistanceBucket(std::size_t distance) {
  if (distance <= 2) return std::to_string(distance);
  if (distance <= 5) return "3-5";
  if (distance <= 10) return "6-10";
  return ">10";
}

FeatureVector Featurize(const Sentence& sentence, const RelationInstance& inst,
                        std::span<const Span> expression_context) {
  const Span& e = inst.entity;
  const Span& x = inst.expression;
  std::set<std::string> feats;
  feats.insert("dist=" + DistanceBucket(SpanDistance(e, x)));
  feats.insert(e.start < x.start ? "order=entity_first" : "order=expression_first");
  feats.insert("erole=" + std::string(RoleName(e.role)));
  feats.insert("elen=" + LengthBucket(e.length()));
  feats.insert("xlen=" + LengthBucket(x.length()));
  for (std::size_t i = e.start; i < e.end; ++i) {
    feats.insert("ew=" + Lower(sentence.tokens[i].text));
  }
  for (std::size_t i = x.start; i < x.end; ++i) {
    feats.insert("xw=" + Lower(sentence.tokens[i].text));
  }
  const std::size_t gap_begin = std::min(e.end, x.end);
  const std::size_t gap_end = std::max(e.start, x.start);
  for (std::size_t i = gap_begin, taken = 0; i < gap_end && taken < 10; ++i, ++taken) {
    feats.insert("bw=" + Lower(sentence.tokens[i].text));
  }
  std::size_t between = 0;
  for (const Span& other : expression_context) {
    if (other == x) continue;
    if (other.start >= gap_begin && other.end <= gap_end) ++between;
  }
  feats.insert("nexp_between=" + (between >= 3 ? std::string("3+") : std::to_string(between)));
  return {feats.begin(), feats.end()};
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double ez = std::exp(z);
  return ez / (1.0 + ez);
}

RelationModel TrainLogistic(std::span<const RelationInstance> instances,
                            const Dataset& sentences, const LogisticOptions& options,
                            std::vector<double>* epoch_loss) {
  if (options.epochs <= 0) throw InvalidArgument("epochs must be positive");
  if (!(options.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");

  std::unordered_map<std::string, const Sentence*> by_id;
  for (const Sentence& s : sentences.sentences) by_id[s.id] = &s;
  std::unordered_map<std::string, std::vector<Span>> contexts;
  {
    std::unordered_map<std::string, std::set<Span>> gathered;
    for (const RelationInstance& inst : instances) {
      gathered[inst.sentence_id].insert(inst.expression);
    }
    for (auto& [id, spans] : gathered) contexts[id].assign(spans.begin(), spans.end());
  }

  std::vector<FeatureVector> feats;
  std::vector<bool> labels;
  std::size_t positives = 0;
  for (const RelationInstance& inst : instances) {
    if (!inst.label) throw InvalidArgument("training instance without a label");
    auto it = by_id.find(inst.sentence_id);
    if (it == by_id.end()) {
      throw InvalidArgument("instance refers to unknown sentence " + inst.sentence_id);
    }
    feats.push_back(Featurize(*it->second, inst, contexts.at(inst.sentence_id)));
    labels.push_back(*inst.label);
    positives += *inst.label ? 1 : 0;
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgument("relation training needs both positive and negative instances");
  }

  double pos_weight = 1.0;
  double neg_weight = 1.0;
  if (options.balance_classes) {
    const auto n = static_cast<double>(labels.size());
    pos_weight = n / (2.0 * static_cast<double>(positives));
    neg_weight = n / (2.0 * static_cast<double>(negatives));
  }

  RelationModel model;
  model.kind = RelationKind::kLogistic;
  model.threshold = options.threshold;
  Validate(model);

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  if (epoch_loss) epoch_loss->clear();

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Shuffle(order, rng);
    for (std::size_t i : order) {
      const double p = Sigmoid(Dot(model, feats[i]));
      const double weight = labels[i] ? pos_weight : neg_weight;
      const double grad = weight * (p - (labels[i] ? 1.0 : 0.0));
      const double step = options.learning_rate * grad;
      for (const std::string& f : feats[i]) model.weights[f] -= step;
      model.bias -= step;
    }
    if (epoch_loss) {
      double total = 0.0;
      double mass = 0.0;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const double weight = labels[i] ? pos_weight : neg_weight;
        total += weight * LogLoss(Sigmoid(Dot(model, feats[i])), labels[i]);
        mass += weight;
      }
      epoch_loss->push_back(total / mass);
    }
  }
  Validate(model);
  return model;
}

RelationDecision Classify(const RelationModel& model, const Sentence& sentence,
                          const RelationInstance& inst,
                          std::span<const Span> expression_context) {
  if (model.kind == RelationKind::kAlwaysTrue) return {true, 1.0};
  const double score = Sigmoid(Dot(model, Featurize(sentence, inst, expression_context)));
  return {score > model.threshold, score};
}

std::vector<RelationDecision> ClassifyAll(const RelationModel& model,
                                          const Sentence& sentence,
                                          std::span<const RelationInstance> instances) {
  std::vector<Span> context = ExpressionContext(instances, sentence.id);
  std::vector<RelationDecision> out;
  out.reserve(instances.size());
  for (const RelationInstance& inst : instances) {
    out.push_back(Classify(model, sentence, inst, context));
  }
  return out;
}

std::string RelationToJson(const RelationModel& model) {
  json root;
  root["kind"] = std::string(RelationKindName(model.kind));
  root["threshold"] = model.threshold;
  root["bias"] = model.bias;
  root["weights"] = json::object();
  for (const auto& [feature, w] : model.weights) root["weights"][feature] = w;
  return root.dump(1) + "\n";
}

RelationModel RelationFromJson(std::string_view content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed relation model: ") + e.what());
  }
  if (!root.is_object() || !root.contains("kind") || !root["kind"].is_string()) {
    throw ParseError("relation model lacks a 'kind' string");
  }
  RelationModel model;
  model.kind = ParseRelationKind(root["kind"].get<std::string>());
  auto number = [&](const char* key, double fallback) {
    if (!root.contains(key)) return fallback;
    if (!root[key].is_number()) throw ParseError(std::string("'") + key + "' is not a number");
    return root[key].get<double>();
  };
  model.threshold = number("threshold", 0.5);
  model.bias = number("bias", 0.0);
  if (root.contains("weights")) {
    for (const auto& [feature, w] : root["weights"].items()) {
      if (!w.is_number()) throw ParseError("weight for '" + feature + "' is not a number");
      model.weights[feature] = w.get<double>();
    }
  }
  Validate(model);
  return model;
}

std::string InstancesToJsonl(std::span<const RelationInstance> instances,
                             std::span<const RelationDecision> decisions) {
  std::string out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const RelationInstance& inst = instances[i];
    json line;
    line["sentence_id"] = inst.sentence_id;
    line["entity"] = {inst.entity.start, inst.entity.end, std::string(RoleName(inst.entity.role))};
    line["expression"] = {inst.expression.start, inst.expression.end};
    line["label"] = inst.label ? json(*inst.label) : json(nullptr);
    line["score"] = i < decisions.size() ? json(decisions[i].score) : json(nullptr);
    out += line.dump() + "\n";
  }
  return out;
}

}  // namespace opinex

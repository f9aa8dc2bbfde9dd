#ifndef OPINEX_RELATION_HPP_
#define OPINEX_RELATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opinex/corpus.hpp"

namespace opinex {

// One candidate link between a holder/target span and an expression span.
struct RelationInstance {
  std::string sentence_id;
  Span entity;
  Span expression;
  std::optional<bool> label;

  bool operator==(const RelationInstance&) const = default;
};

enum class RelationKind { kAlwaysTrue, kLogistic };

std::string_view RelationKindName(RelationKind kind);
RelationKind ParseRelationKind(std::string_view name);

struct RelationModel {
  RelationKind kind = RelationKind::kAlwaysTrue;
  double threshold = 0.5;
  double bias = 0.0;
  std::map<std::string, double> weights;
};

// Throws InvalidArgument on non-finite weights or a threshold outside (0,1).
void Validate(const RelationModel& model);

// Sorted, duplicate-free feature strings (implicit value 1).
using FeatureVector = std::vector<std::string>;

// Cross product of entities x expressions ordered by (entity start,
// expression start). Inputs are de-duplicated. With `gold`, an instance is
// labeled true iff one gold tuple holds both spans exactly.
std::vector<RelationInstance> GenerateInstances(const Sentence& sentence,
                                                std::span<const Span> entities,
                                                std::span<const Span> expressions,
                                                const std::vector<OpinionTuple>* gold = nullptr);

// Instances over the sentence's own gold spans, labeled from its opinions.
std::vector<RelationInstance> GoldInstances(const Sentence& sentence);

// Distinct expression spans among the instances of one sentence. This is
// the candidate set the "other expressions between" feature counts against.
std::vector<Span> ExpressionContext(std::span<const RelationInstance> instances,
                                    std::string_view sentence_id);

// Features: distance bucket, linear order, entity role, both span lengths,
// lowercased words inside each span, up to ten words between the spans, and
// the number of other candidate expressions lying between them.
FeatureVector Featurize(const Sentence& sentence, const RelationInstance& inst,
                        std::span<const Span> expression_context);

// Token gap between two spans; 0 when adjacent or overlapping.
std::size_t SpanDistance(const Span& a, const Span& b);
std::string DistanceBucket(std::size_t distance);

struct LogisticOptions {
  int epochs = 20;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  // Weight each class by N / (2 * N_class). Off by default.
  bool balance_classes = false;
};

// Plain SGD on log-loss with a seeded shuffle per epoch. Needs at least one
// positive and one negative labeled instance. `epoch_loss`, when given,
// receives the mean training loss measured after each epoch.
RelationModel TrainLogistic(std::span<const RelationInstance> instances,
                            const Dataset& sentences, const LogisticOptions& options,
                            std::vector<double>* epoch_loss = nullptr);

struct RelationDecision {
  bool decision = false;
  double score = 0.0;
};

double Sigmoid(double z);

// Positive iff score > threshold.
RelationDecision Classify(const RelationModel& model, const Sentence& sentence,
                          const RelationInstance& inst,
                          std::span<const Span> expression_context);

// Classifies every instance, using the instances themselves as context.
std::vector<RelationDecision> ClassifyAll(const RelationModel& model,
                                          const Sentence& sentence,
                                          std::span<const RelationInstance> instances);

std::string RelationToJson(const RelationModel& model);
RelationModel RelationFromJson(std::string_view content);

// One JSON object per line: sentence_id, entity [s,e,role], expression
// [s,e], label, score. `decisions` may be empty.
std::string InstancesToJsonl(std::span<const RelationInstance> instances,
                             std::span<const RelationDecision> decisions);

}  // namespace opinex

#endif  // OPINEX_RELATION_HPP_

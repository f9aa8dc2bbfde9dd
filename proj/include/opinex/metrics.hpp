#ifndef OPINEX_METRICS_HPP_
#define OPINEX_METRICS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opinex/aggregator.hpp"
#include "opinex/corpus.hpp"
#include "opinex/relation.hpp"
#include "opinex/span_codec.hpp"

namespace opinex {

// Precision/recall/F1 with the counts behind them. Any zero denominator
// yields 0, never NaN.
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  static PRF FromCounts(std::size_t tp, std::size_t fp, std::size_t fn);
  bool operator==(const PRF&) const = default;
};

using RolePRF = std::map<Role, PRF>;

// Token-level scores per role. A token is a true positive for role r when
// both labels belong to r and, unless `collapse_bio`, agree on B/I.
RolePRF TokenF1(std::span<const TagSequence> gold, std::span<const TagSequence> pred,
                bool collapse_bio);

// Exact tuple matching: same holder set, same target set, same expression.
// Graphs are paired by sentence id; both sides must cover the same ids.
PRF GraphF1(std::span<const SentimentGraph> gold, std::span<const SentimentGraph> pred);

struct RelationPRF {
  PRF positive;
  PRF negative;
};

// Gold instances must carry labels; `pred[i]` is the decision for gold[i].
RelationPRF RelationScores(std::span<const RelationInstance> gold,
                           const std::vector<bool>& pred);

// Sentences are grouped by the number of distinct gold target spans.
// NO_TARGET (zero targets) completes the partition.
enum class Stratum { kAll, kSingleTarget, kMultiTarget, kNoTarget };

std::string_view StratumName(Stratum stratum);
Stratum ParseStratum(std::string_view name);
bool InStratum(const Sentence& sentence, Stratum stratum);

struct EvalReport {
  std::string dataset;
  Stratum stratum = Stratum::kAll;
  std::string averaging = "none";  // "macro" for averaged reports
  std::size_t sentences = 0;
  RolePRF token_exact;      // B/I must match
  RolePRF token_collapsed;  // B-X and I-X identified
  PRF graph;
  bool has_relation = false;
  RelationPRF relation;
};

// Predictions for a gold dataset, keyed by sentence id.
struct Predictions {
  std::map<std::string, TagSequence> tags;
  std::map<std::string, SentimentGraph> graphs;
  // Optional relation-stage view: gold-labeled instances and the decisions
  // made on them.
  std::vector<RelationInstance> relation_gold;
  std::vector<bool> relation_pred;
};

// Metrics over the sentences of `gold` that fall in `stratum`. Throws
// InvalidArgument when a sentence in the stratum has no prediction.
EvalReport StratifiedReport(const Dataset& gold, const Predictions& pred, Stratum stratum);

// Unweighted mean of every P/R/F1 across reports; counts are summed.
EvalReport MacroAverage(std::span<const EvalReport> reports);

// Sums counts across reports and recomputes P/R/F1 from them.
EvalReport MergeCounts(std::span<const EvalReport> reports);

std::string ReportToJson(std::span<const EvalReport> reports);
// Fixed-width table: Dataset, Stratum, Holder F1, Target F1, Expression F1,
// Graph F1, Rel+ F1, Rel- F1.
std::string ReportToText(std::span<const EvalReport> reports);

}  // namespace opinex

#endif  // OPINEX_METRICS_HPP_

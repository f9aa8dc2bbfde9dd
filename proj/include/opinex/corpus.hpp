#ifndef OPINEX_CORPUS_HPP_
#define OPINEX_CORPUS_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opinex {

// Opinion component role. Holder and "source" are the same thing.
enum class Role : std::uint8_t { kHolder = 0, kTarget = 1, kExpression = 2 };

inline constexpr std::array<Role, 3> kAllRoles = {Role::kHolder, Role::kTarget,
                                                  Role::kExpression};

// "HOLDER", "TARGET", "EXPRESSION".
std::string_view RoleName(Role role);

struct Token {
  std::string text;
  // Offsets count Unicode scalar values, not bytes. End is exclusive.
  std::int64_t char_start = 0;
  std::int64_t char_end = 0;
  std::optional<std::string> pos;

  bool operator==(const Token&) const = default;
};

// Half-open token range [start, end) carrying a role.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  Role role = Role::kTarget;

  std::size_t length() const { return end - start; }
  bool Overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }

  auto operator<=>(const Span&) const = default;
};

struct OpinionTuple {
  std::vector<Span> holders;
  std::vector<Span> targets;
  std::vector<Span> expressions;
  // Kept for round-trip fidelity only; nothing downstream reads it.
  std::optional<std::string> polarity;

  bool operator==(const OpinionTuple&) const = default;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<OpinionTuple> opinions;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Sentence> sentences;

  bool operator==(const Dataset&) const = default;
};

enum class DatasetFormat { kJson, kConll };

// Parses "json" / "conll" (case-insensitive).
DatasetFormat ParseDatasetFormat(std::string_view name);

// Distinct spans of one role across all opinions of a sentence, sorted.
std::vector<Span> DistinctSpans(const Sentence& sentence, Role role);

// Distinct spans of every role, sorted by position.
std::vector<Span> DistinctSpans(const Sentence& sentence);

// Number of roles with at least one span in the sentence (0..3).
int DistinctRoleCount(const Sentence& sentence);

// Throws ValidationError naming the sentence when any invariant fails.
void Validate(const Sentence& sentence);
void Validate(const Dataset& dataset);

// Number of Unicode scalar values in a UTF-8 string. Invalid bytes count as
// one each.
std::size_t CodePointCount(std::string_view utf8);

// ---------------------------------------------------------------------------
// Serialization.

Dataset LoadDataset(const std::string& path, DatasetFormat format);
Dataset ParseJsonDataset(std::string_view content);
std::string DatasetToJson(const Dataset& dataset);

// What to do with sentences whose spans of different roles collide when
// writing a format that cannot represent that (CoNLL).
enum class ConllOverlapHandling { kError, kDropSentence, kPriorityKeep };

struct SaveResult {
  // Sentences dropped or truncated to make the output representable.
  std::vector<std::string> affected_ids;
};

SaveResult SaveDataset(const Dataset& dataset, const std::string& path,
                       DatasetFormat format,
                       ConllOverlapHandling overlap = ConllOverlapHandling::kError);

// ---------------------------------------------------------------------------
// Distribution statistics.

struct RoleStats {
  std::size_t count = 0;      // distinct spans summed over sentences
  std::size_t max_count = 0;  // most spans in one sentence
  double avg_count = 0.0;     // count / total_sentence, rounded to 2 decimals
};

struct DistributionStats {
  std::string name;
  std::size_t total_sentence = 0;
  RoleStats source;  // holder
  RoleStats target;
  RoleStats expression;
  // Sentences keyed by number of distinct roles present, 0..3.
  std::map<int, std::size_t> label_group_counts;

  const RoleStats& For(Role role) const;
};

DistributionStats ComputeStats(const Dataset& dataset);

// Pools several datasets into one stats row (counts summed, maxima taken,
// averages recomputed over the pooled sentence total).
DistributionStats PoolStats(const std::vector<Dataset>& datasets,
                            std::string name = "pooled");

double RoundTo2(double value);

// Table with the columns total_sentence, source_count, source_max_count,
// source_avg_count, target_*, exp_*, followed by the label-group counts.
std::string StatsToText(const std::vector<DistributionStats>& rows);
std::string StatsToJson(const std::vector<DistributionStats>& rows);

// ---------------------------------------------------------------------------
// Cleaning and balancing.

enum class OverlapPolicy { kDropSentence, kPriorityKeep };

OverlapPolicy ParseOverlapPolicy(std::string_view name);
std::string_view OverlapPolicyName(OverlapPolicy policy);

struct FilterResult {
  Dataset dataset;
  std::vector<std::string> affected_ids;
};

// True when two spans of different roles share a token.
bool HasCrossRoleOverlap(const Sentence& sentence);

// kDropSentence removes sentences with cross-role collisions. kPriorityKeep
// trims the lower-priority span (EXPRESSION > TARGET > HOLDER) to its longest
// collision-free piece, dropping it when nothing is left.
FilterResult FilterOverlapping(const Dataset& dataset, OverlapPolicy policy);

// Duplicates sentences, grouped by DistinctRoleCount, until every non-empty
// group is as large as the largest one. Originals come first in their input
// order; copies follow with ids of the form "<id>#<k>".
Dataset Upsample(const Dataset& dataset, std::uint64_t seed);

}  // namespace opinex

#endif  // OPINEX_CORPUS_HPP_

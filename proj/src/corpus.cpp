#include "opinex/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "opinex/error.hpp"
#include "opinex/rng.hpp"

namespace opinex {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::vector<Span>& Field(const OpinionTuple& tuple, Role role) {
  switch (role) {
    case Role::kHolder:
      return tuple.holders;
    case Role::kTarget:
      return tuple.targets;
    case Role::kExpression:
      break;
  }
  return tuple.expressions;
}

std::vector<Span>& Field(OpinionTuple& tuple, Role role) {
  switch (role) {
    case Role::kHolder:
      return tuple.holders;
    case Role::kTarget:
      return tuple.targets;
    case Role::kExpression:
      break;
  }
  return tuple.expressions;
}

std::string SpanText(const Span& span) {
  return "[" + std::to_string(span.start) + "," + std::to_string(span.end) + ")";
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kHolder:
      return "HOLDER";
    case Role::kTarget:
      return "TARGET";
    case Role::kExpression:
      return "EXPRESSION";
  }
  return "?";
}

DatasetFormat ParseDatasetFormat(std::string_view name) {
  std::string lower = Lower(name);
  if (lower == "json") return DatasetFormat::kJson;
  if (lower == "conll") return DatasetFormat::kConll;
  throw InvalidArgument("unknown dataset format '" + std::string(name) + "'");
}

std::vector<Span> DistinctSpans(const Sentence& sentence, Role role) {
  std::set<Span> spans;
  for (const OpinionTuple& tuple : sentence.opinions) {
    for (const Span& span : Field(tuple, role)) spans.insert(span);
  }
  return {spans.begin(), spans.end()};
}

std::vector<Span> DistinctSpans(const Sentence& sentence) {
  std::set<Span> spans;
  for (const OpinionTuple& tuple : sentence.opinions) {
    for (Role role : kAllRoles) {
      for (const Span& span : Field(tuple, role)) spans.insert(span);
    }
  }
  return {spans.begin(), spans.end()};
}

int DistinctRoleCount(const Sentence& sentence) {
  int count = 0;
  for (Role role : kAllRoles) {
    bool present = std::any_of(
        sentence.opinions.begin(), sentence.opinions.end(),
        [role](const OpinionTuple& t) { return !Field(t, role).empty(); });
    count += present ? 1 : 0;
  }
  return count;
}

std::size_t CodePointCount(std::string_view utf8) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < utf8.size();) {
    auto byte = static_cast<unsigned char>(utf8[i]);
    std::size_t width = 1;
    if (byte >= 0xF0 && byte <= 0xF4) {
      width = 4;
    } else if (byte >= 0xE0) {
      width = 3;
    } else if (byte >= 0xC2 && byte < 0xE0) {
      width = 2;
    }
    bool ok = i + width <= utf8.size();
    for (std::size_t k = 1; ok && k < width; ++k) {
      ok = (static_cast<unsigned char>(utf8[i + k]) & 0xC0) == 0x80;
    }
    i += ok ? width : 1;
    ++count;
  }
  return count;
}

void Validate(const Sentence& sentence) {
  if (sentence.id.empty()) throw ValidationError("sentence with empty id");
  auto fail = [&](const std::string& what) {
    throw ValidationError("sentence " + sentence.id + ": " + what);
  };
  const auto text_length = static_cast<std::int64_t>(CodePointCount(sentence.text));
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& token = sentence.tokens[i];
    std::string where = "token " + std::to_string(i);
    if (token.char_start < 0) fail(where + " has negative start offset");
    if (token.char_start >= token.char_end) fail(where + " has start >= end");
    if (token.char_end > text_length) fail(where + " ends past the sentence text");
    if (i > 0 && token.char_start < sentence.tokens[i - 1].char_end) {
      fail(where + " overlaps or precedes the previous token");
    }
  }
  const std::size_t n = sentence.tokens.size();
  for (std::size_t t = 0; t < sentence.opinions.size(); ++t) {
    const OpinionTuple& tuple = sentence.opinions[t];
    std::string where = "opinion " + std::to_string(t);
    if (tuple.expressions.empty()) fail(where + " has no expression");
    for (Role role : kAllRoles) {
      for (const Span& span : Field(tuple, role)) {
        if (span.role != role) fail(where + " has a mis-filed span " + SpanText(span));
        if (span.start >= span.end || span.end > n) {
          fail(where + " " + std::string(RoleName(role)) + " span " + SpanText(span) +
               " out of range for " + std::to_string(n) + " tokens");
        }
      }
    }
  }
}

void Validate(const Dataset& dataset) {
  std::unordered_set<std::string> seen;
  for (const Sentence& sentence : dataset.sentences) {
    Validate(sentence);
    if (!seen.insert(sentence.id).second) {
      throw ValidationError("duplicate sentence id " + sentence.id);
    }
  }
}

// ---------------------------------------------------------------------------

double RoundTo2(double value) { return std::round(value * 100.0) / 100.0; }

const RoleStats& DistributionStats::For(Role role) const {
  switch (role) {
    case Role::kHolder:
      return source;
    case Role::kTarget:
      return target;
    case Role::kExpression:
      break;
  }
  return expression;
}

namespace {

RoleStats& MutableFor(DistributionStats& stats, Role role) {
  switch (role) {
    case Role::kHolder:
      return stats.source;
    case Role::kTarget:
      return stats.target;
    case Role::kExpression:
      break;
  }
  return stats.expression;
}

void Accumulate(const Sentence& sentence, DistributionStats& stats) {
  ++stats.total_sentence;
  for (Role role : kAllRoles) {
    RoleStats& rs = MutableFor(stats, role);
    std::size_t n = DistinctSpans(sentence, role).size();
    rs.count += n;
    rs.max_count = std::max(rs.max_count, n);
  }
  ++stats.label_group_counts[DistinctRoleCount(sentence)];
}

void Finish(DistributionStats& stats) {
  for (int k = 0; k <= 3; ++k) stats.label_group_counts.try_emplace(k, 0);
  for (Role role : kAllRoles) {
    RoleStats& rs = MutableFor(stats, role);
    rs.avg_count = stats.total_sentence == 0
                       ? 0.0
                       : RoundTo2(static_cast<double>(rs.count) /
                                  static_cast<double>(stats.total_sentence));
  }
}

}  // namespace

DistributionStats ComputeStats(const Dataset& dataset) {
  DistributionStats stats;
  stats.name = dataset.name;
  for (const Sentence& sentence : dataset.sentences) Accumulate(sentence, stats);
  Finish(stats);
  return stats;
}

DistributionStats PoolStats(const std::vector<Dataset>& datasets, std::string name) {
  DistributionStats stats;
  stats.name = std::move(name);
  for (const Dataset& dataset : datasets) {
    for (const Sentence& sentence : dataset.sentences) Accumulate(sentence, stats);
  }
  Finish(stats);
  return stats;
}

// ---------------------------------------------------------------------------

OverlapPolicy ParseOverlapPolicy(std::string_view name) {
  std::string lower = Lower(name);
  if (lower == "drop_sentence" || lower == "drop") return OverlapPolicy::kDropSentence;
  if (lower == "priority_keep" || lower == "priority") return OverlapPolicy::kPriorityKeep;
  throw InvalidArgument("unknown overlap policy '" + std::string(name) + "'");
}

std::string_view OverlapPolicyName(OverlapPolicy policy) {
  return policy == OverlapPolicy::kDropSentence ? "DROP_SENTENCE" : "PRIORITY_KEEP";
}

bool HasCrossRoleOverlap(const Sentence& sentence) {
  std::vector<Span> spans = DistinctSpans(sentence);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      if (spans[i].role != spans[j].role && spans[i].Overlaps(spans[j])) return true;
    }
  }
  return false;
}

namespace {

// Longest run of [span.start, span.end) not marked in `blocked`, leftmost on
// ties.
std::optional<Span> Trim(const Span& span, const std::vector<bool>& blocked) {
  std::optional<Span> best;
  std::size_t run_start = span.start;
  for (std::size_t i = span.start; i <= span.end; ++i) {
    if (i == span.end || blocked[i]) {
      if (i > run_start && (!best || i - run_start > best->length())) {
        best = Span{run_start, i, span.role};
      }
      run_start = i + 1;
    }
  }
  return best;
}

Sentence PriorityKeep(const Sentence& sentence) {
  Sentence out = sentence;
  std::vector<bool> blocked(sentence.size(), false);
  // Highest priority first; each role is trimmed against everything kept
  // from the roles above it.
  for (Role role : {Role::kExpression, Role::kTarget, Role::kHolder}) {
    std::map<Span, std::optional<Span>> trimmed;
    for (const Span& span : DistinctSpans(sentence, role)) {
      trimmed[span] = Trim(span, blocked);
    }
    for (const auto& [span, kept] : trimmed) {
      if (!kept) continue;
      for (std::size_t i = kept->start; i < kept->end; ++i) blocked[i] = true;
    }
    for (OpinionTuple& tuple : out.opinions) {
      std::vector<Span> kept_spans;
      for (const Span& span : Field(tuple, role)) {
        const std::optional<Span>& kept = trimmed.at(span);
        if (kept && std::find(kept_spans.begin(), kept_spans.end(), *kept) ==
                        kept_spans.end()) {
          kept_spans.push_back(*kept);
        }
      }
      Field(tuple, role) = std::move(kept_spans);
    }
  }
  return out;
}

}  // namespace

FilterResult FilterOverlapping(const Dataset& dataset, OverlapPolicy policy) {
  FilterResult result;
  result.dataset.name = dataset.name;
  for (const Sentence& sentence : dataset.sentences) {
    if (!HasCrossRoleOverlap(sentence)) {
      result.dataset.sentences.push_back(sentence);
      continue;
    }
    result.affected_ids.push_back(sentence.id);
    if (policy == OverlapPolicy::kPriorityKeep) {
      result.dataset.sentences.push_back(PriorityKeep(sentence));
    }
  }
  return result;
}

Dataset Upsample(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.sentences.empty()) {
    throw InvalidArgument("cannot up-sample an empty dataset");
  }
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.sentences.size(); ++i) {
    groups[DistinctRoleCount(dataset.sentences[i])].push_back(i);
  }
  std::size_t largest = 0;
  for (const auto& [key, members] : groups) largest = std::max(largest, members.size());

  Dataset out = dataset;
  std::unordered_set<std::string> ids;
  for (const Sentence& s : dataset.sentences) ids.insert(s.id);
  std::unordered_map<std::string, int> copies;

  Rng rng(seed);
  for (const auto& [key, members] : groups) {
    for (std::size_t have = members.size(); have < largest; ++have) {
      const Sentence& source = dataset.sentences[members[UniformIndex(rng, members.size())]];
      Sentence copy = source;
      int& k = copies[source.id];
      do {
        copy.id = source.id + "#" + std::to_string(++k);
      } while (ids.count(copy.id) > 0);
      ids.insert(copy.id);
      out.sentences.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace opinex

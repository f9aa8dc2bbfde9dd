#include "opinex/span_codec.hpp"

#include <algorithm>
#include <string>

#include "opinex/error.hpp"

namespace opinex {

namespace {

constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "O", "B-EXP", "B-HOLDER", "B-TARG", "I-EXP", "I-HOLDER", "I-TARG"};

}  // namespace

std::string_view LabelName(Label label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<Label> ParseLabel(std::string_view name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

bool IsBegin(Label label) {
  return label == Label::kBExp || label == Label::kBHolder ||
         label == Label::kBTarg;
}

bool IsInside(Label label) {
  return label == Label::kIExp || label == Label::kIHolder ||
         label == Label::kITarg;
}

Role LabelRole(Label label) {
  switch (label) {
    case Label::kBHolder:
    case Label::kIHolder:
      return Role::kHolder;
    case Label::kBTarg:
    case Label::kITarg:
      return Role::kTarget;
    case Label::kBExp:
    case Label::kIExp:
      return Role::kExpression;
    case Label::kO:
      break;
  }
  throw InvalidArgument("label O has no role");
}

Label BeginLabel(Role role) {
  switch (role) {
    case Role::kHolder:
      return Label::kBHolder;
    case Role::kTarget:
      return Label::kBTarg;
    case Role::kExpression:
      return Label::kBExp;
  }
  return Label::kO;
}

Label InsideLabel(Role role) {
  switch (role) {
    case Role::kHolder:
      return Label::kIHolder;
    case Role::kTarget:
      return Label::kITarg;
    case Role::kExpression:
      return Label::kIExp;
  }
  return Label::kO;
}

bool IsLegalTransition(std::optional<Label> prev, Label label) {
  if (!IsInside(label)) return true;
  if (!prev || IsOutside(*prev)) return false;
  return LabelRole(*prev) == LabelRole(label);
}

bool IsWellFormed(std::span<const Label> tags) {
  std::optional<Label> prev;
  for (Label label : tags) {
    if (!IsLegalTransition(prev, label)) return false;
    prev = label;
  }
  return true;
}

std::vector<Span> UnionSameRole(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    if (a.role != b.role) return a.role < b.role;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  });
  std::vector<Span> merged;
  for (const Span& span : spans) {
    if (!merged.empty() && merged.back().role == span.role &&
        span.start < merged.back().end) {
      merged.back().end = std::max(merged.back().end, span.end);
    } else {
      merged.push_back(span);
    }
  }
  std::sort(merged.begin(), merged.end());
  return merged;
}

TagSequence EncodeSpans(std::size_t length, std::span<const Span> spans) {
  TagSequence tags(length, Label::kO);
  std::vector<std::optional<Role>> owner(length);
  for (const Span& span : UnionSameRole({spans.begin(), spans.end()})) {
    if (span.end > length || span.start >= span.end) {
      throw EncodeError("span [" + std::to_string(span.start) + "," +
                        std::to_string(span.end) + ") outside sentence of " +
                        std::to_string(length) + " tokens");
    }
    for (std::size_t i = span.start; i < span.end; ++i) {
      if (owner[i] && *owner[i] != span.role) {
        throw EncodeError("token " + std::to_string(i) + " is both " +
                          std::string(RoleName(*owner[i])) + " and " +
                          std::string(RoleName(span.role)));
      }
      owner[i] = span.role;
      tags[i] = i == span.start ? BeginLabel(span.role) : InsideLabel(span.role);
    }
  }
  return tags;
}

TagSequence Encode(const Sentence& sentence) {
  std::vector<Span> spans = DistinctSpans(sentence);
  try {
    return EncodeSpans(sentence.size(), spans);
  } catch (const EncodeError& e) {
    throw EncodeError("sentence " + sentence.id + ": " + e.what());
  }
}

std::vector<Span> Decode(std::span<const Label> tags) {
  std::vector<Span> spans;
  std::optional<Span> open;
  auto close = [&] {
    if (open) spans.push_back(*open);
    open.reset();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    Label label = tags[i];
    if (IsOutside(label)) {
      close();
      continue;
    }
    Role role = LabelRole(label);
    if (IsInside(label) && open && open->role == role) {
      open->end = i + 1;
      continue;
    }
    // B-X, or an orphan I-X repaired into a new span.
    close();
    open = Span{i, i + 1, role};
  }
  close();
  return spans;
}

}  // namespace opinex

#ifndef OPINEX_SPAN_CODEC_HPP_
#define OPINEX_SPAN_CODEC_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "opinex/corpus.hpp"

namespace opinex {

// BIO label alphabet. Enumerator order is the tie-break order used by the
// taggers: O first, then the label strings alphabetically.
enum class Label : std::uint8_t {
  kO = 0,
  kBExp,
  kBHolder,
  kBTarg,
  kIExp,
  kIHolder,
  kITarg,
};

inline constexpr std::size_t kNumLabels = 7;

inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::kO,    Label::kBExp,    Label::kBHolder, Label::kBTarg,
    Label::kIExp, Label::kIHolder, Label::kITarg};

using TagSequence = std::vector<Label>;

std::string_view LabelName(Label label);
// Accepts exactly the seven alphabet strings.
std::optional<Label> ParseLabel(std::string_view name);

inline bool IsOutside(Label label) { return label == Label::kO; }
bool IsBegin(Label label);
bool IsInside(Label label);
// Role of a B-/I- label. Must not be called with O.
Role LabelRole(Label label);
Label BeginLabel(Role role);
Label InsideLabel(Role role);

// True if `label` may follow `prev` in a well-formed sequence. `prev` is
// nullopt at sentence start.
bool IsLegalTransition(std::optional<Label> prev, Label label);

bool IsWellFormed(std::span<const Label> tags);

// Same-role spans that share tokens are merged; adjacent spans stay apart.
std::vector<Span> UnionSameRole(std::vector<Span> spans);

// Labels a sentence from the union of its opinion spans. Throws EncodeError
// naming the token and both roles on a cross-role collision.
TagSequence Encode(const Sentence& sentence);
TagSequence EncodeSpans(std::size_t length, std::span<const Span> spans);

// Maximal B-X (I-X)* runs become spans. An I-X without a B-X/I-X of the same
// role right before it starts a new span. Never fails.
std::vector<Span> Decode(std::span<const Label> tags);

}  // namespace opinex

#endif  // OPINEX_SPAN_CODEC_HPP_

#ifndef OPINEX_CONLL_HPP_
#define OPINEX_CONLL_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/span_codec.hpp"

namespace opinex {

// One CoNLL row: `index  token  pos  bio_label`, tab separated. A pos of "_"
// means no tag.
struct ConllRow {
  std::string token;
  std::optional<std::string> pos;
  Label label = Label::kO;
};

struct ConllSentence {
  std::string id;  // from the "# sent_id = <id>" comment
  std::vector<ConllRow> rows;
};

// Throws ParseError with a 1-based line number on malformed input.
std::vector<ConllSentence> ParseConll(std::string_view content);
std::string WriteConll(const std::vector<ConllSentence>& sentences);

ConllSentence ToConll(const Sentence& sentence, const TagSequence& tags);

// Rebuilds a sentence from CoNLL rows. Text is the tokens joined by single
// spaces. Opinion grouping is not representable in CoNLL, so all decoded
// spans go into one opinion; a sentence without an expression span gets no
// opinion at all.
Sentence FromConll(const ConllSentence& conll);

}  // namespace opinex

#endif  // OPINEX_CONLL_HPP_

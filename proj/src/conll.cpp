#include "opinex/conll.hpp"

#include <charconv>
#include <sstream>

#include "opinex/error.hpp"

namespace opinex {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> SplitColumns(std::string_view line) {
  std::vector<std::string_view> cols;
  const bool tabs = line.find('\t') != std::string_view::npos;
  std::size_t i = 0;
  while (i <= line.size()) {
    if (!tabs) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i == line.size()) break;
    }
    std::size_t j = line.find(tabs ? '\t' : ' ', i);
    if (j == std::string_view::npos) j = line.size();
    cols.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return cols;
}

}  // namespace

std::vector<ConllSentence> ParseConll(std::string_view content) {
  std::vector<ConllSentence> sentences;
  std::optional<ConllSentence> current;
  std::size_t sentence_line = 0;
  auto flush = [&] {
    if (current) {
      if (current->rows.empty()) {
        throw ParseError("line " + std::to_string(sentence_line) + ": sentence " +
                         current->id + " has no tokens");
      }
      sentences.push_back(std::move(*current));
    }
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view raw = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    auto fail = [&](const std::string& what) {
      throw ParseError("line " + std::to_string(line_no) + ": " + what);
    };

    std::string_view line = raw;
    while (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      constexpr std::string_view kKey = "sent_id";
      if (body.substr(0, kKey.size()) == kKey) {
        body = Trim(body.substr(kKey.size()));
        if (body.empty() || body.front() != '=') fail("malformed sent_id comment");
        std::string_view id = Trim(body.substr(1));
        if (id.empty()) fail("empty sent_id");
        if (current && !current->rows.empty()) fail("sent_id inside a sentence");
        current = ConllSentence{std::string(id), {}};
        sentence_line = line_no;
      }
      continue;
    }
    if (!current) fail("token row before any '# sent_id' comment");

    std::vector<std::string_view> cols = SplitColumns(line);
    if (cols.size() != 4) {
      fail("expected 4 columns, found " + std::to_string(cols.size()));
    }
    std::size_t index = 0;
    auto [end, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), index);
    if (ec != std::errc() || end != cols[0].data() + cols[0].size()) {
      fail("bad token index '" + std::string(cols[0]) + "'");
    }
    if (index != current->rows.size() + 1) {
      fail("token index " + std::to_string(index) + " out of sequence");
    }
    if (cols[1].empty()) fail("empty token");
    std::optional<Label> label = ParseLabel(cols[3]);
    if (!label) fail("unknown label '" + std::string(cols[3]) + "'");
    ConllRow row;
    row.token = std::string(cols[1]);
    if (cols[2] != "_" && !cols[2].empty()) row.pos = std::string(cols[2]);
    row.label = *label;
    current->rows.push_back(std::move(row));
  }
  flush();
  return sentences;
}

std::string WriteConll(const std::vector<ConllSentence>& sentences) {
  std::ostringstream out;
  for (const ConllSentence& sentence : sentences) {
    out << "# sent_id = " << sentence.id << '\n';
    for (std::size_t i = 0; i < sentence.rows.size(); ++i) {
      const ConllRow& row = sentence.rows[i];
      out << (i + 1) << '\t' << row.token << '\t' << row.pos.value_or("_") << '\t'
          << LabelName(row.label) << '\n';
    }
    out << '\n';
  }
  return out.str();
}

ConllSentence ToConll(const Sentence& sentence, const TagSequence& tags) {
  if (tags.size() != sentence.size()) {
    throw InvalidArgument("sentence " + sentence.id + ": tag count " +
                          std::to_string(tags.size()) + " != token count " +
                          std::to_string(sentence.size()));
  }
  ConllSentence conll{sentence.id, {}};
  for (std::size_t i = 0; i < tags.size(); ++i) {
    conll.rows.push_back({sentence.tokens[i].text, sentence.tokens[i].pos, tags[i]});
  }
  return conll;
}

Sentence FromConll(const ConllSentence& conll) {
  Sentence sentence;
  sentence.id = conll.id;
  TagSequence tags;
  std::int64_t offset = 0;
  for (const ConllRow& row : conll.rows) {
    if (!sentence.text.empty()) {
      sentence.text += ' ';
      ++offset;
    }
    sentence.text += row.token;
    auto length = static_cast<std::int64_t>(CodePointCount(row.token));
    sentence.tokens.push_back({row.token, offset, offset + length, row.pos});
    offset += length;
    tags.push_back(row.label);
  }
  OpinionTuple tuple;
  for (const Span& span : Decode(tags)) {
    switch (span.role) {
      case Role::kHolder:
        tuple.holders.push_back(span);
        break;
      case Role::kTarget:
        tuple.targets.push_back(span);
        break;
      case Role::kExpression:
        tuple.expressions.push_back(span);
        break;
    }
  }
  if (!tuple.expressions.empty()) sentence.opinions.push_back(std::move(tuple));
  return sentence;
}

}  // namespace opinex

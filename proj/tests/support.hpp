#ifndef OPINEX_TESTS_SUPPORT_HPP_
#define OPINEX_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/rng.hpp"
#include "opinex/span_codec.hpp"

namespace opinex::testing {

// Sentence from whitespace-free words, offsets computed as if joined by one
// space. `pos` may be empty (no POS) or one tag per word.
inline Sentence MakeSentence(std::string id, const std::vector<std::string>& words,
                             const std::vector<std::string>& pos = {}) {
  Sentence s;
  s.id = std::move(id);
  std::int64_t offset = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) {
      s.text += ' ';
      ++offset;
    }
    s.text += words[i];
    auto len = static_cast<std::int64_t>(CodePointCount(words[i]));
    Token t{words[i], offset, offset + len, std::nullopt};
    if (!pos.empty()) t.pos = pos[i];
    s.tokens.push_back(std::move(t));
    offset += len;
  }
  return s;
}

inline Sentence Filler(std::string id, std::size_t n) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
  return MakeSentence(std::move(id), words);
}

inline Span H(std::size_t s, std::size_t e) { return {s, e, Role::kHolder}; }
inline Span T(std::size_t s, std::size_t e) { return {s, e, Role::kTarget}; }
inline Span E(std::size_t s, std::size_t e) { return {s, e, Role::kExpression}; }

inline OpinionTuple Tuple(std::vector<Span> holders, std::vector<Span> targets,
                          std::vector<Span> expressions) {
  return {std::move(holders), std::move(targets), std::move(expressions), std::nullopt};
}

// Random tag sequence over the full alphabet, legal or not.
inline TagSequence RandomTags(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kNumLabels) - 1);
  TagSequence tags(n);
  for (Label& l : tags) l = kAllLabels[static_cast<std::size_t>(pick(rng))];
  return tags;
}

// Non-overlapping random spans of random roles over `n` tokens. Spans may be
// adjacent, including same-role adjacency.
inline std::vector<Span> RandomDisjointSpans(std::size_t n, std::mt19937_64& rng) {
  std::vector<Span> spans;
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> role(0, 2);
  std::size_t i = 0;
  while (i < n) {
    if (coin(rng) != 0) {
      ++i;
      continue;
    }
    std::uniform_int_distribution<std::size_t> len(1, std::min<std::size_t>(3, n - i));
    std::size_t l = len(rng);
    spans.push_back({i, i + l, static_cast<Role>(role(rng))});
    i += l;
  }
  return spans;
}

inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("opinex_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace opinex::testing

#endif  // OPINEX_TESTS_SUPPORT_HPP_

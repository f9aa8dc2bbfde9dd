#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opinex/conll.hpp"
#include "opinex/corpus.hpp"
#include "opinex/error.hpp"
#include "opinex/span_codec.hpp"

namespace opinex {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out.flush()) throw IoError("write failed for " + path);
}

// Schema reader that reports failures as ParseError with a record path.
class Reader {
 public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(path_.empty() ? what : path_ + ": " + what);
  }

  Reader At(const std::string& key) const {
    return Reader(path_.empty() ? key : path_ + "." + key);
  }
  Reader At(std::size_t index) const {
    return Reader(path_ + "[" + std::to_string(index) + "]");
  }

  const json& Member(const json& object, const std::string& key) const {
    if (!object.is_object()) Fail("expected an object");
    auto it = object.find(key);
    if (it == object.end()) Fail("missing field '" + key + "'");
    return *it;
  }

  std::string String(const json& value) const {
    if (!value.is_string()) Fail("expected a string");
    return value.get<std::string>();
  }

  std::optional<std::string> OptionalString(const json& object, const std::string& key) const {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) return std::nullopt;
    return At(key).String(*it);
  }

  std::int64_t Integer(const json& value) const {
    if (!value.is_number_integer()) Fail("expected an integer");
    return value.get<std::int64_t>();
  }

  const json& Array(const json& value) const {
    if (!value.is_array()) Fail("expected an array");
    return value;
  }

 private:
  std::string path_;
};

std::vector<Span> ReadSpans(const Reader& r, const json& value, Role role) {
  std::vector<Span> spans;
  const json& array = r.Array(value);
  for (std::size_t i = 0; i < array.size(); ++i) {
    Reader ri = r.At(i);
    const json& pair = ri.Array(array[i]);
    if (pair.size() != 2) ri.Fail("expected a [start, end] pair");
    std::int64_t start = ri.At(0).Integer(pair[0]);
    std::int64_t end = ri.At(1).Integer(pair[1]);
    if (start < 0 || end < 0) ri.Fail("negative span index");
    spans.push_back({static_cast<std::size_t>(start), static_cast<std::size_t>(end), role});
  }
  return spans;
}

Sentence ReadSentence(const Reader& r, const json& value) {
  Sentence sentence;
  sentence.id = r.At("id").String(r.Member(value, "id"));
  sentence.text = r.At("text").String(r.Member(value, "text"));

  Reader rt = r.At("tokens");
  const json& tokens = rt.Array(r.Member(value, "tokens"));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Reader ri = rt.At(i);
    Token token;
    token.text = ri.At("text").String(ri.Member(tokens[i], "text"));
    token.char_start = ri.At("start").Integer(ri.Member(tokens[i], "start"));
    token.char_end = ri.At("end").Integer(ri.Member(tokens[i], "end"));
    token.pos = ri.OptionalString(tokens[i], "pos");
    sentence.tokens.push_back(std::move(token));
  }

  Reader ro = r.At("opinions");
  const json& opinions = ro.Array(r.Member(value, "opinions"));
  for (std::size_t i = 0; i < opinions.size(); ++i) {
    Reader ri = ro.At(i);
    OpinionTuple tuple;
    tuple.holders = ReadSpans(ri.At("holders"), ri.Member(opinions[i], "holders"), Role::kHolder);
    tuple.targets = ReadSpans(ri.At("targets"), ri.Member(opinions[i], "targets"), Role::kTarget);
    tuple.expressions = ReadSpans(ri.At("expressions"),
                                  ri.Member(opinions[i], "expressions"), Role::kExpression);
    tuple.polarity = ri.OptionalString(opinions[i], "polarity");
    sentence.opinions.push_back(std::move(tuple));
  }
  return sentence;
}

ordered_json SpansJson(const std::vector<Span>& spans) {
  ordered_json array = ordered_json::array();
  for (const Span& span : spans) array.push_back({span.start, span.end});
  return array;
}

ordered_json SentenceJson(const Sentence& sentence) {
  ordered_json out;
  out["id"] = sentence.id;
  out["text"] = sentence.text;
  out["tokens"] = ordered_json::array();
  for (const Token& token : sentence.tokens) {
    ordered_json t;
    t["text"] = token.text;
    t["start"] = token.char_start;
    t["end"] = token.char_end;
    t["pos"] = token.pos ? ordered_json(*token.pos) : ordered_json(nullptr);
    out["tokens"].push_back(std::move(t));
  }
  out["opinions"] = ordered_json::array();
  for (const OpinionTuple& tuple : sentence.opinions) {
    ordered_json o;
    o["holders"] = SpansJson(tuple.holders);
    o["targets"] = SpansJson(tuple.targets);
    o["expressions"] = SpansJson(tuple.expressions);
    o["polarity"] = tuple.polarity ? ordered_json(*tuple.polarity) : ordered_json(nullptr);
    out["opinions"].push_back(std::move(o));
  }
  return out;
}

}  // namespace

Dataset ParseJsonDataset(std::string_view content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON at byte ") + std::to_string(e.byte) +
                     ": " + e.what());
  }
  Reader r("");
  Dataset dataset;
  dataset.name = r.At("name").String(r.Member(root, "name"));
  Reader rs = r.At("sentences");
  const json& sentences = rs.Array(r.Member(root, "sentences"));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    dataset.sentences.push_back(ReadSentence(rs.At(i), sentences[i]));
  }
  Validate(dataset);
  return dataset;
}

std::string DatasetToJson(const Dataset& dataset) {
  ordered_json root;
  root["name"] = dataset.name;
  root["sentences"] = ordered_json::array();
  for (const Sentence& sentence : dataset.sentences) {
    root["sentences"].push_back(SentenceJson(sentence));
  }
  return root.dump(1) + "\n";
}

Dataset LoadDataset(const std::string& path, DatasetFormat format) {
  std::string content = ReadFile(path);
  if (format == DatasetFormat::kJson) return ParseJsonDataset(content);

  Dataset dataset;
  dataset.name = std::filesystem::path(path).stem().string();
  for (const ConllSentence& conll : ParseConll(content)) {
    dataset.sentences.push_back(FromConll(conll));
  }
  Validate(dataset);
  return dataset;
}

SaveResult SaveDataset(const Dataset& dataset, const std::string& path,
                       DatasetFormat format, ConllOverlapHandling overlap) {
  SaveResult result;
  if (format == DatasetFormat::kJson) {
    WriteFile(path, DatasetToJson(dataset));
    return result;
  }

  const Dataset* source = &dataset;
  FilterResult filtered;
  if (overlap != ConllOverlapHandling::kError) {
    filtered = FilterOverlapping(dataset, overlap == ConllOverlapHandling::kDropSentence
                                              ? OverlapPolicy::kDropSentence
                                              : OverlapPolicy::kPriorityKeep);
    result.affected_ids = filtered.affected_ids;
    source = &filtered.dataset;
  }
  std::vector<ConllSentence> rows;
  for (const Sentence& sentence : source->sentences) {
    rows.push_back(ToConll(sentence, Encode(sentence)));
  }
  WriteFile(path, WriteConll(rows));
  return result;
}

std::string StatsToText(const std::vector<DistributionStats>& rows) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof(line),
                "%-18s %14s %12s %16s %16s %12s %16s %16s %9s %13s %13s\n", "Dataset",
                "total_sentence", "source_count", "source_max_count", "source_avg_count",
                "target_count", "target_max_count", "target_avg_count", "exp_count",
                "exp_max_count", "exp_avg_count");
  out << line;
  for (const DistributionStats& s : rows) {
    std::snprintf(line, sizeof(line),
                  "%-18s %14zu %12zu %16zu %16.2f %12zu %16zu %16.2f %9zu %13zu %13.2f\n",
                  s.name.c_str(), s.total_sentence, s.source.count, s.source.max_count,
                  s.source.avg_count, s.target.count, s.target.max_count, s.target.avg_count,
                  s.expression.count, s.expression.max_count, s.expression.avg_count);
    out << line;
  }
  out << "\nSentences by number of distinct roles present (labels incl. O = roles + 1):\n";
  for (const DistributionStats& s : rows) {
    out << "  " << s.name << ":";
    for (const auto& [roles, count] : s.label_group_counts) {
      out << "  roles=" << roles << ": " << count;
    }
    out << "\n";
  }
  return out.str();
}

std::string StatsToJson(const std::vector<DistributionStats>& rows) {
  ordered_json root = ordered_json::array();
  for (const DistributionStats& s : rows) {
    ordered_json j;
    j["name"] = s.name;
    j["total_sentence"] = s.total_sentence;
    const std::pair<const char*, const RoleStats*> roles[] = {
        {"source", &s.source}, {"target", &s.target}, {"exp", &s.expression}};
    for (const auto& [prefix, rs] : roles) {
      j[std::string(prefix) + "_count"] = rs->count;
      j[std::string(prefix) + "_max_count"] = rs->max_count;
      j[std::string(prefix) + "_avg_count"] = rs->avg_count;
    }
    ordered_json groups;
    for (const auto& [roles, count] : s.label_group_counts) {
      groups[std::to_string(roles)] = count;
    }
    j["label_group_counts"] = std::move(groups);
    root.push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

}  // namespace opinex

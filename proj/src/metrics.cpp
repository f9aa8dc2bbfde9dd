#include "opinex/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "opinex/error.hpp"

namespace opinex {

namespace {

using TupleKey = std::tuple<std::vector<Span>, std::vector<Span>, std::vector<Span>>;

std::vector<Span> Canonical(const std::vector<Span>& spans) {
  std::set<Span> unique(spans.begin(), spans.end());
  return {unique.begin(), unique.end()};
}

TupleKey KeyOf(const OpinionTuple& tuple) {
  return {Canonical(tuple.holders), Canonical(tuple.targets), Canonical(tuple.expressions)};
}

std::map<std::string, const SentimentGraph*> IndexById(std::span<const SentimentGraph> graphs,
                                                       std::string_view side) {
  std::map<std::string, const SentimentGraph*> index;
  for (const SentimentGraph& g : graphs) {
    if (!index.emplace(g.sentence_id, &g).second) {
      throw InvalidArgument(std::string(side) + " graphs repeat sentence " + g.sentence_id);
    }
  }
  return index;
}

void AddCounts(PRF& into, const PRF& from) {
  into = PRF::FromCounts(into.tp + from.tp, into.fp + from.fp, into.fn + from.fn);
}

}  // namespace

PRF PRF::FromCounts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PRF prf;
  prf.tp = tp;
  prf.fp = fp;
  prf.fn = fn;
  const auto dtp = static_cast<double>(tp);
  prf.precision = tp + fp == 0 ? 0.0 : dtp / static_cast<double>(tp + fp);
  prf.recall = tp + fn == 0 ? 0.0 : dtp / static_cast<double>(tp + fn);
  const double sum = prf.precision + prf.recall;
  prf.f1 = sum > 0.0 ? 2.0 * prf.precision * prf.recall / sum : 0.0;
  return prf;
}

RolePRF TokenF1(std::span<const TagSequence> gold, std::span<const TagSequence> pred,
                bool collapse_bio) {
  if (gold.size() != pred.size()) {
    throw InvalidArgument("token_f1: " + std::to_string(gold.size()) + " gold vs " +
                          std::to_string(pred.size()) + " predicted sequences");
  }
  std::map<Role, std::array<std::size_t, 3>> counts;  // tp, predicted, gold
  for (Role role : kAllRoles) counts[role] = {0, 0, 0};
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw InvalidArgument("token_f1: length mismatch in sequence " + std::to_string(s));
    }
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const Label g = gold[s][i];
      const Label p = pred[s][i];
      if (!IsOutside(p)) ++counts[LabelRole(p)][1];
      if (!IsOutside(g)) ++counts[LabelRole(g)][2];
      if (IsOutside(g) || IsOutside(p) || LabelRole(g) != LabelRole(p)) continue;
      if (collapse_bio || g == p) ++counts[LabelRole(g)][0];
    }
  }
  RolePRF out;
  for (const auto& [role, c] : counts) {
    out[role] = PRF::FromCounts(c[0], c[1] - c[0], c[2] - c[0]);
  }
  return out;
}

PRF GraphF1(std::span<const SentimentGraph> gold, std::span<const SentimentGraph> pred) {
  auto gold_index = IndexById(gold, "gold");
  auto pred_index = IndexById(pred, "predicted");
  for (const auto& [id, g] : gold_index) {
    if (!pred_index.count(id)) throw InvalidArgument("no predicted graph for sentence " + id);
  }
  for (const auto& [id, p] : pred_index) {
    if (!gold_index.count(id)) throw InvalidArgument("no gold graph for sentence " + id);
  }
  std::size_t tp = 0;
  std::size_t n_gold = 0;
  std::size_t n_pred = 0;
  for (const auto& [id, g] : gold_index) {
    std::map<TupleKey, std::size_t> unmatched;
    for (const OpinionTuple& t : g->tuples) ++unmatched[KeyOf(t)];
    n_gold += g->tuples.size();
    const SentimentGraph* p = pred_index.at(id);
    n_pred += p->tuples.size();
    for (const OpinionTuple& t : p->tuples) {
      auto it = unmatched.find(KeyOf(t));
      if (it != unmatched.end() && it->second > 0) {
        --it->second;
        ++tp;
      }
    }
  }
  return PRF::FromCounts(tp, n_pred - tp, n_gold - tp);
}

RelationPRF RelationScores(std::span<const RelationInstance> gold,
                           const std::vector<bool>& pred) {
  if (gold.size() != pred.size()) {
    throw InvalidArgument("relation scores: " + std::to_string(gold.size()) + " instances vs " +
                          std::to_string(pred.size()) + " decisions");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].label) {
      throw InvalidArgument("relation scores: instance " + std::to_string(i) + " is unlabeled");
    }
    const bool g = *gold[i].label;
    const bool p = pred[i];
    if (g && p) ++tp;
    if (!g && p) ++fp;
    if (g && !p) ++fn;
    if (!g && !p) ++tn;
  }
  return {PRF::FromCounts(tp, fp, fn), PRF::FromCounts(tn, fn, fp)};
}

std::string_view StratumName(Stratum stratum) {
  switch (stratum) {
    case Stratum::kAll:
      return "ALL";
    case Stratum::kSingleTarget:
      return "SINGLE_TARGET";
    case Stratum::kMultiTarget:
      return "MULTI_TARGET";
    case Stratum::kNoTarget:
      return "NO_TARGET";
  }
  return "?";
}

Stratum ParseStratum(std::string_view name) {
  for (Stratum s : {Stratum::kAll, Stratum::kSingleTarget, Stratum::kMultiTarget,
                    Stratum::kNoTarget}) {
    if (StratumName(s) == name) return s;
  }
  throw InvalidArgument("unknown stratum '" + std::string(name) + "'");
}

bool InStratum(const Sentence& sentence, Stratum stratum) {
  const std::size_t targets = DistinctSpans(sentence, Role::kTarget).size();
  switch (stratum) {
    case Stratum::kAll:
      return true;
    case Stratum::kSingleTarget:
      return targets == 1;
    case Stratum::kMultiTarget:
      return targets >= 2;
    case Stratum::kNoTarget:
      return targets == 0;
  }
  return false;
}

EvalReport StratifiedReport(const Dataset& gold, const Predictions& pred, Stratum stratum) {
  EvalReport report;
  report.dataset = gold.name;
  report.stratum = stratum;

  std::set<std::string> members;
  std::vector<TagSequence> gold_tags;
  std::vector<TagSequence> pred_tags;
  std::vector<SentimentGraph> gold_graphs;
  std::vector<SentimentGraph> pred_graphs;
  for (const Sentence& sentence : gold.sentences) {
    if (!InStratum(sentence, stratum)) continue;
    members.insert(sentence.id);
    auto tags = pred.tags.find(sentence.id);
    auto graph = pred.graphs.find(sentence.id);
    if (tags == pred.tags.end() || graph == pred.graphs.end()) {
      throw InvalidArgument("no prediction for sentence " + sentence.id);
    }
    gold_tags.push_back(Encode(sentence));
    pred_tags.push_back(tags->second);
    gold_graphs.push_back(GoldGraph(sentence));
    pred_graphs.push_back(graph->second);
  }
  report.sentences = members.size();
  report.token_exact = TokenF1(gold_tags, pred_tags, false);
  report.token_collapsed = TokenF1(gold_tags, pred_tags, true);
  report.graph = GraphF1(gold_graphs, pred_graphs);

  if (!pred.relation_gold.empty() || !pred.relation_pred.empty()) {
    if (pred.relation_gold.size() != pred.relation_pred.size()) {
      throw InvalidArgument("relation instances and decisions differ in length");
    }
    std::vector<RelationInstance> inst;
    std::vector<bool> decisions;
    for (std::size_t i = 0; i < pred.relation_gold.size(); ++i) {
      if (!members.count(pred.relation_gold[i].sentence_id)) continue;
      inst.push_back(pred.relation_gold[i]);
      decisions.push_back(pred.relation_pred[i]);
    }
    report.relation = RelationScores(inst, decisions);
    report.has_relation = true;
  }
  return report;
}

namespace {

// Copies with every role present, so roles a report never set count as zero.
std::vector<EvalReport> WithAllRoles(std::span<const EvalReport> reports) {
  std::vector<EvalReport> out(reports.begin(), reports.end());
  for (EvalReport& r : out) {
    for (Role role : kAllRoles) {
      r.token_exact.try_emplace(role);
      r.token_collapsed.try_emplace(role);
    }
  }
  return out;
}

}  // namespace

EvalReport MacroAverage(std::span<const EvalReport> input) {
  if (input.empty()) throw InvalidArgument("macro average of zero reports");
  const std::vector<EvalReport> reports = WithAllRoles(input);
  EvalReport out = MergeCounts(reports);
  out.averaging = "macro";
  const auto n = static_cast<double>(reports.size());
  auto average = [&](auto get) {
    double p = 0.0, r = 0.0, f = 0.0;
    for (const EvalReport& report : reports) {
      const PRF& prf = get(report);
      p += prf.precision;
      r += prf.recall;
      f += prf.f1;
    }
    PRF& target = get(out);
    target.precision = p / n;
    target.recall = r / n;
    target.f1 = f / n;
  };
  for (Role role : kAllRoles) {
    average([role](auto& e) -> auto& { return e.token_exact.at(role); });
    average([role](auto& e) -> auto& { return e.token_collapsed.at(role); });
  }
  average([](auto& e) -> auto& { return e.graph; });
  if (out.has_relation) {
    average([](auto& e) -> auto& { return e.relation.positive; });
    average([](auto& e) -> auto& { return e.relation.negative; });
  }
  return out;
}

EvalReport MergeCounts(std::span<const EvalReport> input) {
  if (input.empty()) throw InvalidArgument("merge of zero reports");
  const std::vector<EvalReport> reports = WithAllRoles(input);
  EvalReport out;
  std::string names;
  for (const EvalReport& report : reports) {
    if (!names.empty()) names += "+";
    names += report.dataset;
  }
  out.dataset = names;
  out.stratum = reports.front().stratum;
  for (Role role : kAllRoles) {
    out.token_exact[role] = PRF{};
    out.token_collapsed[role] = PRF{};
  }
  out.has_relation = std::all_of(reports.begin(), reports.end(),
                                 [](const EvalReport& r) { return r.has_relation; });
  for (const EvalReport& report : reports) {
    out.sentences += report.sentences;
    if (report.stratum != out.stratum) out.stratum = Stratum::kAll;
    for (Role role : kAllRoles) {
      AddCounts(out.token_exact[role], report.token_exact.at(role));
      AddCounts(out.token_collapsed[role], report.token_collapsed.at(role));
    }
    AddCounts(out.graph, report.graph);
    if (out.has_relation) {
      AddCounts(out.relation.positive, report.relation.positive);
      AddCounts(out.relation.negative, report.relation.negative);
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json PrfJson(const PRF& prf) {
  nlohmann::ordered_json j;
  j["precision"] = prf.precision;
  j["recall"] = prf.recall;
  j["f1"] = prf.f1;
  j["tp"] = prf.tp;
  j["fp"] = prf.fp;
  j["fn"] = prf.fn;
  return j;
}

nlohmann::ordered_json RolesJson(const RolePRF& roles) {
  nlohmann::ordered_json j;
  for (Role role : kAllRoles) {
    auto it = roles.find(role);
    j[std::string(RoleName(role))] = PrfJson(it == roles.end() ? PRF{} : it->second);
  }
  return j;
}

std::string Fixed(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

}  // namespace

std::string ReportToJson(std::span<const EvalReport> reports) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const EvalReport& report : reports) {
    nlohmann::ordered_json j;
    j["dataset"] = report.dataset;
    j["stratum"] = std::string(StratumName(report.stratum));
    j["averaging"] = report.averaging;
    j["sentences"] = report.sentences;
    j["token_f1"] = RolesJson(report.token_exact);
    j["token_f1_collapsed"] = RolesJson(report.token_collapsed);
    j["graph_f1"] = PrfJson(report.graph);
    if (report.has_relation) {
      j["relation"]["positive"] = PrfJson(report.relation.positive);
      j["relation"]["negative"] = PrfJson(report.relation.negative);
    } else {
      j["relation"] = nullptr;
    }
    root.push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

std::string ReportToText(std::span<const EvalReport> reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %-14s %10s %10s %14s %10s %10s %10s\n", "Dataset",
                "Stratum", "Holder F1", "Target F1", "Expression F1", "Graph F1", "Rel+ F1",
                "Rel- F1");
  out << line;
  for (const EvalReport& r : reports) {
    std::string name = r.dataset + (r.averaging == "macro" ? " (macro)" : "");
    auto role = [&](Role x) { return Fixed(r.token_exact.count(x) ? r.token_exact.at(x).f1 : 0.0); };
    std::string pos = r.has_relation ? Fixed(r.relation.positive.f1) : "-";
    std::string neg = r.has_relation ? Fixed(r.relation.negative.f1) : "-";
    std::snprintf(line, sizeof(line), "%-24s %-14s %10s %10s %14s %10s %10s %10s\n",
                  name.c_str(), std::string(StratumName(r.stratum)).c_str(),
                  role(Role::kHolder).c_str(), role(Role::kTarget).c_str(),
                  role(Role::kExpression).c_str(), Fixed(r.graph.f1).c_str(), pos.c_str(),
                  neg.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace opinex

#include "opinex/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opinex/aggregator.hpp"
#include "opinex/conll.hpp"
#include "opinex/error.hpp"

namespace opinex {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

class ConfigReader {
 public:
  ConfigReader(const json& root, std::string base_dir)
      : root_(root), base_dir_(std::move(base_dir)) {}

  const json* Find(const std::string& dotted) const {
    const json* node = &root_;
    std::size_t from = 0;
    while (true) {
      std::size_t dot = dotted.find('.', from);
      std::string key = dotted.substr(from, dot == std::string::npos ? dotted.npos : dot - from);
      if (!node->is_object()) throw ConfigError(dotted, "parent is not an object");
      auto it = node->find(key);
      if (it == node->end() || it->is_null()) return nullptr;
      node = &*it;
      if (dot == std::string::npos) return node;
      from = dot + 1;
    }
  }

  std::string String(const std::string& field, std::string fallback) const {
    const json* v = Find(field);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(field, "expected a string");
    return v->get<std::string>();
  }

  std::string Path(const std::string& field, bool required) const {
    std::string value = String(field, "");
    if (value.empty()) {
      if (required) throw ConfigError(field, "required path missing");
      return value;
    }
    fs::path p(value);
    return p.is_absolute() ? value : (fs::path(base_dir_) / p).lexically_normal().string();
  }

  std::int64_t Integer(const std::string& field, std::int64_t fallback) const {
    const json* v = Find(field);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(field, "expected an integer");
    return v->get<std::int64_t>();
  }

  std::uint64_t Seed(const std::string& field, std::uint64_t fallback) const {
    std::int64_t value = Integer(field, static_cast<std::int64_t>(fallback));
    if (value < 0) throw ConfigError(field, "seed must be non-negative");
    return static_cast<std::uint64_t>(value);
  }

  int Positive(const std::string& field, int fallback) const {
    std::int64_t value = Integer(field, fallback);
    if (value <= 0) throw ConfigError(field, "must be a positive integer");
    return static_cast<int>(value);
  }

  double Number(const std::string& field, double fallback) const {
    const json* v = Find(field);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(field, "expected a number");
    return v->get<double>();
  }

  bool Bool(const std::string& field, bool fallback) const {
    const json* v = Find(field);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field, "expected true or false");
    return v->get<bool>();
  }

  template <typename F>
  auto Parse(const std::string& field, const std::string& fallback, F parse) const {
    try {
      return parse(String(field, fallback));
    } catch (const InvalidArgument& e) {
      throw ConfigError(field, e.what());
    }
  }

 private:
  const json& root_;
  std::string base_dir_;
};

template <typename F>
auto InStage(const std::string& stage, F&& body) {
  try {
    return body();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void CheckPaths(const PipelineConfig& config) {
  auto check = [](const std::string& field, const std::string& path) {
    if (!path.empty() && !fs::exists(path)) {
      throw ConfigError(field, "file not found: " + path);
    }
  };
  check("train", config.train_path);
  check("dev", config.dev_path);
  check("test", config.test_path);
  if (config.tagger.kind == TaggerKind::kExternal) {
    check("tagger.predictions", config.tagger.predictions_path);
  }
}

}  // namespace

PipelineConfig ParseConfig(std::string_view content, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected a JSON object");
  ConfigReader r(root, base_dir);

  PipelineConfig config;
  config.train_path = r.Path("train", true);
  config.dev_path = r.Path("dev", false);
  config.test_path = r.Path("test", true);
  config.format = r.Parse("format", "json", ParseDatasetFormat);
  config.overlap_policy = r.Parse("overlap_policy", "DROP_SENTENCE", ParseOverlapPolicy);
  config.upsample = r.Bool("upsample.enabled", false);
  config.upsample_seed = r.Seed("upsample.seed", 1);

  config.tagger.kind = r.Parse("tagger.kind", "PERCEPTRON", ParseTaggerKind);
  config.tagger.epochs = r.Positive("tagger.epochs", 10);
  config.tagger.seed = r.Seed("tagger.seed", 1);
  if (const json* map = r.Find("tagger.map")) {
    if (!map->is_object()) throw ConfigError("tagger.map", "expected an object");
    std::map<std::string, std::string> entries;
    for (const auto& [pos, label] : map->items()) {
      if (!label.is_string()) throw ConfigError("tagger.map." + pos, "expected a label string");
      entries[pos] = label.get<std::string>();
    }
    try {
      config.tagger.pos_map = ParsePosMap(entries);
    } catch (const InvalidArgument& e) {
      throw ConfigError("tagger.map", e.what());
    }
  }
  config.tagger.predictions_path =
      r.Path("tagger.predictions", config.tagger.kind == TaggerKind::kExternal);

  config.relation.kind = r.Parse("relation.kind", "LOGISTIC", ParseRelationKind);
  config.relation.epochs = r.Positive("relation.epochs", 20);
  config.relation.learning_rate = r.Number("relation.learning_rate", 0.1);
  if (!(config.relation.learning_rate > 0.0)) {
    throw ConfigError("relation.learning_rate", "must be positive");
  }
  config.relation.threshold = r.Number("relation.threshold", 0.5);
  if (!(config.relation.threshold > 0.0 && config.relation.threshold < 1.0)) {
    throw ConfigError("relation.threshold", "must lie in (0,1)");
  }
  config.relation.seed = r.Seed("relation.seed", 1);
  config.relation.balance_classes = r.Bool("relation.balance_classes", false);

  std::string out = r.Path("output_dir", false);
  config.output_dir = out.empty() ? (fs::path(base_dir) / "out").string() : out;
  return config;
}

PipelineConfig LoadConfig(const std::string& path) {
  std::string content = ReadFile(path);
  std::string base = fs::path(path).parent_path().string();
  return ParseConfig(content, base.empty() ? "." : base);
}

void OverrideSeeds(PipelineConfig& config, std::uint64_t seed) {
  config.upsample_seed = seed;
  config.tagger.seed = seed;
  config.relation.seed = seed;
}

Dataset PrepareTraining(const PipelineConfig& config) {
  Dataset train = LoadDataset(config.train_path, config.format);
  train = InStage("filter", [&] {
    return FilterOverlapping(train, config.overlap_policy).dataset;
  });
  if (config.upsample) {
    train = InStage("upsample", [&] { return Upsample(train, config.upsample_seed); });
  }
  return train;
}

TrainedModels TrainModels(const PipelineConfig& config, const std::string& output_dir) {
  CheckPaths(config);
  Dataset train = PrepareTraining(config);
  TrainedModels models;
  models.tagger = InStage("train-tagger", [&] {
    switch (config.tagger.kind) {
      case TaggerKind::kMostCommon:
        return TaggerModel::MostCommon();
      case TaggerKind::kPosChunk:
        return TaggerModel::PosChunk(config.tagger.pos_map.value_or(DefaultPosMap()));
      case TaggerKind::kExternal:
        return TaggerModel::External();
      case TaggerKind::kPerceptron:
        break;
    }
    return TrainPerceptron(train, config.tagger.epochs, config.tagger.seed);
  });
  models.relation = InStage("train-relation", [&] {
    if (config.relation.kind == RelationKind::kAlwaysTrue) return RelationModel{};
    std::vector<RelationInstance> instances;
    for (const Sentence& sentence : train.sentences) {
      std::vector<RelationInstance> inst = GoldInstances(sentence);
      instances.insert(instances.end(), inst.begin(), inst.end());
    }
    LogisticOptions options;
    options.epochs = config.relation.epochs;
    options.learning_rate = config.relation.learning_rate;
    options.seed = config.relation.seed;
    options.threshold = config.relation.threshold;
    options.balance_classes = config.relation.balance_classes;
    return TrainLogistic(instances, train, options);
  });
  InStage("write", [&] {
    fs::create_directories(output_dir);
    WriteFile(fs::path(output_dir) / "tagger.json", TaggerToJson(models.tagger));
    WriteFile(fs::path(output_dir) / "relation.json", RelationToJson(models.relation));
    return 0;
  });
  return models;
}

Predictions PredictDataset(const Dataset& dataset, const TrainedModels& models,
                           const std::map<std::string, TagSequence>* external_tags,
                           const std::string& output_dir, const std::string& prefix,
                           PredictionFiles* files) {
  Predictions pred;
  std::vector<ConllSentence> conll;
  std::vector<SentimentGraph> graphs;
  std::vector<RelationInstance> instances;
  std::vector<RelationDecision> decisions;
  InStage("predict", [&] {
    for (const Sentence& sentence : dataset.sentences) {
      TagSequence tags = external_tags ? external_tags->at(sentence.id)
                                       : Tag(models.tagger, sentence);
      StageOutput out = RunStages(sentence, tags, models.relation);
      conll.push_back(ToConll(sentence, out.tags));
      pred.tags[sentence.id] = out.tags;
      pred.graphs[sentence.id] = out.graph;
      graphs.push_back(std::move(out.graph));

      std::vector<RelationInstance> gold = GoldInstances(sentence);
      std::vector<RelationDecision> decided = ClassifyAll(models.relation, sentence, gold);
      for (std::size_t i = 0; i < gold.size(); ++i) {
        pred.relation_gold.push_back(gold[i]);
        pred.relation_pred.push_back(decided[i].decision);
      }
      instances.insert(instances.end(), gold.begin(), gold.end());
      decisions.insert(decisions.end(), decided.begin(), decided.end());
    }
    return 0;
  });
  InStage("write", [&] {
    fs::create_directories(output_dir);
    PredictionFiles paths;
    paths.conll = (fs::path(output_dir) / (prefix + ".conll")).string();
    paths.graphs = (fs::path(output_dir) / (prefix + ".graph.json")).string();
    paths.triples = (fs::path(output_dir) / (prefix + ".triples.jsonl")).string();
    WriteFile(paths.conll, WriteConll(conll));
    WriteFile(paths.graphs, DatasetToJson(WithGraphs(dataset, graphs)));
    WriteFile(paths.triples, GraphsToJsonl(graphs));
    WriteFile(fs::path(output_dir) / (prefix + ".relations.jsonl"),
              InstancesToJsonl(instances, decisions));
    if (files) *files = paths;
    return 0;
  });
  return pred;
}

std::vector<EvalReport> EvaluateAllStrata(const Dataset& gold, const Predictions& pred) {
  std::vector<EvalReport> reports;
  for (Stratum s : {Stratum::kAll, Stratum::kSingleTarget, Stratum::kMultiTarget,
                    Stratum::kNoTarget}) {
    reports.push_back(StratifiedReport(gold, pred, s));
  }
  return reports;
}

Predictions LoadPredictions(const Dataset& gold, const std::string& conll_path,
                            const std::string& graphs_path, const RelationModel* relation) {
  Predictions pred;
  pred.tags = LoadExternalPredictions(conll_path, gold);
  Dataset graphs = LoadDataset(graphs_path, DatasetFormat::kJson);
  for (SentimentGraph& g : GraphsFromDataset(graphs)) {
    std::string id = g.sentence_id;
    pred.graphs[id] = std::move(g);
  }
  if (relation) {
    for (const Sentence& sentence : gold.sentences) {
      std::vector<RelationInstance> inst = GoldInstances(sentence);
      std::vector<RelationDecision> decided = ClassifyAll(*relation, sentence, inst);
      for (std::size_t i = 0; i < inst.size(); ++i) {
        pred.relation_gold.push_back(inst[i]);
        pred.relation_pred.push_back(decided[i].decision);
      }
    }
  }
  return pred;
}

std::vector<EvalReport> RunPipeline(const PipelineConfig& config, const std::string& output_dir) {
  TrainedModels models = TrainModels(config, output_dir);

  std::vector<EvalReport> reports;
  auto run_split = [&](const std::string& path, const std::string& prefix) {
    Dataset gold = LoadDataset(path, config.format);
    gold = InStage("filter", [&] {
      return FilterOverlapping(gold, config.overlap_policy).dataset;
    });
    std::map<std::string, TagSequence> external;
    const bool use_external = config.tagger.kind == TaggerKind::kExternal;
    if (use_external) external = LoadExternalPredictions(config.tagger.predictions_path, gold);
    Predictions pred =
        PredictDataset(gold, models, use_external ? &external : nullptr, output_dir, prefix);
    std::vector<EvalReport> split =
        InStage("evaluate", [&] { return EvaluateAllStrata(gold, pred); });
    for (EvalReport& r : split) r.dataset = prefix + ":" + r.dataset;
    reports.insert(reports.end(), split.begin(), split.end());
  };
  if (!config.dev_path.empty() && config.tagger.kind != TaggerKind::kExternal) {
    run_split(config.dev_path, "dev");
  }
  run_split(config.test_path, "test");

  InStage("write", [&] {
    WriteFile(fs::path(output_dir) / "report.json", ReportToJson(reports));
    WriteFile(fs::path(output_dir) / "report.txt", ReportToText(reports));
    return 0;
  });
  return reports;
}

}  // namespace opinex

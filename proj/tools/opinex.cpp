// opinex: command-line front end for the opinion extraction pipeline.
//
//   opinex stats     <dataset>...            distribution table
//   opinex convert   <in> <out>              JSON <-> CoNLL
//   opinex train     --config cfg.json       fit tagger + relation model
//   opinex predict   --config cfg.json       or --tagger/--relation/--input
//   opinex evaluate  --gold g --tags t --graphs g
//   opinex pipeline  --config cfg.json       everything above, end to end
//   opinex synth     --output-dir dir        write the synthetic corpus
//
// Exit codes: 0 success, 1 stage failure, 2 input or config validation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "opinex/corpus.hpp"
#include "opinex/error.hpp"
#include "opinex/metrics.hpp"
#include "opinex/pipeline.hpp"
#include "opinex/synthetic.hpp"

namespace fs = std::filesystem;
using namespace opinex;

namespace {

constexpr int kExitStage = 1;
constexpr int kExitInput = 2;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  std::string output_dir;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

DatasetFormat FormatFor(const std::string& explicit_format, const std::string& path) {
  if (!explicit_format.empty()) return ParseDatasetFormat(explicit_format);
  std::string ext = fs::path(path).extension().string();
  return ext == ".conll" || ext == ".txt" ? DatasetFormat::kConll : DatasetFormat::kJson;
}

PipelineConfig ConfigFor(const std::string& path, const GlobalOptions& global) {
  PipelineConfig config = LoadConfig(path);
  if (global.seed) OverrideSeeds(config, *global.seed);
  if (!global.output_dir.empty()) config.output_dir = global.output_dir;
  return config;
}

void PrintReports(const std::vector<EvalReport>& reports, const GlobalOptions& global) {
  std::cout << (global.format == "json" ? ReportToJson(reports) : ReportToText(reports));
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
  std::vector<std::string> paths;
  std::string input_format;
};

int RunStats(const StatsArgs& args, const GlobalOptions& global) {
  std::vector<Dataset> datasets;
  std::vector<DistributionStats> rows;
  for (const std::string& path : args.paths) {
    datasets.push_back(LoadDataset(path, FormatFor(args.input_format, path)));
    rows.push_back(ComputeStats(datasets.back()));
  }
  if (datasets.size() > 1) rows.push_back(PoolStats(datasets));
  const std::string json = StatsToJson(rows);
  std::cout << (global.format == "json" ? json : StatsToText(rows));
  WriteFile(fs::path(global.output_dir.empty() ? "." : global.output_dir) / "stats.json", json);
  return 0;
}

// --- convert ---------------------------------------------------------------

struct ConvertArgs {
  std::string in;
  std::string out;
  std::string from;
  std::string to;
  std::string overlap = "drop_sentence";
};

int RunConvert(const ConvertArgs& args, const GlobalOptions&) {
  Dataset ds = LoadDataset(args.in, FormatFor(args.from, args.in));
  DatasetFormat to = FormatFor(args.to, args.out);
  ConllOverlapHandling handling = ConllOverlapHandling::kError;
  if (args.overlap != "error") {
    handling = ParseOverlapPolicy(args.overlap) == OverlapPolicy::kDropSentence
                   ? ConllOverlapHandling::kDropSentence
                   : ConllOverlapHandling::kPriorityKeep;
  }
  if (fs::path(args.out).has_parent_path()) {
    fs::create_directories(fs::path(args.out).parent_path());
  }
  SaveResult result = SaveDataset(ds, args.out, to, handling);
  for (const std::string& id : result.affected_ids) {
    std::cerr << (handling == ConllOverlapHandling::kDropSentence ? "dropped" : "trimmed")
              << " overlapping sentence " << id << "\n";
  }
  return 0;
}

// --- train / predict / evaluate / pipeline ----------------------------------

int RunTrain(const std::string& config_path, const GlobalOptions& global) {
  PipelineConfig config = ConfigFor(config_path, global);
  TrainModels(config, config.output_dir);
  std::cout << "models written to " << config.output_dir << "\n";
  return 0;
}

struct PredictArgs {
  std::string config;
  std::string tagger;
  std::string relation;
  std::string input;
  std::string external;
  std::string prefix = "predictions";
};

int RunPredict(const PredictArgs& args, const GlobalOptions& global) {
  TrainedModels models;
  Dataset ds;
  std::string out_dir = global.output_dir.empty() ? "." : global.output_dir;
  if (!args.config.empty()) {
    PipelineConfig config = ConfigFor(args.config, global);
    out_dir = config.output_dir;
    models.tagger = TaggerFromJson(ReadFile((fs::path(out_dir) / "tagger.json").string()));
    models.relation =
        RelationFromJson(ReadFile((fs::path(out_dir) / "relation.json").string()));
    ds = FilterOverlapping(LoadDataset(config.test_path, config.format), config.overlap_policy)
             .dataset;
  } else {
    if (args.input.empty() || args.relation.empty() ||
        (args.tagger.empty() && args.external.empty())) {
      throw ConfigError("predict", "need --config, or --input, --relation and --tagger/--external");
    }
    if (!args.tagger.empty()) models.tagger = TaggerFromJson(ReadFile(args.tagger));
    models.relation = RelationFromJson(ReadFile(args.relation));
    ds = LoadDataset(args.input, FormatFor("", args.input));
  }
  std::map<std::string, TagSequence> external;
  if (!args.external.empty()) external = LoadExternalPredictions(args.external, ds);
  PredictionFiles files;
  PredictDataset(ds, models, args.external.empty() ? nullptr : &external, out_dir, args.prefix,
                 &files);
  std::cout << files.conll << "\n" << files.graphs << "\n" << files.triples << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string gold;
  std::string tags;
  std::string graphs;
  std::string relation;
};

int RunEvaluate(const EvaluateArgs& args, const GlobalOptions& global) {
  Dataset gold = LoadDataset(args.gold, FormatFor("", args.gold));
  std::optional<RelationModel> relation;
  if (!args.relation.empty()) relation = RelationFromJson(ReadFile(args.relation));
  Predictions pred =
      LoadPredictions(gold, args.tags, args.graphs, relation ? &*relation : nullptr);
  std::vector<EvalReport> reports = EvaluateAllStrata(gold, pred);
  PrintReports(reports, global);
  if (!global.output_dir.empty()) {
    WriteFile(fs::path(global.output_dir) / "report.json", ReportToJson(reports));
  }
  return 0;
}

int RunPipelineCommand(const std::string& config_path, const GlobalOptions& global) {
  PipelineConfig config = ConfigFor(config_path, global);
  std::vector<EvalReport> reports = RunPipeline(config, config.output_dir);
  PrintReports(reports, global);
  return 0;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::size_t train = 600;
  std::size_t test = 200;
};

int RunSynth(const SynthArgs& args, const GlobalOptions& global) {
  const std::uint64_t seed = global.seed.value_or(7);
  fs::path dir = global.output_dir.empty() ? fs::path("data/synthetic") : fs::path(global.output_dir);
  fs::create_directories(dir);
  SaveDataset(SyntheticOpinionCorpus(args.train, seed, "synthetic-train"),
              (dir / "train.json").string(), DatasetFormat::kJson);
  SaveDataset(SyntheticOpinionCorpus(args.test, seed + 1, "synthetic-test"),
              (dir / "test.json").string(), DatasetFormat::kJson);
  std::cout << "wrote " << (dir / "train.json").string() << " and "
            << (dir / "test.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion extraction pipeline: tagging, relation recognition, aggregation"};
  app.require_subcommand(1);
  GlobalOptions global;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override every random seed");
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output-dir", global.output_dir, "Directory for written artifacts");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Distribution statistics of datasets");
  stats_cmd->add_option("datasets", stats.paths, "Dataset files")->required();
  stats_cmd->add_option("--input-format", stats.input_format, "json or conll");

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "Convert between JSON and CoNLL");
  convert_cmd->add_option("input", convert.in)->required();
  convert_cmd->add_option("output", convert.out)->required();
  convert_cmd->add_option("--from", convert.from, "json or conll (default: by extension)");
  convert_cmd->add_option("--to", convert.to, "json or conll (default: by extension)");
  convert_cmd->add_option("--overlap-policy", convert.overlap,
                          "drop_sentence, priority_keep or error");

  std::string train_config;
  auto* train_cmd = app.add_subcommand("train", "Train tagger and relation models");
  train_cmd->add_option("--config", train_config)->required();

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Run trained models over a dataset");
  predict_cmd->add_option("--config", predict.config);
  predict_cmd->add_option("--tagger", predict.tagger, "Tagger model JSON");
  predict_cmd->add_option("--relation", predict.relation, "Relation model JSON");
  predict_cmd->add_option("--input", predict.input, "Dataset to predict on");
  predict_cmd->add_option("--external", predict.external, "CoNLL tags from another model");
  predict_cmd->add_option("--prefix", predict.prefix, "Output file prefix");

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against gold");
  evaluate_cmd->add_option("--gold", evaluate.gold)->required();
  evaluate_cmd->add_option("--tags", evaluate.tags, "Predicted CoNLL")->required();
  evaluate_cmd->add_option("--graphs", evaluate.graphs, "Predicted graph JSON")->required();
  evaluate_cmd->add_option("--relation", evaluate.relation, "Relation model to score");

  std::string pipeline_config;
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Train, predict and evaluate");
  pipeline_cmd->add_option("--config", pipeline_config)->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic opinion corpus");
  synth_cmd->add_option("--train-size", synth.train);
  synth_cmd->add_option("--test-size", synth.test);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  if (seed_opt->count() > 0) global.seed = seed;

  try {
    if (*stats_cmd) return RunStats(stats, global);
    if (*convert_cmd) return RunConvert(convert, global);
    if (*train_cmd) return RunTrain(train_config, global);
    if (*predict_cmd) return RunPredict(predict, global);
    if (*evaluate_cmd) return RunEvaluate(evaluate, global);
    if (*pipeline_cmd) return RunPipelineCommand(pipeline_config, global);
    if (*synth_cmd) return RunSynth(synth, global);
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return 0;
}

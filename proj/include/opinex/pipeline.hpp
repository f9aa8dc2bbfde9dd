#ifndef OPINEX_PIPELINE_HPP_
#define OPINEX_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opinex/corpus.hpp"
#include "opinex/metrics.hpp"
#include "opinex/relation.hpp"
#include "opinex/taggers.hpp"

namespace opinex {

struct TaggerConfig {
  TaggerKind kind = TaggerKind::kPerceptron;
  int epochs = 10;
  std::uint64_t seed = 1;
  std::optional<PosMap> pos_map;    // POS_CHUNK only; default map otherwise
  std::string predictions_path;     // EXTERNAL only: CoNLL predictions for test
};

struct RelationConfig {
  RelationKind kind = RelationKind::kLogistic;
  int epochs = 20;
  double learning_rate = 0.1;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  bool balance_classes = false;
};

// Paths are resolved against the config file's directory when loaded.
struct PipelineConfig {
  std::string train_path;
  std::string dev_path;  // optional
  std::string test_path;
  DatasetFormat format = DatasetFormat::kJson;
  OverlapPolicy overlap_policy = OverlapPolicy::kDropSentence;
  bool upsample = false;
  std::uint64_t upsample_seed = 1;
  TaggerConfig tagger;
  RelationConfig relation;
  std::string output_dir = "out";
};

// Throws ConfigError naming the field on any invalid entry.
PipelineConfig ParseConfig(std::string_view content, const std::string& base_dir = ".");
PipelineConfig LoadConfig(const std::string& path);

// Replaces every seed in the config.
void OverrideSeeds(PipelineConfig& config, std::uint64_t seed);

struct TrainedModels {
  TaggerModel tagger = TaggerModel::MostCommon();
  RelationModel relation;
};

// Loads and cleans the training set (filter, optional up-sampling).
Dataset PrepareTraining(const PipelineConfig& config);

// Trains both stages and writes tagger.json and relation.json into
// `output_dir`.
TrainedModels TrainModels(const PipelineConfig& config, const std::string& output_dir);

struct PredictionFiles {
  std::string conll;    // stage-1 view
  std::string graphs;   // stage-3 view, dataset JSON with predicted opinions
  std::string triples;  // flat JSON-lines dump
};

// Runs the stages over `dataset` and writes the prediction files with the
// given prefix into `output_dir`. `external_tags`, when set, replaces the
// tagger.
Predictions PredictDataset(const Dataset& dataset, const TrainedModels& models,
                           const std::map<std::string, TagSequence>* external_tags,
                           const std::string& output_dir, const std::string& prefix,
                           PredictionFiles* files = nullptr);

// Reports for every stratum (ALL first).
std::vector<EvalReport> EvaluateAllStrata(const Dataset& gold, const Predictions& pred);

// Reads predictions written by PredictDataset back in. `relation`, when
// given, is scored on the gold relation instances of `gold`.
Predictions LoadPredictions(const Dataset& gold, const std::string& conll_path,
                            const std::string& graphs_path, const RelationModel* relation);

// filter -> (upsample) -> train tagger -> train relation -> predict test ->
// aggregate -> evaluate. Writes models, predictions, report.json and
// report.txt into `output_dir`. Throws StageError naming the failed stage.
std::vector<EvalReport> RunPipeline(const PipelineConfig& config, const std::string& output_dir);

}  // namespace opinex

#endif  // OPINEX_PIPELINE_HPP_

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include <json.hpp>

#include "conn/core/embeddings.hpp"
#include "conn/encoder/model.hpp"

namespace conn {

using FloatModel = ConnotationModel<float>;

struct AspectScores {
  std::map<Aspect, double> f1;
  double average = 0.0;  // unweighted mean over the aspects scored
};

/// Macro-F1 per aspect over the examples carrying it. Emotion scores the mean
/// over the eight emotions of the two-class macro-F1.
AspectScores score_predictions(const std::vector<const Example*>& examples, const std::vector<Prediction>& preds,
                               const std::vector<Aspect>& aspects);
AspectScores evaluate(const FloatModel& model, const std::vector<Example>& examples);

/// Aspects listed in the config, or every aspect labeled somewhere in `train`.
std::vector<Aspect> trainable_aspects(const ModelConfig& cfg, const std::vector<Example>& train);

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  AspectScores dev;
};

struct TrainResult {
  std::unique_ptr<FloatModel> model;  // restored to the best dev snapshot(s)
  std::vector<EpochLog> log;
  int best_epoch = 0;         // joint mode; separate mode: last improving epoch of any group
  double best_dev = 0.0;
  std::map<Aspect, int> best_epoch_by_aspect;  // separate mode
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Builds a model over `pretrained` (which must outlive it).
std::unique_ptr<FloatModel> make_model(const ModelConfig& cfg, const std::vector<Aspect>& aspects,
                                       const EmbeddingTable& pretrained);

TrainResult train_connotation(const ModelConfig& cfg, const Dataset& data, const EmbeddingTable& pretrained,
                              const EpochCallback& on_epoch = {});

/// Fits a handful of training examples without dropout and throws
/// std::runtime_error with diagnostics unless the loss goes down.
void overfit_smoke_check(const ModelConfig& cfg, const std::vector<Aspect>& aspects,
                         const std::vector<Example>& train, const EmbeddingTable& pretrained, int steps = 30);

/// Minibatches drawn within one POS group (noun/adjective vs verb), with the
/// two groups alternating.
std::vector<std::vector<const Example*>> pos_alternating_batches(const std::vector<const Example*>& examples,
                                                                 std::size_t batch, Rng& rng);

void save_model(const std::string& path, const FloatModel& model);
std::unique_ptr<FloatModel> load_model(const std::string& path, const EmbeddingTable& pretrained);

/// predictions.jsonl rows {word, pos, aspect, gold, pred} in label coding;
/// Emotion rows carry lists of emotion names.
std::vector<nlohmann::ordered_json> prediction_records(const FloatModel& model, const std::vector<Example>& examples);

}  // namespace conn

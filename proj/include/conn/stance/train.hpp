#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conn/encoder/baselines.hpp"
#include "conn/stance/model.hpp"

namespace conn {

using FloatStanceModel = StanceModel<float>;

struct StanceEpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_f1 = 0.0;
};

struct StanceTrainResult {
  std::unique_ptr<FloatStanceModel> model;  // best dev snapshot
  std::vector<StanceEpochLog> log;
  int best_epoch = 0;
  double best_dev = 0.0;
};

/// Builds a model bound to `words` (and `attention` for BiC+E); both must
/// outlive it.
std::unique_ptr<FloatStanceModel> make_stance_model(const StanceConfig& cfg, const EmbeddingTable& words,
                                                    const EmbeddingTable* attention);

std::vector<StanceInput> stance_inputs(const std::vector<StanceExample>& xs, const EmbeddingTable& words,
                                       const EmbeddingTable* attention, AttentionSource source);

/// Adam on minibatches, early stopping on dev macro-F1.
StanceTrainResult train_stance(const StanceConfig& cfg, const StanceSplits& splits, const EmbeddingTable& words,
                               const EmbeddingTable* attention);

std::vector<int> predict_stance(const FloatStanceModel& model, const std::vector<StanceInput>& xs);

void save_stance_model(const std::string& path, const FloatStanceModel& model);
std::unique_ptr<FloatStanceModel> load_stance_model(const std::string& path, const EmbeddingTable& words,
                                                    const EmbeddingTable* attention);

/// Logistic regression over [text bag of words; topic bag of words] counts,
/// with the vocabulary taken from the training examples.
class BowClassifier {
 public:
  void fit(const std::vector<StanceExample>& train);
  std::vector<int> predict(const std::vector<StanceExample>& xs) const;
  std::size_t text_vocabulary() const { return text_vocab_.size(); }
  std::size_t topic_vocabulary() const { return topic_vocab_.size(); }

 private:
  LogisticRegression::SparseRows features(const std::vector<StanceExample>& xs) const;
  std::map<std::string, Eigen::Index> text_vocab_;
  std::map<std::string, Eigen::Index> topic_vocab_;
  LogisticRegression lr_{kStanceClasses, 1e-4};
};

struct StanceEvaluation {
  double overall = 0.0;
  std::map<std::string, double> per_topic;
  std::optional<double> overall_p;          // against a second system
  std::map<std::string, double> topic_p;
};

std::vector<int> stance_labels(const std::vector<StanceExample>& xs);

/// Macro-F1 over {pro, con, neutral}, overall and per topic, with approximate
/// randomization p-values when `other` predictions are given.
StanceEvaluation evaluate_stance(const std::vector<int>& preds, const std::vector<int>& gold,
                                 const std::vector<std::string>& topics, const std::vector<int>* other = nullptr,
                                 int rounds = 10000, std::uint64_t seed = 13);

/// topic,f1[,p] rows plus an "overall" row.
std::string evaluation_csv(const StanceEvaluation& e);

}  // namespace conn

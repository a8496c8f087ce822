#include "conn/stance/train.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <spdlog/spdlog.h>

#include "conn/eval/metrics.hpp"
#include "conn/nn/adam.hpp"
#include "conn/nn/checkpoint.hpp"
#include "conn/core/text.hpp"

namespace conn {

namespace {

const std::vector<int> kStanceClassList = {0, 1, 2};

double stance_f1(std::span<const int> p, std::span<const int> g) { return macro_f1(p, g, kStanceClassList); }

}  // namespace

std::unique_ptr<FloatStanceModel> make_stance_model(const StanceConfig& cfg, const EmbeddingTable& words,
                                                    const EmbeddingTable* attention) {
  const bool attend = cfg.attention != AttentionSource::None;
  if (attend && !attention) throw ConfigError("attention variant needs an attention table");
  auto m = std::make_unique<FloatStanceModel>(cfg, words.dim(), attend ? attention->dim() : 0);
  m->set_word_vectors(words.matrix().data(), words.dim(), static_cast<nn::Index>(words.size()));
  if (attend) m->set_attention_vectors(attention->matrix().data(), attention->dim(), static_cast<nn::Index>(attention->size()));
  return m;
}

std::vector<StanceInput> stance_inputs(const std::vector<StanceExample>& xs, const EmbeddingTable& words,
                                       const EmbeddingTable* attention, AttentionSource source) {
  std::vector<StanceInput> out;
  out.reserve(xs.size());
  std::size_t no_targets = 0;
  for (const auto& ex : xs) {
    out.push_back(make_stance_input(ex, words, attention, source));
    no_targets += source != AttentionSource::None && out.back().attend.empty();
  }
  if (no_targets) spdlog::info("{} stance texts have no noun/adjective/verb token; their attention term is zero", no_targets);
  return out;
}

std::vector<int> predict_stance(const FloatStanceModel& model, const std::vector<StanceInput>& xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const auto& in : xs) out.push_back(model.predict(in));
  return out;
}

StanceTrainResult train_stance(const StanceConfig& cfg, const StanceSplits& splits, const EmbeddingTable& words,
                               const EmbeddingTable* attention) {
  cfg.validate();
  if (splits.train.empty()) throw std::invalid_argument("empty stance training split");
  StanceTrainResult res;
  res.model = make_stance_model(cfg, words, attention);
  auto& model = *res.model;
  Rng init(cfg.seed);
  model.init(init);

  const auto train = stance_inputs(splits.train, words, attention, cfg.attention);
  const auto dev = stance_inputs(splits.dev.empty() ? splits.train : splits.dev, words, attention, cfg.attention);
  if (splits.dev.empty()) spdlog::warn("empty stance dev split; early stopping monitors the training split");
  std::vector<int> dev_gold;
  for (const auto& in : dev) dev_gold.push_back(in.label);

  Rng drop_rng(Rng::derive(cfg.seed, 1));
  Rng order_rng(Rng::derive(cfg.seed, 2));
  nn::Adam<float> adam(model.parameters(), {.lr = cfg.lr});
  std::vector<nn::Matrix<float>> best;
  for (const auto* p : model.parameters()) best.push_back(p->value);
  res.best_dev = -1.0;
  int since = 0;
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    StanceEpochLog log;
    log.epoch = epoch;
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      nn::zero_grads(model.parameters());
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      for (std::size_t k = start; k < end; ++k)
        log.train_loss += static_cast<double>(model.loss(train[order[k]], true, cfg.dropout > 0 ? &drop_rng : nullptr));
      adam.step();
    }
    if (!std::isfinite(log.train_loss)) throw std::runtime_error("stance training diverged at epoch " + std::to_string(epoch));
    log.dev_f1 = stance_f1(predict_stance(model, dev), dev_gold);
    res.log.push_back(log);
    if (log.dev_f1 > res.best_dev) {
      res.best_dev = log.dev_f1;
      res.best_epoch = epoch;
      for (std::size_t i = 0; i < best.size(); ++i) best[i] = model.parameters()[i]->value;
      since = 0;
    } else if (++since >= cfg.patience) {
      break;
    }
  }
  for (std::size_t i = 0; i < best.size(); ++i) model.parameters()[i]->value = best[i];
  if (res.log.empty()) res.best_dev = stance_f1(predict_stance(model, dev), dev_gold);
  return res;
}

void save_stance_model(const std::string& path, const FloatStanceModel& model) {
  nn::save_checkpoint(path, nn::Checkpoint::from<float>(model.parameters(), model.config().to_json().dump()));
}

std::unique_ptr<FloatStanceModel> load_stance_model(const std::string& path, const EmbeddingTable& words,
                                                    const EmbeddingTable* attention) {
  const auto ckpt = nn::load_checkpoint(path);
  const auto cfg = StanceConfig::from_json(nlohmann::json::parse(ckpt.config_json));
  auto m = make_stance_model(cfg, words, attention);
  ckpt.apply<float>(m->parameters());
  return m;
}

LogisticRegression::SparseRows BowClassifier::features(const std::vector<StanceExample>& xs) const {
  const auto text_dim = static_cast<Eigen::Index>(text_vocab_.size());
  LogisticRegression::SparseRows m(static_cast<Eigen::Index>(xs.size()),
                                   text_dim + static_cast<Eigen::Index>(topic_vocab_.size()));
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    for (const auto& t : xs[i].tokens)
      if (const auto it = text_vocab_.find(t.surface); it != text_vocab_.end()) trip.emplace_back(row, it->second, 1.0);
    for (const auto& w : text::tokenize(xs[i].topic))
      if (const auto it = topic_vocab_.find(w); it != topic_vocab_.end())
        trip.emplace_back(row, text_dim + it->second, 1.0);
  }
  m.setFromTriplets(trip.begin(), trip.end());  // duplicates sum into counts
  return m;
}

void BowClassifier::fit(const std::vector<StanceExample>& train) {
  text_vocab_.clear();
  topic_vocab_.clear();
  for (const auto& ex : train) {
    for (const auto& t : ex.tokens) text_vocab_.emplace(t.surface, 0);
    for (const auto& w : text::tokenize(ex.topic)) topic_vocab_.emplace(w, 0);
  }
  if (text_vocab_.empty()) throw std::invalid_argument("BoWV: empty vocabulary");
  Eigen::Index k = 0;
  for (auto& [_, id] : text_vocab_) id = k++;
  k = 0;
  for (auto& [_, id] : topic_vocab_) id = k++;
  std::vector<int> y;
  for (const auto& ex : train) y.push_back(static_cast<int>(ex.label));
  lr_ = LogisticRegression(kStanceClasses, 1e-4);
  lr_.fit(features(train), y, std::vector<double>(kStanceClasses, 1.0));
}

std::vector<int> BowClassifier::predict(const std::vector<StanceExample>& xs) const {
  const Eigen::MatrixXd s = lr_.scores(features(xs));
  std::vector<int> out;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    s.row(i).maxCoeff(&best);
    out.push_back(static_cast<int>(best));
  }
  return out;
}

std::vector<int> stance_labels(const std::vector<StanceExample>& xs) {
  std::vector<int> out;
  for (const auto& ex : xs) out.push_back(static_cast<int>(ex.label));
  return out;
}

StanceEvaluation evaluate_stance(const std::vector<int>& preds, const std::vector<int>& gold,
                                 const std::vector<std::string>& topics, const std::vector<int>* other, int rounds,
                                 std::uint64_t seed) {
  if (preds.size() != gold.size() || topics.size() != gold.size() || (other && other->size() != gold.size()))
    throw std::invalid_argument("evaluate_stance: length mismatch");
  StanceEvaluation e;
  e.overall = stance_f1(preds, gold);
  const CorpusMetric metric = stance_f1;
  if (other) e.overall_p = approx_randomization_metric(preds, *other, gold, metric, rounds, seed);
  std::map<std::string, std::vector<std::size_t>> by_topic;
  for (std::size_t i = 0; i < topics.size(); ++i) by_topic[topics[i]].push_back(i);
  std::uint64_t k = 0;
  for (const auto& [topic, idx] : by_topic) {
    std::vector<int> p, g, o;
    for (auto i : idx) {
      p.push_back(preds[i]);
      g.push_back(gold[i]);
      if (other) o.push_back((*other)[i]);
    }
    e.per_topic[topic] = stance_f1(p, g);
    if (other) e.topic_p[topic] = approx_randomization_metric(p, o, g, metric, rounds, Rng::derive(seed, ++k));
  }
  return e;
}

std::string evaluation_csv(const StanceEvaluation& e) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  const bool with_p = e.overall_p.has_value();
  out << "topic,f1" << (with_p ? ",p" : "") << '\n';
  for (const auto& [topic, f1] : e.per_topic) {
    out << text::csv_field(topic) << ',' << f1;
    if (with_p) out << ',' << e.topic_p.at(topic);
    out << '\n';
  }
  out << "overall," << e.overall;
  if (with_p) out << ',' << *e.overall_p;
  out << '\n';
  return out.str();
}

}  // namespace conn

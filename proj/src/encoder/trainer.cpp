#include "conn/encoder/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "conn/eval/metrics.hpp"
#include "conn/nn/adam.hpp"
#include "conn/nn/checkpoint.hpp"

namespace conn {

namespace {

std::vector<int> class_range(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

double emotion_f1(const std::vector<EmotionSet>& gold, const std::vector<EmotionSet>& pred) {
  static const std::vector<int> binary = {0, 1};
  double sum = 0.0;
  std::vector<int> g(gold.size()), p(gold.size());
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      g[i] = gold[i][e];
      p[i] = pred[i][e];
    }
    sum += macro_f1(p, g, binary);
  }
  return sum / static_cast<double>(kEmotionCount);
}

std::vector<const Example*> usable(const std::vector<Example>& xs, const std::vector<Aspect>& aspects) {
  std::vector<const Example*> out;
  for (const auto& ex : xs)
    if (std::any_of(aspects.begin(), aspects.end(),
                    [&](Aspect a) { return applies_to(a, ex.input.pos) && ex.has(a); }))
      out.push_back(&ex);
  return out;
}

std::set<Aspect> batch_aspects(const std::vector<const Example*>& batch, const std::vector<Aspect>& aspects) {
  std::set<Aspect> out;
  for (const auto* ex : batch)
    for (const Aspect a : aspects)
      if (applies_to(a, ex->input.pos) && ex->has(a)) out.insert(a);
  return out;
}

using Snapshot = std::vector<nn::Matrix<float>>;

Snapshot take(const FloatModel& m, const std::vector<std::size_t>& idx) {
  Snapshot s;
  for (auto i : idx) s.push_back(m.parameters()[i]->value);
  return s;
}

void restore(const FloatModel& m, const std::vector<std::size_t>& idx, const Snapshot& s) {
  for (std::size_t k = 0; k < idx.size(); ++k) m.parameters()[idx[k]]->value = s[k];
}

}  // namespace

AspectScores score_predictions(const std::vector<const Example*>& examples, const std::vector<Prediction>& preds,
                               const std::vector<Aspect>& aspects) {
  AspectScores out;
  for (const Aspect a : aspects) {
    if (a == Aspect::Emotion) {
      std::vector<EmotionSet> g, p;
      for (std::size_t i = 0; i < examples.size(); ++i)
        if (examples[i]->emotions && preds[i].emotions) {
          g.push_back(*examples[i]->emotions);
          p.push_back(*preds[i].emotions);
        }
      if (!g.empty()) out.f1[a] = emotion_f1(g, p);
      continue;
    }
    std::vector<int> g, p;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const auto gi = examples[i]->classes.find(a);
      const auto pi = preds[i].classes.find(a);
      if (gi == examples[i]->classes.end() || pi == preds[i].classes.end()) continue;
      g.push_back(gi->second);
      p.push_back(pi->second);
    }
    if (!g.empty()) out.f1[a] = macro_f1(p, g, class_range(class_count(a)));
  }
  double sum = 0.0;
  for (const auto& [_, v] : out.f1) sum += v;
  out.average = out.f1.empty() ? 0.0 : sum / static_cast<double>(out.f1.size());
  return out;
}

AspectScores evaluate(const FloatModel& model, const std::vector<Example>& examples) {
  std::vector<const Example*> xs;
  std::vector<Prediction> preds;
  for (const auto& ex : examples) {
    xs.push_back(&ex);
    preds.push_back(model.predict(ex.input));
  }
  return score_predictions(xs, preds, model.aspects());
}

std::vector<Aspect> trainable_aspects(const ModelConfig& cfg, const std::vector<Example>& train) {
  if (!cfg.aspects.empty()) return cfg.aspects;
  std::vector<Aspect> out;
  for (const Aspect a : all_aspects())
    if (std::any_of(train.begin(), train.end(), [&](const Example& ex) { return ex.has(a); })) out.push_back(a);
  return out;
}

std::unique_ptr<FloatModel> make_model(const ModelConfig& cfg, const std::vector<Aspect>& aspects,
                                       const EmbeddingTable& pretrained) {
  auto m = std::make_unique<FloatModel>(cfg, aspects);
  m->set_embeddings(pretrained.matrix().data(), pretrained.dim(), static_cast<nn::Index>(pretrained.size()));
  return m;
}

std::vector<std::vector<const Example*>> pos_alternating_batches(const std::vector<const Example*>& examples,
                                                                 std::size_t batch, Rng& rng) {
  std::vector<const Example*> na, verbs;
  for (const auto* ex : examples) (ex->input.pos == Pos::Verb ? verbs : na).push_back(ex);
  rng.shuffle(na);
  rng.shuffle(verbs);
  auto chunk = [&](const std::vector<const Example*>& xs) {
    std::vector<std::vector<const Example*>> out;
    for (std::size_t i = 0; i < xs.size(); i += batch)
      out.emplace_back(xs.begin() + static_cast<std::ptrdiff_t>(i),
                       xs.begin() + static_cast<std::ptrdiff_t>(std::min(xs.size(), i + batch)));
    return out;
  };
  const auto a = chunk(na);
  const auto b = chunk(verbs);
  std::vector<std::vector<const Example*>> out;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    if (i < a.size()) out.push_back(a[i]);
    if (i < b.size()) out.push_back(b[i]);
  }
  return out;
}

void overfit_smoke_check(const ModelConfig& cfg, const std::vector<Aspect>& aspects,
                         const std::vector<Example>& train, const EmbeddingTable& pretrained, int steps) {
  if (cfg.lr <= 0.0) return;  // nothing can move
  ModelConfig c = cfg;
  c.dropout = 0.0;
  auto model = make_model(c, aspects, pretrained);
  Rng rng(Rng::derive(cfg.seed, 99));
  model->init(rng);
  auto xs = usable(train, aspects);
  if (xs.empty()) throw std::invalid_argument("no training example carries a trainable aspect");
  xs.resize(std::min<std::size_t>(xs.size(), 16));
  const auto mask = model->update_mask(batch_aspects(xs, aspects));
  nn::Adam<float> adam(model->parameters(), {.lr = std::max(cfg.lr, 1e-3)});
  const double initial = model->batch_loss(xs, false);
  double last = initial;
  for (int s = 0; s < steps; ++s) {
    nn::zero_grads(model->parameters());
    model->batch_loss(xs, true);
    adam.step(mask);
    last = model->batch_loss(xs, false);
  }
  if (!(last < initial)) {
    std::ostringstream msg;
    msg << "overfit smoke check failed: loss on " << xs.size() << " examples went from " << initial << " to " << last
        << " after " << steps << " full-batch steps";
    throw std::runtime_error(msg.str());
  }
}

TrainResult train_connotation(const ModelConfig& cfg, const Dataset& data, const EmbeddingTable& pretrained,
                              const EpochCallback& on_epoch) {
  cfg.validate();
  const auto aspects = trainable_aspects(cfg, data.train);
  if (aspects.empty()) throw std::invalid_argument("no trainable aspect in the training split");
  if (cfg.smoke_check && cfg.epochs > 0) overfit_smoke_check(cfg, aspects, data.train, pretrained);

  TrainResult res;
  res.model = make_model(cfg, aspects, pretrained);
  FloatModel& model = *res.model;
  Rng init_rng(cfg.seed);
  model.init(init_rng);
  for (const Aspect a : aspects) model.set_class_weights(a, class_weights(data.train, a));
  if (cfg.variant == Variant::CER) {
    const auto no_related = std::count_if(data.train.begin(), data.train.end(),
                                          [](const Example& ex) { return ex.input.related.empty(); });
    if (no_related) spdlog::info("{} training words have no related words; they are encoded as CE", no_related);
  }

  const auto train = usable(data.train, aspects);
  if (train.empty()) throw std::invalid_argument("no training example carries a trainable aspect");
  const std::vector<Example>& dev = data.dev.empty() ? data.train : data.dev;
  if (data.dev.empty()) spdlog::warn("empty dev split; early stopping monitors the training split");

  Rng drop_rng(Rng::derive(cfg.seed, 1));
  Rng batch_rng(Rng::derive(cfg.seed, 2));
  nn::Adam<float> adam(model.parameters(), {.lr = cfg.lr});

  const std::size_t groups = model.encoder_count();
  std::vector<bool> active(groups, true);
  std::vector<std::vector<std::size_t>> group_params(groups);
  std::vector<Snapshot> best(groups);
  std::vector<double> best_score(groups, -1.0);
  std::vector<int> since(groups, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    group_params[g] = model.group_parameters(g);
    best[g] = take(model, group_params[g]);
  }
  auto group_score = [&](std::size_t g, const AspectScores& s) -> std::optional<double> {
    if (cfg.mode == TrainMode::Joint) return s.average;
    const auto it = s.f1.find(aspects[g]);
    if (it == s.f1.end()) return std::nullopt;
    return it->second;
  };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch;
    for (const auto& batch : pos_alternating_batches(train, cfg.batch, batch_rng)) {
      const auto mask = model.update_mask(batch_aspects(batch, aspects), &active);
      if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) continue;
      nn::zero_grads(model.parameters());
      log.train_loss += static_cast<double>(model.batch_loss(batch, true, cfg.dropout > 0 ? &drop_rng : nullptr, &active));
      adam.step(mask);
    }
    if (!std::isfinite(log.train_loss)) throw std::runtime_error("training loss diverged at epoch " + std::to_string(epoch));
    log.dev = evaluate(model, dev);

    for (std::size_t g = 0; g < groups; ++g) {
      if (!active[g]) continue;
      const auto score = group_score(g, log.dev);
      if (!score) {
        best[g] = take(model, group_params[g]);
        continue;
      }
      if (*score > best_score[g]) {
        best_score[g] = *score;
        best[g] = take(model, group_params[g]);
        since[g] = 0;
        res.best_epoch = epoch;
        if (cfg.mode == TrainMode::Separate) res.best_epoch_by_aspect[aspects[g]] = epoch;
      } else if (++since[g] >= cfg.patience) {
        active[g] = false;
      }
    }
    res.log.push_back(log);
    if (on_epoch) on_epoch(log);
    if (std::none_of(active.begin(), active.end(), [](bool b) { return b; })) break;
  }
  for (std::size_t g = 0; g < groups; ++g) restore(model, group_params[g], best[g]);
  res.best_dev = evaluate(model, dev).average;
  return res;
}

void save_model(const std::string& path, const FloatModel& model) {
  ModelConfig c = model.config();
  c.aspects = model.aspects();
  nn::save_checkpoint(path, nn::Checkpoint::from<float>(model.parameters(), c.to_json().dump()));
}

std::unique_ptr<FloatModel> load_model(const std::string& path, const EmbeddingTable& pretrained) {
  const auto ckpt = nn::load_checkpoint(path);
  const ModelConfig cfg = ModelConfig::from_json(nlohmann::json::parse(ckpt.config_json));
  auto m = make_model(cfg, cfg.aspects, pretrained);
  ckpt.apply<float>(m->parameters());
  return m;
}

std::vector<nlohmann::ordered_json> prediction_records(const FloatModel& model, const std::vector<Example>& examples) {
  std::vector<nlohmann::ordered_json> out;
  auto names = [](const EmotionSet& s) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < kEmotionCount; ++i)
      if (s[i]) list.push_back(kEmotionNames[i]);
    return list;
  };
  for (const auto& ex : examples) {
    const Prediction p = model.predict(ex.input);
    for (const Aspect a : model.aspects()) {
      if (!applies_to(a, ex.input.pos) || !ex.has(a)) continue;
      nlohmann::ordered_json r;
      r["word"] = ex.input.word;
      r["pos"] = pos_name(ex.input.pos);
      r["aspect"] = aspect_name(a);
      if (a == Aspect::Emotion) {
        r["gold"] = names(*ex.emotions);
        r["pred"] = names(*p.emotions);
      } else {
        r["gold"] = class_to_label(a, ex.classes.at(a));
        r["pred"] = class_to_label(a, p.classes.at(a));
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace conn

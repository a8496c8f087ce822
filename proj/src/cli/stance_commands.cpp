#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "command.hpp"
#include "conn/core/error.hpp"
#include "conn/core/text.hpp"
#include "conn/encoder/trainer.hpp"
#include "conn/eval/space.hpp"
#include "conn/lexicon/lexicon_io.hpp"
#include "conn/nn/checkpoint.hpp"
#include "conn/stance/train.hpp"

namespace conn::cli {

namespace {

struct NeutralArgs {
  std::string input;
  std::size_t count = 0;
  double ratio = 0.5;
};

void neutrals_cmd(const NeutralArgs& a, Run& run) {
  const auto xs = read_stance_jsonl(run.input(a.input));
  std::size_t pro_con = 0;
  for (const auto& x : xs) pro_con += x.label != Stance::Neutral;
  const std::size_t count =
      a.count ? a.count : static_cast<std::size_t>(std::llround(a.ratio * static_cast<double>(pro_con)));
  const auto out = generate_neutrals(xs, count, run.seed);
  write_stance_jsonl(run.output("neutrals.jsonl").string(), out);
  const auto stats = topic_statistics(out);
  write_text(run.output("neutrals_stats.csv"), statistics_csv(stats));
  run.summary["source_examples"] = xs.size();
  run.summary["neutrals"] = out.size();
  run.table.header = {"topic", "neutrals"};
  for (const auto& [topic, s] : stats) run.table.add({topic, std::to_string(s.examples)});
}

// Inputs shared by training and evaluation.
struct StanceData {
  std::string data, embeddings, lexicon, conn_embeddings, conn_checkpoint, definitions, related;
};

void add_stance_data_options(CLI::App* app, StanceData& d) {
  app->add_option("--data", d.data, "stance.jsonl")->required()->check(CLI::ExistingFile);
  app->add_option("--embeddings", d.embeddings, "pretrained word vectors")->required()->check(CLI::ExistingFile);
  app->add_option("--lexicon", d.lexicon, "lexicon.jsonl, used to tag untagged text")->check(CLI::ExistingFile);
  app->add_option("--conn-embeddings", d.conn_embeddings, "connotation embeddings keyed word|pos")
      ->check(CLI::ExistingFile);
  app->add_option("--conn-checkpoint", d.conn_checkpoint, "connotation model; embeds words from --definitions")
      ->check(CLI::ExistingFile);
  app->add_option("--definitions", d.definitions, "definitions.tsv for --conn-checkpoint")->check(CLI::ExistingFile);
  app->add_option("--related", d.related, "related.tsv for --conn-checkpoint")->check(CLI::ExistingFile);
}

struct LoadedStance {
  std::vector<StanceExample> raw;
  EmbeddingTable words{1};
  std::map<WordPos, std::vector<Definition>> definitions;
  std::map<WordPos, std::vector<std::string>> related;
};

LoadedStance load_stance(const StanceData& d, Run& run) {
  LoadedStance s;
  FallbackTagger tagger;
  if (!d.lexicon.empty()) tagger = FallbackTagger(read_lexicon_jsonl(run.input(d.lexicon)));
  s.raw = read_stance_jsonl(run.input(d.data), tagger);
  if (!d.conn_checkpoint.empty()) {
    if (d.definitions.empty()) throw ConfigError("--conn-checkpoint needs --definitions");
    s.definitions = read_definitions(run.input(d.definitions));
    if (!d.related.empty()) s.related = read_related(run.input(d.related));
  }
  std::unordered_map<std::string, bool> vocab;
  for (const auto& x : s.raw) {
    for (const auto& t : text::tokenize(x.topic)) vocab[t] = true;
    for (const auto& t : x.tokens) vocab[text::lower(t.surface)] = true;
  }
  for (const auto& [key, defs] : s.definitions) {
    vocab[key.word] = true;
    for (const auto& def : defs)
      for (const auto& t : text::tokenize(def.text)) vocab[t] = true;
  }
  for (const auto& [key, ws] : s.related)
    for (const auto& w : ws) vocab[text::lower(w)] = true;
  s.words = read_embeddings(run.input(d.embeddings), &vocab);
  if (s.words.size() == 0) throw ConfigError("no pretrained vector matches the stance data");
  return s;
}

// Owns the attention table for the configured source (W reuses the word table).
struct AttentionTable {
  std::optional<EmbeddingTable> owned;
  const EmbeddingTable* table = nullptr;
};

AttentionTable attention_table(const StanceData& d, const LoadedStance& s, const StanceConfig& cfg,
                               const StanceSplits& splits, Run& run) {
  AttentionTable out;
  switch (cfg.attention) {
    case AttentionSource::None:
      break;
    case AttentionSource::W:
      out.table = &s.words;
      break;
    case AttentionSource::R:
      out.owned = random_attention_table({&splits.train, &splits.dev, &splits.test}, cfg.random_dim,
                                         Rng::derive(cfg.seed, 20));
      break;
    case AttentionSource::C:
      if (!d.conn_embeddings.empty()) {
        out.owned = read_embeddings(run.input(d.conn_embeddings));
      } else if (!d.conn_checkpoint.empty()) {
        const auto model = load_model(run.input(d.conn_checkpoint), s.words);
        std::set<std::string> wanted;
        for (const auto* part : {&splits.train, &splits.dev, &splits.test})
          for (const auto& x : *part)
            for (const auto& t : x.tokens)
              if (const auto pos = coarse_pos(t.tag)) wanted.insert(space_key_string({t.surface, *pos}));
        for (const auto& [key, defs] : s.definitions) {
          const std::string k = space_key_string({key.word, key.pos});
          if (!wanted.contains(k)) continue;
          const auto rel = s.related.find(key);
          const auto in = build_input(key, defs, rel == s.related.end() ? nullptr : &rel->second, s.words,
                                      model->config().limits);
          if (!in) continue;
          const Eigen::VectorXf v = model->embedding(*in);
          if (!out.owned) out.owned.emplace(v.size());
          out.owned->set(k, v);
        }
        if (!out.owned) throw std::runtime_error("no stance word has a connotation embedding");
      } else {
        throw ConfigError("attention c needs --conn-embeddings or --conn-checkpoint");
      }
      break;
  }
  if (out.owned) out.table = &*out.owned;
  return out;
}

std::string predictions_jsonl(const std::vector<StanceExample>& xs, const std::vector<int>& preds) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    nlohmann::ordered_json j;
    j["topic"] = xs[i].topic;
    j["author"] = xs[i].author;
    j["gold"] = stance_name(xs[i].label);
    j["pred"] = stance_name(static_cast<Stance>(preds[i]));
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<std::string> topics_of(const std::vector<StanceExample>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x.topic);
  return out;
}

void add_evaluation(Run& run, const std::string& name, const StanceEvaluation& e) {
  auto& j = run.summary[name];
  j["overall"] = e.overall;
  if (e.overall_p) j["overall_p"] = *e.overall_p;
  for (const auto& [topic, f1] : e.per_topic) j["topics"][topic] = f1;
}

void evaluation_rows(Table& t, const std::string& system, const StanceEvaluation& e) {
  for (const auto& [topic, f1] : e.per_topic) {
    const auto p = e.topic_p.find(topic);
    t.add({system, topic, fmt_double(f1, 4), p == e.topic_p.end() ? "" : fmt_double(p->second, 4)});
  }
  t.add({system, "overall", fmt_double(e.overall, 4), e.overall_p ? fmt_double(*e.overall_p, 4) : ""});
}

struct TrainStanceArgs {
  StanceData data;
  std::string scenario = "all", attention = "none", sweep;
  std::size_t cap_train = 2000, cap_eval = 600, batch = 64;
  nn::Index hidden = 60, random_dim = 300;
  int epochs = 70, patience = 10;
  double lr = 0.001, dropout = 0.5, neutral_ratio = 0.5;
  bool bowv = false;
};

void train_stance_cmd(const TrainStanceArgs& a, Run& run) {
  StanceConfig cfg;
  cfg.hidden = a.hidden;
  cfg.dropout = a.dropout;
  cfg.epochs = a.epochs;
  cfg.patience = a.patience;
  cfg.lr = a.lr;
  cfg.batch = a.batch;
  cfg.scenario = *parse_scenario(a.scenario);
  cfg.caps = {a.cap_train, a.cap_eval};
  cfg.attention = *parse_attention(a.attention);
  cfg.random_dim = a.random_dim;
  cfg.neutral_ratio = a.neutral_ratio;
  cfg.seed = run.seed;
  cfg.validate();

  const auto s = load_stance(a.data, run);
  const auto splits = prepare_splits(s.raw, cfg.seed, cfg.neutral_ratio, cfg.scenario, cfg.caps);
  if (splits.test.empty()) throw std::runtime_error("the stance test split is empty");
  write_text(run.output("stats_train.csv"), statistics_csv(topic_statistics(splits.train)));
  write_text(run.output("stats_dev.csv"), statistics_csv(topic_statistics(splits.dev)));
  write_text(run.output("stats_test.csv"), statistics_csv(topic_statistics(splits.test)));

  const auto att = attention_table(a.data, s, cfg, splits, run);
  const auto res = train_stance(cfg, splits, s.words, att.table);
  save_stance_model(run.output("stance.ckpt").string(), *res.model);

  std::ostringstream epochs;
  epochs << "epoch,train_loss,dev_f1\n";
  for (const auto& e : res.log) epochs << e.epoch << "," << fmt_double(e.train_loss, 6) << "," << fmt_double(e.dev_f1, 6) << "\n";
  write_text(run.output("epochs.csv"), epochs.str());

  const auto preds = predict_stance(*res.model, stance_inputs(splits.test, s.words, att.table, cfg.attention));
  const auto gold = stance_labels(splits.test);
  const auto topics = topics_of(splits.test);
  write_text(run.output("predictions.jsonl"), predictions_jsonl(splits.test, preds));
  const auto eval = evaluate_stance(preds, gold, topics);
  write_text(run.output("results.csv"), evaluation_csv(eval));

  const std::string system = cfg.attention == AttentionSource::None ? "BiC" : "BiC+" + std::string(1, static_cast<char>(std::toupper(attention_name(cfg.attention)[0])));
  run.summary["system"] = system;
  run.summary["examples"] = {{"train", splits.train.size()}, {"dev", splits.dev.size()}, {"test", splits.test.size()}};
  run.summary["best_epoch"] = res.best_epoch;
  run.summary["best_dev"] = res.best_dev;
  add_evaluation(run, "test", eval);
  run.table.header = {"system", "topic", "F1", "p"};
  evaluation_rows(run.table, system, eval);

  if (a.bowv) {
    BowClassifier bow;
    bow.fit(splits.train);
    const auto bp = bow.predict(splits.test);
    const auto be = evaluate_stance(bp, gold, topics);
    write_text(run.output("predictions_bowv.jsonl"), predictions_jsonl(splits.test, bp));
    write_text(run.output("results_bowv.csv"), evaluation_csv(be));
    add_evaluation(run, "bowv", be);
    evaluation_rows(run.table, "BoWV", be);
  }

  if (!a.sweep.empty()) {
    // Test F1 against the amount of training data; each fraction keeps a
    // prefix of one seeded shuffle, so larger fractions contain smaller ones.
    std::vector<std::size_t> order(splits.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(Rng::derive(cfg.seed, 30));
    rng.shuffle(order);
    std::ostringstream csv;
    csv << "fraction,train_examples,test_f1\n";
    for (const auto& tok : text::split(a.sweep, ',')) {
      double f = 0;
      try {
        f = text::parse_double(text::trim(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad sweep fraction '" + tok + "'");
      }
      if (!(f > 0 && f <= 1)) throw ConfigError("sweep fractions must lie in (0, 1]");
      StanceSplits sub = splits;
      sub.train.clear();
      const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(f * static_cast<double>(order.size()))));
      std::vector<std::size_t> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
      std::sort(keep.begin(), keep.end());
      for (const auto i : keep) sub.train.push_back(splits.train[i]);
      const auto r = train_stance(cfg, sub, s.words, att.table);
      const auto sp = predict_stance(*r.model, stance_inputs(splits.test, s.words, att.table, cfg.attention));
      const double f1 = evaluate_stance(sp, gold, topics).overall;
      csv << fmt_double(f, 4) << "," << n << "," << fmt_double(f1, 6) << "\n";
      run.summary["sweep"].push_back({{"fraction", f}, {"train_examples", n}, {"test_f1", f1}});
    }
    write_text(run.output("sweep.csv"), csv.str());
  }
}

struct EvalStanceArgs {
  StanceData data;
  std::string checkpoint, compare, split = "test";
  bool compare_bowv = false;
  int rounds = 10000;
};

std::vector<int> model_predictions(const StanceData& d, const LoadedStance& s, const std::string& ckpt_path,
                                   const StanceSplits& splits, const std::vector<StanceExample>& part, Run& run) {
  const auto ckpt = nn::load_checkpoint(run.input(ckpt_path));
  const auto cfg = StanceConfig::from_json(nlohmann::json::parse(ckpt.config_json));
  const auto att = attention_table(d, s, cfg, splits, run);
  const auto model = load_stance_model(ckpt_path, s.words, att.table);
  return predict_stance(*model, stance_inputs(part, s.words, att.table, cfg.attention));
}

void eval_stance_cmd(const EvalStanceArgs& a, Run& run) {
  if (!a.compare.empty() && a.compare_bowv) throw ConfigError("--compare and --compare-bowv are exclusive");
  const auto s = load_stance(a.data, run);
  const auto ckpt = nn::load_checkpoint(a.checkpoint);
  const auto cfg = StanceConfig::from_json(nlohmann::json::parse(ckpt.config_json));
  const auto splits = prepare_splits(s.raw, cfg.seed, cfg.neutral_ratio, cfg.scenario, cfg.caps);
  const auto& part = a.split == "train" ? splits.train : a.split == "dev" ? splits.dev : splits.test;
  if (part.empty()) throw std::runtime_error("the " + a.split + " split is empty");

  const auto preds = model_predictions(a.data, s, a.checkpoint, splits, part, run);
  std::optional<std::vector<int>> other;
  if (!a.compare.empty()) other = model_predictions(a.data, s, a.compare, splits, part, run);
  if (a.compare_bowv) {
    BowClassifier bow;
    bow.fit(splits.train);
    other = bow.predict(part);
  }
  const auto gold = stance_labels(part);
  const auto topics = topics_of(part);
  const auto eval = evaluate_stance(preds, gold, topics, other ? &*other : nullptr, a.rounds, cfg.seed);
  write_text(run.output("predictions.jsonl"), predictions_jsonl(part, preds));
  write_text(run.output("results.csv"), evaluation_csv(eval));
  run.summary["split"] = a.split;
  run.summary["examples"] = part.size();
  add_evaluation(run, "model", eval);
  run.table.header = {"system", "topic", "F1", "p"};
  evaluation_rows(run.table, "model", eval);
  if (other) {
    const auto oe = evaluate_stance(*other, gold, topics);
    write_text(run.output("predictions_other.jsonl"), predictions_jsonl(part, *other));
    add_evaluation(run, "other", oe);
    evaluation_rows(run.table, a.compare_bowv ? "BoWV" : "other", oe);
  }
}

}  // namespace

void add_stance_commands(CLI::App& root, Registry& reg) {
  {
    auto a = std::make_shared<NeutralArgs>();
    auto* app = root.add_subcommand("gen-neutrals", "Topic-swapped neutral examples from pro/con examples");
    app->add_option("--input", a->input, "stance.jsonl")->required()->check(CLI::ExistingFile);
    app->add_option("--count", a->count, "neutrals to generate (default: ratio x pro/con examples)");
    app->add_option("--ratio", a->ratio, "neutrals per pro/con example")->check(CLI::PositiveNumber);
    reg.push_back({app, true, [a](Run& r) { neutrals_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<TrainStanceArgs>();
    auto* app = root.add_subcommand("train-stance", "Train a conditional-encoding stance model");
    add_stance_data_options(app, a->data);
    app->add_option("--scenario", a->scenario, "all|trunctrain|truncall")->check(one_of({"all", "trunctrain", "truncall"}));
    app->add_option("--attention", a->attention, "none|w|c|r")->check(one_of({"none", "w", "c", "r"}));
    app->add_option("--cap-train", a->cap_train, "per-topic training cap")->check(CLI::PositiveNumber);
    app->add_option("--cap-eval", a->cap_eval, "per-topic dev/test cap")->check(CLI::PositiveNumber);
    app->add_option("--hidden", a->hidden, "LSTM units per direction")->check(CLI::PositiveNumber);
    app->add_option("--epochs", a->epochs, "maximum epochs")->check(CLI::NonNegativeNumber);
    app->add_option("--patience", a->patience, "early stopping patience")->check(CLI::PositiveNumber);
    app->add_option("--lr", a->lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
    app->add_option("--batch", a->batch, "minibatch size")->check(CLI::PositiveNumber);
    app->add_option("--dropout", a->dropout, "dropout rate")->check(CLI::Range(0.0, 0.95));
    app->add_option("--random-dim", a->random_dim, "size of the random attention vectors")->check(CLI::PositiveNumber);
    app->add_option("--neutral-ratio", a->neutral_ratio, "neutrals per pro/con example")->check(CLI::NonNegativeNumber);
    app->add_flag("--bowv", a->bowv, "also train the bag-of-words baseline");
    app->add_option("--sweep", a->sweep, "comma-separated training fractions for a data-size curve");
    reg.push_back({app, true, [a](Run& r) { train_stance_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<EvalStanceArgs>();
    auto* app = root.add_subcommand("eval-stance", "Score a stance checkpoint, optionally against a second system");
    add_stance_data_options(app, a->data);
    app->add_option("--checkpoint", a->checkpoint, "stance.ckpt")->required()->check(CLI::ExistingFile);
    app->add_option("--compare", a->compare, "second stance checkpoint")->check(CLI::ExistingFile);
    app->add_flag("--compare-bowv", a->compare_bowv, "compare against the bag-of-words baseline");
    app->add_option("--split", a->split, "train|dev|test")->check(one_of({"train", "dev", "test"}));
    app->add_option("--rounds", a->rounds, "approximate randomization shuffles")->check(CLI::PositiveNumber);
    reg.push_back({app, false, [a](Run& r) { eval_stance_cmd(*a, r); }});
  }
}

}  // namespace conn::cli

#include <memory>
#include <sstream>
#include <unordered_map>

#include "command.hpp"
#include "conn/core/error.hpp"
#include "conn/core/text.hpp"
#include "conn/encoder/baselines.hpp"
#include "conn/encoder/trainer.hpp"
#include "conn/eval/space.hpp"
#include "conn/lexicon/lexicon_io.hpp"

namespace conn::cli {

namespace {

struct DataArgs {
  std::string lexicon, definitions, related, embeddings, verb_frames;
  std::size_t max_tokens = 42;
  std::size_t max_related = 20;
};

struct LoadedData {
  std::vector<LexiconEntry> lexicon;
  std::vector<VerbFrame> frames;
  std::map<WordPos, std::vector<Definition>> definitions;
  std::map<WordPos, std::vector<std::string>> related;
  EmbeddingTable pretrained{1};
};

void add_data_options(CLI::App* app, DataArgs& a, bool labeled, bool limits) {
  auto* lex = app->add_option("--lexicon", a.lexicon, "lexicon.jsonl")->check(CLI::ExistingFile);
  if (labeled) lex->required();
  app->add_option("--definitions", a.definitions, "definitions.tsv")->required()->check(CLI::ExistingFile);
  app->add_option("--related", a.related, "related.tsv")->check(CLI::ExistingFile);
  app->add_option("--embeddings", a.embeddings, "pretrained word vectors")->required()->check(CLI::ExistingFile);
  app->add_option("--verb-frames", a.verb_frames, "verb frame labels")->check(CLI::ExistingFile);
  if (limits) {
    app->add_option("--max-tokens", a.max_tokens, "definition tokens kept per word")->check(CLI::PositiveNumber);
    app->add_option("--max-related", a.max_related, "related words kept per word")->check(CLI::NonNegativeNumber);
  }
}

// Reads the inputs, keeping only the pretrained vectors the data can use.
LoadedData load_data(const DataArgs& a, Run& run) {
  LoadedData d;
  if (!a.lexicon.empty()) d.lexicon = read_lexicon_jsonl(run.input(a.lexicon));
  if (!a.verb_frames.empty()) d.frames = read_verb_frames(run.input(a.verb_frames));
  d.definitions = read_definitions(run.input(a.definitions));
  if (!a.related.empty()) d.related = read_related(run.input(a.related));

  std::unordered_map<std::string, bool> vocab;
  for (const auto& [key, defs] : d.definitions) {
    vocab[key.word] = true;
    for (const auto& def : defs)
      for (const auto& t : text::tokenize(def.text)) vocab[t] = true;
  }
  for (const auto& [key, words] : d.related)
    for (const auto& w : words) vocab[text::lower(w)] = true;
  for (const auto& e : d.lexicon) vocab[e.word] = true;
  for (const auto& f : d.frames) vocab[f.verb] = true;
  d.pretrained = read_embeddings(run.input(a.embeddings), &vocab);
  if (d.pretrained.size() == 0) throw ConfigError("no pretrained vector matches the definitions or lexicon");
  return d;
}

Dataset make_dataset(const LoadedData& d, std::uint64_t seed, const InputLimits& limits) {
  DatasetSources src;
  src.lexicon = &d.lexicon;
  src.verb_frames = &d.frames;
  src.definitions = &d.definitions;
  src.related = &d.related;
  src.pretrained = &d.pretrained;
  return build_dataset(src, seed, limits);
}

InputLimits limits_of(const DataArgs& a) { return {a.max_tokens, a.max_related}; }

void split_cmd(const DataArgs& a, Run& run) {
  const auto d = load_data(a, run);
  const auto data = make_dataset(d, run.seed, limits_of(a));
  std::ostringstream tsv;
  run.table.header = {"split", "examples", "words"};
  for (const Split s : {Split::Train, Split::Dev, Split::Test}) {
    std::set<std::string> words;
    for (const auto& ex : data.part(s)) {
      tsv << ex.input.word << "\t" << pos_name(ex.input.pos) << "\t" << split_name(s) << "\n";
      words.insert(ex.input.word);
    }
    const std::string name(split_name(s));
    run.summary[name] = {{"examples", data.part(s).size()}, {"words", words.size()}};
    run.table.add({name, std::to_string(data.part(s).size()), std::to_string(words.size())});
  }
  std::ostringstream skipped;
  for (const auto& k : data.skipped) skipped << k.word << "\t" << pos_name(k.pos) << "\n";
  write_text(run.output("split.tsv"), tsv.str());
  write_text(run.output("skipped.tsv"), skipped.str());
  run.summary["skipped"] = data.skipped.size();
  run.table.add({"skipped", std::to_string(data.skipped.size()), ""});
}

struct TrainArgs {
  DataArgs data;
  std::string variant = "cer", mode = "joint", aspects;
  nn::Index hidden = 150;
  int epochs = 80, patience = 10;
  double lr = 0.001, dropout = 0.5, emotion_threshold = 0.5;
  std::size_t batch = 64;
  bool no_smoke_check = false;
};

std::vector<Aspect> parse_aspect_list(const std::string& s) {
  std::vector<Aspect> out;
  for (const auto& tok : text::split(s, ',')) {
    const std::string t = text::trim(tok);
    if (t.empty()) continue;
    const auto a = parse_aspect(t);
    if (!a) throw ConfigError("unknown aspect '" + t + "'");
    out.push_back(*a);
  }
  return out;
}

void add_scores(nlohmann::ordered_json& j, const AspectScores& s) {
  j = nlohmann::ordered_json::object();
  for (const auto& [a, f1] : s.f1) j[std::string(aspect_name(a))] = f1;
  j["average"] = s.average;
}

void train_cmd(const TrainArgs& a, Run& run) {
  const auto d = load_data(a.data, run);
  ModelConfig cfg;
  cfg.variant = *parse_variant(a.variant);
  cfg.mode = *parse_mode(a.mode);
  cfg.hidden = a.hidden;
  cfg.dim = d.pretrained.dim();
  cfg.limits = limits_of(a.data);
  cfg.epochs = a.epochs;
  cfg.patience = a.patience;
  cfg.lr = a.lr;
  cfg.batch = a.batch;
  cfg.dropout = a.dropout;
  cfg.emotion_threshold = a.emotion_threshold;
  cfg.aspects = parse_aspect_list(a.aspects);
  cfg.seed = run.seed;
  cfg.smoke_check = !a.no_smoke_check;
  cfg.validate();

  const auto data = make_dataset(d, run.seed, cfg.limits);
  if (data.train.empty()) throw std::runtime_error("the training split is empty");
  const auto res = train_connotation(cfg, data, d.pretrained);
  const FloatModel& model = *res.model;
  save_model(run.output("model.ckpt").string(), model);

  std::ostringstream csv;
  csv << "epoch,train_loss,dev_average";
  for (const Aspect asp : model.aspects()) csv << ",dev_" << aspect_name(asp);
  csv << "\n";
  for (const auto& e : res.log) {
    csv << e.epoch << "," << fmt_double(e.train_loss, 6) << "," << fmt_double(e.dev.average, 6);
    for (const Aspect asp : model.aspects()) {
      const auto it = e.dev.f1.find(asp);
      csv << "," << (it == e.dev.f1.end() ? "" : fmt_double(it->second, 6));
    }
    csv << "\n";
  }
  write_text(run.output("epochs.csv"), csv.str());

  const auto dev = evaluate(model, data.dev.empty() ? data.train : data.dev);
  std::optional<AspectScores> test;
  if (!data.test.empty()) test = evaluate(model, data.test);
  std::ostringstream scores;
  scores << "aspect,dev_f1,test_f1\n";
  run.table.header = {"aspect", "dev F1", "test F1"};
  auto row = [&](const std::string& name, double dv, std::optional<double> tv) {
    scores << name << "," << fmt_double(dv, 6) << "," << (tv ? fmt_double(*tv, 6) : "") << "\n";
    run.table.add({name, fmt_double(dv, 3), tv ? fmt_double(*tv, 3) : "-"});
  };
  for (const Aspect asp : model.aspects()) {
    if (!dev.f1.contains(asp)) continue;
    std::optional<double> tv;
    if (test && test->f1.contains(asp)) tv = test->f1.at(asp);
    row(std::string(aspect_name(asp)), dev.f1.at(asp), tv);
  }
  row("average", dev.average, test ? std::optional<double>(test->average) : std::nullopt);
  write_text(run.output("scores.csv"), scores.str());

  run.summary["examples"] = {{"train", data.train.size()}, {"dev", data.dev.size()}, {"test", data.test.size()}};
  run.summary["epochs_run"] = res.log.size();
  run.summary["best_epoch"] = res.best_epoch;
  add_scores(run.summary["dev"], dev);
  if (test) add_scores(run.summary["test"], *test);
}

struct EvalArgs {
  DataArgs data;
  std::string checkpoint, split = "test";
  bool baselines = false;
};

void eval_cmd(const EvalArgs& a, Run& run) {
  const auto d = load_data(a.data, run);
  const auto model = load_model(run.input(a.checkpoint), d.pretrained);
  const ModelConfig& cfg = model->config();
  const auto data = make_dataset(d, cfg.seed, cfg.limits);
  const auto& part = data.part(*parse_split(a.split));
  if (part.empty()) throw std::runtime_error("the " + a.split + " split is empty");

  std::ostringstream jsonl;
  for (const auto& rec : prediction_records(*model, part)) jsonl << rec.dump() << "\n";
  write_text(run.output("predictions.jsonl"), jsonl.str());

  const auto scores = evaluate(*model, part);
  std::optional<BaselineReport> base;
  if (a.baselines) base = run_baselines(data.train, part, d.pretrained, model->aspects());
  std::ostringstream csv;
  csv << "aspect,model" << (base ? ",majority,logreg" : "") << "\n";
  run.table.header = {"aspect", "model"};
  if (base) run.table.header.insert(run.table.header.end(), {"Maj", "LR"});
  auto cell = [](const std::map<Aspect, double>& m, Aspect asp, int prec) {
    const auto it = m.find(asp);
    return it == m.end() ? std::string() : fmt_double(it->second, prec);
  };
  for (const Aspect asp : model->aspects()) {
    if (!scores.f1.contains(asp)) continue;
    const std::string name(aspect_name(asp));
    csv << name << "," << cell(scores.f1, asp, 6);
    std::vector<std::string> row = {name, cell(scores.f1, asp, 3)};
    if (base) {
      csv << "," << cell(base->maj.f1, asp, 6) << "," << cell(base->lr.f1, asp, 6);
      row.push_back(cell(base->maj.f1, asp, 3));
      row.push_back(cell(base->lr.f1, asp, 3));
    }
    csv << "\n";
    run.table.add(row);
  }
  csv << "average," << fmt_double(scores.average, 6);
  std::vector<std::string> avg = {"average", fmt_double(scores.average, 3)};
  if (base) {
    csv << "," << fmt_double(base->maj.average, 6) << "," << fmt_double(base->lr.average, 6);
    avg.push_back(fmt_double(base->maj.average, 3));
    avg.push_back(fmt_double(base->lr.average, 3));
  }
  csv << "\n";
  run.table.add(avg);
  write_text(run.output("scores.csv"), csv.str());

  run.summary["split"] = a.split;
  run.summary["examples"] = part.size();
  add_scores(run.summary["model"], scores);
  if (base) {
    add_scores(run.summary["majority"], base->maj);
    add_scores(run.summary["logreg"], base->lr);
    for (const Aspect asp : base->lr_skipped) run.summary["logreg_skipped"].push_back(std::string(aspect_name(asp)));
  }
}

struct ExportArgs {
  DataArgs data;
  std::string checkpoint;
};

void export_cmd(const ExportArgs& a, Run& run) {
  const auto d = load_data(a.data, run);
  const auto model = load_model(run.input(a.checkpoint), d.pretrained);
  const ModelConfig& cfg = model->config();
  std::optional<EmbeddingTable> table;
  std::size_t skipped = 0;
  for (const auto& [key, defs] : d.definitions) {
    const auto rel = d.related.find(key);
    const auto in = build_input(key, defs, rel == d.related.end() ? nullptr : &rel->second, d.pretrained, cfg.limits);
    if (!in) {
      ++skipped;
      continue;
    }
    const Eigen::VectorXf v = model->embedding(*in);
    if (!table) table.emplace(v.size());
    table->set(space_key_string({key.word, key.pos}), v);
  }
  if (!table) throw std::runtime_error("no word has a usable definition");
  write_embeddings(run.output("connotation_embeddings.txt").string(), *table);
  run.summary["exported"] = table->size();
  run.summary["skipped"] = skipped;
  run.summary["dim"] = table->dim();
  run.table.header = {"exported", "skipped", "dim"};
  run.table.add({std::to_string(table->size()), std::to_string(skipped), std::to_string(table->dim())});
}

}  // namespace

void add_connotation_commands(CLI::App& root, Registry& reg) {
  {
    auto a = std::make_shared<DataArgs>();
    auto* app = root.add_subcommand("split", "Word-level train/dev/test partition of the labeled words");
    add_data_options(app, *a, true, true);
    reg.push_back({app, true, [a](Run& r) { split_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<TrainArgs>();
    auto* app = root.add_subcommand("train-conn", "Train the connotation encoder");
    add_data_options(app, a->data, true, true);
    app->add_option("--variant", a->variant, "ce|cer")->check(one_of({"ce", "cer"}));
    app->add_option("--mode", a->mode, "joint|separate")->check(one_of({"joint", "separate"}));
    app->add_option("--aspects", a->aspects, "comma-separated aspects (default: all with labels)");
    app->add_option("--hidden", a->hidden, "LSTM units per direction")->check(CLI::PositiveNumber);
    app->add_option("--epochs", a->epochs, "maximum epochs (0 writes the initialized model)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--patience", a->patience, "early stopping patience")->check(CLI::PositiveNumber);
    app->add_option("--lr", a->lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
    app->add_option("--batch", a->batch, "minibatch size")->check(CLI::PositiveNumber);
    app->add_option("--dropout", a->dropout, "dropout rate")->check(CLI::Range(0.0, 0.95));
    app->add_option("--emotion-threshold", a->emotion_threshold, "sigmoid threshold for emotions")
        ->check(CLI::Range(0.0, 1.0));
    app->add_flag("--no-smoke-check", a->no_smoke_check, "skip the pre-training overfit check");
    reg.push_back({app, true, [a](Run& r) { train_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<EvalArgs>();
    auto* app = root.add_subcommand("eval-conn", "Score a connotation checkpoint and write predictions");
    add_data_options(app, a->data, true, false);
    app->add_option("--checkpoint", a->checkpoint, "model.ckpt")->required()->check(CLI::ExistingFile);
    app->add_option("--split", a->split, "train|dev|test")->check(one_of({"train", "dev", "test"}));
    app->add_flag("--baselines", a->baselines, "also score the majority and logistic-regression baselines");
    reg.push_back({app, false, [a](Run& r) { eval_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<ExportArgs>();
    auto* app = root.add_subcommand("export-embeddings", "Write connotation embeddings for every defined word");
    add_data_options(app, a->data, false, false);
    app->add_option("--checkpoint", a->checkpoint, "model.ckpt")->required()->check(CLI::ExistingFile);
    reg.push_back({app, false, [a](Run& r) { export_cmd(*a, r); }});
  }
}

}  // namespace conn::cli

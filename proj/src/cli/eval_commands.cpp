#include <atomic>
#include <fstream>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "command.hpp"
#include "conn/core/error.hpp"
#include "conn/core/text.hpp"
#include "conn/diagnostics/grad_suite.hpp"
#include "conn/eval/metrics.hpp"
#include "conn/eval/space.hpp"
#include "conn/lexicon/lexicon_io.hpp"

namespace conn::cli {

namespace {

struct PurityArgs {
  std::string space, pretrained, lexicon, aspects;
  std::size_t k = 50;
  double floor = 1.0;
};

struct PurityJob {
  std::string space;
  Aspect aspect;
  int label;
  std::optional<PurityResult> result;
};

void purity_cmd(const PurityArgs& a, Run& run) {
  const auto entries = read_lexicon_jsonl(run.input(a.lexicon));
  const auto lexicon = index_lexicon(entries);
  std::vector<std::pair<std::string, EmbeddingSpace>> spaces;
  spaces.emplace_back("connotation", EmbeddingSpace::from_keyed_table(read_embeddings(run.input(a.space))));
  std::optional<std::vector<SpaceKey>> shared;
  if (!a.pretrained.empty()) {
    std::vector<SpaceKey> keys;
    for (std::size_t i = 0; i < spaces[0].second.size(); ++i) keys.push_back(spaces[0].second.key(i));
    auto p = EmbeddingSpace::from_word_table(read_embeddings(run.input(a.pretrained)), keys);
    // Only words present in both spaces act as queries, so the ratios compare.
    shared.emplace();
    for (std::size_t i = 0; i < p.size(); ++i) shared->push_back(p.key(i));
    spaces.emplace_back("pretrained", std::move(p));
  }

  std::vector<Aspect> aspects;
  if (a.aspects.empty()) {
    for (const Aspect asp : all_aspects())
      if (asp != Aspect::Emotion && !is_four_way(asp)) aspects.push_back(asp);
  } else {
    for (const auto& tok : text::split(a.aspects, ',')) {
      const auto asp = parse_aspect(text::trim(tok));
      if (!asp || *asp == Aspect::Emotion || is_four_way(*asp)) throw ConfigError("'" + tok + "' is not a polarity aspect");
      aspects.push_back(*asp);
    }
  }

  std::vector<PurityJob> jobs;
  for (const auto& [name, space] : spaces)
    for (const Aspect asp : aspects)
      for (const int label : {1, -1}) jobs.push_back({name, asp, label, std::nullopt});

  PurityOptions opt;
  opt.k = a.k;
  opt.denominator_floor = a.floor;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      auto& job = jobs[j];
      const auto& space = job.space == "connotation" ? spaces[0].second : spaces[1].second;
      try {
        job.result = purity_ratio(job.aspect, job.label, space, lexicon, opt, shared ? &*shared : nullptr);
      } catch (const std::invalid_argument&) {
        // no seed word for this aspect and polarity
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < run.jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream csv;
  csv << "space,aspect,label,ratio,seeds\n";
  run.table.header = {"space", "aspect", "label", "ratio", "seeds"};
  for (const auto& job : jobs) {
    const std::string name(aspect_name(job.aspect));
    const std::string label = job.label > 0 ? "+" : "-";
    const std::string ratio = job.result ? fmt_double(job.result->ratio, 6) : "";
    const std::size_t seeds = job.result ? job.result->seeds : 0;
    csv << job.space << "," << name << "," << label << "," << ratio << "," << seeds << "\n";
    run.table.add({job.space, name, label, job.result ? fmt_double(job.result->ratio, 3) : "-", std::to_string(seeds)});
    if (job.result) run.summary[job.space][name + label] = job.result->ratio;
  }
  write_text(run.output("purity.csv"), csv.str());
}

struct SignificanceArgs {
  std::string a, b, metric = "macro-f1", aspect;
  int rounds = 10000;
};

// Label value as an integer; emotion lists become bit masks.
int label_code(const nlohmann::json& v, const std::string& file, std::size_t line) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_array()) {
    int mask = 0;
    for (const auto& e : v) {
      const auto idx = e.is_string() ? emotion_index(e.get<std::string>()) : std::nullopt;
      if (!idx) throw SchemaError(file, line, "unknown emotion in label list");
      mask |= 1 << *idx;
    }
    return mask;
  }
  if (v.is_string()) {
    if (const auto s = v.get<std::string>(); s == "pro") return 0;
    else if (s == "con") return 1;
    else if (s == "neutral") return 2;
  }
  throw SchemaError(file, line, "gold and pred must be integers, emotion lists or stance names");
}

struct PredictionRows {
  std::vector<int> gold, pred;
};

PredictionRows read_prediction_rows(const std::string& path, const std::string& aspect) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  PredictionRows out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(path, n, std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("gold") || !j.contains("pred")) throw SchemaError(path, n, "missing gold or pred");
    if (!aspect.empty() && j.value("aspect", std::string()) != aspect) continue;
    out.gold.push_back(label_code(j["gold"], path, n));
    out.pred.push_back(label_code(j["pred"], path, n));
  }
  if (out.gold.empty()) throw SchemaError(path, 0, "no prediction rows" + (aspect.empty() ? "" : " for " + aspect));
  return out;
}

void significance_cmd(const SignificanceArgs& a, Run& run) {
  const auto ra = read_prediction_rows(run.input(a.a), a.aspect);
  const auto rb = read_prediction_rows(run.input(a.b), a.aspect);
  if (ra.gold != rb.gold) throw SchemaError(a.b, 0, "gold labels do not line up with " + a.a);
  const std::set<int> gold_labels(ra.gold.begin(), ra.gold.end());
  const std::vector<int> classes(gold_labels.begin(), gold_labels.end());
  CorpusMetric metric;
  if (a.metric == "accuracy") {
    metric = [](std::span<const int> p, std::span<const int> g) {
      std::size_t hit = 0;
      for (std::size_t i = 0; i < p.size(); ++i) hit += p[i] == g[i];
      return static_cast<double>(hit) / static_cast<double>(p.size());
    };
  } else {
    metric = [classes](std::span<const int> p, std::span<const int> g) { return macro_f1(p, g, classes); };
  }
  const double ma = metric(ra.pred, ra.gold);
  const double mb = metric(rb.pred, rb.gold);
  const double p = approx_randomization_metric(ra.pred, rb.pred, ra.gold, metric, a.rounds, run.seed);

  nlohmann::ordered_json j;
  j["metric"] = a.metric;
  j["delta"] = ma - mb;
  j["p"] = p;
  j["R"] = a.rounds;
  j["seed"] = run.seed;
  j["a"] = ma;
  j["b"] = mb;
  j["n"] = ra.gold.size();
  write_text(run.output("significance.json"), j.dump(2) + "\n");
  for (const auto& [k, v] : j.items()) run.summary[k] = v;
  run.table.header = {"metric", "a", "b", "delta", "p", "R"};
  run.table.add({a.metric, fmt_double(ma, 4), fmt_double(mb, 4), fmt_double(ma - mb, 4), fmt_double(p, 4),
                 std::to_string(a.rounds)});
}

struct GradArgs {
  int instances = 20;
  double h = 1e-4;
  double tolerance = 1e-3;
};

void grad_cmd(const GradArgs& a, Run& run) {
  const auto records = run_grad_suite(a.instances, run.seed, a.h);
  std::ostringstream csv;
  csv << "op,instance,coordinates,max_rel_error,worst\n";
  std::map<std::string, double> worst;
  for (const auto& r : records) {
    csv << r.op << "," << r.instance << "," << r.coordinates << "," << fmt::format("{:.3e}", r.max_rel_error) << ","
        << r.worst << "\n";
    worst[r.op] = std::max(worst[r.op], r.max_rel_error);
  }
  write_text(run.output("grad_check.csv"), csv.str());
  bool ok = true;
  run.table.header = {"op", "instances", "max rel error", "status"};
  for (const auto& op : grad_suite_ops()) {
    const bool pass = worst[op] < a.tolerance;
    ok = ok && pass;
    run.table.add({op, std::to_string(a.instances), fmt::format("{:.3e}", worst[op]), pass ? "pass" : "FAIL"});
    run.summary["ops"][op] = {{"max_rel_error", worst[op]}, {"pass", pass}};
  }
  run.summary["tolerance"] = a.tolerance;
  run.summary["failed"] = !ok;
  if (!ok) run.summary["failure"] = "gradient check exceeded the tolerance";
}

}  // namespace

void add_eval_commands(CLI::App& root, Registry& reg) {
  {
    auto a = std::make_shared<PurityArgs>();
    auto* app = root.add_subcommand("knn-purity", "Nearest-neighbor label purity of embedding spaces");
    app->add_option("--space", a->space, "embeddings keyed word|pos")->required()->check(CLI::ExistingFile);
    app->add_option("--pretrained", a->pretrained, "word vectors to compare against")->check(CLI::ExistingFile);
    app->add_option("--lexicon", a->lexicon, "lexicon.jsonl")->required()->check(CLI::ExistingFile);
    app->add_option("--aspects", a->aspects, "comma-separated polarity aspects (default: all)");
    app->add_option("--k", a->k, "neighbors per query")->check(CLI::PositiveNumber);
    app->add_option("--floor", a->floor, "denominator floor")->check(CLI::PositiveNumber);
    reg.push_back({app, false, [a](Run& r) { purity_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<SignificanceArgs>();
    auto* app = root.add_subcommand("significance", "Approximate randomization test between two prediction files");
    app->add_option("--a", a->a, "predictions of system A (jsonl with gold, pred)")->required()->check(CLI::ExistingFile);
    app->add_option("--b", a->b, "predictions of system B")->required()->check(CLI::ExistingFile);
    app->add_option("--metric", a->metric, "macro-f1|accuracy")->check(one_of({"macro-f1", "accuracy"}));
    app->add_option("--aspect", a->aspect, "only rows of this aspect");
    app->add_option("--rounds", a->rounds, "shuffles")->check(CLI::PositiveNumber);
    reg.push_back({app, true, [a](Run& r) { significance_cmd(*a, r); }});
  }
  {
    auto a = std::make_shared<GradArgs>();
    auto* app = root.add_subcommand("grad-check", "Finite-difference check of every gradient");
    app->add_option("--instances", a->instances, "random instances per operation")->check(CLI::PositiveNumber);
    app->add_option("--step", a->h, "finite-difference step")->check(CLI::PositiveNumber);
    app->add_option("--tolerance", a->tolerance, "maximum relative error")->check(CLI::PositiveNumber);
    reg.push_back({app, true, [a](Run& r) { grad_cmd(*a, r); }});
  }
}

}  // namespace conn::cli

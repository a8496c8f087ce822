#include <map>
#include <memory>
#include <sstream>

#include "command.hpp"
#include "conn/core/error.hpp"
#include "conn/core/text.hpp"
#include "conn/lexicon/compiler.hpp"
#include "conn/lexicon/lexicon_io.hpp"
#include "conn/lexicon/stats.hpp"
#include "conn/synonyms/synonyms.hpp"

namespace conn::cli {

namespace {

struct CompileArgs {
  std::string hgi, dal, cwn, nrc, rules;
};

void compile_cmd(const CompileArgs& a, Run& run) {
  if (a.hgi.empty() && a.cwn.empty())
    throw ConfigError("compile-lexicon needs --hgi or --cwn: entries are created only from sources with a part of speech");
  SourceSet sources;
  if (!a.hgi.empty()) read_hgi(run.input(a.hgi), sources);
  if (!a.dal.empty()) read_dal(run.input(a.dal), sources);
  if (!a.cwn.empty()) read_cwn(run.input(a.cwn), sources);
  if (!a.nrc.empty()) read_nrc(run.input(a.nrc), sources);
  const RuleTable rules = a.rules.empty() ? RuleTable::defaults() : RuleTable::load(run.input(a.rules));
  rules.validate();
  const auto lex = compile_lexicon(sources, rules);
  write_lexicon_jsonl(run.output("lexicon.jsonl").string(), lex.entries);

  const auto& s = lex.stats;
  run.summary["entries"] = s.entries;
  run.summary["fully_labeled"] = s.fully_labeled;
  run.summary["conflicts"] = s.conflicts;
  run.summary["unknown_categories"] = s.unknown_categories;
  run.summary["skipped_rows"] = sources.skipped_rows;
  run.table.header = {"metric", "value"};
  for (const auto& [k, v] : run.summary.items()) run.table.add({k, v.dump()});
}

void stats_cmd(const std::string& path, Run& run) {
  const auto entries = read_lexicon_jsonl(run.input(path));
  std::map<Pos, std::size_t> by_pos;
  for (const auto& e : entries) ++by_pos[e.pos];
  const auto d = class_distribution(entries);

  std::ostringstream csv;
  csv << "aspect,positive_pct,negative_pct,neutral_pct\n";
  run.table.header = {"aspect", "+%", "-%", "0%"};
  for (const auto& [aspect, dist] : d.aspects) {
    csv << aspect_name(aspect) << "," << fmt_double(dist.pct_positive, 6) << "," << fmt_double(dist.pct_negative, 6)
        << "," << fmt_double(dist.pct_neutral, 6) << "\n";
    run.table.add({std::string(aspect_name(aspect)), fmt_double(dist.pct_positive, 1), fmt_double(dist.pct_negative, 1),
                   fmt_double(dist.pct_neutral, 1)});
  }
  write_text(run.output("lexicon_stats.csv"), csv.str());
  run.summary["entries"] = entries.size();
  for (const auto& [pos, n] : by_pos) run.summary[std::string(pos_name(pos))] = n;
  run.summary["fully_labeled"] = d.fully_labeled;
  run.summary["pct_with_emotion"] = d.pct_with_emotion;
  run.summary["mean_emotions"] = d.mean_emotions;
  run.table.add({"Emotion", "any: " + fmt_double(d.pct_with_emotion, 1), "mean: " + fmt_double(d.mean_emotions, 2), ""});
}

// annotations.tsv: word <TAB> pos <TAB> aspect <TAB> l1,l2,...
void agreement_cmd(const std::string& lexicon_path, const std::string& ann_path, Run& run) {
  const auto entries = read_lexicon_jsonl(run.input(lexicon_path));
  const LexiconIndex index(entries);
  std::map<Aspect, AnnotationMatrix> annotations;
  std::map<Aspect, std::vector<int>> lexicon_labels;
  text::for_each_tsv_row(run.input(ann_path), [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 4) throw SchemaError(ann_path, line, "expected word, pos, aspect, labels");
    const auto pos = parse_pos(f[1]);
    if (!pos) throw SchemaError(ann_path, line, "unknown part of speech '" + f[1] + "'");
    const auto aspect = parse_aspect(f[2]);
    if (!aspect || *aspect == Aspect::Emotion || is_four_way(*aspect))
      throw SchemaError(ann_path, line, "'" + f[2] + "' is not a polarity aspect");
    std::vector<int> row;
    for (const auto& tok : text::split(f[3], ',')) {
      long v = 0;
      try {
        v = text::parse_int(text::trim(tok));
      } catch (const std::exception&) {
        throw SchemaError(ann_path, line, "bad label '" + tok + "'");
      }
      if (v < -1 || v > 1) throw SchemaError(ann_path, line, "labels must be -1, 0 or 1");
      row.push_back(static_cast<int>(v));
    }
    const LexiconEntry* e = index.find(f[0], *pos);
    const auto label = e ? e->label(*aspect) : std::nullopt;
    if (!label) throw SchemaError(ann_path, line, "no lexicon label for " + f[0] + "/" + f[1] + " " + f[2]);
    annotations[*aspect].push_back(std::move(row));
    lexicon_labels[*aspect].push_back(*label);
  });
  if (annotations.empty()) throw SchemaError(ann_path, 0, "no annotations");

  std::ostringstream csv;
  csv << "aspect,words,excluded_no_majority,fleiss_kappa,mean_pairwise_pct,lexicon_pct,lexicon_nc_pct,cohen_kappa\n";
  run.table.header = {"aspect", "words", "fleiss", "pairwise%", "lex%", "lexNC%", "cohen"};
  for (const auto& [aspect, rows] : annotations) {
    const auto r = agreement_metrics(rows, lexicon_labels.at(aspect));
    const std::string name(aspect_name(aspect));
    csv << name << "," << r.words << "," << r.excluded_no_majority << "," << fmt_double(r.fleiss_kappa, 6) << ","
        << fmt_double(r.mean_pairwise_pct, 6) << "," << fmt_double(r.lexicon_pct, 6) << ","
        << fmt_double(r.lexicon_nc_pct, 6) << "," << fmt_double(r.cohen_kappa, 6) << "\n";
    run.table.add({name, std::to_string(r.words), fmt_double(r.fleiss_kappa, 3), fmt_double(r.mean_pairwise_pct, 1),
                   fmt_double(r.lexicon_pct, 1), fmt_double(r.lexicon_nc_pct, 1), fmt_double(r.cohen_kappa, 3)});
    run.summary["aspects"][name] = {{"fleiss_kappa", r.fleiss_kappa},   {"mean_pairwise_pct", r.mean_pairwise_pct},
                                    {"lexicon_pct", r.lexicon_pct},     {"lexicon_nc_pct", r.lexicon_nc_pct},
                                    {"cohen_kappa", r.cohen_kappa},     {"words", r.words}};
  }
  write_text(run.output("agreement.csv"), csv.str());
}

struct SynonymArgs {
  std::string lexicon, ppdb, synsets;
};

void synonyms_cmd(const SynonymArgs& a, Run& run) {
  const auto entries = read_lexicon_jsonl(run.input(a.lexicon));
  const LexiconIndex index(entries);
  const auto pairs = select_pairs(read_ppdb(run.input(a.ppdb)), read_synsets(run.input(a.synsets)), index);
  if (pairs.empty()) throw std::runtime_error("no synonym pair has both words in the lexicon");
  const auto report = divergence_report(pairs, index);

  std::ostringstream tsv;
  for (const auto& p : pairs) tsv << p.word_a << "\t" << p.word_b << "\t" << pos_name(p.pos) << "\n";
  write_text(run.output("pairs.tsv"), tsv.str());
  write_text(run.output("divergence.csv"), divergence_csv(report));
  write_text(run.output("divergence.txt"), divergence_table(report));

  run.summary["pairs"] = report.pairs;
  run.summary["pct_any_diff"] = report.pct_any_diff();
  run.table.header = {"aspect", "compared", "same%", "diff%", "neutral-among-diff%"};
  for (const auto& [aspect, d] : report.aspects)
    run.table.add({std::string(aspect_name(aspect)), std::to_string(d.compared), fmt_double(d.pct_same(), 1),
                   fmt_double(d.pct_diff(), 1), fmt_double(d.pct_neutral_among_diffs(), 1)});
}

}  // namespace

void add_lexicon_commands(CLI::App& root, Registry& reg) {
  {
    auto a = std::make_shared<CompileArgs>();
    auto* app = root.add_subcommand("compile-lexicon", "Label nouns and adjectives from the source lexica");
    app->add_option("--hgi", a->hgi, "hgi.tsv")->check(CLI::ExistingFile);
    app->add_option("--dal", a->dal, "dal.tsv")->check(CLI::ExistingFile);
    app->add_option("--cwn", a->cwn, "cwn.tsv")->check(CLI::ExistingFile);
    app->add_option("--nrc", a->nrc, "nrc.tsv")->check(CLI::ExistingFile);
    app->add_option("--rules", a->rules, "rule table overrides")->check(CLI::ExistingFile);
    reg.push_back({app, false, [a](Run& r) { compile_cmd(*a, r); }});
  }
  {
    auto path = std::make_shared<std::string>();
    auto* app = root.add_subcommand("lexicon-stats", "Label distribution of a compiled lexicon");
    app->add_option("--lexicon", *path, "lexicon.jsonl")->required()->check(CLI::ExistingFile);
    reg.push_back({app, false, [path](Run& r) { stats_cmd(*path, r); }});
  }
  {
    auto a = std::make_shared<std::pair<std::string, std::string>>();
    auto* app = root.add_subcommand("agreement", "Annotator and lexicon agreement per aspect");
    app->add_option("--lexicon", a->first, "lexicon.jsonl")->required()->check(CLI::ExistingFile);
    app->add_option("--annotations", a->second, "word, pos, aspect, comma-separated labels")
        ->required()
        ->check(CLI::ExistingFile);
    reg.push_back({app, false, [a](Run& r) { agreement_cmd(a->first, a->second, r); }});
  }
  {
    auto a = std::make_shared<SynonymArgs>();
    auto* app = root.add_subcommand("synonyms", "Connotation divergence between synonym pairs");
    app->add_option("--lexicon", a->lexicon, "lexicon.jsonl")->required()->check(CLI::ExistingFile);
    app->add_option("--ppdb", a->ppdb, "ppdb.tsv")->required()->check(CLI::ExistingFile);
    app->add_option("--synsets", a->synsets, "synsets.tsv")->required()->check(CLI::ExistingFile);
    reg.push_back({app, false, [a](Run& r) { synonyms_cmd(*a, r); }});
  }
}

}  // namespace conn::cli

#include "conn/encoder/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "conn/core/rng.hpp"
#include "conn/core/text.hpp"

namespace conn {

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "train") return Split::Train;
  if (l == "dev") return Split::Dev;
  if (l == "test") return Split::Test;
  return std::nullopt;
}

std::vector<VerbFrame> read_verb_frames(const std::string& path) {
  std::vector<VerbFrame> out;
  std::set<std::string> seen;
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t) {
    if (f.size() != 3) throw std::invalid_argument("expected 3 fields: verb, split, labels");
    VerbFrame v;
    v.verb = text::lower(text::trim(f[0]));
    if (!seen.insert(v.verb).second) throw std::invalid_argument("duplicate verb '" + v.verb + "'");
    const std::string sp = text::trim(f[1]);
    if (sp != "-") {
      v.split = parse_split(sp);
      if (!v.split) throw std::invalid_argument("unknown split '" + sp + "'");
    }
    for (const auto& item : text::split(f[2], ',')) {
      const std::string t = text::trim(item);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected aspect=value, got '" + t + "'");
      const auto a = parse_aspect(text::trim(t.substr(0, eq)));
      if (!a || !applies_to(*a, Pos::Verb)) throw std::invalid_argument("not a verb aspect: '" + t.substr(0, eq) + "'");
      const int value = static_cast<int>(text::parse_int(text::trim(t.substr(eq + 1))));
      label_to_class(*a, value);  // range check
      v.labels[*a] = value;
    }
    out.push_back(std::move(v));
  });
  return out;
}

LexiconEntry verb_frame_entry(const VerbFrame& f) {
  LexiconEntry e;
  e.word = f.verb;
  e.pos = Pos::Verb;
  e.labels = f.labels;
  for (const auto& [a, _] : f.labels) e.provenance[a] = "verb-frames";
  e.fully_labeled = compute_fully_labeled(e);
  return e;
}

std::map<std::string, Split> split_words(const std::vector<std::string>& words,
                                         const std::map<std::string, Split>& fixed, std::uint64_t seed) {
  std::set<std::string> unique(words.begin(), words.end());
  const auto total = static_cast<double>(unique.size());
  const auto want_train = static_cast<std::size_t>(std::llround(0.6 * total));
  const auto want_dev = static_cast<std::size_t>(std::llround(0.2 * total));

  std::map<std::string, Split> out;
  std::size_t n_train = 0;
  std::size_t n_dev = 0;
  std::vector<std::string> free;
  for (const auto& w : unique) {
    if (const auto it = fixed.find(w); it != fixed.end()) {
      out[w] = it->second;
      n_train += it->second == Split::Train;
      n_dev += it->second == Split::Dev;
    } else {
      free.push_back(w);
    }
  }
  Rng rng(seed);
  rng.shuffle(free);
  for (const auto& w : free) {
    Split s = Split::Test;
    if (n_train < want_train) {
      s = Split::Train;
      ++n_train;
    } else if (n_dev < want_dev) {
      s = Split::Dev;
      ++n_dev;
    }
    out[w] = s;
  }
  return out;
}

Example make_example(EncoderInput input, const LexiconEntry& entry) {
  Example ex;
  ex.input = std::move(input);
  for (const auto& [a, label] : entry.labels)
    if (applies_to(a, entry.pos)) ex.classes[a] = label_to_class(a, label);
  if (entry.pos != Pos::Verb) ex.emotions = entry.emotions;
  return ex;
}

Dataset build_dataset(const DatasetSources& src, std::uint64_t seed, const InputLimits& limits) {
  if (!src.definitions || !src.pretrained) throw std::invalid_argument("dataset needs definitions and pretrained vectors");
  std::vector<LexiconEntry> entries;
  if (src.lexicon) entries = *src.lexicon;
  std::map<std::string, Split> fixed;
  if (src.verb_frames) {
    std::set<WordPos> present;
    for (const auto& e : entries) present.insert({e.word, e.pos});
    for (const auto& f : *src.verb_frames) {
      if (f.split) fixed[f.verb] = *f.split;
      if (!present.contains({f.verb, Pos::Verb})) entries.push_back(verb_frame_entry(f));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) { return std::tie(a.word, a.pos) < std::tie(b.word, b.pos); });

  std::vector<std::string> words;
  for (const auto& e : entries) words.push_back(e.word);
  const auto assignment = split_words(words, fixed, seed);

  Dataset ds;
  static const std::vector<Definition> kNoDefinitions;
  for (const auto& e : entries) {
    const WordPos key{e.word, e.pos};
    const auto dit = src.definitions->find(key);
    const std::vector<std::string>* rel = nullptr;
    if (src.related)
      if (const auto rit = src.related->find(key); rit != src.related->end()) rel = &rit->second;
    auto input = build_input(key, dit == src.definitions->end() ? kNoDefinitions : dit->second, rel, *src.pretrained,
                             limits);
    if (!input) {
      ds.skipped.push_back(key);
      continue;
    }
    Example ex = make_example(std::move(*input), e);
    if (ex.empty()) {
      ds.skipped.push_back(key);
      continue;
    }
    ds.part(assignment.at(e.word)).push_back(std::move(ex));
  }
  if (!ds.skipped.empty())
    spdlog::warn("{} (word, pos) entries skipped: no usable definition tokens or no labels", ds.skipped.size());
  return ds;
}

}  // namespace conn

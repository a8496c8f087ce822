#include "conn/synonyms/synonyms.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "conn/core/error.hpp"
#include "conn/core/text.hpp"

namespace conn {

LexiconIndex::LexiconIndex(const std::vector<LexiconEntry>& entries) {
  for (const auto& e : entries) index_[{e.word, e.pos}] = &e;
}

const LexiconEntry* LexiconIndex::find(const std::string& word, Pos pos) const {
  const auto it = index_.find({word, pos});
  return it == index_.end() ? nullptr : it->second;
}

namespace {

bool in_synset(const SynsetMap& synsets, const std::string& word, const std::string& other) {
  const auto it = synsets.find(word);
  return it != synsets.end() && it->second.contains(other);
}

}  // namespace

std::vector<SynonymPair> select_pairs(const std::vector<ParaphraseRecord>& paraphrases, const SynsetMap& synsets,
                                      const LexiconIndex& lexicon) {
  std::set<SynonymPair> kept;
  for (const auto& p : paraphrases) {
    if (p.w1 == p.w2) continue;
    if (!in_synset(synsets, p.w1, p.w2) && !in_synset(synsets, p.w2, p.w1)) continue;
    if (!lexicon.find(p.w1, p.pos) || !lexicon.find(p.w2, p.pos)) continue;
    kept.insert(p.w1 < p.w2 ? SynonymPair{p.w1, p.w2, p.pos} : SynonymPair{p.w2, p.w1, p.pos});
  }
  return {kept.begin(), kept.end()};
}

DivergenceReport divergence_report(const std::vector<SynonymPair>& pairs, const LexiconIndex& lexicon) {
  if (pairs.empty()) throw std::invalid_argument("divergence_report: no pairs");
  DivergenceReport r;
  for (const auto& p : pairs) {
    const LexiconEntry* a = lexicon.find(p.word_a, p.pos);
    const LexiconEntry* b = lexicon.find(p.word_b, p.pos);
    if (!a || !b) throw std::invalid_argument("divergence_report: pair (" + p.word_a + ", " + p.word_b + ") not in lexicon");
    ++r.pairs;
    bool any = false;
    for (Aspect aspect : aspects_for(p.pos)) {
      auto& d = r.aspects[aspect];
      if (!a->has(aspect) || !b->has(aspect)) {
        ++d.skipped;
        continue;
      }
      ++d.compared;
      if (aspect == Aspect::Emotion) {
        const EmotionSet& ea = *a->emotions;
        const EmotionSet& eb = *b->emotions;
        if (ea == eb) {
          ++d.same;
        } else {
          ++d.diff;
          any = true;
          if (ea.none() != eb.none()) ++d.neutral_vs_nonneutral;
        }
      } else {
        const int la = *a->label(aspect);
        const int lb = *b->label(aspect);
        if (la == lb) {
          ++d.same;
        } else {
          ++d.diff;
          any = true;
          if ((la == 0) != (lb == 0)) ++d.neutral_vs_nonneutral;
        }
      }
    }
    if (any) ++r.pairs_any_diff;
  }
  return r;
}

std::vector<ParaphraseRecord> read_ppdb(const std::string& path) {
  std::vector<ParaphraseRecord> out;
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 3) throw SchemaError(path, line, "expected w1<TAB>w2<TAB>pos");
    const auto pos = parse_pos(f[2]);
    if (!pos) throw SchemaError(path, line, "unknown part of speech '" + f[2] + "'");
    out.push_back({text::lower(text::trim(f[0])), text::lower(text::trim(f[1])), *pos});
  });
  return out;
}

SynsetMap read_synsets(const std::string& path) {
  SynsetMap out;
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 2) throw SchemaError(path, line, "expected word<TAB>syn1,syn2,...");
    const std::string w = text::lower(text::trim(f[0]));
    for (const auto& s : text::split(f[1], ',')) {
      const std::string syn = text::lower(text::trim(s));
      if (syn.empty() || syn == w) continue;
      out[w].insert(syn);
      out[syn].insert(w);
    }
  });
  return out;
}

std::string divergence_csv(const DivergenceReport& r) {
  std::ostringstream os;
  char buf[256];
  os << "aspect,compared,pct_same,pct_diff,pct_neutral_vs_nonneutral_among_diffs,skipped\n";
  for (const auto& [aspect, d] : r.aspects) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%.4f,%.4f,%zu\n", std::string(aspect_name(aspect)).c_str(), d.compared,
                  d.pct_same(), d.pct_diff(), d.pct_neutral_among_diffs(), d.skipped);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "ANY,%zu,%.4f,%.4f,,\n", r.pairs, 100.0 - r.pct_any_diff(), r.pct_any_diff());
  os << buf;
  return os.str();
}

std::string divergence_table(const DivergenceReport& r) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %8s %8s %8s %10s\n", "aspect", "pairs", "%same", "%diff", "%neu/non");
  os << buf;
  for (const auto& [aspect, d] : r.aspects) {
    std::snprintf(buf, sizeof buf, "%-12s %8zu %8.1f %8.1f %10.1f\n", std::string(aspect_name(aspect)).c_str(), d.compared,
                  d.pct_same(), d.pct_diff(), d.pct_neutral_among_diffs());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%zu pairs, %.1f%% differ in some aspect\n", r.pairs, r.pct_any_diff());
  os << buf;
  return os.str();
}

}  // namespace conn

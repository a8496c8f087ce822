#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

struct SynonymPair {
  std::string word_a;  // word_a < word_b
  std::string word_b;
  Pos pos = Pos::Noun;

  auto operator<=>(const SynonymPair&) const = default;
};

struct ParaphraseRecord {
  std::string w1;
  std::string w2;
  Pos pos = Pos::Noun;
};

using SynsetMap = std::map<std::string, std::set<std::string>>;

/// Index of lexicon entries by (word, pos).
class LexiconIndex {
 public:
  explicit LexiconIndex(const std::vector<LexiconEntry>& entries);
  const LexiconEntry* find(const std::string& word, Pos pos) const;

 private:
  std::map<std::pair<std::string, Pos>, const LexiconEntry*> index_;
};

/// Keeps paraphrase pairs where one word is in the other's synset and both
/// (word, pos) keys are in the lexicon. Unordered duplicates collapse; the
/// result is sorted.
std::vector<SynonymPair> select_pairs(const std::vector<ParaphraseRecord>& paraphrases, const SynsetMap& synsets,
                                      const LexiconIndex& lexicon);

struct AspectDivergence {
  std::size_t compared = 0;  // pairs where both sides carry the aspect
  std::size_t same = 0;
  std::size_t diff = 0;
  std::size_t neutral_vs_nonneutral = 0;  // among diffs
  std::size_t skipped = 0;                // pairs lacking the aspect on either side

  double pct_same() const { return compared ? 100.0 * static_cast<double>(same) / static_cast<double>(compared) : 0.0; }
  double pct_diff() const { return compared ? 100.0 * static_cast<double>(diff) / static_cast<double>(compared) : 0.0; }
  double pct_neutral_among_diffs() const {
    return diff ? 100.0 * static_cast<double>(neutral_vs_nonneutral) / static_cast<double>(diff) : 0.0;
  }
};

struct DivergenceReport {
  std::size_t pairs = 0;
  std::size_t pairs_any_diff = 0;
  std::map<Aspect, AspectDivergence> aspects;

  double pct_any_diff() const {
    return pairs ? 100.0 * static_cast<double>(pairs_any_diff) / static_cast<double>(pairs) : 0.0;
  }
};

/// Throws std::invalid_argument on an empty pair list or a pair missing from
/// the lexicon.
DivergenceReport divergence_report(const std::vector<SynonymPair>& pairs, const LexiconIndex& lexicon);

std::vector<ParaphraseRecord> read_ppdb(const std::string& path);
/// synsets.tsv: word<TAB>syn1,syn2,...  Result is symmetric-closed.
SynsetMap read_synsets(const std::string& path);

std::string divergence_csv(const DivergenceReport& r);
std::string divergence_table(const DivergenceReport& r);

}  // namespace conn

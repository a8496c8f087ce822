#include "conn/lexicon/compiler.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

namespace conn {

double normalize_scale(double raw, double observed_min, double observed_max) {
  if (!(observed_max > observed_min)) throw std::domain_error("constant-scale source");
  const double x = 2.0 * (raw - observed_min) / (observed_max - observed_min) - 1.0;
  return std::clamp(x, -1.0, 1.0);
}

int threshold_label(double x, double theta) {
  if (x >= theta) return 1;
  if (x <= -theta) return -1;
  return 0;
}

HgiMapping map_hgi_sense(const HgiRecord& record, const RuleTable& rules) {
  HgiMapping out;
  for (const auto& c : record.categories)
    if (!rules.is_known_category(c)) ++out.unknown_categories;

  SenseLabel polarity;
  for (const auto& tier : rules.polarity_tiers) {
    bool pos = false;
    bool neg = false;
    for (const auto& c : record.categories) {
      const auto it = tier.find(c);
      if (it == tier.end()) continue;
      (it->second > 0 ? pos : neg) = true;
    }
    if (pos && neg) {
      polarity = {0, true};
      break;
    }
    if (pos || neg) {
      polarity = {pos ? 1 : -1, false};
      break;
    }
  }

  for (const auto& [aspect, cats] : rules.aspect_categories) {
    const bool hit = std::any_of(record.categories.begin(), record.categories.end(),
                                 [&](const std::string& c) { return cats.contains(c); });
    if (hit) out.labels[aspect] = polarity;
  }
  return out;
}

int aggregate_senses(std::span<const int> sense_labels) {
  if (sense_labels.empty()) throw std::invalid_argument("aggregate_senses: empty label list");
  long pos = 0;
  long neg = 0;
  for (int l : sense_labels) {
    if (l > 0) ++pos;
    if (l < 0) ++neg;
  }
  if (pos > neg) return 1;
  if (neg > pos) return -1;
  return 0;
}

namespace {

using Key = std::pair<std::string, Pos>;

struct Pending {
  std::map<Aspect, std::vector<int>> votes;
  std::set<Aspect> conflicted;
};

}  // namespace

CompiledLexicon compile_lexicon(const SourceSet& sources, const RuleTable& rules) {
  CompiledLexicon result;
  std::map<Key, Pending> pending;
  std::map<std::string, std::set<Pos>> word_pos;

  for (const auto& r : sources.hgi) {
    const HgiMapping m = map_hgi_sense(r, rules);
    result.stats.unknown_categories += m.unknown_categories;
    auto& p = pending[{r.word, r.pos}];
    word_pos[r.word].insert(r.pos);
    for (const auto& [aspect, sl] : m.labels) {
      p.votes[aspect].push_back(sl.label);
      if (sl.conflict) {
        p.conflicted.insert(aspect);
        ++result.stats.conflicts;
      }
    }
  }

  for (const auto& r : sources.cwn) {
    auto& p = pending[{r.word, r.pos}];
    word_pos[r.word].insert(r.pos);
    p.votes[Aspect::Sentiment].push_back(threshold_label(2.0 * r.score - 1.0, rules.theta_sentiment));
  }

  if (!sources.dal.empty()) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : sources.dal) {
      lo = std::min(lo, r.imagery);
      hi = std::max(hi, r.imagery);
    }
    for (const auto& r : sources.dal) {
      const auto it = word_pos.find(r.word);
      if (it == word_pos.end()) continue;
      const int label = threshold_label(normalize_scale(r.imagery, lo, hi), rules.theta_factuality);
      for (Pos pos : it->second) pending[{r.word, pos}].votes[Aspect::Factuality].push_back(label);
    }
  }

  std::map<std::string, EmotionSet> emotions;
  for (const auto& r : sources.nrc) {
    auto& set = emotions[r.word];
    if (r.flag) set.set(r.emotion);
  }

  for (auto& [key, p] : pending) {
    LexiconEntry e;
    e.word = key.first;
    e.pos = key.second;
    for (auto& [aspect, votes] : p.votes) {
      e.labels[aspect] = aggregate_senses(votes);
      std::string source = aspect == Aspect::Factuality ? "DAL" : aspect == Aspect::Sentiment ? "CWN" : "HGI";
      if (p.conflicted.contains(aspect)) source += ":conflict";
      e.provenance[aspect] = std::move(source);
    }
    if (const auto it = emotions.find(e.word); it != emotions.end()) {
      e.emotions = it->second;
      e.provenance[Aspect::Emotion] = "NRC";
    }
    e.fully_labeled = compute_fully_labeled(e);
    if (e.fully_labeled) ++result.stats.fully_labeled;
    result.entries.push_back(std::move(e));
  }
  result.stats.entries = result.entries.size();
  return result;
}

}  // namespace conn

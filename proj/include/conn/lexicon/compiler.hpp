#pragma once

#include <map>
#include <span>
#include <vector>

#include "conn/lexicon/aspect.hpp"
#include "conn/lexicon/rules.hpp"
#include "conn/lexicon/sources.hpp"

namespace conn {

/// Affine map of [observed_min, observed_max] onto [-1, 1].
/// Throws std::domain_error("constant-scale source") when min == max.
double normalize_scale(double raw, double observed_min, double observed_max);

/// -1 if x <= -theta, +1 if x >= theta, 0 otherwise.
int threshold_label(double x, double theta);

struct SenseLabel {
  int label = 0;
  bool conflict = false;
};

struct HgiMapping {
  std::map<Aspect, SenseLabel> labels;
  std::size_t unknown_categories = 0;
};

/// Labels one inquirer sense: every aspect whose category set intersects the
/// sense's categories receives the polarity resolved from the polarity tiers.
HgiMapping map_hgi_sense(const HgiRecord& record, const RuleTable& rules);

/// Majority vote over the non-neutral labels; ties and all-neutral give 0.
int aggregate_senses(std::span<const int> sense_labels);

struct CompileStats {
  std::size_t unknown_categories = 0;
  std::size_t conflicts = 0;
  std::size_t entries = 0;
  std::size_t fully_labeled = 0;
};

struct CompiledLexicon {
  std::vector<LexiconEntry> entries;  // sorted by (word, pos)
  CompileStats stats;
};

/// Builds noun/adjective entries. Social Value, Politeness and Impact come from
/// the inquirer; Factuality from DAL imagery; Sentiment from CWN; Emotion from
/// NRC. DAL and NRC carry no part of speech, so their labels attach to every
/// noun/adjective entry of the word created by the inquirer or CWN.
CompiledLexicon compile_lexicon(const SourceSet& sources, const RuleTable& rules);

}  // namespace conn

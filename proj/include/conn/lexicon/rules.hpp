#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

/// Distant-labeling rule table: which General Inquirer categories signal each
/// aspect, how polarity is resolved from the polarity categories, and the
/// thresholds applied to the real-valued sources.
struct RuleTable {
  /// Per aspect, the inquirer categories that mark a sense as bearing that
  /// aspect. Categories are stored lowercased. A category may feed several
  /// aspects (e.g. WlbPt marks Social Value, Politeness and Impact).
  std::map<Aspect, std::set<std::string>> aspect_categories;

  /// Polarity evidence, highest precedence first. Each tier maps a lowercased
  /// category to its sign (+1/-1). The first tier holding any evidence
  /// decides; opposing signs within that tier resolve to 0.
  std::vector<std::map<std::string, int>> polarity_tiers;

  double theta_factuality = 0.25;
  double theta_sentiment = 0.25;

  static RuleTable defaults();

  /// Key/value text file (`key = value`, '#' comments). Recognized keys:
  ///   theta_factuality, theta_sentiment
  ///   aspect.<AspectName> = Cat1, Cat2, ...
  ///   polarity.<n> = Cat:+, Cat:-, ...      (n = 1 is highest precedence)
  /// Keys present in the file replace the corresponding default entries.
  static RuleTable load(const std::string& path);

  /// Throws ConfigError if thresholds are outside (0,1) or a tier maps a
  /// category twice.
  void validate() const;

  bool is_known_category(const std::string& lowercase_category) const;
};

}  // namespace conn

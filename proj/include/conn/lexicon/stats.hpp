#pragma once

#include <map>
#include <span>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

struct AspectDistribution {
  double pct_positive = 0.0;
  double pct_negative = 0.0;
  double pct_neutral = 0.0;
};

struct ClassDistribution {
  std::size_t fully_labeled = 0;
  std::map<Aspect, AspectDistribution> aspects;  // non-emotion noun/adjective aspects
  double pct_with_emotion = 0.0;                 // % with at least one emotion
  double mean_emotions = 0.0;                    // mean count among those words
};

/// Distribution over fully-labeled entries. Throws std::invalid_argument when
/// the lexicon is empty or has no fully-labeled noun/adjective entry.
ClassDistribution class_distribution(std::span<const LexiconEntry> lexicon);

/// Full agreement report for one aspect.
struct AgreementReport {
  double fleiss_kappa = 0.0;
  double mean_pairwise_pct = 0.0;  // mean over annotator pairs of % agreement
  double lexicon_pct = 0.0;        // lexicon vs majority annotator label
  double lexicon_nc_pct = 0.0;     // same, non-conflicting agreement
  double cohen_kappa = 0.0;        // lexicon vs majority annotator label
  std::size_t words = 0;
  std::size_t excluded_no_majority = 0;
};

/// Items x raters matrix of labels in {-1,0,1}.
using AnnotationMatrix = std::vector<std::vector<int>>;

double fleiss_kappa(const AnnotationMatrix& annotations, std::span<const int> categories);
double cohen_kappa(std::span<const int> a, std::span<const int> b, std::span<const int> categories);
double percent_agreement(std::span<const int> a, std::span<const int> b);
/// (x, y) agree unless {x, y} = {+1, -1}.
double nc_percent_agreement(std::span<const int> a, std::span<const int> b);
/// Unique most-frequent label of one row, or nullopt on a tie for the top count.
std::optional<int> majority_label(std::span<const int> row);

/// Throws std::invalid_argument for fewer than two annotators, ragged rows, or
/// a size mismatch with the lexicon labels.
AgreementReport agreement_metrics(const AnnotationMatrix& annotations, std::span<const int> lexicon_labels);

}  // namespace conn

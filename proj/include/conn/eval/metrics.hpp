#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace conn {

/// Unweighted mean of per-class F1 over `classes`. A class absent from both
/// gold and predictions scores F1 = 0.
double macro_f1(std::span<const int> preds, std::span<const int> golds, std::span<const int> classes);

struct Confusion {
  std::vector<int> classes;
  std::vector<std::vector<std::size_t>> counts;  // [gold][pred]
};
Confusion confusion_matrix(std::span<const int> preds, std::span<const int> golds, std::span<const int> classes);

/// Paired sign-flip approximate randomization test on per-example scores.
/// p = (1 + #{|delta_shuffled| >= |delta_observed|}) / (1 + R).
double approx_randomization(std::span<const double> scores_a, std::span<const double> scores_b, int rounds,
                            std::uint64_t seed);

/// Same design for a corpus-level metric: each shuffle swaps the two systems'
/// predictions on each example with probability 1/2 and recomputes the metric.
using CorpusMetric = std::function<double(std::span<const int> preds, std::span<const int> golds)>;
double approx_randomization_metric(std::span<const int> preds_a, std::span<const int> preds_b,
                                   std::span<const int> golds, const CorpusMetric& metric, int rounds,
                                   std::uint64_t seed);

/// p-value from a precomputed null distribution of shuffled deltas.
double randomization_p_value(std::span<const double> null_deltas, double observed_delta);

}  // namespace conn

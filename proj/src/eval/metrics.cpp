#include "conn/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conn/core/rng.hpp"

namespace conn {

Confusion confusion_matrix(std::span<const int> preds, std::span<const int> golds, std::span<const int> classes) {
  if (preds.size() != golds.size()) throw std::invalid_argument("confusion_matrix: length mismatch");
  Confusion c;
  c.classes.assign(classes.begin(), classes.end());
  c.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  auto index = [&](int label) -> std::size_t {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw std::invalid_argument("label " + std::to_string(label) + " not among the classes");
    return static_cast<std::size_t>(it - classes.begin());
  };
  for (std::size_t i = 0; i < preds.size(); ++i) ++c.counts[index(golds[i])][index(preds[i])];
  return c;
}

double macro_f1(std::span<const int> preds, std::span<const int> golds, std::span<const int> classes) {
  if (preds.empty()) throw std::invalid_argument("macro_f1: empty input");
  if (classes.empty()) throw std::invalid_argument("macro_f1: no classes");
  const Confusion c = confusion_matrix(preds, golds, classes);
  double sum = 0.0;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    std::size_t tp = c.counts[k][k];
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t j = 0; j < classes.size(); ++j) {
      if (j == k) continue;
      fp += c.counts[j][k];
      fn += c.counts[k][j];
    }
    const std::size_t denom = 2 * tp + fp + fn;
    sum += denom ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
  }
  return sum / static_cast<double>(classes.size());
}

double randomization_p_value(std::span<const double> null_deltas, double observed_delta) {
  const double obs = std::abs(observed_delta);
  // relative slack so that ties survive floating-point summation order
  const double slack = 1e-12 * std::max(1.0, obs);
  std::size_t count = 0;
  for (double d : null_deltas) count += std::abs(d) >= obs - slack;
  return (1.0 + static_cast<double>(count)) / (1.0 + static_cast<double>(null_deltas.size()));
}

double approx_randomization(std::span<const double> scores_a, std::span<const double> scores_b, int rounds,
                            std::uint64_t seed) {
  if (scores_a.size() != scores_b.size()) throw std::invalid_argument("approx_randomization: length mismatch");
  if (rounds < 1) throw std::invalid_argument("approx_randomization: rounds must be >= 1");
  double observed = 0.0;
  for (std::size_t i = 0; i < scores_a.size(); ++i) observed += scores_a[i] - scores_b[i];
  Rng rng(seed);
  std::vector<double> null(static_cast<std::size_t>(rounds));
  for (auto& d : null) {
    double delta = 0.0;
    for (std::size_t i = 0; i < scores_a.size(); ++i) {
      const double diff = scores_a[i] - scores_b[i];
      delta += rng.coin() ? -diff : diff;
    }
    d = delta;
  }
  return randomization_p_value(null, observed);
}

double approx_randomization_metric(std::span<const int> preds_a, std::span<const int> preds_b,
                                   std::span<const int> golds, const CorpusMetric& metric, int rounds,
                                   std::uint64_t seed) {
  if (preds_a.size() != preds_b.size() || preds_a.size() != golds.size())
    throw std::invalid_argument("approx_randomization_metric: length mismatch");
  if (rounds < 1) throw std::invalid_argument("approx_randomization_metric: rounds must be >= 1");
  const double observed = metric(preds_a, golds) - metric(preds_b, golds);
  Rng rng(seed);
  std::vector<int> a(preds_a.begin(), preds_a.end());
  std::vector<int> b(preds_b.begin(), preds_b.end());
  std::vector<double> null(static_cast<std::size_t>(rounds));
  for (auto& d : null) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool swap = rng.coin();
      a[i] = swap ? preds_b[i] : preds_a[i];
      b[i] = swap ? preds_a[i] : preds_b[i];
    }
    d = metric(a, golds) - metric(b, golds);
  }
  return randomization_p_value(null, observed);
}

}  // namespace conn

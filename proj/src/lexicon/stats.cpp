#include "conn/lexicon/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace conn {

ClassDistribution class_distribution(std::span<const LexiconEntry> lexicon) {
  if (lexicon.empty()) throw std::invalid_argument("class_distribution: empty lexicon");
  ClassDistribution d;
  std::map<Aspect, std::array<std::size_t, 3>> counts;
  std::size_t with_emotion = 0;
  std::size_t emotion_total = 0;
  for (const auto& e : lexicon) {
    if (!e.fully_labeled || e.pos == Pos::Verb) continue;
    ++d.fully_labeled;
    for (const auto& [aspect, label] : e.labels) ++counts[aspect][static_cast<std::size_t>(label + 1)];
    const std::size_t n = e.emotions->count();
    if (n > 0) {
      ++with_emotion;
      emotion_total += n;
    }
  }
  if (d.fully_labeled == 0) throw std::invalid_argument("class_distribution: no fully-labeled words");
  const double total = static_cast<double>(d.fully_labeled);
  for (const auto& [aspect, c] : counts) {
    d.aspects[aspect] = {100.0 * static_cast<double>(c[2]) / total, 100.0 * static_cast<double>(c[0]) / total,
                         100.0 * static_cast<double>(c[1]) / total};
  }
  d.pct_with_emotion = 100.0 * static_cast<double>(with_emotion) / total;
  d.mean_emotions = with_emotion ? static_cast<double>(emotion_total) / static_cast<double>(with_emotion) : 0.0;
  return d;
}

double fleiss_kappa(const AnnotationMatrix& annotations, std::span<const int> categories) {
  if (annotations.empty()) throw std::invalid_argument("fleiss_kappa: no items");
  const std::size_t raters = annotations.front().size();
  if (raters < 2) throw std::invalid_argument("fleiss_kappa: need at least two raters");
  const double n = static_cast<double>(raters);
  std::vector<double> category_totals(categories.size(), 0.0);
  double p_bar = 0.0;
  for (const auto& row : annotations) {
    if (row.size() != raters) throw std::invalid_argument("fleiss_kappa: ragged annotation matrix");
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < categories.size(); ++j) {
      const auto nij = static_cast<double>(std::count(row.begin(), row.end(), categories[j]));
      category_totals[j] += nij;
      sum_sq += nij * nij;
    }
    p_bar += (sum_sq - n) / (n * (n - 1.0));
  }
  const double items = static_cast<double>(annotations.size());
  p_bar /= items;
  double p_e = 0.0;
  for (double t : category_totals) {
    const double pj = t / (items * n);
    p_e += pj * pj;
  }
  if (p_e >= 1.0) return p_bar >= 1.0 ? 1.0 : 0.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

double cohen_kappa(std::span<const int> a, std::span<const int> b, std::span<const int> categories) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("cohen_kappa: size mismatch or empty");
  const double n = static_cast<double>(a.size());
  double p_o = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) p_o += a[i] == b[i] ? 1.0 : 0.0;
  p_o /= n;
  double p_e = 0.0;
  for (int c : categories) {
    const auto ca = static_cast<double>(std::count(a.begin(), a.end(), c));
    const auto cb = static_cast<double>(std::count(b.begin(), b.end(), c));
    p_e += (ca / n) * (cb / n);
  }
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

double percent_agreement(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("percent_agreement: size mismatch or empty");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return 100.0 * static_cast<double>(same) / static_cast<double>(a.size());
}

double nc_percent_agreement(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("nc_percent_agreement: size mismatch or empty");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ok += a[i] * b[i] >= 0;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(a.size());
}

std::optional<int> majority_label(std::span<const int> row) {
  std::map<int, std::size_t> counts;
  for (int l : row) ++counts[l];
  std::optional<int> best;
  std::size_t best_count = 0;
  bool tie = false;
  for (const auto& [label, c] : counts) {
    if (c > best_count) {
      best = label;
      best_count = c;
      tie = false;
    } else if (c == best_count) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return best;
}

AgreementReport agreement_metrics(const AnnotationMatrix& annotations, std::span<const int> lexicon_labels) {
  if (annotations.size() != lexicon_labels.size())
    throw std::invalid_argument("agreement_metrics: annotation rows and lexicon labels differ in length");
  if (annotations.empty()) throw std::invalid_argument("agreement_metrics: no words");
  const std::size_t raters = annotations.front().size();
  if (raters < 2) throw std::invalid_argument("agreement_metrics: need at least two annotators");

  static constexpr int kCategories[] = {-1, 0, 1};
  AgreementReport r;
  r.words = annotations.size();
  r.fleiss_kappa = fleiss_kappa(annotations, kCategories);

  double pairwise = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < raters; ++a) {
    for (std::size_t b = a + 1; b < raters; ++b) {
      std::vector<int> ca;
      std::vector<int> cb;
      for (const auto& row : annotations) {
        ca.push_back(row[a]);
        cb.push_back(row[b]);
      }
      pairwise += percent_agreement(ca, cb);
      ++pairs;
    }
  }
  r.mean_pairwise_pct = pairwise / static_cast<double>(pairs);

  std::vector<int> majority;
  std::vector<int> lexicon;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto m = majority_label(annotations[i]);
    if (!m) {
      ++r.excluded_no_majority;
      continue;
    }
    majority.push_back(*m);
    lexicon.push_back(lexicon_labels[i]);
  }
  if (!majority.empty()) {
    r.lexicon_pct = percent_agreement(lexicon, majority);
    r.lexicon_nc_pct = nc_percent_agreement(lexicon, majority);
    r.cohen_kappa = cohen_kappa(lexicon, majority, kCategories);
  }
  return r;
}

}  // namespace conn

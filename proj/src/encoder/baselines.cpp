#include "conn/encoder/baselines.hpp"

#include <spdlog/spdlog.h>

#include "conn/nn/lbfgs.hpp"

namespace conn {

std::vector<double> inverse_frequency(const std::vector<int>& y, int classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (int c : y) ++counts.at(static_cast<std::size_t>(c));
  std::vector<double> w(static_cast<std::size_t>(classes), 0.0);
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c])
      w[c] = static_cast<double>(y.size()) / (static_cast<double>(classes) * static_cast<double>(counts[c]));
  return w;
}

namespace {

// Weighted multinomial cross-entropy with an L2 penalty on the weights (not
// the bias), minimized by L-BFGS. Works for dense and sparse row matrices.
template <typename X>
Eigen::MatrixXd fit_softmax(const X& x, const std::vector<int>& y, const std::vector<double>& cw, int classes,
                            double l2) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Eigen::VectorXd sample_w(n);
  for (Eigen::Index i = 0; i < n; ++i) sample_w(i) = cw.at(static_cast<std::size_t>(y[static_cast<std::size_t>(i)]));
  const double norm = sample_w.sum();
  if (!(norm > 0)) throw std::invalid_argument("LR: all sample weights are zero");

  auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    // theta holds W (C x d, column-major) followed by the bias (C)
    const Eigen::Map<const Eigen::MatrixXd> w(theta.data(), classes, d);
    const Eigen::Map<const Eigen::VectorXd> b(theta.data() + classes * d, classes);
    Eigen::MatrixXd logits = x * w.transpose();  // n x C
    logits.rowwise() += b.transpose();
    Eigen::MatrixXd dlogits(n, classes);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = logits.row(i).maxCoeff();
      const Eigen::RowVectorXd e = (logits.row(i).array() - m).exp();
      const double z = e.sum();
      const int yi = y[static_cast<std::size_t>(i)];
      loss += sample_w(i) * (std::log(z) + m - logits(i, yi));
      dlogits.row(i) = sample_w(i) * e / z;
      dlogits(i, yi) -= sample_w(i);
    }
    Eigen::Map<Eigen::MatrixXd> gw(grad.data(), classes, d);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + classes * d, classes);
    gw = (x.transpose() * dlogits).transpose() / norm + l2 * w;
    gb = dlogits.colwise().sum().transpose() / norm;
    return loss / norm + 0.5 * l2 * w.squaredNorm();
  };
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(classes * (d + 1));
  nn::lbfgs_minimize(objective, theta, {.history = 10, .max_iterations = 500});
  Eigen::MatrixXd out(classes, d + 1);
  out.leftCols(d) = Eigen::Map<const Eigen::MatrixXd>(theta.data(), classes, d);
  out.col(d) = theta.tail(classes);
  return out;
}

}  // namespace

void LogisticRegression::fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                             std::optional<std::vector<double>> class_weights) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw std::invalid_argument("LR: row/label count mismatch");
  if (y.empty()) throw std::invalid_argument("LR: no training data");
  w_ = fit_softmax(x, y, class_weights ? *class_weights : inverse_frequency(y, classes_), classes_, l2_);
}

void LogisticRegression::fit(const SparseRows& x, const std::vector<int>& y,
                             std::optional<std::vector<double>> class_weights) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw std::invalid_argument("LR: row/label count mismatch");
  if (y.empty()) throw std::invalid_argument("LR: no training data");
  w_ = fit_softmax(x, y, class_weights ? *class_weights : inverse_frequency(y, classes_), classes_, l2_);
}

Eigen::MatrixXd LogisticRegression::scores(const SparseRows& x) const {
  Eigen::MatrixXd s = x * w_.leftCols(w_.cols() - 1).transpose();
  s.rowwise() += w_.col(w_.cols() - 1).transpose();
  return s;
}

Eigen::VectorXd LogisticRegression::scores(const Eigen::VectorXd& x) const {
  return w_.leftCols(w_.cols() - 1) * x + w_.col(w_.cols() - 1);
}

int LogisticRegression::predict(const Eigen::VectorXd& x) const {
  Eigen::Index best = 0;
  scores(x).maxCoeff(&best);
  return static_cast<int>(best);
}

namespace {

Eigen::MatrixXd features(const std::vector<const Example*>& xs, const EmbeddingTable& pretrained) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()), pretrained.dim());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i]->input.self) m.row(static_cast<Eigen::Index>(i)) = pretrained.vector(*xs[i]->input.self).cast<double>();
  return m;
}

int majority(const std::vector<int>& y, int classes) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
  for (int c : y) ++counts[static_cast<std::size_t>(c)];
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

}  // namespace

BaselineReport run_baselines(const std::vector<Example>& train, const std::vector<Example>& test,
                             const EmbeddingTable& pretrained, const std::vector<Aspect>& aspects) {
  BaselineReport rep;
  std::vector<const Example*> test_ptrs;
  for (const auto& ex : test) test_ptrs.push_back(&ex);
  std::vector<Prediction> maj(test.size()), lr(test.size());
  const Eigen::MatrixXd test_x = features(test_ptrs, pretrained);
  std::vector<Aspect> lr_aspects;

  for (const Aspect a : aspects) {
    std::vector<const Example*> xs;
    for (const auto& ex : train)
      if (ex.has(a)) xs.push_back(&ex);
    if (xs.empty()) continue;
    const Eigen::MatrixXd train_x = features(xs, pretrained);

    if (a == Aspect::Emotion) {
      EmotionSet maj_set, lr_constant;
      std::vector<LogisticRegression> models(kEmotionCount);
      std::vector<bool> degenerate(kEmotionCount, false);
      for (std::size_t e = 0; e < kEmotionCount; ++e) {
        std::vector<int> y;
        for (const auto* ex : xs) y.push_back((*ex->emotions)[e]);
        const int m = majority(y, 2);
        maj_set[e] = m == 1;
        degenerate[e] = std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });
        if (!degenerate[e]) {
          models[e] = LogisticRegression(2);
          models[e].fit(train_x, y);
        } else {
          lr_constant[e] = y.front() == 1;
        }
      }
      for (std::size_t i = 0; i < test.size(); ++i) {
        if (!applies_to(a, test[i].input.pos)) continue;
        maj[i].emotions = maj_set;
        EmotionSet s;
        for (std::size_t e = 0; e < kEmotionCount; ++e)
          s[e] = degenerate[e] ? lr_constant[e] : models[e].predict(test_x.row(static_cast<Eigen::Index>(i)).transpose()) == 1;
        lr[i].emotions = s;
      }
      lr_aspects.push_back(a);
      continue;
    }

    std::vector<int> y;
    for (const auto* ex : xs) y.push_back(ex->classes.at(a));
    const int C = class_count(a);
    const int m = majority(y, C);
    const bool single = std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });
    LogisticRegression model(C);
    if (single) {
      spdlog::warn("LR baseline skipped for {}: training data has a single class", aspect_name(a));
      rep.lr_skipped.push_back(a);
    } else {
      model.fit(train_x, y);
      lr_aspects.push_back(a);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (!applies_to(a, test[i].input.pos)) continue;
      maj[i].classes[a] = m;
      if (!single) lr[i].classes[a] = model.predict(test_x.row(static_cast<Eigen::Index>(i)).transpose());
    }
  }
  rep.maj = score_predictions(test_ptrs, maj, aspects);
  rep.lr = score_predictions(test_ptrs, lr, lr_aspects);
  return rep;
}

}  // namespace conn

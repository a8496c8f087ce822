#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "conn/core/embeddings.hpp"
#include "conn/encoder/dataset.hpp"
#include "conn/encoder/trainer.hpp"

namespace conn {

/// Multinomial logistic regression with per-class sample weights and an L2
/// penalty, fitted by L-BFGS. Classes are 0..C-1.
class LogisticRegression {
 public:
  LogisticRegression() = default;
  LogisticRegression(int classes, double l2 = 1e-4) : classes_(classes), l2_(l2) {}

  using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  /// Rows of `x` are examples. `class_weights` defaults to inverse frequency.
  void fit(const Eigen::MatrixXd& x, const std::vector<int>& y, std::optional<std::vector<double>> class_weights = {});
  void fit(const SparseRows& x, const std::vector<int>& y, std::optional<std::vector<double>> class_weights = {});
  int predict(const Eigen::VectorXd& x) const;
  Eigen::VectorXd scores(const Eigen::VectorXd& x) const;
  /// Class scores for every row of a sparse matrix (rows x C).
  Eigen::MatrixXd scores(const SparseRows& x) const;

  const Eigen::MatrixXd& weights() const { return w_; }  // C x (d + 1), bias last

 private:
  int classes_ = 2;
  double l2_ = 1e-4;
  Eigen::MatrixXd w_;
};

/// Inverse-frequency weights n / (C * count_c); absent classes get 0.
std::vector<double> inverse_frequency(const std::vector<int>& y, int classes);

struct BaselineReport {
  AspectScores maj;
  AspectScores lr;
  std::vector<Aspect> lr_skipped;  // single-class training data
};

/// Maj predicts each aspect's most frequent training class (lowest index on
/// ties; for emotions, each flag's majority). LR fits one classifier per
/// aspect (one binary classifier per emotion) on the pretrained headword
/// vector, zeros for headwords without one.
BaselineReport run_baselines(const std::vector<Example>& train, const std::vector<Example>& test,
                             const EmbeddingTable& pretrained, const std::vector<Aspect>& aspects);

}  // namespace conn

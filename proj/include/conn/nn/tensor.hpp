#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace conn::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// A trainable tensor (at most two dimensions) with its gradient slot.
template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;

  Parameter() = default;
  Parameter(std::string n, Index rows, Index cols)
      : name(std::move(n)), value(Matrix<T>::Zero(rows, cols)), grad(Matrix<T>::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
};

template <typename T>
using ParameterList = std::vector<Parameter<T>*>;

template <typename T>
void zero_grads(const ParameterList<T>& params) {
  for (auto* p : params) p->zero_grad();
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
  return m.allFinite();
}

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) {
    const T z = std::exp(-x);
    return T(1) / (T(1) + z);
  }
  const T z = std::exp(x);
  return z / (T(1) + z);
}

}  // namespace conn::nn

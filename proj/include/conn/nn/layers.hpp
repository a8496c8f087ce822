#pragma once

#include <cmath>
#include <stdexcept>

#include "conn/core/rng.hpp"
#include "conn/nn/tensor.hpp"

namespace conn::nn {

// ---------------------------------------------------------------------------
// Scaled dot-product attention with a single query.

template <typename T>
struct AttentionTrace {
  Vector<T> weights;  // softmax weights over the n rows
};

/// softmax(keys * query / sqrt(d))^T * values. keys and values are n x d.
template <typename T>
Vector<T> scaled_dot_attention(const Vector<T>& query, const Matrix<T>& keys, const Matrix<T>& values,
                               AttentionTrace<T>* trace = nullptr) {
  if (keys.rows() == 0) throw std::invalid_argument("no attention targets");
  if (keys.cols() != query.size() || values.rows() != keys.rows())
    throw std::invalid_argument("attention dimension mismatch");
  const T scale = T(1) / std::sqrt(static_cast<T>(query.size()));
  Vector<T> scores = keys * query * scale;
  scores.array() -= scores.maxCoeff();
  Vector<T> w = scores.array().exp().matrix();
  w /= w.sum();
  Vector<T> out = values.transpose() * w;
  if (trace) trace->weights = std::move(w);
  return out;
}

template <typename T>
void scaled_dot_attention_backward(const Vector<T>& query, const Matrix<T>& keys, const Matrix<T>& values,
                                   const AttentionTrace<T>& trace, const Vector<T>& d_out, Vector<T>* d_query,
                                   Matrix<T>* d_keys, Matrix<T>* d_values) {
  const T scale = T(1) / std::sqrt(static_cast<T>(query.size()));
  const Vector<T>& w = trace.weights;
  if (d_values) d_values->noalias() += w * d_out.transpose();
  const Vector<T> dw = values * d_out;
  const Vector<T> ds = w.cwiseProduct((dw.array() - w.dot(dw)).matrix());
  if (d_query) d_query->noalias() += keys.transpose() * ds * scale;
  if (d_keys) d_keys->noalias() += ds * query.transpose() * scale;
}

// ---------------------------------------------------------------------------
// Affine layer y = W x + b.

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, Index in, Index out) : weight(name + ".weight", out, in), bias(name + ".bias", out, 1) {}

  Parameter<T> weight;
  Parameter<T> bias;

  Index in_dim() const { return weight.value.cols(); }
  Index out_dim() const { return weight.value.rows(); }

  /// Glorot-uniform weights, zero bias.
  void init(Rng& rng) {
    const double r = std::sqrt(6.0 / static_cast<double>(in_dim() + out_dim()));
    for (Index i = 0; i < weight.value.size(); ++i) weight.value.data()[i] = static_cast<T>(rng.uniform(-r, r));
    bias.value.setZero();
  }

  ParameterList<T> parameters() { return {&weight, &bias}; }

  Vector<T> forward(const Vector<T>& x) const { return weight.value * x + bias.value.col(0); }

  /// Accumulates parameter grads and returns dL/dx.
  Vector<T> backward(const Vector<T>& x, const Vector<T>& d_y) {
    weight.grad.noalias() += d_y * x.transpose();
    bias.grad.col(0) += d_y;
    return weight.value.transpose() * d_y;
  }
};

// ---------------------------------------------------------------------------
// Losses. Each returns the loss and writes dL/dlogits.

/// -w[target] * log softmax(logits)[target]
template <typename T>
T weighted_softmax_xent(const Vector<T>& logits, Index target, const Vector<T>& class_weights, Vector<T>* d_logits) {
  if (logits.size() < 2) throw std::invalid_argument("softmax cross-entropy needs at least two classes");
  if (target < 0 || target >= logits.size()) throw std::out_of_range("target class out of range");
  if (class_weights.size() != logits.size()) throw std::invalid_argument("class weight size mismatch");
  const T m = logits.maxCoeff();
  const Vector<T> shifted = logits.array() - m;
  const T lse = std::log(shifted.array().exp().sum());
  const T w = class_weights(target);
  if (d_logits) {
    *d_logits = (shifted.array() - lse).exp().matrix() * w;
    (*d_logits)(target) -= w;
  }
  return w * (lse - shifted(target));
}

/// Sum of per-dimension sigmoid binary cross-entropies.
template <typename T, typename Bits>
T binary_ova_xent(const Vector<T>& logits, const Bits& targets, Vector<T>* d_logits) {
  T loss = 0;
  if (d_logits) d_logits->resize(logits.size());
  for (Index i = 0; i < logits.size(); ++i) {
    const T z = logits(i);
    const T y = targets[static_cast<std::size_t>(i)] ? T(1) : T(0);
    loss += std::max(z, T(0)) - z * y + std::log1p(std::exp(-std::abs(z)));
    if (d_logits) (*d_logits)(i) = sigmoid(z) - y;
  }
  return loss;
}

// ---------------------------------------------------------------------------
// Inverted dropout. Kept units are scaled by 1/(1-rate).

template <typename T>
Vector<T> dropout_mask(Index n, double rate, Rng& rng) {
  Vector<T> mask(n);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  for (Index i = 0; i < n; ++i) mask(i) = rng.uniform() < rate ? T(0) : keep_scale;
  return mask;
}

// ---------------------------------------------------------------------------
// L2 normalization v = h / ||h||.

template <typename T>
Vector<T> l2_normalize(const Vector<T>& h) {
  const T n = h.norm();
  if (!(n > T(0))) throw std::domain_error("cannot normalize a zero vector");
  return h / n;
}

/// Gradient through normalization given the normalized output v and ||h||.
template <typename T>
Vector<T> l2_normalize_backward(const Vector<T>& v, T norm, const Vector<T>& d_v) {
  return (d_v - v * v.dot(d_v)) / norm;
}

}  // namespace conn::nn

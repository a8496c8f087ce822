#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conn/nn/tensor.hpp"

namespace conn::nn {

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators for one parameter.
template <typename T>
struct AdamMoments {
  Matrix<T> m;
  Matrix<T> v;
};

/// One bias-corrected Adam update of `value` in place. `step` is the 1-based
/// index of this update.
template <typename T>
void adam_update(Matrix<T>& value, const Matrix<T>& grad, AdamMoments<T>& mom, long step, const AdamOptions& opt) {
  const T b1 = static_cast<T>(opt.beta1);
  const T b2 = static_cast<T>(opt.beta2);
  mom.m = b1 * mom.m + (T(1) - b1) * grad;
  mom.v = b2 * mom.v + (T(1) - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(step));
  const T lr = static_cast<T>(opt.lr);
  const T eps = static_cast<T>(opt.eps);
  value.array() -= lr * (mom.m.array() / static_cast<T>(c1)) / ((mom.v.array() / static_cast<T>(c2)).sqrt() + eps);
}

template <typename T>
class Adam {
 public:
  Adam(ParameterList<T> params, AdamOptions opt = {}) : params_(std::move(params)), opt_(opt) {
    moments_.reserve(params_.size());
    counts_.assign(params_.size(), 0);
    for (auto* p : params_)
      moments_.push_back({Matrix<T>::Zero(p->value.rows(), p->value.cols()), Matrix<T>::Zero(p->value.rows(), p->value.cols())});
  }

  /// Applies the update to every parameter whose index is enabled (all when
  /// `enabled` is empty). Bias correction uses each parameter's own update
  /// count, so skipped parameters are unaffected. Throws std::domain_error
  /// naming the first parameter with a non-finite gradient; no parameter is
  /// modified in that case.
  void step(const std::vector<bool>& enabled = {}) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (!enabled.empty() && !enabled[i]) continue;
      if (!params_[i]->grad.allFinite())
        throw std::domain_error("non-finite gradient in parameter '" + params_[i]->name + "'");
    }
    ++steps_;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (!enabled.empty() && !enabled[i]) continue;
      adam_update(params_[i]->value, params_[i]->grad, moments_[i], ++counts_[i], opt_);
    }
  }

  long steps() const { return steps_; }
  const AdamOptions& options() const { return opt_; }
  const std::vector<AdamMoments<T>>& moments() const { return moments_; }

 private:
  ParameterList<T> params_;
  AdamOptions opt_;
  std::vector<AdamMoments<T>> moments_;
  std::vector<long> counts_;
  long steps_ = 0;
};

}  // namespace conn::nn

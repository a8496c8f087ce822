#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "conn/nn/tensor.hpp"

namespace conn::nn {

struct GradTarget {
  std::string name;
  Matrix<double>* value = nullptr;
  Matrix<double> analytic;  // gradient computed by the code under test
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "name[i]" of the worst coordinate
  std::size_t coordinates = 0;
};

/// Compares analytic gradients with central finite differences of `loss`:
/// max over coordinates of |analytic - numeric| / max(1, |numeric|).
inline GradCheckResult grad_check(const std::function<double()>& loss, std::vector<GradTarget>& targets,
                                  double h = 1e-4) {
  GradCheckResult r;
  for (auto& t : targets) {
    for (Index i = 0; i < t.value->size(); ++i) {
      double& x = t.value->data()[i];
      const double saved = x;
      x = saved + h;
      const double up = loss();
      x = saved - h;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double err = std::abs(t.analytic.data()[i] - numeric) / std::max(1.0, std::abs(numeric));
      ++r.coordinates;
      if (r.worst.empty() || err > r.max_rel_error) {
        r.max_rel_error = err;
        r.worst = t.name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return r;
}

/// Convenience: check every parameter of a model against `loss`, where
/// `compute_grads` zeroes and fills the parameter gradient slots.
inline GradCheckResult grad_check_parameters(const std::function<double()>& loss,
                                             const std::function<void()>& compute_grads,
                                             const ParameterList<double>& params, double h = 1e-4) {
  compute_grads();
  std::vector<GradTarget> targets;
  for (auto* p : params) targets.push_back({p->name, &p->value, p->grad});
  return grad_check(loss, targets, h);
}

}  // namespace conn::nn

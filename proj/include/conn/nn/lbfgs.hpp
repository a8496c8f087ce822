#pragma once

#include <deque>
#include <functional>

#include <Eigen/Dense>

namespace conn::nn {

struct LbfgsOptions {
  int history = 10;
  int max_iterations = 200;
  double grad_tolerance = 1e-6;
  double function_tolerance = 1e-10;
};

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes a smooth function with limited-memory BFGS and a backtracking
/// Armijo line search. `f(x, grad)` returns f(x) and fills grad.
inline LbfgsResult lbfgs_minimize(const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& f,
                                  Eigen::VectorXd& x, const LbfgsOptions& opt = {}) {
  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };
  std::deque<Pair> mem;
  Eigen::VectorXd g(x.size());
  double fx = f(x, g);
  LbfgsResult res;
  Eigen::VectorXd g_new(x.size());
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it;
    if (g.lpNorm<Eigen::Infinity>() < opt.grad_tolerance) {
      res.converged = true;
      break;
    }
    // two-loop recursion
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
      alpha[k] = mem[k].rho * mem[k].s.dot(q);
      q -= alpha[k] * mem[k].y;
    }
    if (!mem.empty()) q *= mem.back().s.dot(mem.back().y) / mem.back().y.squaredNorm();
    for (std::size_t k = 0; k < mem.size(); ++k) {
      const double beta = mem[k].rho * mem[k].y.dot(q);
      q += mem[k].s * (alpha[k] - beta);
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0) {
      dir = -g;
      slope = -g.squaredNorm();
      mem.clear();
    }

    double step = mem.empty() ? std::min(1.0, 1.0 / std::max(1e-12, g.lpNorm<Eigen::Infinity>())) : 1.0;
    Eigen::VectorXd x_new;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * dir;
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    const double f_old = fx;
    x = std::move(x_new);
    fx = f_new;
    g = g_new;
    if (sy > 1e-12) {
      mem.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(mem.size()) > opt.history) mem.pop_front();
    }
    if (std::abs(f_old - fx) <= opt.function_tolerance * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      res.iterations = it + 1;
      break;
    }
  }
  res.value = fx;
  return res;
}

}  // namespace conn::nn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conn {

struct GradCheckRecord {
  std::string op;
  int instance = 0;
  double max_rel_error = 0.0;
  std::string worst;
  std::size_t coordinates = 0;
};

/// Finite-difference checks in double precision over randomly shaped
/// instances of every differentiable building block (LSTM, BiLSTM,
/// attention, affine layer, both losses, normalization, dropout) and the
/// full connotation (CE+R, joint) and stance (BiC+E) losses.
std::vector<GradCheckRecord> run_grad_suite(int instances, std::uint64_t seed, double h = 1e-4);

std::vector<std::string> grad_suite_ops();

}  // namespace conn

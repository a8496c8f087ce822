#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conn/nn/tensor.hpp"

namespace conn::nn {

struct NamedTensor {
  std::string name;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<float> data;  // column-major
};

/// Versioned binary checkpoint: magic "CONNCKPT", u32 version, the producing
/// config as JSON text, then named tensors as little-endian float32.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;
  std::string config_json;
  std::vector<NamedTensor> tensors;

  template <typename T>
  static Checkpoint from(const ParameterList<T>& params, std::string config_json) {
    Checkpoint c;
    c.config_json = std::move(config_json);
    for (const auto* p : params) {
      NamedTensor t{p->name, static_cast<std::uint64_t>(p->value.rows()), static_cast<std::uint64_t>(p->value.cols()), {}};
      t.data.resize(static_cast<std::size_t>(p->value.size()));
      for (Index i = 0; i < p->value.size(); ++i) t.data[static_cast<std::size_t>(i)] = static_cast<float>(p->value.data()[i]);
      c.tensors.push_back(std::move(t));
    }
    return c;
  }

  /// Copies tensors into `params` by name. Throws std::runtime_error on a
  /// missing tensor or a shape mismatch.
  template <typename T>
  void apply(const ParameterList<T>& params) const {
    for (auto* p : params) {
      const NamedTensor& t = find(p->name);
      if (t.rows != static_cast<std::uint64_t>(p->value.rows()) || t.cols != static_cast<std::uint64_t>(p->value.cols()))
        throw std::runtime_error("checkpoint shape mismatch for '" + p->name + "': stored " + std::to_string(t.rows) + "x" +
                                 std::to_string(t.cols) + ", model " + std::to_string(p->value.rows()) + "x" +
                                 std::to_string(p->value.cols()));
      for (Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = static_cast<T>(t.data[static_cast<std::size_t>(i)]);
    }
  }

  const NamedTensor& find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace conn::nn

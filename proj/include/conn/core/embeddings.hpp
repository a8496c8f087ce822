#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace conn {

/// Word vectors stored column-wise (dim x size). Keys are arbitrary strings;
/// pretrained tables use plain words, exported connotation spaces "word|pos".
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Eigen::Index dim) : dim_(dim) {}

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  /// Adds or replaces a vector. Throws std::invalid_argument on a dimension
  /// mismatch or non-finite value.
  void set(const std::string& key, const Eigen::VectorXf& v);

  std::optional<std::size_t> id(std::string_view key) const;
  bool contains(std::string_view key) const { return id(key).has_value(); }
  const std::string& key(std::size_t i) const { return keys_[i]; }
  const std::vector<std::string>& keys() const { return keys_; }

  Eigen::Map<const Eigen::VectorXf> vector(std::size_t i) const {
    return Eigen::Map<const Eigen::VectorXf>(data_.data() + i * static_cast<std::size_t>(dim_), dim_);
  }
  /// Vector for `key`, or zeros when absent.
  Eigen::VectorXf vector_or_zero(std::string_view key) const;

  Eigen::Map<const Eigen::MatrixXf> matrix() const {
    return Eigen::Map<const Eigen::MatrixXf>(data_.data(), dim_, static_cast<Eigen::Index>(keys_.size()));
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

/// Reads `key v1 ... vd` lines. A leading `count dim` header line (word2vec
/// style) is accepted and ignored. `vocab`, when non-null, restricts loading
/// to those keys. Throws SchemaError with file:line on ragged rows.
EmbeddingTable read_embeddings(const std::string& path, const std::unordered_map<std::string, bool>* vocab = nullptr);

void write_embeddings(const std::string& path, const EmbeddingTable& table);

}  // namespace conn

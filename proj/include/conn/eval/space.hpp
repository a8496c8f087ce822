#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conn/core/embeddings.hpp"
#include "conn/lexicon/aspect.hpp"

namespace conn {

struct SpaceKey {
  std::string word;
  Pos pos = Pos::Noun;
  auto operator<=>(const SpaceKey&) const = default;
};

/// "word|pos" <-> SpaceKey.
std::string space_key_string(const SpaceKey& k);
std::optional<SpaceKey> parse_space_key(const std::string& s);

/// Vectors indexed by (word, POS). Every vector has the same dimension.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;

  /// Throws std::invalid_argument on a dimension mismatch, non-finite value or
  /// duplicate key.
  void add(const SpaceKey& key, const Eigen::VectorXd& v);

  std::size_t size() const { return keys_.size(); }
  Eigen::Index dim() const { return dim_; }
  const SpaceKey& key(std::size_t i) const { return keys_[i]; }
  std::optional<std::size_t> find(const SpaceKey& key) const;
  Eigen::VectorXd vector(std::size_t i) const { return data_.col(static_cast<Eigen::Index>(i)); }

  /// Returns a copy with `offset` added to every vector.
  EmbeddingSpace translated(const Eigen::VectorXd& offset) const;

  /// From a table whose keys are "word|pos"; other keys are rejected.
  static EmbeddingSpace from_keyed_table(const EmbeddingTable& table);
  /// One entry per requested key, taking the word's vector from a plain
  /// word-keyed table. Keys whose word is missing are skipped.
  static EmbeddingSpace from_word_table(const EmbeddingTable& table, const std::vector<SpaceKey>& keys);

  const Eigen::MatrixXd& matrix() const { return data_; }

 private:
  Eigen::Index dim_ = 0;
  std::vector<SpaceKey> keys_;
  std::map<SpaceKey, std::size_t> index_;
  Eigen::MatrixXd data_;
};

struct Neighbor {
  std::size_t index;
  double distance;
};

struct KnnOptions {
  std::size_t k = 50;
  /// Also drop entries sharing the query's word under another POS.
  bool exclude_same_word = false;
};

/// Exact k nearest neighbors by Euclidean distance, excluding the query.
/// Sorted by distance, then word, then POS. Throws std::out_of_range when the
/// key is absent and std::invalid_argument when fewer than k candidates exist.
std::vector<Neighbor> knn(const EmbeddingSpace& space, const SpaceKey& query, const KnnOptions& opt = {});

struct PurityOptions {
  std::size_t k = 50;
  double denominator_floor = 1.0;
  bool exclude_same_word = true;
};

struct PurityResult {
  double ratio = 0.0;   // mean over seed words
  std::size_t seeds = 0;
};

/// Average over words labeled `label` on `aspect` of
/// (#neighbors labeled label) / max(floor, #neighbors labeled -label).
/// Neighbors without a label, or labeled neutral, count in neither term.
/// Restricting to `allowed_seeds` (when non-null) limits which words act as
/// queries. Throws std::invalid_argument when there is no seed word.
PurityResult purity_ratio(Aspect aspect, int label, const EmbeddingSpace& space,
                          const std::map<SpaceKey, const LexiconEntry*>& lexicon, const PurityOptions& opt = {},
                          const std::vector<SpaceKey>* allowed_seeds = nullptr);

std::map<SpaceKey, const LexiconEntry*> index_lexicon(const std::vector<LexiconEntry>& entries);

}  // namespace conn

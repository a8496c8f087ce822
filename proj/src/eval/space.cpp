#include "conn/eval/space.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace conn {

std::string space_key_string(const SpaceKey& k) { return k.word + "|" + std::string(pos_name(k.pos)); }

std::optional<SpaceKey> parse_space_key(const std::string& s) {
  const auto bar = s.rfind('|');
  if (bar == std::string::npos || bar == 0) return std::nullopt;
  const auto pos = parse_pos(s.substr(bar + 1));
  if (!pos) return std::nullopt;
  return SpaceKey{s.substr(0, bar), *pos};
}

void EmbeddingSpace::add(const SpaceKey& key, const Eigen::VectorXd& v) {
  if (keys_.empty()) dim_ = v.size();
  if (v.size() != dim_) throw std::invalid_argument("space vector dimension mismatch for " + space_key_string(key));
  if (!v.allFinite()) throw std::invalid_argument("non-finite vector for " + space_key_string(key));
  if (index_.contains(key)) throw std::invalid_argument("duplicate space key " + space_key_string(key));
  index_.emplace(key, keys_.size());
  keys_.push_back(key);
  data_.conservativeResize(dim_, static_cast<Eigen::Index>(keys_.size()));
  data_.col(data_.cols() - 1) = v;
}

std::optional<std::size_t> EmbeddingSpace::find(const SpaceKey& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace EmbeddingSpace::translated(const Eigen::VectorXd& offset) const {
  EmbeddingSpace out = *this;
  out.data_.colwise() += offset;
  return out;
}

EmbeddingSpace EmbeddingSpace::from_keyed_table(const EmbeddingTable& table) {
  EmbeddingSpace s;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto key = parse_space_key(table.key(i));
    if (!key) throw std::invalid_argument("embedding key '" + table.key(i) + "' is not of the form word|pos");
    s.add(*key, table.vector(i).cast<double>());
  }
  return s;
}

EmbeddingSpace EmbeddingSpace::from_word_table(const EmbeddingTable& table, const std::vector<SpaceKey>& keys) {
  EmbeddingSpace s;
  for (const auto& k : keys)
    if (const auto id = table.id(k.word)) s.add(k, table.vector(*id).cast<double>());
  return s;
}

std::vector<Neighbor> knn(const EmbeddingSpace& space, const SpaceKey& query, const KnnOptions& opt) {
  const auto q = space.find(query);
  if (!q) throw std::out_of_range("knn: " + space_key_string(query) + " is not in the space");
  const Eigen::VectorXd qv = space.vector(*q);
  // Direct differences rather than the |x|^2 - 2xy + |y|^2 expansion, so that
  // translating the space cannot reorder neighbors through cancellation.
  const Eigen::VectorXd d2 = (space.matrix().colwise() - qv).colwise().squaredNorm().transpose();
  std::vector<Neighbor> cand;
  cand.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == *q) continue;
    if (opt.exclude_same_word && space.key(i).word == query.word) continue;
    cand.push_back({i, d2(static_cast<Eigen::Index>(i))});
  }
  if (cand.size() < opt.k)
    throw std::invalid_argument("knn: only " + std::to_string(cand.size()) + " candidates for k = " +
                                std::to_string(opt.k));
  auto less = [&](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return space.key(a.index) < space.key(b.index);
  };
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(opt.k), cand.end(), less);
  cand.resize(opt.k);
  for (auto& n : cand) n.distance = std::sqrt(n.distance);
  return cand;
}

std::map<SpaceKey, const LexiconEntry*> index_lexicon(const std::vector<LexiconEntry>& entries) {
  std::map<SpaceKey, const LexiconEntry*> out;
  for (const auto& e : entries) out[{e.word, e.pos}] = &e;
  return out;
}

PurityResult purity_ratio(Aspect aspect, int label, const EmbeddingSpace& space,
                          const std::map<SpaceKey, const LexiconEntry*>& lexicon, const PurityOptions& opt,
                          const std::vector<SpaceKey>* allowed_seeds) {
  if (aspect == Aspect::Emotion || is_four_way(aspect))
    throw std::invalid_argument("purity ratio needs a polarity aspect");
  if (label != 1 && label != -1) throw std::invalid_argument("purity ratio needs label +1 or -1");
  auto label_of = [&](const SpaceKey& k) -> std::optional<int> {
    const auto it = lexicon.find(k);
    if (it == lexicon.end()) return std::nullopt;
    return it->second->label(aspect);
  };
  std::set<SpaceKey> allowed;
  if (allowed_seeds) allowed.insert(allowed_seeds->begin(), allowed_seeds->end());

  PurityResult r;
  double total = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const SpaceKey& key = space.key(i);
    if (allowed_seeds && !allowed.contains(key)) continue;
    if (label_of(key) != label) continue;
    std::size_t same = 0;
    std::size_t opposite = 0;
    for (const auto& n : knn(space, key, {opt.k, opt.exclude_same_word})) {
      const auto l = label_of(space.key(n.index));
      if (l == label) ++same;
      else if (l == -label) ++opposite;
    }
    total += static_cast<double>(same) / std::max(opt.denominator_floor, static_cast<double>(opposite));
    ++r.seeds;
  }
  if (r.seeds == 0) throw std::invalid_argument("purity ratio: no seed word carries this label");
  r.ratio = total / static_cast<double>(r.seeds);
  return r;
}

}  // namespace conn

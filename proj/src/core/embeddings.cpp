#include "conn/core/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "conn/core/error.hpp"

namespace conn {

void EmbeddingTable::set(const std::string& key, const Eigen::VectorXf& v) {
  if (keys_.empty() && dim_ == 0) dim_ = v.size();
  if (v.size() != dim_)
    throw std::invalid_argument("embedding '" + key + "' has dimension " + std::to_string(v.size()) + ", expected " +
                                std::to_string(dim_));
  if (!v.allFinite()) throw std::invalid_argument("embedding '" + key + "' has a non-finite value");
  const auto d = static_cast<std::size_t>(dim_);
  if (const auto it = index_.find(key); it != index_.end()) {
    std::copy(v.data(), v.data() + d, data_.begin() + static_cast<std::ptrdiff_t>(it->second * d));
    return;
  }
  index_.emplace(key, keys_.size());
  keys_.push_back(key);
  data_.insert(data_.end(), v.data(), v.data() + d);
}

std::optional<std::size_t> EmbeddingTable::id(std::string_view key) const {
  const auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::VectorXf EmbeddingTable::vector_or_zero(std::string_view key) const {
  if (const auto i = id(key)) return vector(*i);
  return Eigen::VectorXf::Zero(dim_);
}

EmbeddingTable read_embeddings(const std::string& path, const std::unordered_map<std::string, bool>* vocab) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, 0, "cannot open embeddings file");
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<float> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw SchemaError(path, lineno, "expected 'word v1 ... vd'");
    std::string key = line.substr(0, sp);
    if (vocab && !vocab->contains(key)) continue;
    values.clear();
    const char* p = line.data() + sp;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      float v = 0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw SchemaError(path, lineno, "bad number in embedding row");
      values.push_back(v);
      p = next;
    }
    if (lineno == 1 && values.size() == 1) continue;  // "count dim" header
    if (values.empty()) throw SchemaError(path, lineno, "embedding row has no values");
    try {
      table.set(key, Eigen::Map<const Eigen::VectorXf>(values.data(), static_cast<Eigen::Index>(values.size())));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, lineno, e.what());
    }
  }
  return table;
}

void write_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(9);
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.key(i);
    const Eigen::VectorXf v = table.vector(i);
    for (Eigen::Index k = 0; k < v.size(); ++k) out << ' ' << v(k);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace conn

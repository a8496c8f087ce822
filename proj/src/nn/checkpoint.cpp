#include "conn/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace conn::nn {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'N', 'N', 'C', 'K', 'P', 'T'};

template <typename U>
void put(std::ostream& out, U v) {
  unsigned char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(U));
}

template <typename U>
U get(std::istream& in) {
  unsigned char buf[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(U))) throw std::runtime_error("truncated checkpoint");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

std::string get_string(std::istream& in, std::uint64_t n) {
  if (n > (1ULL << 32)) throw std::runtime_error("corrupt checkpoint string length");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) throw std::runtime_error("truncated checkpoint");
  return s;
}

}  // namespace

const NamedTensor& Checkpoint::find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  throw std::runtime_error("checkpoint has no tensor '" + name + "'");
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, Checkpoint::kVersion);
  put<std::uint64_t>(out, c.config_json.size());
  out.write(c.config_json.data(), static_cast<std::streamsize>(c.config_json.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.tensors.size()));
  for (const auto& t : c.tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<std::uint64_t>(out, t.rows);
    put<std::uint64_t>(out, t.cols);
    for (float f : t.data) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  }
  if (!out) throw std::runtime_error("error writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error(path + ": not a checkpoint file");
  const auto version = get<std::uint32_t>(in);
  if (version != Checkpoint::kVersion)
    throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  c.config_json = get_string(in, get<std::uint64_t>(in));
  const auto count = get<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name = get_string(in, get<std::uint32_t>(in));
    t.rows = get<std::uint64_t>(in);
    t.cols = get<std::uint64_t>(in);
    if (t.rows * t.cols > (1ULL << 31)) throw std::runtime_error(path + ": corrupt tensor shape");
    t.data.resize(t.rows * t.cols);
    for (auto& f : t.data) f = std::bit_cast<float>(get<std::uint32_t>(in));
    c.tensors.push_back(std::move(t));
  }
  return c;
}

}  // namespace conn::nn

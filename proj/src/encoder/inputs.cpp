#include "conn/encoder/inputs.hpp"

#include <algorithm>

#include "conn/core/text.hpp"

namespace conn {

namespace {

WordPos parse_key(const std::vector<std::string>& f) {
  const auto pos = parse_pos(text::trim(f[1]));
  if (!pos) throw std::invalid_argument("unknown part of speech '" + f[1] + "'");
  return {text::lower(text::trim(f[0])), *pos};
}

}  // namespace

std::map<WordPos, std::vector<Definition>> read_definitions(const std::string& path) {
  std::map<WordPos, std::vector<Definition>> out;
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t) {
    if (f.size() != 4) throw std::invalid_argument("expected 4 fields: word, pos, source, definition");
    out[parse_key(f)].push_back({text::trim(f[2]), f[3]});
  });
  return out;
}

std::map<WordPos, std::vector<std::string>> read_related(const std::string& path) {
  std::map<WordPos, std::vector<std::string>> out;
  text::for_each_tsv_row(path, [&](const std::vector<std::string>& f, std::size_t) {
    if (f.size() != 3) throw std::invalid_argument("expected 3 fields: word, pos, related list");
    auto& list = out[parse_key(f)];
    for (const auto& r : text::split(f[2], ',')) {
      const std::string w = text::lower(text::trim(r));
      if (!w.empty()) list.push_back(w);
    }
  });
  return out;
}

std::optional<EncoderInput> build_input(const WordPos& key, const std::vector<Definition>& defs,
                                        const std::vector<std::string>* related, const EmbeddingTable& pretrained,
                                        const InputLimits& limits) {
  std::vector<const Definition*> ordered;
  for (const auto& d : defs) ordered.push_back(&d);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Definition* a, const Definition* b) { return a->source < b->source; });

  EncoderInput in;
  in.word = key.word;
  in.pos = key.pos;
  in.self = pretrained.id(key.word);
  for (const auto* d : ordered) {
    for (const auto& tok : text::tokenize(d->text)) {
      if (in.tokens.size() == limits.max_tokens) break;
      if (tok == key.word || text::is_stopword(tok) || text::is_punctuation(tok)) continue;
      if (const auto id = pretrained.id(tok)) in.tokens.push_back(*id);
    }
  }
  if (in.tokens.empty()) return std::nullopt;
  if (related) {
    for (const auto& r : *related) {
      if (in.related.size() == limits.max_related) break;
      if (r == key.word) continue;
      if (const auto id = pretrained.id(r)) in.related.push_back(*id);
    }
  }
  return in;
}

}  // namespace conn

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conn/core/embeddings.hpp"
#include "conn/lexicon/aspect.hpp"

namespace conn {

struct WordPos {
  std::string word;
  Pos pos = Pos::Noun;
  auto operator<=>(const WordPos&) const = default;
};

struct Definition {
  std::string source;
  std::string text;
};

/// definitions.tsv: word, pos, source, definition text. Definitions keep file
/// order within a (word, pos).
std::map<WordPos, std::vector<Definition>> read_definitions(const std::string& path);

/// related.tsv: word, pos, comma-separated related words.
std::map<WordPos, std::vector<std::string>> read_related(const std::string& path);

/// One (word, POS) ready for encoding. Token and related ids index the
/// pretrained table.
struct EncoderInput {
  std::string word;
  Pos pos = Pos::Noun;
  std::vector<std::size_t> tokens;
  std::vector<std::size_t> related;
  std::optional<std::size_t> self;  // headword's own pretrained vector
};

struct InputLimits {
  std::size_t max_tokens = 42;
  std::size_t max_related = 20;
};

/// Definitions are ordered by source name (stable within a source),
/// concatenated and tokenized. Stopwords, punctuation, the headword itself
/// and tokens without a pretrained vector are dropped before truncation.
/// Returns nullopt when no token survives.
std::optional<EncoderInput> build_input(const WordPos& key, const std::vector<Definition>& defs,
                                        const std::vector<std::string>* related, const EmbeddingTable& pretrained,
                                        const InputLimits& limits = {});

}  // namespace conn

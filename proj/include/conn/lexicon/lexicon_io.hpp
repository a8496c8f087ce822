#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

/// One JSON object per line:
/// {"word":..,"pos":..,"labels":{Aspect:int,..,"Emotion":[..]},"fully_labeled":..,"provenance":{..}}
std::string entry_to_json(const LexiconEntry& e);
LexiconEntry entry_from_json(const std::string& line);

void write_lexicon_jsonl(std::ostream& out, const std::vector<LexiconEntry>& entries);
void write_lexicon_jsonl(const std::string& path, const std::vector<LexiconEntry>& entries);
/// Throws SchemaError(path, line) on malformed records or duplicate (word, pos).
std::vector<LexiconEntry> read_lexicon_jsonl(const std::string& path);

}  // namespace conn

#include "conn/lexicon/lexicon_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "conn/core/error.hpp"

namespace conn {

using ojson = nlohmann::ordered_json;

std::string entry_to_json(const LexiconEntry& e) {
  ojson j;
  j["word"] = e.word;
  j["pos"] = pos_name(e.pos);
  ojson labels = ojson::object();
  for (Aspect a : all_aspects()) {
    if (a == Aspect::Emotion) {
      if (!e.emotions) continue;
      ojson list = ojson::array();
      for (std::size_t i = 0; i < kEmotionCount; ++i)
        if (e.emotions->test(i)) list.push_back(kEmotionNames[i]);
      labels["Emotion"] = std::move(list);
    } else if (const auto l = e.label(a)) {
      labels[std::string(aspect_name(a))] = *l;
    }
  }
  j["labels"] = std::move(labels);
  j["fully_labeled"] = e.fully_labeled;
  ojson prov = ojson::object();
  for (Aspect a : all_aspects())
    if (const auto it = e.provenance.find(a); it != e.provenance.end()) prov[std::string(aspect_name(a))] = it->second;
  j["provenance"] = std::move(prov);
  return j.dump();
}

LexiconEntry entry_from_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  LexiconEntry e;
  e.word = j.at("word").get<std::string>();
  const auto pos = parse_pos(j.at("pos").get<std::string>());
  if (!pos) throw std::invalid_argument("unknown pos");
  e.pos = *pos;
  for (const auto& [key, value] : j.at("labels").items()) {
    const auto a = parse_aspect(key);
    if (!a) throw std::invalid_argument("unknown aspect '" + key + "'");
    if (!applies_to(*a, e.pos)) throw std::invalid_argument("aspect '" + key + "' does not apply to " + std::string(pos_name(e.pos)));
    if (*a == Aspect::Emotion) {
      EmotionSet set;
      for (const auto& name : value) {
        const auto idx = emotion_index(name.get<std::string>());
        if (!idx) throw std::invalid_argument("unknown emotion");
        set.set(*idx);
      }
      e.emotions = set;
    } else {
      const int l = value.get<int>();
      label_to_class(*a, l);  // range check
      e.labels[*a] = l;
    }
  }
  if (j.contains("provenance"))
    for (const auto& [key, value] : j.at("provenance").items())
      if (const auto a = parse_aspect(key)) e.provenance[*a] = value.get<std::string>();
  e.fully_labeled = compute_fully_labeled(e);
  return e;
}

void write_lexicon_jsonl(std::ostream& out, const std::vector<LexiconEntry>& entries) {
  for (const auto& e : entries) out << entry_to_json(e) << '\n';
}

void write_lexicon_jsonl(const std::string& path, const std::vector<LexiconEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_lexicon_jsonl(out, entries);
}

std::vector<LexiconEntry> read_lexicon_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, 0, "cannot open lexicon");
  std::vector<LexiconEntry> out;
  std::set<std::pair<std::string, Pos>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(entry_from_json(line));
    } catch (const std::exception& ex) {
      throw SchemaError(path, lineno, ex.what());
    }
    if (!seen.insert({out.back().word, out.back().pos}).second)
      throw SchemaError(path, lineno, "duplicate entry for (" + out.back().word + ", " + std::string(pos_name(out.back().pos)) + ")");
  }
  return out;
}

}  // namespace conn

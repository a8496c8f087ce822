#include "conn/stance/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "conn/core/error.hpp"
#include "conn/core/rng.hpp"
#include "conn/core/text.hpp"

namespace conn {

std::string_view stance_name(Stance s) {
  switch (s) {
    case Stance::Pro: return "pro";
    case Stance::Con: return "con";
    case Stance::Neutral: return "neutral";
  }
  return "?";
}

std::optional<Stance> parse_stance(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "pro") return Stance::Pro;
  if (l == "con") return Stance::Con;
  if (l == "neutral") return Stance::Neutral;
  return std::nullopt;
}

std::optional<Pos> coarse_pos(std::string_view tag) {
  const std::string t(tag);
  if (t.starts_with("NN") || t == "NOUN") return Pos::Noun;
  if (t.starts_with("JJ") || t == "ADJ") return Pos::Adjective;
  if (t.starts_with("VB") || t == "VERB") return Pos::Verb;
  return std::nullopt;
}

FallbackTagger::FallbackTagger(const std::vector<LexiconEntry>& lexicon) {
  for (const auto& e : lexicon) ++counts_[e.word][e.pos];
}

std::string FallbackTagger::tag(const std::string& w) const {
  if (const auto it = counts_.find(w); it != counts_.end()) {
    const auto best = std::max_element(it->second.begin(), it->second.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    switch (best->first) {
      case Pos::Noun: return "NN";
      case Pos::Adjective: return "JJ";
      case Pos::Verb: return "VB";
    }
  }
  if (w.empty() || !std::isalpha(static_cast<unsigned char>(w.front()))) return "X";
  if (w.size() > 4 && w.ends_with("ly")) return "RB";
  for (const char* s : {"ous", "ful", "ive", "able", "ible", "less", "ic", "al"})
    if (w.size() > std::char_traits<char>::length(s) + 2 && w.ends_with(s)) return "JJ";
  for (const char* s : {"ing", "ed", "ize", "ise"})
    if (w.size() > std::char_traits<char>::length(s) + 2 && w.ends_with(s)) return "VB";
  return "NN";
}

std::vector<StanceExample> read_stance_jsonl(const std::string& path, const FallbackTagger& tagger) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, 0, "cannot open stance file");
  std::vector<StanceExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      StanceExample ex;
      ex.topic = j.at("topic").get<std::string>();
      ex.author = j.at("author").get<std::string>();
      const auto label = parse_stance(j.at("label").get<std::string>());
      if (!label) throw std::invalid_argument("label must be pro, con or neutral");
      ex.label = *label;
      const std::string txt = j.at("text").get<std::string>();
      if (j.contains("pos_tags") && !j.at("pos_tags").is_null()) {
        std::vector<std::string> words;
        std::istringstream ss(txt);
        for (std::string w; ss >> w;) words.push_back(w);
        const auto tags = j.at("pos_tags").get<std::vector<std::string>>();
        if (tags.size() != words.size())
          throw std::invalid_argument("pos_tags has " + std::to_string(tags.size()) + " entries for " +
                                      std::to_string(words.size()) + " tokens");
        for (std::size_t i = 0; i < words.size(); ++i) ex.tokens.push_back({words[i], tags[i]});
      } else {
        for (const auto& w : text::tokenize(txt)) ex.tokens.push_back({w, tagger.tag(w)});
      }
      out.push_back(std::move(ex));
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw SchemaError(path, lineno, e.what());
    }
  }
  return out;
}

void write_stance_jsonl(const std::string& path, const std::vector<StanceExample>& xs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& ex : xs) {
    nlohmann::ordered_json j;
    j["topic"] = ex.topic;
    std::string txt;
    std::vector<std::string> tags;
    for (const auto& t : ex.tokens) {
      if (!txt.empty()) txt += ' ';
      txt += t.surface;
      tags.push_back(t.tag);
    }
    j["text"] = txt;
    j["pos_tags"] = tags;
    j["label"] = stance_name(ex.label);
    j["author"] = ex.author;
    out << j.dump() << '\n';
  }
}

std::vector<StanceExample> preprocess(const std::vector<StanceExample>& xs, std::size_t* dropped) {
  std::vector<StanceExample> out;
  std::size_t n_dropped = 0;
  for (const auto& ex : xs) {
    StanceExample p;
    p.topic = text::lower(text::trim(ex.topic));
    p.label = ex.label;
    p.author = ex.author;
    for (const auto& t : ex.tokens) {
      const std::string w = text::lower(t.surface);
      if (w.empty() || text::is_stopword(w) || text::is_punctuation(w)) continue;
      p.tokens.push_back({w, t.tag});
    }
    if (p.tokens.empty()) {
      ++n_dropped;
      continue;
    }
    out.push_back(std::move(p));
  }
  if (n_dropped) spdlog::info("{} stance examples dropped: no tokens left after preprocessing", n_dropped);
  if (dropped) *dropped = n_dropped;
  return out;
}

std::vector<StanceExample> generate_neutrals(const std::vector<StanceExample>& xs, std::size_t count,
                                             std::uint64_t seed) {
  std::map<std::string, std::size_t> topic_counts;
  for (const auto& ex : xs) ++topic_counts[ex.topic];
  if (topic_counts.size() < 2) throw std::invalid_argument("neutral generation needs at least two topics");
  std::vector<const StanceExample*> sources;
  for (const auto& ex : xs)
    if (ex.label != Stance::Neutral) sources.push_back(&ex);
  if (sources.empty() && count) throw std::invalid_argument("neutral generation needs pro/con examples");
  const std::size_t total = xs.size();

  Rng rng(seed);
  std::vector<StanceExample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const StanceExample& src = *sources[rng.below(sources.size())];
    // draw from the other topics proportionally to their counts
    const std::size_t mass = total - topic_counts.at(src.topic);
    std::uint64_t r = rng.below(mass);
    std::string topic;
    for (const auto& [t, c] : topic_counts) {
      if (t == src.topic) continue;
      if (r < c) {
        topic = t;
        break;
      }
      r -= c;
    }
    StanceExample n = src;
    n.topic = topic;
    n.label = Stance::Neutral;
    out.push_back(std::move(n));
  }
  return out;
}

StanceSplits build_splits(const std::vector<StanceExample>& xs, std::uint64_t seed) {
  std::map<std::string, std::size_t> per_author;
  for (const auto& ex : xs) ++per_author[ex.author];
  std::vector<std::string> authors;
  for (const auto& [a, n] : per_author) {
    authors.push_back(a);
    if (static_cast<double>(n) > 0.6 * static_cast<double>(xs.size()))
      spdlog::warn("author '{}' owns {} of {} examples; the split can only approximate 60/20/20", a, n, xs.size());
  }
  Rng rng(seed);
  rng.shuffle(authors);
  const auto total = static_cast<double>(xs.size());
  std::map<std::string, int> where;
  std::size_t cum = 0;
  for (const auto& a : authors) {
    const double before = static_cast<double>(cum);
    where[a] = before < 0.6 * total ? 0 : before < 0.8 * total ? 1 : 2;
    cum += per_author[a];
  }
  StanceSplits s;
  for (const auto& ex : xs) {
    const int w = where.at(ex.author);
    (w == 0 ? s.train : w == 1 ? s.dev : s.test).push_back(ex);
  }
  return s;
}

void add_neutrals(StanceSplits& s, std::uint64_t seed, double ratio) {
  std::uint64_t k = 0;
  for (auto* part : {&s.train, &s.dev, &s.test}) {
    ++k;
    const auto polar = static_cast<std::size_t>(
        std::count_if(part->begin(), part->end(), [](const StanceExample& e) { return e.label != Stance::Neutral; }));
    const auto n = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(polar)));
    if (n == 0) continue;
    auto neutrals = generate_neutrals(*part, n, Rng::derive(seed, k));
    part->insert(part->end(), std::make_move_iterator(neutrals.begin()), std::make_move_iterator(neutrals.end()));
  }
}

StanceSplits prepare_splits(const std::vector<StanceExample>& raw, std::uint64_t seed, double neutral_ratio,
                            Scenario scenario, const TruncationCaps& caps) {
  std::size_t dropped = 0;
  const auto xs = preprocess(raw, &dropped);
  if (xs.empty()) throw std::invalid_argument("no stance example survives preprocessing");
  auto splits = build_splits(xs, seed);
  add_neutrals(splits, Rng::derive(seed, 10), neutral_ratio);
  return truncate(splits, scenario, caps, Rng::derive(seed, 11));
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::AllData: return "AllData";
    case Scenario::TruncTrain: return "TruncTrain";
    case Scenario::TruncAll: return "TruncAll";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "alldata" || l == "all") return Scenario::AllData;
  if (l == "trunctrain") return Scenario::TruncTrain;
  if (l == "truncall") return Scenario::TruncAll;
  return std::nullopt;
}

std::vector<StanceExample> cap_topics(const std::vector<StanceExample>& xs, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw std::invalid_argument("truncation cap must be positive");
  std::map<std::string, std::vector<std::size_t>> by_topic;
  for (std::size_t i = 0; i < xs.size(); ++i) by_topic[xs[i].topic].push_back(i);
  std::vector<bool> keep(xs.size(), true);
  Rng rng(seed);
  for (auto& [topic, idx] : by_topic) {
    if (idx.size() <= cap) continue;
    rng.shuffle(idx);
    for (std::size_t j = cap; j < idx.size(); ++j) keep[idx[j]] = false;
  }
  std::vector<StanceExample> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (keep[i]) out.push_back(xs[i]);
  return out;
}

StanceSplits truncate(const StanceSplits& s, Scenario scenario, const TruncationCaps& caps, std::uint64_t seed) {
  if (scenario == Scenario::AllData) return s;
  StanceSplits out = s;
  out.train = cap_topics(s.train, caps.train, Rng::derive(seed, 0));
  if (scenario == Scenario::TruncAll) {
    out.dev = cap_topics(s.dev, caps.eval, Rng::derive(seed, 1));
    out.test = cap_topics(s.test, caps.eval, Rng::derive(seed, 2));
  }
  return out;
}

std::map<std::string, TopicStats> topic_statistics(const std::vector<StanceExample>& xs) {
  std::map<std::string, TopicStats> out;
  for (const auto& ex : xs) {
    auto& s = out[ex.topic];
    ++s.examples;
    s.con += ex.label == Stance::Con;
    s.pro += ex.label == Stance::Pro;
    s.neutral += ex.label == Stance::Neutral;
  }
  return out;
}

std::string statistics_csv(const std::map<std::string, TopicStats>& stats) {
  std::ostringstream out;
  out << "topic,examples,con,pro,neutral\n";
  TopicStats all;
  for (const auto& [t, s] : stats) {
    out << text::csv_field(t) << ',' << s.examples << ',' << s.con << ',' << s.pro << ',' << s.neutral << '\n';
    all.examples += s.examples;
    all.con += s.con;
    all.pro += s.pro;
    all.neutral += s.neutral;
  }
  out << "all," << all.examples << ',' << all.con << ',' << all.pro << ',' << all.neutral << '\n';
  return out.str();
}

}  // namespace conn

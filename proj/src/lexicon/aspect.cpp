#include "conn/lexicon/aspect.hpp"

#include <algorithm>
#include <stdexcept>

#include "conn/core/text.hpp"

namespace conn {

namespace {

constexpr std::array<Aspect, kAspectCount> kAll = {
    Aspect::SocialValue,      Aspect::Politeness,       Aspect::Impact,          Aspect::Factuality,
    Aspect::Sentiment,        Aspect::Emotion,          Aspect::PerspWriterTheme, Aspect::PerspWriterAgent,
    Aspect::PerspAgentTheme,  Aspect::EffectTheme,      Aspect::EffectAgent,     Aspect::ValueTheme,
    Aspect::ValueAgent,       Aspect::StateTheme,       Aspect::StateAgent,      Aspect::Power,
    Aspect::Agency};

constexpr std::array<std::string_view, kAspectCount> kNames = {
    "SocialValue", "Politeness", "Impact", "Factuality", "Sentiment", "Emotion",
    "P(wt)",       "P(wa)",      "P(at)",  "E(t)",       "E(a)",      "V(t)",
    "V(a)",        "S(t)",       "S(a)",   "power",      "agency"};

}  // namespace

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "noun";
    case Pos::Adjective: return "adjective";
    case Pos::Verb: return "verb";
  }
  return "?";
}

std::optional<Pos> parse_pos(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "noun" || l == "n") return Pos::Noun;
  if (l == "adjective" || l == "adj" || l == "a") return Pos::Adjective;
  if (l == "verb" || l == "v") return Pos::Verb;
  return std::nullopt;
}

std::string_view aspect_name(Aspect a) { return kNames[static_cast<std::size_t>(a)]; }

std::optional<Aspect> parse_aspect(std::string_view s) {
  for (std::size_t i = 0; i < kAspectCount; ++i)
    if (kNames[i] == s) return kAll[i];
  // a few common aliases
  const std::string l = text::lower(s);
  if (l == "socialval" || l == "social_value" || l == "socialvalue") return Aspect::SocialValue;
  if (l == "polite" || l == "politeness") return Aspect::Politeness;
  if (l == "impact") return Aspect::Impact;
  if (l == "fact" || l == "factuality") return Aspect::Factuality;
  if (l == "sent" || l == "sentiment") return Aspect::Sentiment;
  if (l == "emo" || l == "emotion") return Aspect::Emotion;
  return std::nullopt;
}

std::span<const Aspect> all_aspects() { return kAll; }
std::span<const Aspect> noun_adj_aspects() { return std::span<const Aspect>(kAll).first(6); }
std::span<const Aspect> verb_aspects() { return std::span<const Aspect>(kAll).subspan(6); }

std::span<const Aspect> aspects_for(Pos pos) {
  return pos == Pos::Verb ? verb_aspects() : noun_adj_aspects();
}

bool applies_to(Aspect a, Pos pos) {
  const bool verb_aspect = static_cast<std::size_t>(a) >= 6;
  return verb_aspect == (pos == Pos::Verb);
}

bool is_four_way(Aspect a) { return a == Aspect::Power || a == Aspect::Agency; }

int class_count(Aspect a) {
  if (a == Aspect::Emotion) return static_cast<int>(kEmotionCount);
  return is_four_way(a) ? 4 : 3;
}

int label_to_class(Aspect a, int label) {
  if (is_four_way(a)) {
    if (label < 0 || label > 3) throw std::out_of_range("four-way label out of range");
    return label;
  }
  if (label < -1 || label > 1) throw std::out_of_range("polarity label out of range");
  return label + 1;
}

int class_to_label(Aspect a, int index) {
  if (index < 0 || index >= (is_four_way(a) ? 4 : 3)) throw std::out_of_range("class index out of range");
  return is_four_way(a) ? index : index - 1;
}

std::optional<std::size_t> emotion_index(std::string_view name) {
  const std::string l = text::lower(name);
  for (std::size_t i = 0; i < kEmotionCount; ++i)
    if (kEmotionNames[i] == l) return i;
  return std::nullopt;
}

bool compute_fully_labeled(const LexiconEntry& e) {
  const auto aspects = aspects_for(e.pos);
  return std::all_of(aspects.begin(), aspects.end(), [&](Aspect a) { return e.has(a); });
}

}  // namespace conn

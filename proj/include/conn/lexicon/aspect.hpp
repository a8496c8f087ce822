#pragma once

#include <array>
#include <bitset>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace conn {

enum class Pos { Noun, Adjective, Verb };

std::string_view pos_name(Pos pos);
/// Accepts "noun"/"n", "adjective"/"adj"/"a", "verb"/"v" (case-insensitive).
std::optional<Pos> parse_pos(std::string_view s);

/// Connotation aspects. The first six apply to nouns and adjectives, the
/// remaining eleven (connotation-frame aspects plus power and agency) to verbs.
enum class Aspect {
  SocialValue,
  Politeness,
  Impact,
  Factuality,
  Sentiment,
  Emotion,
  PerspWriterTheme,  // P(wt)
  PerspWriterAgent,  // P(wa)
  PerspAgentTheme,   // P(at)
  EffectTheme,       // E(t)
  EffectAgent,       // E(a)
  ValueTheme,        // V(t)
  ValueAgent,        // V(a)
  StateTheme,        // S(t)
  StateAgent,        // S(a)
  Power,
  Agency,
};

inline constexpr std::size_t kAspectCount = 17;

std::string_view aspect_name(Aspect a);
std::optional<Aspect> parse_aspect(std::string_view s);

std::span<const Aspect> all_aspects();
std::span<const Aspect> noun_adj_aspects();
std::span<const Aspect> verb_aspects();
std::span<const Aspect> aspects_for(Pos pos);
bool applies_to(Aspect a, Pos pos);

/// Number of output units of the aspect's classifier head: 3 for polarity
/// aspects, 4 for power/agency, 8 independent binaries for Emotion.
int class_count(Aspect a);
bool is_four_way(Aspect a);

// Polarity coding: class index 0,1,2 <-> label -1,0,+1. Four-way aspects use
// the label itself as the index (0..3).
int label_to_class(Aspect a, int label);
int class_to_label(Aspect a, int index);

inline constexpr std::size_t kEmotionCount = 8;
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "joy", "fear", "trust", "anticipation", "sadness", "disgust", "surprise"};
std::optional<std::size_t> emotion_index(std::string_view name);

using EmotionSet = std::bitset<kEmotionCount>;

struct LexiconEntry {
  std::string word;
  Pos pos = Pos::Noun;
  std::map<Aspect, int> labels;  // non-emotion aspects
  std::optional<EmotionSet> emotions;
  std::map<Aspect, std::string> provenance;
  bool fully_labeled = false;

  bool has(Aspect a) const { return a == Aspect::Emotion ? emotions.has_value() : labels.contains(a); }
  std::optional<int> label(Aspect a) const {
    const auto it = labels.find(a);
    if (it == labels.end()) return std::nullopt;
    return it->second;
  }
};

bool compute_fully_labeled(const LexiconEntry& e);

}  // namespace conn

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conn/encoder/inputs.hpp"
#include "conn/lexicon/aspect.hpp"

namespace conn {

enum class Split { Train, Dev, Test };
std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view s);

/// verb frames file: verb <TAB> split (train|dev|test|-) <TAB> aspect=value,...
struct VerbFrame {
  std::string verb;
  std::optional<Split> split;
  std::map<Aspect, int> labels;
};
std::vector<VerbFrame> read_verb_frames(const std::string& path);
LexiconEntry verb_frame_entry(const VerbFrame& f);

/// Word-level 60/20/20 partition. Every POS of a word lands in one split.
/// `fixed` pins words to a split (taken from the verb frames); the remaining
/// words are shuffled with `seed` and fill train, then dev, up to
/// round(0.6 W) and round(0.2 W) words, the rest going to test.
std::map<std::string, Split> split_words(const std::vector<std::string>& words,
                                         const std::map<std::string, Split>& fixed, std::uint64_t seed);

/// Training example: encoder input plus class-index targets.
struct Example {
  EncoderInput input;
  std::map<Aspect, int> classes;
  std::optional<EmotionSet> emotions;

  bool has(Aspect a) const { return a == Aspect::Emotion ? emotions.has_value() : classes.contains(a); }
  bool empty() const { return classes.empty() && !emotions; }
};

Example make_example(EncoderInput input, const LexiconEntry& entry);

struct Dataset {
  std::vector<Example> train;
  std::vector<Example> dev;
  std::vector<Example> test;
  std::vector<WordPos> skipped;  // no usable definition tokens or no labels

  std::vector<Example>& part(Split s) { return s == Split::Train ? train : s == Split::Dev ? dev : test; }
  const std::vector<Example>& part(Split s) const { return s == Split::Train ? train : s == Split::Dev ? dev : test; }
};

struct DatasetSources {
  const std::vector<LexiconEntry>* lexicon = nullptr;  // may include verb entries
  const std::vector<VerbFrame>* verb_frames = nullptr;
  const std::map<WordPos, std::vector<Definition>>* definitions = nullptr;
  const std::map<WordPos, std::vector<std::string>>* related = nullptr;
  const EmbeddingTable* pretrained = nullptr;
};

Dataset build_dataset(const DatasetSources& src, std::uint64_t seed, const InputLimits& limits = {});

}  // namespace conn

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conn/lexicon/aspect.hpp"

namespace conn {

enum class Stance { Pro = 0, Con = 1, Neutral = 2 };
inline constexpr int kStanceClasses = 3;
std::string_view stance_name(Stance s);
std::optional<Stance> parse_stance(std::string_view s);

struct TaggedToken {
  std::string surface;
  std::string tag;
  auto operator<=>(const TaggedToken&) const = default;
};

struct StanceExample {
  std::string topic;
  std::vector<TaggedToken> tokens;
  Stance label = Stance::Pro;
  std::string author;
};

/// Coarse POS of a tag: Penn (NN*, JJ*, VB*) or universal (NOUN, ADJ, VERB)
/// tags map to noun/adjective/verb; anything else to nullopt.
std::optional<Pos> coarse_pos(std::string_view tag);

/// Fallback tagger for untagged text: a word's most frequent POS in a lexicon,
/// else suffix rules, else "X".
class FallbackTagger {
 public:
  FallbackTagger() = default;
  explicit FallbackTagger(const std::vector<LexiconEntry>& lexicon);
  std::string tag(const std::string& lowercase_word) const;

 private:
  std::map<std::string, std::map<Pos, int>> counts_;
};

/// stance.jsonl rows {topic, text, pos_tags, label, author}. `text` is split on
/// whitespace and must align with `pos_tags` when present; otherwise the text
/// is tokenized and tagged with `tagger`. Throws SchemaError with file:line.
std::vector<StanceExample> read_stance_jsonl(const std::string& path, const FallbackTagger& tagger = {});
void write_stance_jsonl(const std::string& path, const std::vector<StanceExample>& xs);

/// Lowercases and drops stopwords and punctuation (tags stay aligned); the
/// topic is lowercased. Examples left without tokens are dropped and counted.
std::vector<StanceExample> preprocess(const std::vector<StanceExample>& xs, std::size_t* dropped = nullptr);

/// Neutral examples: a uniformly sampled pro/con example moved to a different
/// topic drawn from the topic distribution of `xs` with its own topic removed.
/// Throws std::invalid_argument with fewer than two topics.
std::vector<StanceExample> generate_neutrals(const std::vector<StanceExample>& xs, std::size_t count,
                                             std::uint64_t seed);

struct StanceSplits {
  std::vector<StanceExample> train;
  std::vector<StanceExample> dev;
  std::vector<StanceExample> test;
};

/// Author-level partition: authors are shuffled and assigned to train, dev or
/// test by the running example count before them (< 60%, < 80%, rest).
StanceSplits build_splits(const std::vector<StanceExample>& xs, std::uint64_t seed);

/// Adds round(pro_con / 2) neutrals to each split (so neutrals are about a
/// third), generated within the split.
void add_neutrals(StanceSplits& s, std::uint64_t seed, double ratio = 0.5);

enum class Scenario { AllData, TruncTrain, TruncAll };
std::string_view scenario_name(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view s);

struct TruncationCaps {
  std::size_t train = 2000;
  std::size_t eval = 600;
};

/// Per-topic uniform down-sampling without replacement; retained examples
/// keep their order.
std::vector<StanceExample> cap_topics(const std::vector<StanceExample>& xs, std::size_t cap, std::uint64_t seed);
StanceSplits truncate(const StanceSplits& s, Scenario scenario, const TruncationCaps& caps, std::uint64_t seed);

/// Preprocessing, author split, per-split neutrals and truncation, each step
/// seeded from `seed`. Training and evaluation both call this so they see the
/// same partition.
StanceSplits prepare_splits(const std::vector<StanceExample>& raw, std::uint64_t seed, double neutral_ratio,
                            Scenario scenario, const TruncationCaps& caps);

struct TopicStats {
  std::size_t examples = 0;
  std::size_t con = 0;
  std::size_t pro = 0;
  std::size_t neutral = 0;
};
std::map<std::string, TopicStats> topic_statistics(const std::vector<StanceExample>& xs);
/// CSV with columns topic,examples,con,pro,neutral plus a final "all" row.
std::string statistics_csv(const std::map<std::string, TopicStats>& stats);

}  // namespace conn

#include <doctest.h>

#include "conn/core/rng.hpp"
#include "conn/synonyms/synonyms.hpp"

using namespace conn;

namespace {

LexiconEntry noun(const std::string& w, int sv, int polite, int impact, int fact, int sent, EmotionSet emo) {
  LexiconEntry e;
  e.word = w;
  e.pos = Pos::Noun;
  e.labels = {{Aspect::SocialValue, sv}, {Aspect::Politeness, polite}, {Aspect::Impact, impact},
              {Aspect::Factuality, fact}, {Aspect::Sentiment, sent}};
  e.emotions = emo;
  e.fully_labeled = compute_fully_labeled(e);
  return e;
}

EmotionSet emo(std::initializer_list<const char*> names) {
  EmotionSet s;
  for (const char* n : names) s.set(*emotion_index(n));
  return s;
}

}  // namespace

TEST_CASE("select_pairs keeps synset-confirmed paraphrases in the lexicon") {
  const std::vector<LexiconEntry> lex = {noun("hurry", 0, 0, 0, 0, 0, {}), noun("rush", 0, 0, 0, 0, 0, {}),
                                         noun("sprint", 0, 0, 0, 0, 0, {})};
  const LexiconIndex index(lex);
  const SynsetMap synsets = {{"hurry", {"rush"}}, {"rush", {"hurry"}}};

  SUBCASE("confirmed pair") {
    const auto pairs = select_pairs({{"hurry", "rush", Pos::Noun}}, synsets, index);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].word_a == "hurry");
    CHECK(pairs[0].word_b == "rush");
  }
  SUBCASE("not in any synset") { CHECK(select_pairs({{"hurry", "sprint", Pos::Noun}}, synsets, index).empty()); }
  SUBCASE("unordered duplicates collapse") {
    CHECK(select_pairs({{"hurry", "rush", Pos::Noun}, {"rush", "hurry", Pos::Noun}}, synsets, index).size() == 1);
  }
  SUBCASE("one side outside the lexicon") {
    const SynsetMap s2 = {{"hurry", {"dash"}}};
    CHECK(select_pairs({{"hurry", "dash", Pos::Noun}}, s2, index).empty());
  }
  SUBCASE("POS mismatch with the lexicon") {
    CHECK(select_pairs({{"hurry", "rush", Pos::Adjective}}, synsets, index).empty());
  }
  SUBCASE("one-directional synset membership suffices") {
    const SynsetMap s3 = {{"rush", {"hurry"}}};
    CHECK(select_pairs({{"hurry", "rush", Pos::Noun}}, s3, index).size() == 1);
  }
}

TEST_CASE("divergence_report counts") {
  const std::vector<LexiconEntry> lex = {
      noun("a1", 1, 0, 1, 0, 1, emo({"joy"})),     noun("a2", 1, 0, 1, 0, 1, emo({"joy"})),  // identical
      noun("b1", 1, 0, 0, 0, 1, emo({})),          noun("b2", 0, 0, 0, 0, 1, emo({})),       // SV + vs 0
      noun("c1", -1, 0, 0, 0, -1, emo({"fear"})), noun("c2", 1, 0, 0, 0, -1, emo({"fear"})),  // SV - vs +
      noun("d1", 0, 0, 0, 0, 0, emo({"fear"})),   noun("d2", 0, 0, 0, 0, 0, emo({})),       // emotion differs
  };
  const LexiconIndex index(lex);
  const std::vector<SynonymPair> pairs = {
      {"a1", "a2", Pos::Noun}, {"b1", "b2", Pos::Noun}, {"c1", "c2", Pos::Noun}, {"d1", "d2", Pos::Noun}};
  const auto r = divergence_report(pairs, index);

  CHECK(r.pairs == 4);
  CHECK(r.pct_any_diff() == doctest::Approx(75.0));
  const auto& sv = r.aspects.at(Aspect::SocialValue);
  CHECK(sv.compared == 4);
  CHECK(sv.same == 2);
  CHECK(sv.diff == 2);
  CHECK(sv.neutral_vs_nonneutral == 1);
  CHECK(sv.pct_neutral_among_diffs() == doctest::Approx(50.0));
  const auto& em = r.aspects.at(Aspect::Emotion);
  CHECK(em.diff == 1);
  CHECK(em.neutral_vs_nonneutral == 1);
  for (const auto& [a, d] : r.aspects) CHECK(d.pct_same() + d.pct_diff() == doctest::Approx(100.0));
  CHECK(r.aspects.at(Aspect::Politeness).pct_same() == 100.0);
}

TEST_CASE("divergence_report skips missing aspects and is order invariant") {
  std::vector<LexiconEntry> lex;
  Rng rng(9);
  for (int i = 0; i < 40; ++i) {
    EmotionSet e;
    if (rng.coin()) e.set(rng.below(8));
    lex.push_back(noun("w" + std::to_string(i), static_cast<int>(rng.below(3)) - 1, static_cast<int>(rng.below(3)) - 1,
                       static_cast<int>(rng.below(3)) - 1, static_cast<int>(rng.below(3)) - 1,
                       static_cast<int>(rng.below(3)) - 1, e));
    if (i % 7 == 0) lex.back().labels.erase(Aspect::Factuality);
  }
  const LexiconIndex index(lex);
  std::vector<SynonymPair> pairs;
  for (int i = 0; i + 1 < 40; i += 2) pairs.push_back({"w" + std::to_string(i), "w" + std::to_string(i + 1), Pos::Noun});
  const auto ref = divergence_report(pairs, index);
  CHECK(ref.aspects.at(Aspect::Factuality).skipped > 0);
  CHECK(ref.aspects.at(Aspect::Factuality).compared + ref.aspects.at(Aspect::Factuality).skipped == pairs.size());

  for (int t = 0; t < 5; ++t) {
    rng.shuffle(pairs);
    for (auto& p : pairs)
      if (rng.coin()) std::swap(p.word_a, p.word_b);
    const auto again = divergence_report(pairs, index);
    CHECK(divergence_csv(again) == divergence_csv(ref));
  }
  CHECK_THROWS(divergence_report({}, index));
}

#include "synthetic.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "conn/core/rng.hpp"
#include "conn/lexicon/lexicon_io.hpp"

namespace conn::synth {

namespace {

constexpr std::size_t kCuesPerClass = 6;
constexpr std::size_t kFillers = 30;

std::string cue(int cls, std::size_t i) {
  return std::string(cls > 0 ? "bright" : cls < 0 ? "grim" : "plain") + "cue" + std::to_string(i);
}

Eigen::VectorXf gaussian(Eigen::Index dim, double scale, Rng& rng) {
  Eigen::VectorXf v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = static_cast<float>(rng.normal() * scale);
  return v;
}

std::string rank_cue(std::size_t q, std::size_t i) { return "rank" + std::to_string(q) + "cue" + std::to_string(i); }

constexpr std::array<const char*, 4> kBrightEmotions = {"joy", "trust", "anticipation", "surprise"};
constexpr std::array<const char*, 4> kGrimEmotions = {"anger", "fear", "sadness", "disgust"};

int class_of(std::size_t i) { return static_cast<int>(i % 3) - 1; }

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

ConnotationCorpus connotation_corpus(const ConnotationShape& shape, std::uint64_t seed) {
  ConnotationCorpus c;
  Rng rng(seed);
  const Eigen::Index d = shape.dim;
  c.pretrained = EmbeddingTable(d);

  std::map<int, Eigen::VectorXf> centroid;
  for (const int cls : {-1, 0, 1}) centroid[cls] = gaussian(d, 1.0, rng);
  for (const int cls : {-1, 0, 1})
    for (std::size_t i = 0; i < kCuesPerClass; ++i) c.pretrained.set(cue(cls, i), centroid[cls] + gaussian(d, 0.3, rng));
  for (std::size_t q = 0; q < 4; ++q) {
    const Eigen::VectorXf centre = gaussian(d, 1.0, rng);
    for (std::size_t i = 0; i < kCuesPerClass; ++i) c.pretrained.set(rank_cue(q, i), centre + gaussian(d, 0.3, rng));
  }
  for (std::size_t i = 0; i < kFillers; ++i) c.pretrained.set("filler" + std::to_string(i), gaussian(d, 1.0, rng));

  struct Word {
    WordPos key;
    int cls;
    std::size_t rank = 0;  // power and agency class of a verb
  };
  std::vector<Word> words;
  for (std::size_t i = 0; i < shape.nouns_adjectives; ++i)
    words.push_back({{"item" + std::to_string(i), i % 2 == 0 ? Pos::Noun : Pos::Adjective}, class_of(i)});
  for (std::size_t i = 0; i < shape.verbs; ++i) words.push_back({{"act" + std::to_string(i), Pos::Verb}, class_of(i), (i / 3) % 4});

  for (const auto& w : words) {
    c.word_class[w.key.word] = w.cls;
    if (rng.uniform() >= shape.oov_headwords) c.pretrained.set(w.key.word, gaussian(d, 1.0, rng));

    std::vector<std::string> toks;
    for (int k = 0; k < 3; ++k) toks.push_back(cue(w.cls, rng.below(kCuesPerClass)));
    if (w.key.pos == Pos::Verb)
      for (int k = 0; k < 2; ++k) toks.push_back(rank_cue(w.rank, rng.below(kCuesPerClass)));
    for (int k = 0; k < 3; ++k) toks.push_back("filler" + std::to_string(rng.below(kFillers)));
    rng.shuffle(toks);
    std::string text;
    for (const auto& t : toks) text += (text.empty() ? "" : " ") + t;
    c.definitions[w.key].push_back({"gloss", text});

    if (w.key.pos == Pos::Verb) {
      VerbFrame f;
      f.verb = w.key.word;
      for (const Aspect a : verb_aspects()) f.labels[a] = is_four_way(a) ? static_cast<int>(w.rank) : w.cls;
      c.frames.push_back(std::move(f));
    } else {
      LexiconEntry e;
      e.word = w.key.word;
      e.pos = w.key.pos;
      for (const Aspect a : noun_adj_aspects())
        if (a != Aspect::Emotion) e.labels[a] = w.cls;
      EmotionSet emo;
      if (w.cls != 0)
        for (const char* name : w.cls > 0 ? kBrightEmotions : kGrimEmotions) emo.set(*emotion_index(name));
      e.emotions = emo;
      e.fully_labeled = compute_fully_labeled(e);
      c.lexicon.push_back(std::move(e));
    }
  }
  for (const auto& w : words) {
    auto& rel = c.related[w.key];
    for (const auto& o : words)
      if (o.cls == w.cls && o.key.word != w.key.word && rel.size() < 2) rel.push_back(o.key.word);
  }
  return c;
}

void write_connotation_corpus(const ConnotationCorpus& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_lexicon_jsonl((dir / "lexicon.jsonl").string(), c.lexicon);
  {
    auto out = open(dir / "verb_frames.tsv");
    for (const auto& f : c.frames) {
      out << f.verb << "\t" << (f.split ? split_name(*f.split) : "-") << "\t";
      bool first = true;
      for (const auto& [a, v] : f.labels) {
        out << (first ? "" : ",") << aspect_name(a) << "=" << v;
        first = false;
      }
      out << "\n";
    }
  }
  {
    auto out = open(dir / "definitions.tsv");
    for (const auto& [k, defs] : c.definitions)
      for (const auto& def : defs) out << k.word << "\t" << pos_name(k.pos) << "\t" << def.source << "\t" << def.text << "\n";
  }
  {
    auto out = open(dir / "related.tsv");
    for (const auto& [k, rel] : c.related) {
      out << k.word << "\t" << pos_name(k.pos) << "\t";
      for (std::size_t i = 0; i < rel.size(); ++i) out << (i ? "," : "") << rel[i];
      out << "\n";
    }
  }
  write_embeddings((dir / "embeddings.txt").string(), c.pretrained);
}

std::vector<StanceExample> stance_corpus(std::size_t topics, std::size_t per_topic, std::uint64_t seed) {
  static const std::vector<std::string> kTopics = {"guns", "abortion", "evolution", "marriage", "climate"};
  static const std::vector<std::string> kTags = {"NN", "JJ", "VB"};
  if (topics > kTopics.size()) throw std::invalid_argument("too many topics");
  constexpr std::size_t kCues = 8;
  constexpr std::size_t kFiller = 40;
  Rng rng(seed);
  std::vector<StanceExample> out;
  for (std::size_t t = 0; t < topics; ++t) {
    for (std::size_t i = 0; i < per_topic; ++i) {
      StanceExample ex;
      ex.topic = kTopics[t];
      ex.label = i % 2 == 0 ? Stance::Pro : Stance::Con;
      ex.author = "user" + std::to_string(rng.below(topics * per_topic / 5 + 1));
      const std::string side = ex.label == Stance::Pro ? "pro" : "con";
      for (int k = 0; k < 2; ++k) {
        const auto c = rng.below(kCues);
        ex.tokens.push_back({kTopics[t] + side + std::to_string(c), kTags[c % kTags.size()]});
      }
      for (int k = 0; k < 3; ++k) {
        const auto f = rng.below(kFiller);
        ex.tokens.push_back({"stuff" + std::to_string(f), kTags[f % kTags.size()]});
      }
      rng.shuffle(ex.tokens);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<std::string> stance_vocabulary(const std::vector<StanceExample>& xs) {
  std::set<std::string> v;
  for (const auto& ex : xs) {
    v.insert(ex.topic);
    for (const auto& t : ex.tokens) v.insert(t.surface);
  }
  return {v.begin(), v.end()};
}

EmbeddingTable random_word_table(const std::vector<std::string>& words, Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingTable t(dim);
  for (const auto& w : words) t.set(w, gaussian(dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng));
  return t;
}

PlantedStance planted_stance(std::size_t per_split, Eigen::Index dim, std::uint64_t seed) {
  constexpr std::size_t kWordsPerSide = 30;
  Rng rng(seed);
  PlantedStance p;
  p.connotation = EmbeddingTable(dim);
  const Eigen::VectorXf plus = gaussian(dim, 1.0, rng);
  const Eigen::VectorXf minus = -plus;

  // Content words: disjoint halves for training and evaluation.
  auto word = [](bool train, bool positive, std::size_t i) {
    return std::string(train ? "seen" : "fresh") + (positive ? "up" : "down") + std::to_string(i);
  };
  std::vector<std::string> vocab = {"policy"};
  for (const bool train : {true, false})
    for (const bool positive : {true, false})
      for (std::size_t i = 0; i < kWordsPerSide; ++i) {
        const auto w = word(train, positive, i);
        vocab.push_back(w);
        p.connotation.set(w + "|noun", (positive ? plus : minus) + gaussian(dim, 0.3, rng));
      }
  p.words = random_word_table(vocab, dim, Rng::derive(seed, 1));

  auto make = [&](bool train, std::size_t count, const std::string& prefix) {
    std::vector<StanceExample> xs;
    for (std::size_t i = 0; i < count; ++i) {
      StanceExample ex;
      ex.topic = "policy";
      const bool positive = i % 2 == 0;
      ex.label = positive ? Stance::Pro : Stance::Con;
      ex.author = prefix + std::to_string(i);
      for (int k = 0; k < 3; ++k) ex.tokens.push_back({word(train, positive, rng.below(kWordsPerSide)), "NN"});
      xs.push_back(std::move(ex));
    }
    return xs;
  };
  p.splits.train = make(true, per_split, "train");
  p.splits.dev = make(false, per_split / 2, "dev");
  p.splits.test = make(false, per_split, "test");
  return p;
}

}  // namespace conn::synth

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "conn/core/error.hpp"
#include "conn/encoder/baselines.hpp"
#include "conn/encoder/dataset.hpp"
#include "conn/encoder/model.hpp"
#include "conn/encoder/trainer.hpp"
#include "conn/nn/adam.hpp"
#include "conn/nn/grad_check.hpp"

using namespace conn;
using Md = nn::Matrix<double>;
using Vd = nn::Vector<double>;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "conn_test_encoder";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

// Same table as tests/oracles/encoder_oracle.py (4 x 6, column per token id).
Md oracle_table() {
  Md e(4, 6);
  e << 0.2, -0.1, 0.4, 0.3, -0.5, 0.1,  //
      0.0, 0.3, -0.2, 0.1, 0.2, -0.4,   //
      -0.3, 0.5, 0.1, -0.2, 0.0, 0.3,   //
      0.4, 0.1, 0.0, 0.5, -0.1, 0.2;
  return e;
}

void oracle_fill(ConnotationModel<double>& m) {
  const auto& ps = m.parameters();
  for (std::size_t p = 0; p < ps.size(); ++p)
    for (nn::Index k = 0; k < ps[p]->value.size(); ++k)
      ps[p]->value.data()[k] = 0.5 * std::sin(0.7 * static_cast<double>(k) + 0.3 * static_cast<double>(p));
}

ModelConfig tiny_config(Variant v, TrainMode mode) {
  ModelConfig c;
  c.hidden = 2;
  c.dim = 4;
  c.dropout = 0.0;
  c.variant = v;
  c.mode = mode;
  return c;
}

EncoderInput input(const std::string& w, Pos pos, std::vector<std::size_t> tokens, std::vector<std::size_t> related,
                   std::optional<std::size_t> self) {
  return {w, pos, std::move(tokens), std::move(related), self};
}

// Example 1 and 2 of the oracle's mixed-POS batch.
std::vector<Example> oracle_batch() {
  Example a;
  a.input = input("alpha", Pos::Noun, {0, 1, 2}, {3, 4}, 5);
  a.classes[Aspect::SocialValue] = 2;
  EmotionSet s;
  s[1] = s[2] = true;
  a.emotions = s;
  Example b;
  b.input = input("beta", Pos::Verb, {4, 2}, {}, std::nullopt);
  b.classes[Aspect::PerspWriterTheme] = 0;
  return {a, b};
}

const std::vector<Aspect> kOracleAspects = {Aspect::SocialValue, Aspect::Emotion, Aspect::PerspWriterTheme};

EmbeddingTable random_table(std::size_t n, Eigen::Index d, Rng& rng) {
  EmbeddingTable t(d);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXf v(d);
    for (Eigen::Index k = 0; k < d; ++k) v(k) = static_cast<float>(rng.normal());
    t.set("t" + std::to_string(i), v);
  }
  return t;
}

}  // namespace

TEST_CASE("definition preprocessing") {
  EmbeddingTable t(2);
  for (const char* w : {"person", "who", "pleads", "cases", "court", "lawyer", "counsel", "advocate", "attorney"})
    t.set(w, Eigen::Vector2f(1, 0));
  const std::vector<Definition> defs = {
      {"wordnik", "A person who pleads cases in a court."},
      {"ahd", "An attorney: a lawyer; counsel!"},
  };
  const std::vector<std::string> rel = {"advocate", "attorney", "unknownword", "lawyer"};
  const auto in = build_input({"attorney", Pos::Noun}, defs, &rel, t);
  REQUIRE(in);
  // "ahd" sorts before "wordnik"; stopwords, punctuation and the headword go.
  std::vector<std::string> words;
  for (auto id : in->tokens) words.push_back(t.key(id));
  CHECK(words == std::vector<std::string>{"lawyer", "counsel", "person", "pleads", "cases", "court"});
  std::vector<std::string> related;
  for (auto id : in->related) related.push_back(t.key(id));
  CHECK(related == std::vector<std::string>{"advocate", "lawyer"});
  CHECK(in->self == t.id("attorney"));

  const auto cut = build_input({"attorney", Pos::Noun}, defs, &rel, t, {3, 1});
  CHECK(cut->tokens.size() == 3);
  CHECK(cut->related.size() == 1);

  CHECK_FALSE(build_input({"attorney", Pos::Noun}, {{"x", "the of and"}}, nullptr, t));
  const auto oov_head = build_input({"barrister", Pos::Noun}, defs, nullptr, t);
  REQUIRE(oov_head);
  CHECK_FALSE(oov_head->self);
}

TEST_CASE("definition, related and verb-frame files") {
  const auto d = scratch("defs.tsv");
  write_file(d, "evil\tnoun\twordnik\tmorally bad\nevil\tadj\tahd\tprofoundly immoral\n");
  const auto defs = read_definitions(d.string());
  CHECK(defs.size() == 2);
  CHECK(defs.at({"evil", Pos::Adjective}).front().source == "ahd");

  const auto r = scratch("rel.tsv");
  write_file(r, "evil\tnoun\twickedness, sin ,\n");
  CHECK(read_related(r.string()).at({"evil", Pos::Noun}) == std::vector<std::string>{"wickedness", "sin"});

  const auto v = scratch("frames.tsv");
  write_file(v, "praise\ttrain\tP(wt)=1,E(t)=1,power=2\nkill\t-\tP(wt)=-1\n");
  const auto frames = read_verb_frames(v.string());
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].split == Split::Train);
  CHECK(frames[0].labels.at(Aspect::Power) == 2);
  CHECK_FALSE(frames[1].split);
  CHECK(verb_frame_entry(frames[0]).provenance.at(Aspect::EffectTheme) == "verb-frames");

  write_file(v, "praise\ttrain\tP(wt)=1\nkill\tdev\tSocialValue=1\n");
  try {
    read_verb_frames(v.string());
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 2);
  }
  write_file(v, "praise\ttrain\tpower=4\n");
  CHECK_THROWS_AS(read_verb_frames(v.string()), SchemaError);
}

TEST_CASE("word-level split") {
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("w" + std::to_string(i));
  const auto s = split_words(ten, {}, 5);
  std::map<Split, int> count;
  for (const auto& [_, sp] : s) ++count[sp];
  CHECK(count[Split::Train] == 6);
  CHECK(count[Split::Dev] == 2);
  CHECK(count[Split::Test] == 2);
  CHECK(split_words(ten, {}, 5) == s);

  // 1000 words, 100 pinned: proportions hold within 2% of words.
  std::vector<std::string> many;
  std::map<std::string, Split> fixed;
  for (int i = 0; i < 1000; ++i) {
    many.push_back("x" + std::to_string(i));
    if (i % 10 == 0) fixed[many.back()] = static_cast<Split>(i % 3);
  }
  const auto m = split_words(many, fixed, 9);
  std::map<Split, int> c2;
  for (const auto& [w, sp] : m) ++c2[sp];
  CHECK(std::abs(c2[Split::Train] - 600) <= 20);
  CHECK(std::abs(c2[Split::Dev] - 200) <= 20);
  for (const auto& [w, sp] : fixed) CHECK(m.at(w) == sp);

  // Every POS of a word shares its split; verb-frame splits are kept.
  EmbeddingTable t(2);
  for (const char* w : {"bad", "wicked", "harm", "good", "kind", "help"}) t.set(w, Eigen::Vector2f(0, 1));
  std::vector<LexiconEntry> lex;
  std::map<WordPos, std::vector<Definition>> defs;
  for (int i = 0; i < 30; ++i) {
    for (Pos p : {Pos::Noun, Pos::Adjective}) {
      LexiconEntry e;
      e.word = i == 0 ? "evil" : "w" + std::to_string(i);
      e.pos = p;
      e.labels[Aspect::SocialValue] = -1;
      lex.push_back(e);
      defs[{e.word, p}] = {{"src", "bad wicked harm"}};
    }
  }
  const std::vector<VerbFrame> frames = {{"evil", Split::Dev, {{Aspect::PerspWriterTheme, -1}}}};
  defs[{"evil", Pos::Verb}] = {{"src", "harm"}};
  const DatasetSources src{&lex, &frames, &defs, nullptr, &t};
  const Dataset ds = build_dataset(src, 3);
  int evil = 0;
  for (const auto& ex : ds.dev) evil += ex.input.word == "evil";
  CHECK(evil == 3);
  for (Split sp : {Split::Train, Split::Test})
    for (const auto& ex : ds.part(sp)) CHECK(ex.input.word != "evil");
  std::map<std::string, std::set<int>> where;
  for (Split sp : {Split::Train, Split::Dev, Split::Test})
    for (const auto& ex : ds.part(sp)) where[ex.input.word].insert(static_cast<int>(sp));
  for (const auto& [w, parts] : where) CHECK(parts.size() == 1);
}

TEST_CASE("label coding round-trips") {
  for (const Aspect a : all_aspects()) {
    if (a == Aspect::Emotion) continue;
    std::set<int> seen;
    for (int c = 0; c < class_count(a); ++c) {
      CHECK(label_to_class(a, class_to_label(a, c)) == c);
      seen.insert(class_to_label(a, c));
    }
    CHECK(static_cast<int>(seen.size()) == class_count(a));
  }
}

TEST_CASE("config validation and serialization") {
  ModelConfig c;
  CHECK_NOTHROW(c.validate());
  c.hidden = 100;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.variant = Variant::CE;
  CHECK_NOTHROW(c.validate());
  c.emotion_threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.emotion_threshold = 0.5;
  c.aspects = {Aspect::Politeness};
  c.loss_weights[Aspect::Politeness] = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.loss_weights[Aspect::Politeness] = 0.5;
  const ModelConfig back = ModelConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  CHECK(back.to_json() == c.to_json());
  CHECK(default_loss_weights().at(Aspect::Emotion) == 3.0);
  CHECK(default_loss_weights().at(Aspect::Factuality) == 0.167);
}

TEST_CASE("encode matches the oracle and has unit norm") {
  const Md table = oracle_table();
  ConnotationModel<double> ce(tiny_config(Variant::CE, TrainMode::Joint), kOracleAspects);
  ConnotationModel<double> cer(tiny_config(Variant::CER, TrainMode::Joint), kOracleAspects);
  for (auto* m : {&ce, &cer}) {
    oracle_fill(*m);
    m->set_embeddings(table.data(), 4, 6);
  }
  const auto in = input("alpha", Pos::Noun, {0, 1, 2}, {3, 4}, 5);
  const Vd v_ce = ce.encode(in, 0);
  const Vd v_cer = cer.encode(in, 0);
  const double ref_ce[] = {-0.02632496749951811, -0.5222571760175585, -0.5525742892017141, -0.6490116278600366};
  const double ref_cer[] = {-0.415209573394721, 0.03152078257951837, -0.906746744319573, 0.06646647344942691};
  for (int i = 0; i < 4; ++i) {
    CHECK(v_ce(i) == doctest::Approx(ref_ce[i]).epsilon(1e-12));
    CHECK(v_cer(i) == doctest::Approx(ref_cer[i]).epsilon(1e-12));
  }
  // No related words: CE+R falls back to CE.
  const auto bare = input("alpha", Pos::Noun, {0, 1, 2}, {}, 5);
  CHECK((cer.encode(bare, 0) - ce.encode(bare, 0)).norm() == 0.0);

  // Oracle head: argmax and emotion thresholding.
  const Prediction p = cer.predict(in);
  CHECK(p.classes.at(Aspect::SocialValue) == 0);
  CHECK(class_to_label(Aspect::SocialValue, p.classes.at(Aspect::SocialValue)) == -1);
  CHECK(p.emotions->to_string() == "11110000");  // bit 7 printed first: flags 4..7 set
  CHECK_FALSE(p.classes.contains(Aspect::PerspWriterTheme));

  Rng rng(3);
  const EmbeddingTable t = random_table(50, 8, rng);
  ModelConfig c;
  c.hidden = 4;
  c.dim = 8;
  c.variant = Variant::CER;
  FloatModel m(c, {Aspect::SocialValue});
  m.init(rng);
  m.set_embeddings(t.matrix().data(), 8, 50);
  for (int trial = 0; trial < 200; ++trial) {
    EncoderInput r;
    r.word = "w";
    const std::size_t n = 1 + rng.below(42);
    for (std::size_t i = 0; i < n; ++i) r.tokens.push_back(rng.below(50));
    const std::size_t k = rng.below(21);
    for (std::size_t i = 0; i < k; ++i) r.related.push_back(rng.below(50));
    CHECK(std::abs(m.encode(r, 0).cast<double>().norm() - 1.0) <= 1e-6);
  }
}

TEST_CASE("prediction rules") {
  Prediction p;
  predict_from_logits<double>(Aspect::Impact, Vd::Map(std::vector<double>{0, 5, 0}.data(), 3), 0.5, p);
  CHECK(p.classes.at(Aspect::Impact) == 1);
  CHECK(class_to_label(Aspect::Impact, 1) == 0);
  predict_from_logits<double>(Aspect::Emotion, Vd::Zero(8), 0.5, p);
  CHECK(p.emotions->all());
  predict_from_logits<double>(Aspect::Emotion, Vd::Constant(8, -1e-9), 0.5, p);
  CHECK(p.emotions->none());
  predict_from_logits<double>(Aspect::Power, Vd::Map(std::vector<double>{0, 1, 3, 3}.data(), 4), 0.5, p);
  CHECK(p.classes.at(Aspect::Power) == 2);
}

TEST_CASE("joint loss") {
  const Md table = oracle_table();
  ConnotationModel<double> m(tiny_config(Variant::CER, TrainMode::Joint), kOracleAspects);
  oracle_fill(m);
  m.set_embeddings(table.data(), 4, 6);
  const auto batch = oracle_batch();
  const std::vector<const Example*> ptrs = {&batch[0], &batch[1]};
  CHECK(m.batch_loss(ptrs, false) == doctest::Approx(22.992612326466705).epsilon(1e-12));

  // Doubling every lambda doubles the loss.
  ModelConfig doubled = tiny_config(Variant::CER, TrainMode::Joint);
  for (auto& [_, w] : doubled.loss_weights) w *= 2;
  ConnotationModel<double> m2(doubled, kOracleAspects);
  oracle_fill(m2);
  m2.set_embeddings(table.data(), 4, 6);
  CHECK(m2.batch_loss(ptrs, false) == doctest::Approx(2 * 22.992612326466705).epsilon(1e-12));

  // Single example, single aspect, lambda = 1: the weighted cross-entropy.
  ModelConfig one = tiny_config(Variant::CER, TrainMode::Joint);
  one.loss_weights[Aspect::SocialValue] = 1.0;
  ConnotationModel<double> m3(one, {Aspect::SocialValue});
  oracle_fill(m3);
  m3.set_embeddings(table.data(), 4, 6);
  m3.set_class_weights(Aspect::SocialValue, {0.5, 2.0, 1.5});
  const Vd x = m3.head_input(m3.encode(batch[0].input, 0), m3.self_vector(batch[0].input));
  const Vd logits = m3.head(Aspect::SocialValue).forward(x);
  CHECK(m3.example_loss(batch[0], false) ==
        doctest::Approx(nn::weighted_softmax_xent<double>(logits, 2, m3.class_weight_vector(Aspect::SocialValue),
                                                          nullptr)).epsilon(1e-14));

  // Aspects the example lacks contribute nothing; an unlabeled batch errors.
  Example none;
  none.input = batch[0].input;
  CHECK(m3.example_loss(none, false) == 0.0);
  CHECK_THROWS_AS(m3.batch_loss({&none}, false), std::invalid_argument);
}

TEST_CASE("full loss gradients pass a finite-difference check") {
  const Md table = oracle_table();
  const auto batch = oracle_batch();
  const std::vector<const Example*> ptrs = {&batch[0], &batch[1]};
  for (const auto mode : {TrainMode::Joint, TrainMode::Separate})
    for (const auto variant : {Variant::CE, Variant::CER})
      for (const double dropout : {0.0, 0.5}) {
        ModelConfig c = tiny_config(variant, mode);
        c.dropout = dropout;
        ConnotationModel<double> m(c, kOracleAspects);
        Rng init(17);
        m.init(init);
        m.set_embeddings(table.data(), 4, 6);
        m.set_class_weights(Aspect::SocialValue, {0.7, 1.1, 1.9});
        // re-seeding per call keeps the dropout masks fixed across evaluations
        auto loss = [&] {
          Rng r(5);
          return m.batch_loss(ptrs, false, dropout > 0 ? &r : nullptr);
        };
        auto grads = [&] {
          nn::zero_grads(m.parameters());
          Rng r(5);
          m.batch_loss(ptrs, true, dropout > 0 ? &r : nullptr);
        };
        const auto res = nn::grad_check_parameters(loss, grads, m.parameters());
        INFO(mode_name(mode), " ", variant_name(variant), " dropout ", dropout, " worst ", res.worst);
        // well inside the 1e-3 requirement; central differences at h = 1e-4
        // leave a truncation floor of a few 1e-6 on the LSTM biases
        CHECK(res.max_rel_error < 1e-5);
      }
}

TEST_CASE("separate and joint modes agree with a single aspect") {
  Rng rng(8);
  const EmbeddingTable t = random_table(30, 6, rng);
  std::vector<Example> xs;
  for (int i = 0; i < 12; ++i) {
    Example ex;
    ex.input = input("w" + std::to_string(i), Pos::Adjective, {rng.below(30), rng.below(30)}, {rng.below(30)}, rng.below(30));
    ex.classes[Aspect::Sentiment] = static_cast<int>(rng.below(3));
    xs.push_back(ex);
  }
  std::vector<const Example*> ptrs;
  for (const auto& ex : xs) ptrs.push_back(&ex);
  ModelConfig c;
  c.hidden = 3;
  c.dim = 6;
  c.loss_weights[Aspect::Sentiment] = 1.0;
  ModelConfig s = c;
  s.mode = TrainMode::Separate;
  auto joint = make_model(c, {Aspect::Sentiment}, t);
  auto sep = make_model(s, {Aspect::Sentiment}, t);
  Rng a(4), b(4);
  joint->init(a);
  sep->init(b);
  Rng da(6), db(6);
  CHECK(joint->batch_loss(ptrs, false, &da) == sep->batch_loss(ptrs, false, &db));
}

TEST_CASE("class weights") {
  std::vector<Example> xs(6);
  const int cls[] = {0, 0, 0, 1, 2, 2};
  for (int i = 0; i < 6; ++i) xs[static_cast<std::size_t>(i)].classes[Aspect::Impact] = cls[i];
  const auto w = class_weights(xs, Aspect::Impact);
  CHECK(w[0] == doctest::Approx(6.0 / 9.0));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(1.0));
  const auto p = class_weights(xs, Aspect::Power);
  CHECK(p == std::vector<double>(4, 1.0));
}

TEST_CASE("masked Adam steps leave skipped parameters alone") {
  nn::Parameter<double> a("a", 2, 1), b("b", 2, 1);
  a.grad.setConstant(1.0);
  b.grad.setConstant(1.0);
  nn::Adam<double> opt({&a, &b});
  opt.step({true, false});
  CHECK(b.value.isZero());
  CHECK(a.value(0) == doctest::Approx(-0.001));
  opt.step({false, true});
  // b's first update gets full bias correction despite being the 2nd step
  CHECK(b.value(0) == doctest::Approx(-0.001));
  b.grad(0) = std::nan("");
  CHECK_NOTHROW(opt.step({true, false}));
}

TEST_CASE("training is deterministic, lr 0 is inert, checkpoints round-trip") {
  Rng rng(12);
  const EmbeddingTable t = random_table(40, 8, rng);
  Dataset ds;
  for (int i = 0; i < 24; ++i) {
    Example ex;
    const bool verb = i % 3 == 0;
    ex.input = input("w" + std::to_string(i), verb ? Pos::Verb : Pos::Noun,
                     {rng.below(40), rng.below(40), rng.below(40)}, {rng.below(40), rng.below(40)}, rng.below(40));
    if (verb) {
      ex.classes[Aspect::Power] = static_cast<int>(rng.below(4));
    } else {
      ex.classes[Aspect::SocialValue] = static_cast<int>(rng.below(3));
      EmotionSet s;
      s[rng.below(8)] = true;
      ex.emotions = s;
    }
    (i < 16 ? ds.train : ds.dev).push_back(ex);
  }
  ModelConfig c;
  c.hidden = 4;
  c.dim = 8;
  c.epochs = 4;
  c.batch = 5;
  const auto r1 = train_connotation(c, ds, t);
  const auto r2 = train_connotation(c, ds, t);
  REQUIRE(r1.log.size() == r2.log.size());
  for (std::size_t i = 0; i < r1.log.size(); ++i) CHECK(r1.log[i].train_loss == r2.log[i].train_loss);
  CHECK(r1.model->aspects() ==
        std::vector<Aspect>{Aspect::SocialValue, Aspect::Emotion, Aspect::Power});

  // Separate mode trains one encoder per aspect.
  ModelConfig s = c;
  s.mode = TrainMode::Separate;
  const auto rs = train_connotation(s, ds, t);
  CHECK(rs.model->encoder_count() == 3);

  ModelConfig frozen = c;
  frozen.lr = 0.0;
  frozen.epochs = 1;
  const auto r0 = train_connotation(frozen, ds, t);
  auto fresh = make_model(frozen, r0.model->aspects(), t);
  Rng init(frozen.seed);
  fresh->init(init);
  for (std::size_t i = 0; i < fresh->parameters().size(); ++i)
    CHECK(fresh->parameters()[i]->value == r0.model->parameters()[i]->value);

  const auto path = scratch("model.ckpt").string();
  save_model(path, *r1.model);
  const auto loaded = load_model(path, t);
  CHECK(loaded->aspects() == r1.model->aspects());
  for (const auto& ex : ds.dev) {
    const auto a = r1.model->predict(ex.input);
    const auto b = loaded->predict(ex.input);
    CHECK(a.classes == b.classes);
    CHECK(a.emotions == b.emotions);
  }
  const auto recs = prediction_records(*r1.model, ds.dev);
  std::size_t expected = 0;
  for (const auto& ex : ds.dev) expected += ex.input.pos == Pos::Verb ? 1 : 2;
  CHECK(recs.size() == expected);
  CHECK(recs.front().contains("gold"));
}

TEST_CASE("baselines") {
  // Maj: majority class 1 (label 0) covers half the test set.
  EmbeddingTable t(2);
  t.set("a", Eigen::Vector2f(1, 0));
  std::vector<Example> train(5), test(4);
  const int tr[] = {1, 1, 1, 0, 2};
  const int te[] = {1, 1, 0, 2};
  for (int i = 0; i < 5; ++i) train[static_cast<std::size_t>(i)].classes[Aspect::Impact] = tr[i];
  for (int i = 0; i < 4; ++i) test[static_cast<std::size_t>(i)].classes[Aspect::Impact] = te[i];
  const auto rep = run_baselines(train, test, t, {Aspect::Impact});
  // hand confusion matrix: class 1 F1 = 2*2/(2*2+2) = 2/3; other classes 0
  CHECK(rep.maj.f1.at(Aspect::Impact) == doctest::Approx((2.0 / 3.0) / 3.0));

  // LR on a linearly separable two-feature problem.
  Rng rng(2);
  Eigen::MatrixXd x(60, 2);
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    x.row(i) << 3.0 * c + rng.uniform(-0.5, 0.5), -2.0 * c + rng.uniform(-0.5, 0.5);
    y.push_back(c);
  }
  LogisticRegression lr(3, 1e-6);
  lr.fit(x, y);
  int correct = 0;
  for (int i = 0; i < 60; ++i) correct += lr.predict(x.row(i).transpose()) == y[static_cast<std::size_t>(i)];
  CHECK(correct == 60);

  // Degenerate single-class aspect: Maj predicts it, LR skips.
  std::vector<Example> one(3);
  for (auto& ex : one) ex.classes[Aspect::Sentiment] = 2;
  const auto deg = run_baselines(one, one, t, {Aspect::Sentiment});
  CHECK(deg.lr_skipped == std::vector<Aspect>{Aspect::Sentiment});
  CHECK(deg.maj.f1.at(Aspect::Sentiment) == doctest::Approx(1.0 / 3.0));
}

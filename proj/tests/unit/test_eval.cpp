#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "../support/metric_fixtures.hpp"
#include "conn/core/embeddings.hpp"
#include "conn/core/error.hpp"
#include "conn/core/rng.hpp"
#include "conn/eval/metrics.hpp"
#include "conn/eval/space.hpp"

using namespace conn;

namespace {

const std::vector<int> kPolarity = {-1, 0, 1};

LexiconEntry labeled(const std::string& w, Pos pos, std::optional<int> social) {
  LexiconEntry e;
  e.word = w;
  e.pos = pos;
  if (social) e.labels[Aspect::SocialValue] = *social;
  return e;
}

// Independent brute force: full sort of all other points.
std::vector<std::size_t> brute_knn(const EmbeddingSpace& s, std::size_t q, std::size_t k, bool same_word) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != q && !(same_word && s.key(i).word == s.key(q).word)) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double da = (s.vector(a) - s.vector(q)).squaredNorm();
    const double db = (s.vector(b) - s.vector(q)).squaredNorm();
    if (da != db) return da < db;
    return s.key(a) < s.key(b);
  });
  idx.resize(k);
  return idx;
}

}  // namespace

TEST_CASE("macro_f1 values") {
  const std::vector<int> g = {-1, 1, 0, 0, 1};
  CHECK(macro_f1(g, g, kPolarity) == doctest::Approx(1.0));

  for (const auto& c : fixtures::kMacroF1)
    CHECK(macro_f1(c.pred, c.gold, c.classes) == doctest::Approx(c.f1).epsilon(1e-12));

  CHECK_THROWS_AS(macro_f1(std::vector<int>{}, std::vector<int>{}, kPolarity), std::invalid_argument);
  CHECK_THROWS_AS(macro_f1(std::vector<int>{7}, std::vector<int>{0}, kPolarity), std::invalid_argument);
}

TEST_CASE("macro_f1 is symmetric under consistent relabeling") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    std::vector<int> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.below(3)) - 1;
      g[i] = static_cast<int>(rng.below(3)) - 1;
    }
    std::vector<int> perm = {-1, 0, 1};
    rng.shuffle(perm);
    auto relabel = [&](std::vector<int> v) {
      for (int& x : v) x = perm[static_cast<std::size_t>(x + 1)];
      return v;
    };
    const double base = macro_f1(p, g, kPolarity);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);
    CHECK(macro_f1(relabel(p), relabel(g), kPolarity) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("approximate randomization") {
  const std::vector<double> a = {1, 0, 1, 1, 0, 1};
  CHECK(approx_randomization(a, a, 500, 3) == 1.0);

  // Perfect separation, n = 20: exact null probability is 2 / 2^20, so only
  // the +1 smoothing term survives with overwhelming probability.
  const std::vector<double> ones(20, 1.0), zeros(20, 0.0);
  const double p = approx_randomization(ones, zeros, 10000, 7);
  CHECK(p <= 0.01);
  CHECK(p > 0.0);

  // Exact enumeration over all 2^8 sign patterns gives 0.375.
  const std::vector<double> x = {1, 1, 0, 1, 1, 0, 1, 1};
  const std::vector<double> y = {0, 1, 0, 0, 1, 1, 0, 0};
  const double px = approx_randomization(x, y, 10000, 5);
  CHECK(std::abs(px - 0.375) < 0.015);  // ~3 sigma at R = 10000

  CHECK(approx_randomization(x, y, 1000, 99) == approx_randomization(x, y, 1000, 99));
  CHECK_THROWS_AS(approx_randomization(x, ones, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(approx_randomization(x, y, 0, 1), std::invalid_argument);
}

TEST_CASE("randomization p-value is in (0,1] and monotone in the observed delta") {
  Rng rng(4);
  std::vector<double> null(1000);
  for (auto& d : null) d = rng.normal() * 3.0;
  double prev = 2.0;
  for (double obs = 0.0; obs < 15.0; obs += 0.25) {
    const double p = randomization_p_value(null, obs);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev);
    CHECK(randomization_p_value(null, -obs) == p);
    prev = p;
  }
}

TEST_CASE("metric-based randomization") {
  const std::vector<int> gold = {0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2};
  const CorpusMetric f1 = [](std::span<const int> p, std::span<const int> g) {
    const std::vector<int> cls = {0, 1, 2};
    return macro_f1(p, g, cls);
  };
  CHECK(approx_randomization_metric(gold, gold, gold, f1, 200, 1) == 1.0);
  const std::vector<int> wrong = {1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0};
  CHECK(approx_randomization_metric(gold, wrong, gold, f1, 2000, 1) < 0.01);
}

TEST_CASE("knn matches brute force on a lattice and ties break by word") {
  EmbeddingSpace s;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) s.add({"p" + std::to_string(x + 3) + std::to_string(y + 3), Pos::Noun}, Eigen::Vector2d(x, y));
  const SpaceKey origin{"p33", Pos::Noun};
  const auto q = *s.find(origin);
  const auto nn = knn(s, origin, {10, false});
  const auto oracle = brute_knn(s, q, 10, false);
  REQUIRE(nn.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(nn[i].index == oracle[i]);
  for (std::size_t i = 1; i < nn.size(); ++i) CHECK(nn[i - 1].distance <= nn[i].distance);
  // Four unit-distance neighbors in word order.
  CHECK(s.key(nn[0].index).word == "p23");
  CHECK(s.key(nn[1].index).word == "p32");
  CHECK(s.key(nn[2].index).word == "p34");
  CHECK(s.key(nn[3].index).word == "p43");

  const auto all = knn(s, origin, {s.size() - 1, false});
  CHECK(all.size() == s.size() - 1);
  CHECK(std::none_of(all.begin(), all.end(), [&](const Neighbor& n) { return n.index == q; }));
  CHECK_THROWS_AS(knn(s, origin, {s.size(), false}), std::invalid_argument);
  CHECK_THROWS_AS(knn(s, {"nowhere", Pos::Noun}, {1, false}), std::out_of_range);
}

TEST_CASE("duplicate vectors tie lexicographically") {
  EmbeddingSpace s;
  s.add({"q", Pos::Noun}, Eigen::Vector2d(0, 0));
  s.add({"zeta", Pos::Noun}, Eigen::Vector2d(1, 1));
  s.add({"alpha", Pos::Noun}, Eigen::Vector2d(1, 1));
  s.add({"mid", Pos::Adjective}, Eigen::Vector2d(1, 1));
  const auto nn = knn(s, {"q", Pos::Noun}, {3, false});
  CHECK(s.key(nn[0].index).word == "alpha");
  CHECK(s.key(nn[1].index).word == "mid");
  CHECK(s.key(nn[2].index).word == "zeta");
}

TEST_CASE("knn is invariant under translation") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    EmbeddingSpace s;
    for (int i = 0; i < 60; ++i) {
      Eigen::VectorXd v(5);
      // small-integer coordinates make duplicate distances common
      for (int k = 0; k < 5; ++k) v(k) = static_cast<double>(rng.below(5));
      s.add({"w" + std::to_string(i), Pos::Noun}, v);
    }
    Eigen::VectorXd offset(5);
    for (int k = 0; k < 5; ++k) offset(k) = static_cast<double>(rng.below(2001)) - 1000.0;
    const EmbeddingSpace t = s.translated(offset);
    for (std::size_t i = 0; i < s.size(); i += 7) {
      const auto a = knn(s, s.key(i), {12, false});
      const auto b = knn(t, t.key(i), {12, false});
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j].index == b[j].index);
    }
  }
}

TEST_CASE("purity ratio on a mixed fixture") {
  // Oracle frozen from an independent numpy brute force (k = 3).
  std::vector<LexiconEntry> lex;
  EmbeddingSpace s;
  auto put = [&](const std::string& w, double x, double y, std::optional<int> l) {
    s.add({w, Pos::Noun}, Eigen::Vector2d(x, y));
    lex.push_back(labeled(w, Pos::Noun, l));
  };
  put("a", 0, 0, 1);
  put("b", 1, 0, 1);
  put("c", 0, 1, -1);
  put("d", 2, 2, 1);
  put("e", 3, 2, -1);
  put("f", 2, 3, 0);
  put("g", 5, 5, -1);
  put("h", 5, 6, 1);
  put("i", 6, 5, -1);
  put("j", 1, 1, std::nullopt);
  const auto idx = index_lexicon(lex);
  const PurityOptions opt{3, 1.0, true};
  const auto pos = purity_ratio(Aspect::SocialValue, 1, s, idx, opt);
  const auto neg = purity_ratio(Aspect::SocialValue, -1, s, idx, opt);
  CHECK(pos.ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pos.seeds == 4);
  CHECK(neg.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(neg.seeds == 4);
  CHECK_THROWS_AS(purity_ratio(Aspect::Impact, 1, s, idx, opt), std::invalid_argument);
}

TEST_CASE("purity ratio zero-denominator floor") {
  const std::size_t k = 5;
  std::vector<LexiconEntry> lex;
  EmbeddingSpace s;
  for (std::size_t i = 0; i <= k; ++i) {
    s.add({"pos" + std::to_string(i), Pos::Adjective}, Eigen::Vector2d(0.01 * static_cast<double>(i), 0));
    lex.push_back(labeled("pos" + std::to_string(i), Pos::Adjective, 1));
  }
  s.add({"far", Pos::Adjective}, Eigen::Vector2d(100, 100));
  lex.push_back(labeled("far", Pos::Adjective, -1));
  const auto r = purity_ratio(Aspect::SocialValue, 1, s, index_lexicon(lex), {k, 1.0, true});
  CHECK(r.ratio == doctest::Approx(static_cast<double>(k)));
}

TEST_CASE("purity ratio matches brute force on random fixtures") {
  Rng rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 20 + rng.below(181);
    std::vector<LexiconEntry> lex;
    EmbeddingSpace s;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = "w" + std::to_string(i / 2);  // pairs share a word across POS
      const Pos pos = i % 2 ? Pos::Adjective : Pos::Noun;
      Eigen::VectorXd v(4);
      for (int j = 0; j < 4; ++j) v(j) = static_cast<double>(rng.below(7));
      s.add({w, pos}, v);
      const auto roll = rng.below(4);
      lex.push_back(labeled(w, pos, roll == 3 ? std::nullopt : std::optional<int>(static_cast<int>(roll) - 1)));
    }
    const auto idx = index_lexicon(lex);
    const std::size_t k = 1 + rng.below(10);
    for (int c : {1, -1}) {
      double total = 0;
      std::size_t seeds = 0;
      for (std::size_t q = 0; q < s.size(); ++q) {
        if (lex[q].label(Aspect::SocialValue) != c) continue;
        std::size_t same = 0, opp = 0;
        for (auto i : brute_knn(s, q, k, true)) {
          const auto l = lex[i].label(Aspect::SocialValue);
          same += l == c;
          opp += l == -c;
        }
        total += static_cast<double>(same) / std::max<double>(1.0, static_cast<double>(opp));
        ++seeds;
      }
      if (seeds == 0) continue;
      const auto r = purity_ratio(Aspect::SocialValue, c, s, idx, {k, 1.0, true});
      CHECK(r.seeds == seeds);
      CHECK(r.ratio == total / static_cast<double>(seeds));
    }
  }
}

TEST_CASE("embedding table text format") {
  const auto dir = std::filesystem::temp_directory_path() / "conn_test_embeddings";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "e.txt").string();
  {
    std::ofstream out(path);
    out << "3 2\nking 0.5 -1\nqueen 0.25 2\nsnake 1e-3 4\n";
  }
  const auto t = read_embeddings(path);
  REQUIRE(t.size() == 3);
  CHECK(t.dim() == 2);
  CHECK(t.vector(*t.id("queen"))(1) == 2.0f);
  CHECK(t.vector_or_zero("absent").isZero());

  write_embeddings((dir / "f.txt").string(), t);
  const auto u = read_embeddings((dir / "f.txt").string());
  CHECK(u.keys() == t.keys());
  CHECK(u.matrix() == t.matrix());

  {
    std::ofstream out(path);
    out << "a 1 2\nb 1 2 3\n";
  }
  try {
    read_embeddings(path);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 2);
  }

  EmbeddingTable keyed;
  keyed.set("evil|noun", Eigen::Vector2f(1, 0));
  keyed.set("evil|adjective", Eigen::Vector2f(0, 1));
  const auto sp = EmbeddingSpace::from_keyed_table(keyed);
  CHECK(sp.size() == 2);
  CHECK(sp.find({"evil", Pos::Adjective}).has_value());
  std::filesystem::remove_all(dir);
}

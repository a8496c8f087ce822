#include "conn/diagnostics/grad_suite.hpp"

#include <bitset>
#include <functional>

#include "conn/core/rng.hpp"
#include "conn/encoder/model.hpp"
#include "conn/nn/grad_check.hpp"
#include "conn/nn/layers.hpp"
#include "conn/nn/lstm.hpp"
#include "conn/stance/model.hpp"

namespace conn {

namespace {

using Md = nn::Matrix<double>;
using Vd = nn::Vector<double>;
using nn::Index;

Md random_matrix(Rng& rng, Index r, Index c, double scale = 1.0) {
  Md m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

Index pick(Rng& rng, Index lo, Index hi) { return lo + static_cast<Index>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

std::vector<nn::GradTarget> parameter_targets(const nn::ParameterList<double>& params) {
  std::vector<nn::GradTarget> out;
  for (auto* p : params) out.push_back({p->name, &p->value, p->grad});
  return out;
}

nn::GradCheckResult check_lstm(Rng& rng, double h) {
  const Index d = pick(rng, 1, 4), H = pick(rng, 1, 3), T = pick(rng, 1, 5);
  nn::Lstm<double> cell("lstm", d, H);
  cell.init(rng);
  for (auto* p : cell.parameters()) p->value += random_matrix(rng, p->value.rows(), p->value.cols(), 0.3);
  Md seq = random_matrix(rng, d, T);
  Md h0 = random_matrix(rng, H, 1, 0.5);
  Md c0 = random_matrix(rng, H, 1, 0.5);
  const bool reversed = rng.coin();
  const Vd rh = random_matrix(rng, H, 1), rc = random_matrix(rng, H, 1);
  auto loss = [&] {
    nn::LstmTrace<double> tr;
    cell.forward(seq, reversed, h0.col(0), c0.col(0), tr);
    return rh.dot(tr.hidden.col(T)) + rc.dot(tr.cells.col(T));
  };
  nn::zero_grads(cell.parameters());
  nn::LstmTrace<double> tr;
  cell.forward(seq, reversed, h0.col(0), c0.col(0), tr);
  Md d_seq = Md::Zero(d, T);
  Vd dh0, dc0;
  cell.backward(seq, tr, rh, rc, &d_seq, &dh0, &dc0);
  auto targets = parameter_targets(cell.parameters());
  targets.push_back({"seq", &seq, d_seq});
  targets.push_back({"h0", &h0, Md(dh0)});
  targets.push_back({"c0", &c0, Md(dc0)});
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_bilstm(Rng& rng, double h) {
  const Index d = pick(rng, 1, 4), H = pick(rng, 1, 3), T = pick(rng, 1, 5);
  nn::BiLstm<double> lstm("bilstm", d, H);
  lstm.init(rng);
  for (auto* p : lstm.parameters()) p->value += random_matrix(rng, p->value.rows(), p->value.cols(), 0.3);
  Md seq = random_matrix(rng, d, T);
  Md cells = random_matrix(rng, 2 * H, 1, 0.5);
  const Vd rh = random_matrix(rng, 2 * H, 1), rc = random_matrix(rng, 2 * H, 1);
  auto loss = [&] {
    nn::BiLstm<double>::Trace tr;
    const Vd c0 = cells.col(0);
    const Vd out = lstm.forward(seq, tr, &c0);
    return rh.dot(out) + rc.dot(nn::BiLstm<double>::final_cells(tr));
  };
  nn::zero_grads(lstm.parameters());
  nn::BiLstm<double>::Trace tr;
  const Vd c0 = cells.col(0);
  lstm.forward(seq, tr, &c0);
  Md d_seq = Md::Zero(d, T);
  Vd d_cells;
  lstm.backward(seq, tr, rh, &rc, &d_seq, &d_cells);
  auto targets = parameter_targets(lstm.parameters());
  targets.push_back({"seq", &seq, d_seq});
  targets.push_back({"init_cells", &cells, Md(d_cells)});
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_attention(Rng& rng, double h) {
  const Index n = pick(rng, 1, 5), d = pick(rng, 1, 5), dv = pick(rng, 1, 4);
  Md q = random_matrix(rng, d, 1), k = random_matrix(rng, n, d), v = random_matrix(rng, n, dv);
  const Vd r = random_matrix(rng, dv, 1);
  auto loss = [&] { return r.dot(nn::scaled_dot_attention<double>(q.col(0), k, v)); };
  nn::AttentionTrace<double> tr;
  const Vd qv = q.col(0);
  nn::scaled_dot_attention(qv, k, v, &tr);
  Vd dq = Vd::Zero(d);
  Md dk = Md::Zero(n, d), dvv = Md::Zero(n, dv);
  nn::scaled_dot_attention_backward(qv, k, v, tr, r, &dq, &dk, &dvv);
  std::vector<nn::GradTarget> targets = {{"query", &q, dq}, {"keys", &k, dk}, {"values", &v, dvv}};
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_linear(Rng& rng, double h) {
  const Index in = pick(rng, 1, 6), out = pick(rng, 1, 5);
  nn::Linear<double> lin("linear", in, out);
  lin.init(rng);
  lin.bias.value = random_matrix(rng, out, 1);
  Md x = random_matrix(rng, in, 1);
  const Vd r = random_matrix(rng, out, 1);
  auto loss = [&] { return r.dot(lin.forward(x.col(0))); };
  nn::zero_grads(lin.parameters());
  const Vd dx = lin.backward(x.col(0), r);
  auto targets = parameter_targets(lin.parameters());
  targets.push_back({"x", &x, Md(dx)});
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_softmax_xent(Rng& rng, double h) {
  const Index c = pick(rng, 2, 6);
  Md z = random_matrix(rng, c, 1, 2.0);
  Vd w(c);
  for (Index i = 0; i < c; ++i) w(i) = 0.2 + 2.0 * rng.uniform();
  const Index target = pick(rng, 0, c - 1);
  auto loss = [&] { return nn::weighted_softmax_xent<double>(z.col(0), target, w, nullptr); };
  Vd dz;
  nn::weighted_softmax_xent<double>(z.col(0), target, w, &dz);
  std::vector<nn::GradTarget> targets = {{"logits", &z, Md(dz)}};
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_binary_xent(Rng& rng, double h) {
  Md z = random_matrix(rng, kEmotionCount, 1, 2.0);
  const EmotionSet y(rng.below(256));
  auto loss = [&] { return nn::binary_ova_xent<double>(z.col(0), y, nullptr); };
  Vd dz;
  nn::binary_ova_xent<double>(z.col(0), y, &dz);
  std::vector<nn::GradTarget> targets = {{"logits", &z, Md(dz)}};
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_l2_normalize(Rng& rng, double h) {
  const Index n = pick(rng, 1, 6);
  Md x = random_matrix(rng, n, 1);
  const Vd r = random_matrix(rng, n, 1);
  auto loss = [&] { return r.dot(nn::l2_normalize<double>(x.col(0))); };
  const Vd xv = x.col(0);
  const Vd dx = nn::l2_normalize_backward<double>(nn::l2_normalize(xv), xv.norm(), r);
  std::vector<nn::GradTarget> targets = {{"x", &x, Md(dx)}};
  return nn::grad_check(loss, targets, h);
}

nn::GradCheckResult check_dropout(Rng& rng, double h) {
  const Index n = pick(rng, 1, 8);
  const Vd mask = nn::dropout_mask<double>(n, 0.5, rng);
  Md x = random_matrix(rng, n, 1);
  const Vd r = random_matrix(rng, n, 1);
  auto loss = [&] { return r.dot(x.col(0).cwiseProduct(mask)); };
  std::vector<nn::GradTarget> targets = {{"x", &x, Md(r.cwiseProduct(mask))}};
  return nn::grad_check(loss, targets, h);
}

// Tiny CE+R model in joint mode over a random mixed-POS batch.
nn::GradCheckResult check_connotation_loss(Rng& rng, double h) {
  ModelConfig cfg;
  cfg.hidden = pick(rng, 1, 3);
  cfg.dim = 2 * cfg.hidden;
  cfg.variant = Variant::CER;
  cfg.mode = TrainMode::Joint;
  cfg.dropout = rng.coin() ? 0.5 : 0.0;
  const std::vector<Aspect> aspects = {Aspect::SocialValue, Aspect::Sentiment, Aspect::Emotion,
                                       Aspect::PerspWriterTheme, Aspect::Power};
  ConnotationModel<double> m(cfg, aspects);
  m.init(rng);
  const Index vocab = 8;
  const Md table = random_matrix(rng, cfg.dim, vocab, 0.7);
  m.set_embeddings(table.data(), cfg.dim, vocab);
  for (const Aspect a : aspects) {
    if (a == Aspect::Emotion) continue;
    std::vector<double> w;
    for (int c = 0; c < class_count(a); ++c) w.push_back(0.5 + rng.uniform());
    m.set_class_weights(a, w);
  }

  std::vector<Example> batch(static_cast<std::size_t>(pick(rng, 1, 4)));
  for (auto& ex : batch) {
    ex.input.pos = rng.coin() ? Pos::Verb : Pos::Noun;
    ex.input.word = "w";
    for (Index t = pick(rng, 1, 4); t > 0; --t) ex.input.tokens.push_back(rng.below(vocab));
    for (Index t = pick(rng, 0, 3); t > 0; --t) ex.input.related.push_back(rng.below(vocab));
    if (rng.coin()) ex.input.self = rng.below(vocab);
    if (ex.input.pos == Pos::Verb) {
      ex.classes[Aspect::PerspWriterTheme] = static_cast<int>(rng.below(3));
      ex.classes[Aspect::Power] = static_cast<int>(rng.below(4));
    } else {
      ex.classes[Aspect::SocialValue] = static_cast<int>(rng.below(3));
      if (rng.coin()) ex.classes[Aspect::Sentiment] = static_cast<int>(rng.below(3));
      ex.emotions = EmotionSet(rng.below(256));
    }
  }
  std::vector<const Example*> ptrs;
  for (const auto& ex : batch) ptrs.push_back(&ex);
  const std::uint64_t mask_seed = rng.next();
  auto loss = [&] {
    Rng r(mask_seed);
    return m.batch_loss(ptrs, false, cfg.dropout > 0 ? &r : nullptr);
  };
  auto grads = [&] {
    nn::zero_grads(m.parameters());
    Rng r(mask_seed);
    m.batch_loss(ptrs, true, cfg.dropout > 0 ? &r : nullptr);
  };
  return nn::grad_check_parameters(loss, grads, m.parameters(), h);
}

nn::GradCheckResult check_stance_loss(Rng& rng, double h) {
  StanceConfig cfg;
  cfg.hidden = pick(rng, 1, 3);
  cfg.attention = AttentionSource::C;
  cfg.dropout = rng.coin() ? 0.5 : 0.0;
  const Index dw = pick(rng, 1, 4), de = pick(rng, 1, 4), vocab = 6;
  StanceModel<double> m(cfg, dw, de);
  m.init(rng);
  const Md words = random_matrix(rng, dw, vocab, 0.7);
  const Md attn = random_matrix(rng, de, vocab, 0.7);
  m.set_word_vectors(words.data(), dw, vocab);
  m.set_attention_vectors(attn.data(), de, vocab);
  StanceInput in;
  for (Index t = pick(rng, 1, 3); t > 0; --t) in.topic.push_back(rng.below(vocab));
  for (Index t = pick(rng, 1, 5); t > 0; --t) in.text.push_back(rng.uniform() < 0.2 ? kNoVector : rng.below(vocab));
  for (Index t = pick(rng, 0, 3); t > 0; --t) in.attend.push_back(rng.below(vocab));
  in.label = static_cast<int>(rng.below(kStanceClasses));
  const std::uint64_t mask_seed = rng.next();
  auto loss = [&] {
    Rng r(mask_seed);
    return m.loss(in, false, cfg.dropout > 0 ? &r : nullptr);
  };
  auto grads = [&] {
    nn::zero_grads(m.parameters());
    Rng r(mask_seed);
    m.loss(in, true, cfg.dropout > 0 ? &r : nullptr);
  };
  return nn::grad_check_parameters(loss, grads, m.parameters(), h);
}

using Check = nn::GradCheckResult (*)(Rng&, double);

const std::vector<std::pair<std::string, Check>>& suite() {
  static const std::vector<std::pair<std::string, Check>> ops = {
      {"lstm", check_lstm},
      {"bilstm", check_bilstm},
      {"attention", check_attention},
      {"linear", check_linear},
      {"softmax_xent", check_softmax_xent},
      {"binary_xent", check_binary_xent},
      {"l2_normalize", check_l2_normalize},
      {"dropout", check_dropout},
      {"connotation_loss", check_connotation_loss},
      {"stance_loss", check_stance_loss},
  };
  return ops;
}

}  // namespace

std::vector<std::string> grad_suite_ops() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : suite()) out.push_back(name);
  return out;
}

std::vector<GradCheckRecord> run_grad_suite(int instances, std::uint64_t seed, double h) {
  if (instances < 1) throw std::invalid_argument("instances must be positive");
  std::vector<GradCheckRecord> out;
  const auto& ops = suite();
  for (std::size_t o = 0; o < ops.size(); ++o) {
    for (int i = 0; i < instances; ++i) {
      Rng rng(Rng::derive(seed, o * 1000003 + static_cast<std::uint64_t>(i)));
      const auto r = ops[o].second(rng, h);
      out.push_back({ops[o].first, i, r.max_rel_error, r.worst, r.coordinates});
    }
  }
  return out;
}

}  // namespace conn

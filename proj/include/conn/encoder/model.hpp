#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conn/core/error.hpp"
#include "conn/core/rng.hpp"
#include "conn/encoder/dataset.hpp"
#include "conn/nn/layers.hpp"
#include "conn/nn/lstm.hpp"

namespace conn {

enum class Variant { CE, CER };
enum class TrainMode { Separate, Joint };

std::string_view variant_name(Variant v);
std::optional<Variant> parse_variant(std::string_view s);
std::string_view mode_name(TrainMode m);
std::optional<TrainMode> parse_mode(std::string_view s);

std::map<Aspect, double> default_loss_weights();

struct ModelConfig {
  nn::Index hidden = 150;
  nn::Index dim = 300;  // pretrained vector size; CE+R needs 2 * hidden == dim
  InputLimits limits;
  double dropout = 0.5;
  double emotion_threshold = 0.5;
  std::map<Aspect, double> loss_weights = default_loss_weights();
  int epochs = 80;
  int patience = 10;
  double lr = 0.001;
  std::size_t batch = 64;
  TrainMode mode = TrainMode::Joint;
  Variant variant = Variant::CER;
  std::vector<Aspect> aspects;  // empty: every aspect with training labels
  std::uint64_t seed = 13;
  bool smoke_check = true;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);
};

/// Inverse-frequency class weights w_c = n / (C * count_c) over the examples
/// that carry the aspect. Classes absent from `train` get weight 1.
std::vector<double> class_weights(const std::vector<Example>& train, Aspect a);

struct Prediction {
  std::map<Aspect, int> classes;
  std::optional<EmotionSet> emotions;
};

/// argmax for class heads (first index wins a tie); each emotion is flagged
/// when sigmoid(logit) >= threshold.
template <typename T>
void predict_from_logits(Aspect a, const nn::Vector<T>& logits, double threshold, Prediction& out) {
  if (a == Aspect::Emotion) {
    EmotionSet s;
    for (nn::Index i = 0; i < logits.size(); ++i)
      s[static_cast<std::size_t>(i)] = static_cast<double>(nn::sigmoid(logits(i))) >= threshold;
    out.emotions = s;
    return;
  }
  nn::Index best = 0;
  logits.maxCoeff(&best);
  out.classes[a] = static_cast<int>(best);
}

/// CE / CE+R encoders with one linear head per aspect. In joint mode one
/// encoder serves every aspect; in separate mode each aspect owns an encoder.
/// Pretrained vectors are fixed inputs, supplied as a dim x vocab matrix.
template <typename T>
class ConnotationModel {
 public:
  using Vec = nn::Vector<T>;
  using Mat = nn::Matrix<T>;

  struct EncodeCache {
    Mat seq;
    typename nn::BiLstm<T>::Trace lstm;
    Vec mask;  // empty when dropout is off
    Vec hd;    // encoder output after dropout
    bool attended = false;
    Mat related;
    nn::AttentionTrace<T> att;
    T norm = 0;
    Vec v;
  };

  ConnotationModel(ModelConfig cfg, std::vector<Aspect> aspects) : cfg_(std::move(cfg)), aspects_(std::move(aspects)) {
    cfg_.validate();
    if (aspects_.empty()) throw ConfigError("model needs at least one aspect");
    const std::size_t n_enc = cfg_.mode == TrainMode::Joint ? 1 : aspects_.size();
    encoders_.reserve(n_enc);
    for (std::size_t i = 0; i < n_enc; ++i)
      encoders_.emplace_back("encoder" + std::to_string(i), cfg_.dim, cfg_.hidden);
    for (std::size_t i = 0; i < aspects_.size(); ++i) {
      const Aspect a = aspects_[i];
      if (!cfg_.loss_weights.contains(a) || !(cfg_.loss_weights.at(a) > 0))
        throw ConfigError("missing or non-positive loss weight for " + std::string(aspect_name(a)));
      encoder_of_[a] = cfg_.mode == TrainMode::Joint ? 0 : i;
      heads_.emplace(a, nn::Linear<T>("head." + std::string(aspect_name(a)), 2 * cfg_.hidden + cfg_.dim,
                                      class_count(a)));
      weights_[a] = Vec::Ones(class_count(a));
    }
    for (std::size_t e = 0; e < encoders_.size(); ++e)
      for (auto* p : encoders_[e].parameters()) {
        params_.push_back(p);
        owner_.push_back({e, std::nullopt});
      }
    for (const Aspect a : aspects_)
      for (auto* p : heads_.at(a).parameters()) {
        params_.push_back(p);
        owner_.push_back({encoder_of_.at(a), a});
      }
  }

  ConnotationModel(const ConnotationModel&) = delete;
  ConnotationModel& operator=(const ConnotationModel&) = delete;

  const ModelConfig& config() const { return cfg_; }
  const std::vector<Aspect>& aspects() const { return aspects_; }
  bool has_aspect(Aspect a) const { return heads_.contains(a); }
  std::size_t encoder_count() const { return encoders_.size(); }
  std::size_t encoder_of(Aspect a) const { return encoder_of_.at(a); }
  nn::BiLstm<T>& encoder(std::size_t i) { return encoders_[i]; }
  nn::Linear<T>& head(Aspect a) { return heads_.at(a); }

  /// Encoders first (in order), then heads in aspect order.
  const nn::ParameterList<T>& parameters() const { return params_; }

  void init(Rng& rng) {
    for (auto& e : encoders_) e.init(rng);
    for (const Aspect a : aspects_) heads_.at(a).init(rng);
  }

  void set_embeddings(const T* data, nn::Index dim, nn::Index vocab) {
    if (dim != cfg_.dim) throw ConfigError("pretrained dimension " + std::to_string(dim) + " != configured " +
                                           std::to_string(cfg_.dim));
    emb_data_ = data;
    vocab_ = vocab;
  }
  Eigen::Map<const Mat> embeddings() const {
    if (!emb_data_) throw std::logic_error("model has no pretrained vectors attached");
    return Eigen::Map<const Mat>(emb_data_, cfg_.dim, vocab_);
  }

  void set_class_weights(Aspect a, const std::vector<double>& w) {
    if (!heads_.contains(a) || a == Aspect::Emotion) return;
    if (static_cast<nn::Index>(w.size()) != class_count(a)) throw std::invalid_argument("class weight count mismatch");
    for (std::size_t i = 0; i < w.size(); ++i) weights_[a](static_cast<nn::Index>(i)) = static_cast<T>(w[i]);
  }
  const Vec& class_weight_vector(Aspect a) const { return weights_.at(a); }

  /// Unit-norm connotation embedding. `mask` (size 2H) applies dropout to the
  /// encoder output. CE+R with no related words behaves like CE.
  Vec encode(const EncoderInput& in, std::size_t enc, const Vec* mask = nullptr, EncodeCache* cache = nullptr) const {
    EncodeCache local;
    EncodeCache& c = cache ? *cache : local;
    const auto emb = embeddings();
    if (in.tokens.empty()) throw std::invalid_argument("no definition tokens for '" + in.word + "'");
    c.seq.resize(cfg_.dim, static_cast<nn::Index>(in.tokens.size()));
    for (std::size_t t = 0; t < in.tokens.size(); ++t) c.seq.col(static_cast<nn::Index>(t)) = emb.col(column(in.tokens[t]));
    const Vec h = encoders_[enc].forward(c.seq, c.lstm);
    c.mask = mask ? *mask : Vec();
    c.hd = mask ? Vec(h.cwiseProduct(*mask)) : h;
    Vec s = c.hd;
    c.attended = cfg_.variant == Variant::CER && !in.related.empty();
    if (c.attended) {
      c.related.resize(static_cast<nn::Index>(in.related.size()), cfg_.dim);
      for (std::size_t r = 0; r < in.related.size(); ++r)
        c.related.row(static_cast<nn::Index>(r)) = emb.col(column(in.related[r])).transpose();
      s += nn::scaled_dot_attention(c.hd, c.related, c.related, &c.att);
    }
    c.norm = s.norm();
    c.v = nn::l2_normalize(s);
    return c.v;
  }

  /// Pretrained headword vector, zeros when the headword has none.
  Vec self_vector(const EncoderInput& in) const {
    if (!in.self) return Vec::Zero(cfg_.dim);
    return embeddings().col(column(*in.self));
  }

  Vec head_input(const Vec& v, const Vec& e) const {
    Vec x(v.size() + e.size());
    x << v, e;
    return x;
  }

  Prediction predict(const EncoderInput& in) const {
    Prediction out;
    const Vec e = self_vector(in);
    std::map<std::size_t, Vec> vs;
    for (const Aspect a : aspects_) {
      if (!applies_to(a, in.pos)) continue;
      const std::size_t enc = encoder_of_.at(a);
      if (!vs.contains(enc)) vs[enc] = encode(in, enc);
      predict_from_logits<T>(a, heads_.at(a).forward(head_input(vs[enc], e)), cfg_.emotion_threshold, out);
    }
    return out;
  }

  /// Connotation embedding from the first (joint: only) encoder serving the
  /// word's POS.
  Vec embedding(const EncoderInput& in) const {
    for (const Aspect a : aspects_)
      if (applies_to(a, in.pos)) return encode(in, encoder_of_.at(a));
    return encode(in, 0);
  }

  /// Sum over the example's labeled aspects of lambda_a * L^a. When
  /// `accumulate` is set, parameter gradients are added to the grad slots.
  /// `dropout_rng` (optional) samples one mask per encoder used. `active`
  /// (optional, per encoder) restricts the loss to aspects of active encoders.
  T example_loss(const Example& ex, bool accumulate, Rng* dropout_rng = nullptr,
                 const std::vector<bool>* active = nullptr) {
    const Vec e = self_vector(ex.input);
    std::map<std::size_t, EncodeCache> caches;
    std::map<std::size_t, Vec> dv;
    T loss = 0;
    for (const Aspect a : aspects_) {
      if (!applies_to(a, ex.input.pos) || !ex.has(a)) continue;
      const std::size_t enc = encoder_of_.at(a);
      if (active && !(*active)[enc]) continue;
      if (!caches.contains(enc)) {
        Vec mask;
        if (dropout_rng && cfg_.dropout > 0) mask = sample_mask(*dropout_rng);
        encode(ex.input, enc, mask.size() ? &mask : nullptr, &caches[enc]);
        dv[enc] = Vec::Zero(2 * cfg_.hidden);
      }
      const Vec x = head_input(caches[enc].v, e);
      auto& head = heads_.at(a);
      const Vec logits = head.forward(x);
      const T lambda = static_cast<T>(cfg_.loss_weights.at(a));
      Vec d_logits;
      T l = 0;
      if (a == Aspect::Emotion)
        l = nn::binary_ova_xent(logits, *ex.emotions, accumulate ? &d_logits : nullptr);
      else
        l = nn::weighted_softmax_xent(logits, ex.classes.at(a), weights_.at(a), accumulate ? &d_logits : nullptr);
      loss += lambda * l;
      if (accumulate) dv[enc] += head.backward(x, Vec(d_logits * lambda)).head(2 * cfg_.hidden);
    }
    if (accumulate)
      for (auto& [enc, c] : caches) backward_encoder(enc, c, dv[enc]);
    return loss;
  }

  /// Batch objective; throws when no example carries a trainable label.
  T batch_loss(const std::vector<const Example*>& batch, bool accumulate, Rng* dropout_rng = nullptr,
               const std::vector<bool>* active = nullptr) {
    bool any = false;
    for (const auto* ex : batch)
      for (const Aspect a : aspects_) any = any || (applies_to(a, ex->input.pos) && ex->has(a));
    if (!any) throw std::invalid_argument("batch has no labeled aspect");
    T total = 0;
    for (const auto* ex : batch) total += example_loss(*ex, accumulate, dropout_rng, active);
    return total;
  }

  /// Update mask over parameters(): encoders serving `aspects` and those
  /// aspects' heads, intersected with `active` encoders when given.
  std::vector<bool> update_mask(const std::set<Aspect>& aspects, const std::vector<bool>* active = nullptr) const {
    std::set<std::size_t> encs;
    for (const Aspect a : aspects)
      if (heads_.contains(a)) encs.insert(encoder_of_.at(a));
    std::vector<bool> m(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const auto& [enc, aspect] = owner_[i];
      m[i] = (aspect ? aspects.contains(*aspect) : encs.contains(enc)) && (!active || (*active)[enc]);
    }
    return m;
  }

  /// Parameters owned by encoder group `enc` (its encoder plus its heads).
  std::vector<std::size_t> group_parameters(std::size_t enc) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (owner_[i].first == enc) out.push_back(i);
    return out;
  }

 private:
  nn::Index column(std::size_t id) const {
    if (id >= static_cast<std::size_t>(vocab_)) throw std::out_of_range("token id outside the pretrained table");
    return static_cast<nn::Index>(id);
  }

  Vec sample_mask(Rng& rng) const {
    while (true) {
      Vec m = nn::dropout_mask<T>(2 * cfg_.hidden, cfg_.dropout, rng);
      if (!m.isZero()) return m;
    }
  }

  void backward_encoder(std::size_t enc, const EncodeCache& c, const Vec& dv) {
    const Vec ds = nn::l2_normalize_backward<T>(c.v, c.norm, dv);
    Vec dhd = ds;
    if (c.attended) nn::scaled_dot_attention_backward<T>(c.hd, c.related, c.related, c.att, ds, &dhd, nullptr, nullptr);
    const Vec dh = c.mask.size() ? Vec(dhd.cwiseProduct(c.mask)) : dhd;
    encoders_[enc].backward(c.seq, c.lstm, dh, nullptr, nullptr, nullptr);
  }

  ModelConfig cfg_;
  std::vector<Aspect> aspects_;
  std::vector<nn::BiLstm<T>> encoders_;
  std::map<Aspect, nn::Linear<T>> heads_;
  std::map<Aspect, std::size_t> encoder_of_;
  std::map<Aspect, Vec> weights_;
  nn::ParameterList<T> params_;
  std::vector<std::pair<std::size_t, std::optional<Aspect>>> owner_;
  const T* emb_data_ = nullptr;
  nn::Index vocab_ = 0;
};

}  // namespace conn

#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conn/core/embeddings.hpp"
#include "conn/core/error.hpp"
#include "conn/core/rng.hpp"
#include "conn/nn/layers.hpp"
#include "conn/nn/lstm.hpp"
#include "conn/stance/data.hpp"

namespace conn {

/// Extra attention over the text's nouns, adjectives and verbs, looked up in
/// pretrained word vectors (W), connotation embeddings (C) or fixed random
/// vectors (R).
enum class AttentionSource { None, W, C, R };
std::string_view attention_name(AttentionSource a);
std::optional<AttentionSource> parse_attention(std::string_view s);

struct StanceConfig {
  nn::Index hidden = 60;
  double dropout = 0.5;
  int epochs = 70;
  int patience = 10;
  double lr = 0.001;
  std::size_t batch = 64;
  Scenario scenario = Scenario::AllData;
  TruncationCaps caps;
  AttentionSource attention = AttentionSource::None;
  nn::Index random_dim = 300;  // size of the R vectors
  double neutral_ratio = 0.5;  // neutrals per pro/con example in each split
  std::uint64_t seed = 13;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static StanceConfig from_json(const nlohmann::json& j);
};

inline constexpr std::size_t kNoVector = std::numeric_limits<std::size_t>::max();

/// Token ids into the word table (topic, text) and the attention table
/// (attend); kNoVector marks a missing vector, read as zeros.
struct StanceInput {
  std::vector<std::size_t> topic;
  std::vector<std::size_t> text;
  std::vector<std::size_t> attend;
  int label = 0;
  std::string topic_name;
};

/// Stable 64-bit FNV-1a, used to seed per-word random vectors.
std::uint64_t fnv1a(std::string_view s);

/// Fixed random vectors ~ N(0, 1/dim) for every noun/adjective/verb token of
/// `xs`, keyed "word|pos" and seeded by the key alone.
EmbeddingTable random_attention_table(const std::vector<const std::vector<StanceExample>*>& parts, nn::Index dim,
                                      std::uint64_t seed);

/// Maps examples to ids. `attention` may be null (plain BiC). Connotation and
/// random tables use "word|pos" keys, the pretrained table plain words.
StanceInput make_stance_input(const StanceExample& ex, const EmbeddingTable& words, const EmbeddingTable* attention,
                              AttentionSource source);

/// Bidirectional conditional encoding: the topic BiLSTM's final cell states
/// seed the text BiLSTM's cells; stance logits come from the text summary h_T,
/// concatenated with topic-query attention over the attention vectors for the
/// BiC+E variants.
template <typename T>
class StanceModel {
 public:
  using Vec = nn::Vector<T>;
  using Mat = nn::Matrix<T>;

  struct Cache {
    Mat topic_seq, text_seq;
    typename nn::BiLstm<T>::Trace topic_tr, text_tr;
    Vec h_topic, c_topic, h_text;
    Vec mask;
    Vec query;
    bool attended = false;
    Mat keys;
    nn::AttentionTrace<T> att;
    Vec features;
  };

  StanceModel(const StanceConfig& cfg, nn::Index word_dim, nn::Index attention_dim)
      : cfg_(cfg),
        topic_("topic", word_dim, cfg.hidden),
        text_("text", word_dim, cfg.hidden),
        attention_dim_(cfg.attention == AttentionSource::None ? 0 : attention_dim) {
    cfg_.validate();
    if (cfg.attention != AttentionSource::None && attention_dim < 1) throw ConfigError("attention table is empty");
    if (attention_dim_) query_ = nn::Linear<T>("query", 2 * cfg.hidden, attention_dim_);
    out_ = nn::Linear<T>("output", 2 * cfg.hidden + attention_dim_, kStanceClasses);
    for (auto* p : topic_.parameters()) params_.push_back(p);
    for (auto* p : text_.parameters()) params_.push_back(p);
    if (attention_dim_)
      for (auto* p : query_.parameters()) params_.push_back(p);
    for (auto* p : out_.parameters()) params_.push_back(p);
  }

  StanceModel(const StanceModel&) = delete;
  StanceModel& operator=(const StanceModel&) = delete;

  const StanceConfig& config() const { return cfg_; }
  const nn::ParameterList<T>& parameters() const { return params_; }
  nn::Linear<T>& output_layer() { return out_; }
  nn::Index attention_dim() const { return attention_dim_; }
  nn::Index word_dim() const { return topic_.input_dim(); }

  void init(Rng& rng) {
    topic_.init(rng);
    text_.init(rng);
    if (attention_dim_) query_.init(rng);
    out_.init(rng);
  }

  void set_word_vectors(const T* data, nn::Index dim, nn::Index count) {
    if (dim != word_dim()) throw ConfigError("word vector dimension mismatch");
    words_ = data;
    n_words_ = count;
  }
  void set_attention_vectors(const T* data, nn::Index dim, nn::Index count) {
    if (dim != attention_dim_) throw ConfigError("attention vector dimension mismatch");
    attn_ = data;
    n_attn_ = count;
  }

  Vec logits(const StanceInput& in, const Vec* mask = nullptr, Cache* cache = nullptr) const {
    Cache local;
    Cache& c = cache ? *cache : local;
    c.topic_seq = gather(in.topic, words_, word_dim(), n_words_);
    c.text_seq = gather(in.text, words_, word_dim(), n_words_);
    c.h_topic = topic_.forward(c.topic_seq, c.topic_tr);
    c.c_topic = nn::BiLstm<T>::final_cells(c.topic_tr);
    c.h_text = text_.forward(c.text_seq, c.text_tr, &c.c_topic);
    c.mask = mask ? *mask : Vec();
    const nn::Index H2 = 2 * cfg_.hidden;
    c.features = Vec::Zero(H2 + attention_dim_);
    c.features.head(H2) = mask ? Vec(c.h_text.cwiseProduct(*mask)) : c.h_text;
    c.attended = attention_dim_ > 0 && !in.attend.empty();
    if (c.attended) {
      c.query = query_.forward(c.h_topic);
      c.keys = gather(in.attend, attn_, attention_dim_, n_attn_).transpose();
      c.features.tail(attention_dim_) = nn::scaled_dot_attention(c.query, c.keys, c.keys, &c.att);
    }
    return out_.forward(c.features);
  }

  int predict(const StanceInput& in) const {
    nn::Index best = 0;
    logits(in).maxCoeff(&best);
    return static_cast<int>(best);
  }

  /// Cross-entropy of one example; accumulates parameter gradients when asked.
  T loss(const StanceInput& in, bool accumulate, Rng* dropout_rng = nullptr) {
    Cache c;
    Vec mask;
    if (dropout_rng && cfg_.dropout > 0) mask = nn::dropout_mask<T>(2 * cfg_.hidden, cfg_.dropout, *dropout_rng);
    const Vec z = logits(in, mask.size() ? &mask : nullptr, &c);
    Vec dz;
    const T l = nn::weighted_softmax_xent<T>(z, in.label, Vec::Ones(kStanceClasses), accumulate ? &dz : nullptr);
    if (!accumulate) return l;
    const Vec df = out_.backward(c.features, dz);
    const nn::Index H2 = 2 * cfg_.hidden;
    Vec dh_text = df.head(H2);
    if (c.mask.size()) dh_text = dh_text.cwiseProduct(c.mask);
    Vec dh_topic = Vec::Zero(H2);
    if (c.attended) {
      Vec dq = Vec::Zero(attention_dim_);
      nn::scaled_dot_attention_backward<T>(c.query, c.keys, c.keys, c.att, df.tail(attention_dim_), &dq, nullptr,
                                           nullptr);
      dh_topic += query_.backward(c.h_topic, dq);
    }
    Vec d_cells;
    text_.backward(c.text_seq, c.text_tr, dh_text, nullptr, nullptr, &d_cells);
    topic_.backward(c.topic_seq, c.topic_tr, dh_topic, &d_cells, nullptr, nullptr);
    return l;
  }

 private:
  static Mat gather(const std::vector<std::size_t>& ids, const T* data, nn::Index dim, nn::Index count) {
    if (ids.empty()) throw std::invalid_argument("empty token sequence");
    Mat m = Mat::Zero(dim, static_cast<nn::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == kNoVector) continue;
      if (!data || ids[i] >= static_cast<std::size_t>(count)) throw std::out_of_range("token id outside its table");
      m.col(static_cast<nn::Index>(i)) = Eigen::Map<const Vec>(data + ids[i] * static_cast<std::size_t>(dim), dim);
    }
    return m;
  }

  StanceConfig cfg_;
  nn::BiLstm<T> topic_;
  nn::BiLstm<T> text_;
  nn::Index attention_dim_ = 0;
  nn::Linear<T> query_;
  nn::Linear<T> out_;
  nn::ParameterList<T> params_;
  const T* words_ = nullptr;
  nn::Index n_words_ = 0;
  const T* attn_ = nullptr;
  nn::Index n_attn_ = 0;
};

}  // namespace conn

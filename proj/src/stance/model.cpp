#include "conn/stance/model.hpp"

#include <cmath>
#include <set>

#include "conn/core/text.hpp"

namespace conn {

std::string_view attention_name(AttentionSource a) {
  switch (a) {
    case AttentionSource::None: return "none";
    case AttentionSource::W: return "w";
    case AttentionSource::C: return "c";
    case AttentionSource::R: return "r";
  }
  return "?";
}

std::optional<AttentionSource> parse_attention(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "none") return AttentionSource::None;
  if (l == "w") return AttentionSource::W;
  if (l == "c") return AttentionSource::C;
  if (l == "r") return AttentionSource::R;
  return std::nullopt;
}

void StanceConfig::validate() const {
  if (hidden < 1) throw ConfigError("stance hidden size must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (batch < 1) throw ConfigError("batch size must be >= 1");
  if (caps.train < 1 || caps.eval < 1) throw ConfigError("truncation caps must be positive");
  if (random_dim < 1) throw ConfigError("random attention dimension must be positive");
  if (!(neutral_ratio >= 0.0)) throw ConfigError("neutral ratio must be >= 0");
}

nlohmann::ordered_json StanceConfig::to_json() const {
  nlohmann::ordered_json j;
  j["hidden"] = hidden;
  j["dropout"] = dropout;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["lr"] = lr;
  j["batch"] = batch;
  j["scenario"] = scenario_name(scenario);
  j["train_cap"] = caps.train;
  j["eval_cap"] = caps.eval;
  j["attention"] = attention_name(attention);
  j["random_dim"] = random_dim;
  j["neutral_ratio"] = neutral_ratio;
  j["seed"] = seed;
  return j;
}

StanceConfig StanceConfig::from_json(const nlohmann::json& j) {
  StanceConfig c;
  try {
    c.hidden = j.value("hidden", c.hidden);
    c.dropout = j.value("dropout", c.dropout);
    c.epochs = j.value("epochs", c.epochs);
    c.patience = j.value("patience", c.patience);
    c.lr = j.value("lr", c.lr);
    c.batch = j.value("batch", c.batch);
    if (j.contains("scenario")) {
      const auto s = parse_scenario(j.at("scenario").get<std::string>());
      if (!s) throw ConfigError("unknown scenario");
      c.scenario = *s;
    }
    c.caps.train = j.value("train_cap", c.caps.train);
    c.caps.eval = j.value("eval_cap", c.caps.eval);
    if (j.contains("attention")) {
      const auto a = parse_attention(j.at("attention").get<std::string>());
      if (!a) throw ConfigError("unknown attention source");
      c.attention = *a;
    }
    c.random_dim = j.value("random_dim", c.random_dim);
    c.neutral_ratio = j.value("neutral_ratio", c.neutral_ratio);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad stance config: ") + e.what());
  }
  c.validate();
  return c;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string attention_key(const TaggedToken& t) {
  const auto pos = coarse_pos(t.tag);
  return t.surface + "|" + std::string(pos_name(*pos));
}

}  // namespace

EmbeddingTable random_attention_table(const std::vector<const std::vector<StanceExample>*>& parts, nn::Index dim,
                                      std::uint64_t seed) {
  std::set<std::string> keys;
  for (const auto* part : parts)
    for (const auto& ex : *part)
      for (const auto& t : ex.tokens)
        if (coarse_pos(t.tag)) keys.insert(attention_key(t));
  EmbeddingTable table(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& k : keys) {
    Rng rng(Rng::derive(seed, fnv1a(k)));
    Eigen::VectorXf v(dim);
    for (nn::Index i = 0; i < dim; ++i) v(i) = static_cast<float>(rng.normal() * scale);
    table.set(k, v);
  }
  return table;
}

StanceInput make_stance_input(const StanceExample& ex, const EmbeddingTable& words, const EmbeddingTable* attention,
                              AttentionSource source) {
  StanceInput in;
  in.label = static_cast<int>(ex.label);
  in.topic_name = ex.topic;
  auto word_id = [&](const std::string& w) { return words.id(w).value_or(kNoVector); };
  for (const auto& w : text::tokenize(ex.topic)) in.topic.push_back(word_id(w));
  if (in.topic.empty()) in.topic.push_back(kNoVector);
  for (const auto& t : ex.tokens) in.text.push_back(word_id(t.surface));
  if (in.text.empty()) throw std::invalid_argument("stance example without tokens");
  if (source != AttentionSource::None) {
    if (!attention) throw std::invalid_argument("attention variant needs an attention table");
    for (const auto& t : ex.tokens) {
      if (!coarse_pos(t.tag)) continue;
      const auto id = source == AttentionSource::W ? attention->id(t.surface) : attention->id(attention_key(t));
      in.attend.push_back(id.value_or(kNoVector));
    }
  }
  return in;
}

}  // namespace conn

#include "conn/encoder/model.hpp"

#include "conn/core/text.hpp"

namespace conn {

std::string_view variant_name(Variant v) { return v == Variant::CE ? "CE" : "CE+R"; }

std::optional<Variant> parse_variant(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "ce") return Variant::CE;
  if (l == "ce+r" || l == "cer" || l == "ce-r") return Variant::CER;
  return std::nullopt;
}

std::string_view mode_name(TrainMode m) { return m == TrainMode::Joint ? "J" : "S"; }

std::optional<TrainMode> parse_mode(std::string_view s) {
  const std::string l = text::lower(s);
  if (l == "j" || l == "joint") return TrainMode::Joint;
  if (l == "s" || l == "separate") return TrainMode::Separate;
  return std::nullopt;
}

std::map<Aspect, double> default_loss_weights() {
  using A = Aspect;
  return {
      {A::SocialValue, 0.3},      {A::Politeness, 0.5},       {A::Impact, 0.3},           {A::Factuality, 0.167},
      {A::Sentiment, 0.167},      {A::Emotion, 3.0},          {A::PerspWriterTheme, 1.0}, {A::PerspWriterAgent, 1.0},
      {A::PerspAgentTheme, 1.0},  {A::EffectTheme, 1.0},      {A::EffectAgent, 1.0},      {A::ValueTheme, 0.3},
      {A::ValueAgent, 0.3},       {A::StateTheme, 1.0},       {A::StateAgent, 1.0},       {A::Power, 0.3},
      {A::Agency, 0.3},
  };
}

void ModelConfig::validate() const {
  if (hidden < 1) throw ConfigError("hidden size must be positive");
  if (dim < 1) throw ConfigError("embedding dimension must be positive");
  if (variant == Variant::CER && 2 * hidden != dim)
    throw ConfigError("CE+R adds attention over pretrained vectors to the encoder output, so 2 * hidden (" +
                      std::to_string(2 * hidden) + ") must equal the pretrained dimension (" + std::to_string(dim) +
                      ")");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (!(emotion_threshold > 0.0 && emotion_threshold < 1.0)) throw ConfigError("emotion threshold must lie in (0, 1)");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (batch < 1) throw ConfigError("batch size must be >= 1");
  if (limits.max_tokens < 1) throw ConfigError("max tokens must be >= 1");
  for (const Aspect a : aspects) {
    const auto it = loss_weights.find(a);
    if (it == loss_weights.end() || !(it->second > 0))
      throw ConfigError("loss weight for " + std::string(aspect_name(a)) + " must be > 0");
  }
}

nlohmann::ordered_json ModelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["hidden"] = hidden;
  j["dim"] = dim;
  j["max_tokens"] = limits.max_tokens;
  j["max_related"] = limits.max_related;
  j["dropout"] = dropout;
  j["emotion_threshold"] = emotion_threshold;
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (const auto& [a, v] : loss_weights) w[std::string(aspect_name(a))] = v;
  j["loss_weights"] = w;
  j["epochs"] = epochs;
  j["patience"] = patience;
  j["lr"] = lr;
  j["batch"] = batch;
  j["mode"] = mode_name(mode);
  j["variant"] = variant_name(variant);
  nlohmann::ordered_json as = nlohmann::ordered_json::array();
  for (const Aspect a : aspects) as.push_back(aspect_name(a));
  j["aspects"] = as;
  j["seed"] = seed;
  j["smoke_check"] = smoke_check;
  return j;
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.hidden = j.value("hidden", c.hidden);
    c.dim = j.value("dim", c.dim);
    c.limits.max_tokens = j.value("max_tokens", c.limits.max_tokens);
    c.limits.max_related = j.value("max_related", c.limits.max_related);
    c.dropout = j.value("dropout", c.dropout);
    c.emotion_threshold = j.value("emotion_threshold", c.emotion_threshold);
    if (j.contains("loss_weights"))
      for (const auto& [k, v] : j.at("loss_weights").items()) {
        const auto a = parse_aspect(k);
        if (!a) throw ConfigError("unknown aspect in loss_weights: " + k);
        c.loss_weights[*a] = v.get<double>();
      }
    c.epochs = j.value("epochs", c.epochs);
    c.patience = j.value("patience", c.patience);
    c.lr = j.value("lr", c.lr);
    c.batch = j.value("batch", c.batch);
    if (j.contains("mode")) {
      const auto m = parse_mode(j.at("mode").get<std::string>());
      if (!m) throw ConfigError("unknown mode");
      c.mode = *m;
    }
    if (j.contains("variant")) {
      const auto v = parse_variant(j.at("variant").get<std::string>());
      if (!v) throw ConfigError("unknown variant");
      c.variant = *v;
    }
    if (j.contains("aspects"))
      for (const auto& s : j.at("aspects")) {
        const auto a = parse_aspect(s.get<std::string>());
        if (!a) throw ConfigError("unknown aspect " + s.get<std::string>());
        c.aspects.push_back(*a);
      }
    c.seed = j.value("seed", c.seed);
    c.smoke_check = j.value("smoke_check", c.smoke_check);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad model config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<double> class_weights(const std::vector<Example>& train, Aspect a) {
  const auto C = static_cast<std::size_t>(class_count(a));
  std::vector<std::size_t> counts(C, 0);
  std::size_t n = 0;
  for (const auto& ex : train)
    if (const auto it = ex.classes.find(a); it != ex.classes.end()) {
      ++counts[static_cast<std::size_t>(it->second)];
      ++n;
    }
  std::vector<double> w(C, 1.0);
  for (std::size_t c = 0; c < C; ++c)
    if (counts[c]) w[c] = static_cast<double>(n) / (static_cast<double>(C) * static_cast<double>(counts[c]));
  return w;
}

}  // namespace conn

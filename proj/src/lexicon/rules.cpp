#include "conn/lexicon/rules.hpp"

#include <fstream>
#include <initializer_list>

#include "conn/core/error.hpp"
#include "conn/core/text.hpp"

namespace conn {

namespace {

std::set<std::string> lowered(std::initializer_list<const char*> cats) {
  std::set<std::string> out;
  for (const char* c : cats) out.insert(text::lower(c));
  return out;
}

}  // namespace

RuleTable RuleTable::defaults() {
  RuleTable t;
  t.aspect_categories[Aspect::SocialValue] = lowered({
      "PowGain", "PowLoss", "PowEnds", "PowCon", "PowCoop", "PowAuPt", "PowPt",  "PowAuth",
      "PowOth",  "RcEthic", "RcRelig", "RcGain", "RcEnds",  "RcLoss",  "Virtue", "Vice",
      "WltPt",   "WltTran", "WltOth",  "Food",   "Object",  "Doctrin", "Academ", "Work",
      "NatrObj", "Vehicle", "Econ@",   "Goal",   "EnlPt",   "EnlOth",  "EnlLoss", "SklPt",
      "SklAsth", "SklOth",  "Exprsv",  "Legal",  "COLL",    "Means",   "MeansLw", "Fail",
      "Solve",   "EndsLw",  "Try",     "WlbPhys", "WlbGain", "WlbPt",  "WlbLoss", "WlbPsyc",
      "Quality", "SocRel"});
  t.aspect_categories[Aspect::Politeness] = lowered({
      "RspGain", "RspLoss", "RspOth", "AffGain", "AffLoss", "AffOth", "WlbPt", "SklPt", "EnlPt",
      "Relig", "WltPt", "Polit@", "HU", "Milit", "Legal", "Academ", "Doctrin"});
  t.aspect_categories[Aspect::Impact] = lowered({
      "PosAff",  "Pleasur", "Pain",    "NegAff",  "Anomie",  "NotLw",   "Vice",    "Virtue",
      "RcGain",  "RcLoss",  "RspLoss", "RcEthic", "RspOth",  "WlbPsyc", "RcEnds",  "EnlOth",
      "WlbGain", "RspGain", "EnlGain", "EnlEnds", "EnlPt",   "WlbLoss", "WlbPt",   "EnlLoss",
      "SklOth",  "WlbPhys", "Try",     "Goal",    "Work"});
  t.polarity_tiers = {
      {{"positiv", +1}, {"negativ", -1}},
      {{"hostile", -1}, {"submit", -1}},
      {{"strong", +1}, {"power", +1}, {"active", +1}, {"weak", -1}},
  };
  return t;
}

bool RuleTable::is_known_category(const std::string& c) const {
  for (const auto& [aspect, cats] : aspect_categories)
    if (cats.contains(c)) return true;
  for (const auto& tier : polarity_tiers)
    if (tier.contains(c)) return true;
  return false;
}

void RuleTable::validate() const {
  if (!(theta_factuality > 0.0 && theta_factuality < 1.0))
    throw ConfigError("theta_factuality must lie in (0,1)");
  if (!(theta_sentiment > 0.0 && theta_sentiment < 1.0))
    throw ConfigError("theta_sentiment must lie in (0,1)");
  for (const auto& [aspect, cats] : aspect_categories)
    if (aspect != Aspect::SocialValue && aspect != Aspect::Politeness && aspect != Aspect::Impact)
      throw ConfigError("inquirer categories can only feed SocialValue, Politeness, Impact");
  for (const auto& tier : polarity_tiers)
    for (const auto& [cat, sign] : tier)
      if (sign != 1 && sign != -1) throw ConfigError("polarity sign must be + or - for " + cat);
}

RuleTable RuleTable::load(const std::string& path) {
  RuleTable t = defaults();
  std::ifstream in(path);
  if (!in) throw SchemaError(path, 0, "cannot open rule table");
  std::string line;
  std::size_t lineno = 0;
  std::map<std::size_t, std::map<std::string, int>> tiers;
  bool tiers_overridden = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = text::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw SchemaError(path, lineno, "expected key = value");
    const std::string key = text::trim(body.substr(0, eq));
    std::string value = text::trim(body.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '[')) value = value.substr(1, value.size() - 2);

    std::vector<std::string> items;
    for (const auto& part : text::split(value, ',')) {
      std::string s = text::trim(part);
      if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
      if (!s.empty()) items.push_back(s);
    }

    try {
      if (key == "theta_factuality") {
        t.theta_factuality = text::parse_double(value);
      } else if (key == "theta_sentiment") {
        t.theta_sentiment = text::parse_double(value);
      } else if (key.rfind("aspect.", 0) == 0) {
        const auto aspect = parse_aspect(key.substr(7));
        if (!aspect) throw SchemaError(path, lineno, "unknown aspect '" + key.substr(7) + "'");
        std::set<std::string> cats;
        for (const auto& item : items) cats.insert(text::lower(item));
        t.aspect_categories[*aspect] = std::move(cats);
      } else if (key.rfind("polarity.", 0) == 0) {
        const long idx = text::parse_int(key.substr(9));
        if (idx < 1) throw SchemaError(path, lineno, "polarity tiers are numbered from 1");
        tiers_overridden = true;
        auto& tier = tiers[static_cast<std::size_t>(idx)];
        for (const auto& item : items) {
          const auto colon = item.rfind(':');
          if (colon == std::string::npos) throw SchemaError(path, lineno, "expected Category:+ or Category:-");
          const std::string sign = text::trim(item.substr(colon + 1));
          const std::string cat = text::lower(text::trim(item.substr(0, colon)));
          if (sign != "+" && sign != "-") throw SchemaError(path, lineno, "polarity sign must be + or -");
          if (!tier.emplace(cat, sign == "+" ? 1 : -1).second)
            throw SchemaError(path, lineno, "category '" + cat + "' listed twice in a tier");
        }
      } else {
        throw SchemaError(path, lineno, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw SchemaError(path, lineno, e.what());
    }
  }
  if (tiers_overridden) {
    t.polarity_tiers.clear();
    for (auto& [idx, tier] : tiers) t.polarity_tiers.push_back(std::move(tier));
  }
  try {
    t.validate();
  } catch (const ConfigError& e) {
    throw SchemaError(path, lineno, e.what());
  }
  return t;
}

}  // namespace conn

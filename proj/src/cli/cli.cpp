#include "conn/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "command.hpp"
#include "conn/core/error.hpp"
#include "conn/core/text.hpp"
#include "conn/stance/model.hpp"

namespace conn::cli {

namespace {

// Options every subcommand carries. Only one subcommand parses per run, so a
// single instance is shared.
struct CommonOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 13;
  bool force = false;
  int jobs = 1;
  std::string log_level = "warn";
  bool json = false;
};

// Not part of the experiment configuration, so not hashed.
const std::vector<std::string> kPlumbing = {"--help", "--config", "--out", "--force", "--jobs", "--log-level", "--json"};

bool is_plumbing(const std::string& name) {
  return std::find(kPlumbing.begin(), kPlumbing.end(), name) != kPlumbing.end();
}

void add_common(CLI::App& app, CommonOptions& c, bool stochastic) {
  app.add_option("--config", c.config, "key = value file; command-line flags win")->check(CLI::ExistingFile);
  app.add_option("--out", c.out, std::string("output directory (default $") + kOutputRootEnv + "/<command>)");
  auto* seed = app.add_option("--seed", c.seed, "random seed");
  if (stochastic) seed->required();
  app.add_flag("--force", c.force, "allow writing into a non-empty output directory");
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--log-level", c.log_level, "trace|debug|info|warn|error|off")
      ->check(one_of({"trace", "debug", "info", "warn", "error", "off"}));
  app.add_flag("--json", c.json, "print the JSON summary instead of the table");
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

bool mentions(const std::vector<std::string>& args, std::size_t from, const std::string& flag) {
  for (std::size_t i = from; i < args.size(); ++i)
    if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Appends config-file settings that the command line does not already set.
std::vector<std::string> merge_config(std::vector<std::string> args, std::size_t sub_pos, CLI::App& sub) {
  std::string path;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> extra;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto hash = line.find('#');
    const std::string body = text::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw SchemaError(path, n, "expected key = value");
    const std::string key = text::trim(body.substr(0, eq));
    const std::string value = unquote(text::trim(body.substr(eq + 1)));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (!opt || flag == "--config") throw SchemaError(path, n, "unknown key '" + key + "' for " + sub.get_name());
    if (mentions(args, sub_pos + 1, flag)) continue;
    if (opt->get_expected_min() == 0) {
      const std::string v = text::lower(value);
      if (v == "true" || v == "1" || v == "yes") extra.push_back(flag);
      else if (v != "false" && v != "0" && v != "no") throw SchemaError(path, n, "expected a boolean for '" + key + "'");
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// Resolved option values: what was given, else the default.
nlohmann::ordered_json resolved_config(const CLI::App& sub, bool with_seed) {
  std::vector<const CLI::Option*> opts = sub.get_options();
  std::sort(opts.begin(), opts.end(), [](const auto* a, const auto* b) { return a->get_name() < b->get_name(); });
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto* o : opts) {
    const std::string name = o->get_name();
    if (name.rfind("--", 0) != 0 || is_plumbing(name)) continue;
    if (name == "--seed" && !with_seed) continue;
    const std::string key = name.substr(2);
    if (o->get_expected_min() == 0) {
      cfg[key] = o->count() > 0;
    } else if (o->count() > 0) {
      const auto& r = o->results();
      cfg[key] = r.size() == 1 ? nlohmann::ordered_json(r[0]) : nlohmann::ordered_json(r);
    } else if (!o->get_default_str().empty()) {
      cfg[key] = o->get_default_str();
    }
  }
  return cfg;
}

// Arguments that replay the run (output location aside).
std::vector<std::string> replay_args(const std::string& command, const nlohmann::ordered_json& cfg) {
  std::vector<std::string> out = {command};
  for (const auto& [key, value] : cfg.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back("--" + key);
      continue;
    }
    out.push_back("--" + key);
    if (value.is_array())
      for (const auto& v : value) out.push_back(v.get<std::string>());
    else
      out.push_back(value.get<std::string>());
  }
  return out;
}

std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream ss;
  ss << in.rdbuf();
  return fmt::format("{:016x}", fnv1a(ss.str()));
}

std::filesystem::path default_out(const std::string& command) {
  const char* root = std::getenv(kOutputRootEnv);
  return std::filesystem::path(root && *root ? root : "runs") / command;
}

void print_table(std::ostream& out, const Table& t) {
  if (t.header.empty()) return;
  std::vector<std::size_t> width(t.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(t.header);
  for (const auto& r : t.rows) widen(r);
  auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      if (i) s += "  ";
      s += row[i] + std::string(width[i] - row[i].size(), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << "\n";
  };
  line(t.header);
  std::vector<std::string> rule;
  for (const auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : t.rows) line(r);
}

void configure_logging(const std::string& level) {
  auto logger = spdlog::get("conn");
  if (!logger) logger = spdlog::stderr_color_mt("conn");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string fmt_double(double x, int precision) { return fmt::format("{:.{}f}", x, precision); }

CLI::Validator one_of(const std::vector<std::string>& names) {
  std::string desc;
  for (const auto& n : names) desc += (desc.empty() ? "" : "|") + n;
  return CLI::Validator(
      [names](std::string& v) -> std::string {
        const std::string l = text::lower(v);
        for (const auto& n : names)
          if (l == n) {
            v = n;
            return {};
          }
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : ", ") + n;
        return "expected one of " + all;
      },
      desc);
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App root{"Connotation lexicon, embedding and stance toolkit", "conn"};
  root.require_subcommand(1, 1);
  root.fallthrough(false);
  Registry reg;
  add_lexicon_commands(root, reg);
  add_connotation_commands(root, reg);
  add_eval_commands(root, reg);
  add_stance_commands(root, reg);
  CommonOptions common;
  for (auto& c : reg) add_common(*c.app, common, c.stochastic);

  std::vector<std::string> args = args_in;
  const Command* chosen = nullptr;
  std::size_t sub_pos = 0;
  for (std::size_t i = 0; i < args.size() && !chosen; ++i)
    for (const auto& c : reg)
      if (args[i] == c.app->get_name()) {
        chosen = &c;
        sub_pos = i;
        break;
      }

  try {
    if (chosen) args = merge_config(args, sub_pos, *chosen->app);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    root.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (chosen ? chosen->app->help() : root.help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << root.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << (chosen ? chosen->app->help() : root.help());
    return kExitUsage;
  }

  configure_logging(common.log_level);
  Run run;
  run.command = chosen->app->get_name();
  run.seed = common.seed;
  run.jobs = common.jobs;
  run.out_dir = common.out.empty() ? default_out(run.command) : std::filesystem::path(common.out);
  if (!common.config.empty()) run.input(common.config);
  const auto config = resolved_config(*chosen->app, chosen->stochastic);
  const std::string config_hash = fmt::format("{:016x}", fnv1a(config.dump()));

  try {
    std::error_code ec;
    if (std::filesystem::exists(run.out_dir) && !std::filesystem::is_empty(run.out_dir, ec) && !common.force)
      throw ConfigError("output directory " + run.out_dir.string() + " is not empty; pass --force to overwrite");
    std::filesystem::create_directories(run.out_dir);
    chosen->action(run);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  nlohmann::ordered_json summary;
  summary["command"] = run.command;
  if (chosen->stochastic) summary["seed"] = run.seed;
  summary["config_hash"] = config_hash;
  for (const auto& [k, v] : run.summary.items()) summary[k] = v;

  nlohmann::ordered_json manifest;
  manifest["command"] = run.command;
  if (chosen->stochastic) manifest["seed"] = run.seed;
  manifest["config_hash"] = config_hash;
  manifest["config"] = config;
  manifest["replay"] = replay_args(run.command, config);
  manifest["inputs"] = nlohmann::ordered_json::array();
  for (const auto& p : run.inputs) manifest["inputs"].push_back({{"path", p}, {"fnv1a", file_digest(p)}});
  manifest["outputs"] = nlohmann::ordered_json::array();
  run.outputs.push_back("summary.json");
  try {
    write_text(run.out_dir / "summary.json", summary.dump(2) + "\n");
    for (const auto& f : run.outputs)
      manifest["outputs"].push_back({{"file", f}, {"fnv1a", file_digest(run.out_dir / f)}});
    write_text(run.out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  if (common.json)
    out << summary.dump(2) << "\n";
  else
    print_table(out, run.table);
  if (run.summary.contains("failed") && run.summary["failed"].get<bool>()) {
    err << "error: " << run.summary.value("failure", std::string("run failed")) << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace conn::cli

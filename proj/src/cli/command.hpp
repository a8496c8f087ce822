#pragma once

// Shared plumbing for the subcommands. Private to the CLI library.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace conn::cli {

/// Plain text table printed after each run.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Run {
  std::string command;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  Table table;
  std::vector<std::string> inputs;   // paths read
  std::vector<std::string> outputs;  // file names written under out_dir

  /// Registers an output file and returns its path.
  std::filesystem::path output(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
  /// Registers an input file and returns it unchanged.
  const std::string& input(const std::string& path) {
    inputs.push_back(path);
    return path;
  }
};

struct Command {
  CLI::App* app = nullptr;
  bool stochastic = false;  // requires --seed
  std::function<void(Run&)> action;
};

using Registry = std::vector<Command>;

void add_lexicon_commands(CLI::App& root, Registry& reg);
void add_connotation_commands(CLI::App& root, Registry& reg);
void add_stance_commands(CLI::App& root, Registry& reg);
void add_eval_commands(CLI::App& root, Registry& reg);

// Helpers shared by the command files.
void write_text(const std::filesystem::path& path, const std::string& body);
std::string fmt_double(double x, int precision = 4);
/// Validates a choice against `names` (case-insensitive) for CLI11.
CLI::Validator one_of(const std::vector<std::string>& names);

}  // namespace conn::cli

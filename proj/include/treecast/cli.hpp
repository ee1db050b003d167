#pragma once

#include "treecast/channels.hpp"
#include "treecast/trees.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace treecast {

/// Parsed experiment file. Every key is checked against a fixed schema
/// before anything is computed; unknown sections or keys throw ConfigError.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);

  const std::string& text() const noexcept { return text_; }
  bool has(const std::string& section) const { return values_.count(section) > 0; }
  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;

  Channel channel() const;
  /// Tree from [tree]; `depth_override` replaces the configured depth of generated trees.
  Tree tree(std::optional<int> depth_override = {}) const;
  /// Arity of a b-ary [tree] section, or nothing for other tree types.
  std::optional<int> bary_arity() const;
  /// Noise from [noise] (identity when absent).
  NoiseChannel noise(const Channel& channel) const;

 private:
  std::string text_;
  std::map<std::string, std::map<std::string, std::string>> values_;
};

/// Channel from a preset `bsc(delta)` / `qsym(q, delta)` or a row list.
Channel parse_channel_spec(const std::string& spec);
/// "a-b" ranges and comma lists, e.g. "0-4" or "2,4,8".
std::vector<int> parse_int_range(const std::string& s);
NoiseKind parse_regime(const std::string& s);

struct CliRequest {
  std::string command;
  std::string config_path;
  std::string positional;  // certificate file for `verify`
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> streams;
  std::optional<std::string> out;
  std::optional<std::size_t> budget;
  bool timestamp = true;
};

/// Runs one subcommand. Results go to the --out file (or `out` when none is
/// given) and only after every step succeeded. Returns 0 on success, 1 on a
/// certification or verification failure, 2 on a configuration error.
int run_cli(const CliRequest& req, std::ostream& out, std::ostream& err);

/// Column documentation for --help.
const char* cli_output_help() noexcept;

}  // namespace treecast

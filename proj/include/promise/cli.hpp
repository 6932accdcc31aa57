#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "promise/explorer.hpp"

namespace promise::cli {

enum class Command { Check, Explore, Run, VerifyTrace };
enum class Format { Text, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitLimit = 2;
inline constexpr int kExitUsage = 64;

inline constexpr std::uint64_t kDefaultSeed = 42;

struct CliConfig {
  Command command = Command::Check;
  std::string scenario_path;
  std::optional<std::string> trace_path;
  bool strict_conflicts = false;
  std::uint64_t seed = kDefaultSeed;
  std::size_t node_limit = kDefaultNodeLimit;
  std::size_t max_traces = kDefaultMaxTraces;
  Format format = Format::Text;
};

int cmd_check(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_explore(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify_trace(const CliConfig& config, std::ostream& out, std::ostream& err);

int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses `promise <command> FILE [options]` and runs it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace promise::cli

#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "promise/dsl.hpp"

namespace fixtures {

inline std::string scenario_path(const std::string& name) {
  return std::string(PROMISE_SCENARIO_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline promise::dsl::Scenario load(const std::string& name) {
  return promise::dsl::parse_scenario(slurp(scenario_path(name)));
}

/// Two agents a, b; one atom x of type t; ~x exclusive.
inline promise::PromiseModel tiny_model() {
  return promise::dsl::parse_scenario("agent a b\ntype t\ntask x : t\nexclusive ~x\n").model;
}

}  // namespace fixtures

#pragma once

// Scenario files (.promise): declarations of agents, subordination, types,
// tasks, incompatibility and exclusiveness, named process definitions, an
// optional initial state and the `run` composition.
//
//   # comment
//   agent ja ju ma
//   type transport
//   task tbc2JUB : transport
//   exclusive ~tbc2JUB
//   incompatible train # car
//   subord c <= a
//   def offer = pi(ja, tbc2JUB, ma) . pw(ja, tbc2JUB, ma)
//   init pi(c, gamma, a)
//   run protocol(ja, ma, tbc2JUB) || protocol(ju, ma, tbc2JUB)
//
// A statement ends at the end of its line unless a bracket is open or the
// line ends in an operator.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "promise/explorer.hpp"

namespace promise::dsl {

struct Definition {
  std::string name;
  Term term;
  friend bool operator==(const Definition&, const Definition&) = default;
};

struct Scenario {
  PromiseModel model;
  std::vector<Definition> definitions;
  std::optional<Term> entry;
  State initial_state;

  Configuration initial_configuration() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected,
              const std::string& found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

/// A well-formed statement that the model rejects. `code()` is the
/// underlying model error (TypeMismatch, NegationConflict, UnknownName, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, Errc cause, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Scenario parse_scenario(std::string_view text);

/// Parses one task body, e.g. `!~tbc2JUB`.
TaskBody parse_body(const TaskUniverse& universe, std::string_view text);
/// Parses one event, e.g. `pi(ja, tbc2JUB, ma)`.
Event parse_event(const PromiseModel& model, std::string_view text);
Term parse_term(const PromiseModel& model, std::string_view text);
Condition parse_condition(const PromiseModel& model, std::string_view text);

/// Trace files: one event per line, `#` comments, blank lines ignored.
std::vector<Event> parse_trace(const PromiseModel& model, std::string_view text);

std::string render(const Scenario& scenario);
std::string render(const PromiseModel& model, const Term& term);
std::string render(const PromiseModel& model, const Condition& cond);
std::string render(const PromiseModel& model, TaskBody body);
std::string render(const PromiseModel& model, const Event& event);
std::string render(const PromiseModel& model, const Promise& promise);
std::string render(const PromiseModel& model, const State& state);
/// One event per line, in trace-file syntax.
std::string render(const PromiseModel& model, const Trace& trace);

}  // namespace promise::dsl

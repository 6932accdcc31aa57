#pragma once

// ACP-style process terms over promise events: choice (+), sequence (.),
// interleaving (||), conditional guards, and their small-step semantics
// over (term, state) configurations.

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "promise/promise_state.hpp"

namespace promise {

enum class EventKind { Introduce, Withdraw, IntroduceGeneralized };

/// An atomic action. For basic events performer == promiser and
/// beneficiary == promisee.
struct Event {
  EventKind kind = EventKind::Introduce;
  AgentId promiser;
  AgentId performer;
  TaskBody body;
  AgentId promisee;
  AgentId beneficiary;

  static Event pi(const Promise& p) {
    return Event{EventKind::Introduce, p.promiser, p.promiser, p.body, p.promisee, p.promisee};
  }
  static Event pw(const Promise& p) {
    return Event{EventKind::Withdraw, p.promiser, p.promiser, p.body, p.promisee, p.promisee};
  }
  static Event pi(const GeneralizedPromise& g) {
    return Event{EventKind::IntroduceGeneralized, g.promiser, g.performer, g.body,
                 g.promisee, g.beneficiary};
  }

  Promise promise() const { return Promise{promiser, body, promisee}; }
  GeneralizedPromise generalized() const {
    return GeneralizedPromise{promiser, performer, body, promisee, beneficiary};
  }

  auto operator<=>(const Event&) const = default;
};

/// `pi(a, x, b)`, `pw(a, x, b)` or `pi(a[c], x, b[d])`.
std::string format_event(const PromiseModel& model, const Event& e);

struct Variable {
  std::string name;
  auto operator<=>(const Variable&) const = default;
};

/// An agent position in a condition: a concrete agent or a quantified variable.
using AgentRef = std::variant<AgentId, Variable>;

namespace cond {
struct True;
struct False;
struct HasPromise;
struct IsExclusive;
struct Not;
struct And;
struct Or;
struct Implies;
struct ForAll;
}  // namespace cond

/// Immutable guard condition; shares structure on copy.
class Condition {
 public:
  using Node = std::variant<cond::True, cond::False, cond::HasPromise, cond::IsExclusive,
                            cond::Not, cond::And, cond::Or, cond::Implies, cond::ForAll>;

  Condition();  // true
  explicit Condition(Node node);

  static Condition truth();
  static Condition falsity();
  static Condition has_promise(AgentRef a, TaskBody x, AgentRef b);
  static Condition exclusive(TaskBody x);
  static Condition negation(Condition c);
  static Condition conjunction(Condition l, Condition r);
  static Condition disjunction(Condition l, Condition r);
  static Condition implication(Condition l, Condition r);
  /// Conjunction of `body` over every agent except `excluded`, binding `var`.
  static Condition for_all(Variable var, std::optional<AgentRef> excluded, Condition body);

  const Node& node() const;

  template <class T>
  const T* as() const;

  std::strong_ordering operator<=>(const Condition& other) const;
  bool operator==(const Condition& other) const;

 private:
  std::shared_ptr<const Node> node_;
};

namespace cond {
struct True {
  auto operator<=>(const True&) const = default;
};
struct False {
  auto operator<=>(const False&) const = default;
};
struct HasPromise {
  AgentRef promiser;
  TaskBody body;
  AgentRef promisee;
  auto operator<=>(const HasPromise&) const = default;
};
struct IsExclusive {
  TaskBody body;
  auto operator<=>(const IsExclusive&) const = default;
};
struct Not {
  Condition operand;
  auto operator<=>(const Not&) const = default;
};
struct And {
  Condition left, right;
  auto operator<=>(const And&) const = default;
};
struct Or {
  Condition left, right;
  auto operator<=>(const Or&) const = default;
};
struct Implies {
  Condition left, right;
  auto operator<=>(const Implies&) const = default;
};
struct ForAll {
  Variable var;
  std::optional<AgentRef> excluded;
  Condition body;
  auto operator<=>(const ForAll&) const = default;
};
}  // namespace cond

inline const Condition::Node& Condition::node() const { return *node_; }

template <class T>
const T* Condition::as() const {
  return std::get_if<T>(node_.get());
}

/// Evaluates a closed condition. Throws Error(UnboundVariable) otherwise.
bool eval_condition(const PromiseModel& model, const Condition& cond, const State& s);

namespace term {
struct Done;
struct Deadlock;
struct Act;
struct Seq;
struct Alt;
struct Par;
struct Guard;
}  // namespace term

/// Immutable process term; shares structure on copy.
class Term {
 public:
  using Node =
      std::variant<term::Done, term::Deadlock, term::Act, term::Seq, term::Alt, term::Par, term::Guard>;

  Term();  // delta
  explicit Term(Node node);

  /// The successfully terminated process.
  static Term done();
  static Term deadlock();
  static Term action(Event e);
  static Term seq(Term l, Term r);
  static Term alt(Term l, Term r);
  static Term par(Term l, Term r);
  static Term guard(Condition c, Term body);

  const Node& node() const;

  template <class T>
  const T* as() const;

  std::strong_ordering operator<=>(const Term& other) const;
  bool operator==(const Term& other) const;

 private:
  std::shared_ptr<const Node> node_;
};

namespace term {
struct Done {
  auto operator<=>(const Done&) const = default;
};
struct Deadlock {
  auto operator<=>(const Deadlock&) const = default;
};
struct Act {
  Event event;
  auto operator<=>(const Act&) const = default;
};
struct Seq {
  Term left, right;
  auto operator<=>(const Seq&) const = default;
};
struct Alt {
  Term left, right;
  auto operator<=>(const Alt&) const = default;
};
struct Par {
  Term left, right;
  auto operator<=>(const Par&) const = default;
};
struct Guard {
  Condition cond;
  Term body;
  auto operator<=>(const Guard&) const = default;
};
}  // namespace term

inline const Term::Node& Term::node() const { return *node_; }

template <class T>
const T* Term::as() const {
  return std::get_if<T>(node_.get());
}

/// Number of nested constructors; leaves have depth 1.
std::size_t depth(const Term& t);

bool can_terminate(const Term& t);

struct Configuration {
  Term term;
  State state;

  auto operator<=>(const Configuration&) const = default;
};

struct Transition {
  Event event;
  Configuration target;

  auto operator<=>(const Transition&) const = default;
};

/// Every one-step transition of a configuration, sorted and without
/// duplicates. Disabled actions contribute nothing.
std::vector<Transition> step(const PromiseModel& model, const Configuration& c);

/// The promise-introduction protocol in which a offers x to b, and b either
/// accepts (guarded by exclusiveness of ~x) or declines, after which both
/// promises are withdrawn in parallel. Throws Error(InvalidBody) unless x is
/// a positive service.
Term make_protocol(const PromiseModel& model, AgentId offerer, AgentId receiver, TaskBody x);

/// Warnings for every generalized event in `t` whose performer is
/// subordinated to its promiser.
std::vector<ObligationWarning> term_obligation_warnings(const PromiseModel& model, const Term& t);

}  // namespace promise

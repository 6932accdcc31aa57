#pragma once

// Promises between agents, conflict-free promise states, and the
// introduction/withdrawal transition rules.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "promise/task_algebra.hpp"

namespace promise {

struct AgentId {
  std::uint32_t value = 0;
  auto operator<=>(const AgentId&) const = default;
};

class AgentSet {
 public:
  AgentId add(std::string name);
  std::optional<AgentId> find(std::string_view name) const;
  const std::string& name(AgentId id) const { return names_.at(id.value); }
  std::size_t size() const { return names_.size(); }
  std::vector<AgentId> ids() const;

  friend bool operator==(const AgentSet&, const AgentSet&) = default;

 private:
  std::vector<std::string> names_;
};

/// Partial order `c <= a` ("c is subordinated to a"). Reflexivity is implicit.
class SubordinationOrder {
 public:
  /// Throws Error(OrderCycle) if the declaration breaks antisymmetry.
  void declare(AgentId lower, AgentId upper);
  bool leq(AgentId lower, AgentId upper) const;
  const std::set<std::pair<AgentId, AgentId>>& declared() const { return declared_; }

  friend bool operator==(const SubordinationOrder& a, const SubordinationOrder& b) {
    return a.declared_ == b.declared_;
  }

 private:
  std::set<std::pair<AgentId, AgentId>> declared_;
  std::set<std::pair<AgentId, AgentId>> closure_;
};

/// Which existing promises a new introduction is checked against.
/// Dyadic: same promiser and same promisee. Promiser: every promise of the
/// same promiser, whatever its promisee.
enum class ConflictScope { Dyadic, Promiser };

/// The static world a transition system runs in.
struct PromiseModel {
  TaskUniverse tasks;
  IncompatibilityRelation incompatibility;
  ExclusivenessRegistry exclusive;
  AgentSet agents;
  SubordinationOrder order;
  ConflictScope conflict_scope = ConflictScope::Dyadic;

  friend bool operator==(const PromiseModel&, const PromiseModel&) = default;
};

/// a:x->b
struct Promise {
  AgentId promiser;
  TaskBody body;
  AgentId promisee;

  auto operator<=>(const Promise&) const = default;
};

/// a[c]:x->b[d] -- a promises b that c will do x for d.
struct GeneralizedPromise {
  AgentId promiser;
  AgentId performer;
  TaskBody body;
  AgentId promisee;
  AgentId beneficiary;

  bool is_basic() const { return promiser == performer && promisee == beneficiary; }
  Promise induced() const { return Promise{performer, body, beneficiary}; }

  auto operator<=>(const GeneralizedPromise&) const = default;
};

/// A set of basic promises. Construction does not enforce conflict-freedom;
/// states reached through introduce/withdraw satisfy it.
class State {
 public:
  State() = default;
  State(std::initializer_list<Promise> promises) : promises_(promises) {}

  bool contains(const Promise& p) const { return promises_.contains(p); }
  bool empty() const { return promises_.empty(); }
  std::size_t size() const { return promises_.size(); }
  auto begin() const { return promises_.begin(); }
  auto end() const { return promises_.end(); }

  State with(const Promise& p) const;
  State without(const Promise& p) const;

  auto operator<=>(const State&) const = default;

 private:
  std::set<Promise> promises_;
};

std::string format_promise(const PromiseModel& model, const Promise& p);
std::string format_state(const PromiseModel& model, const State& s);

enum class BlockReason { Conflict, Exclusiveness };

struct Blocker {
  BlockReason reason;
  Promise existing;  // the promise in the state that blocks the introduction
};

/// Why the introduction of `p` into `s` is not enabled, if it is not.
std::optional<Blocker> introduction_blocker(const PromiseModel& model, const State& s,
                                            const Promise& p);

inline bool pi_enabled(const PromiseModel& model, const State& s, const Promise& p) {
  return !introduction_blocker(model, s, p);
}

/// Error thrown by introduce when the introduction rule does not apply.
class NotEnabledError : public Error {
 public:
  NotEnabledError(const std::string& message, Blocker blocker)
      : Error(Errc::NotEnabled, message), blocker_(blocker) {}
  const Blocker& blocker() const { return blocker_; }

 private:
  Blocker blocker_;
};

State introduce(const PromiseModel& model, const State& s, const Promise& p);

inline bool pw_enabled(const State& s, const Promise& p) { return s.contains(p); }

/// Throws Error(NotPresent) when the promise is absent.
State withdraw(const PromiseModel& model, const State& s, const Promise& p);

inline bool has_promise(const State& s, AgentId a, TaskBody x, AgentId b) {
  return s.contains(Promise{a, x, b});
}

inline Promise compliance_promise(const GeneralizedPromise& g) {
  return Promise{g.performer, atom_body(TaskUniverse::kGamma), g.promiser};
}

bool pi_generalized_enabled(const PromiseModel& model, const State& s,
                            const GeneralizedPromise& g);

/// Requires the compliance promise performer:gamma->promiser in the state;
/// adds the induced promise performer:x->beneficiary. Throws
/// Error(NoCompliance) or NotEnabledError.
State introduce_generalized(const PromiseModel& model, const State& s,
                            const GeneralizedPromise& g);

struct ObligationWarning {
  AgentId obligee;   // the subordinate performer
  AgentId promiser;  // the agent whose promise binds it

  friend bool operator==(const ObligationWarning&, const ObligationWarning&) = default;
};

std::vector<ObligationWarning> obligation_warnings(const PromiseModel& model,
                                                   const GeneralizedPromise& g);

enum class ViolationKind { Conflict, Exclusiveness };

struct StateViolation {
  ViolationKind kind;
  Promise first;
  Promise second;

  friend bool operator==(const StateViolation&, const StateViolation&) = default;
};

/// Pairs of promises in `s` that break conflict-freedom (under the model's
/// conflict scope) or exclusiveness.
std::vector<StateViolation> state_violations(const PromiseModel& model, const State& s);

std::string format_violation(const PromiseModel& model, const StateViolation& v);

}  // namespace promise

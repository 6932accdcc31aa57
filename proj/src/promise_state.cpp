#include "promise/promise_state.hpp"

namespace promise {

AgentId AgentSet::add(std::string name) {
  if (!is_identifier(name)) {
    throw Error(Errc::InvalidName, "invalid agent name '" + name + "'");
  }
  if (find(name)) {
    throw Error(Errc::DuplicateName, "agent '" + name + "' declared twice");
  }
  names_.push_back(std::move(name));
  return AgentId{static_cast<std::uint32_t>(names_.size() - 1)};
}

std::optional<AgentId> AgentSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return AgentId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::vector<AgentId> AgentSet::ids() const {
  std::vector<AgentId> out;
  for (std::uint32_t i = 0; i < names_.size(); ++i) out.push_back(AgentId{i});
  return out;
}

void SubordinationOrder::declare(AgentId lower, AgentId upper) {
  if (lower == upper) {
    declared_.emplace(lower, upper);
    return;
  }
  if (leq(upper, lower)) {
    throw Error(Errc::OrderCycle, "subordination would make two distinct agents equal");
  }
  declared_.emplace(lower, upper);

  // Transitive closure: everything below `lower` is now below everything above `upper`.
  std::vector<AgentId> below{lower};
  std::vector<AgentId> above{upper};
  for (const auto& [l, u] : closure_) {
    if (u == lower) below.push_back(l);
    if (l == upper) above.push_back(u);
  }
  for (AgentId l : below) {
    for (AgentId u : above) closure_.emplace(l, u);
  }
}

bool SubordinationOrder::leq(AgentId lower, AgentId upper) const {
  return lower == upper || closure_.contains({lower, upper});
}

State State::with(const Promise& p) const {
  State out = *this;
  out.promises_.insert(p);
  return out;
}

State State::without(const Promise& p) const {
  State out = *this;
  out.promises_.erase(p);
  return out;
}

std::string format_promise(const PromiseModel& model, const Promise& p) {
  return model.agents.name(p.promiser) + ":" + format_body(model.tasks, p.body) + "->" +
         model.agents.name(p.promisee);
}

std::string format_state(const PromiseModel& model, const State& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ", ";
    first = false;
    out += format_promise(model, p);
  }
  return out + "}";
}

std::optional<Blocker> introduction_blocker(const PromiseModel& model, const State& s,
                                            const Promise& p) {
  const bool exclusive = model.exclusive.contains(p.body);
  for (const auto& q : s) {
    if (q.promiser != p.promiser) continue;
    const bool in_scope =
        model.conflict_scope == ConflictScope::Promiser || q.promisee == p.promisee;
    if (in_scope && model.incompatibility.incompatible(q.body, p.body)) {
      return Blocker{BlockReason::Conflict, q};
    }
    if (exclusive && q.body == p.body && q.promisee != p.promisee) {
      return Blocker{BlockReason::Exclusiveness, q};
    }
  }
  return std::nullopt;
}

State introduce(const PromiseModel& model, const State& s, const Promise& p) {
  if (auto blocker = introduction_blocker(model, s, p)) {
    const char* why = blocker->reason == BlockReason::Conflict ? "conflicts with "
                                                               : "is exclusive against ";
    throw NotEnabledError(format_promise(model, p) + " " + why +
                              format_promise(model, blocker->existing),
                          *blocker);
  }
  return s.with(p);
}

State withdraw(const PromiseModel& model, const State& s, const Promise& p) {
  if (!s.contains(p)) {
    throw Error(Errc::NotPresent, "cannot withdraw absent promise " + format_promise(model, p));
  }
  return s.without(p);
}

bool pi_generalized_enabled(const PromiseModel& model, const State& s,
                            const GeneralizedPromise& g) {
  return s.contains(compliance_promise(g)) && pi_enabled(model, s, g.induced());
}

State introduce_generalized(const PromiseModel& model, const State& s,
                            const GeneralizedPromise& g) {
  const Promise compliance = compliance_promise(g);
  if (!s.contains(compliance)) {
    throw Error(Errc::NoCompliance,
                "generalized promise requires " + format_promise(model, compliance));
  }
  return introduce(model, s, g.induced());
}

std::vector<ObligationWarning> obligation_warnings(const PromiseModel& model,
                                                   const GeneralizedPromise& g) {
  if (g.performer != g.promiser && model.order.leq(g.performer, g.promiser)) {
    return {ObligationWarning{g.performer, g.promiser}};
  }
  return {};
}

std::vector<StateViolation> state_violations(const PromiseModel& model, const State& s) {
  std::vector<StateViolation> out;
  for (auto i = s.begin(); i != s.end(); ++i) {
    for (auto j = std::next(i); j != s.end(); ++j) {
      if (i->promiser != j->promiser) continue;
      const bool in_scope =
          model.conflict_scope == ConflictScope::Promiser || i->promisee == j->promisee;
      if (in_scope && model.incompatibility.incompatible(i->body, j->body)) {
        out.push_back(StateViolation{ViolationKind::Conflict, *i, *j});
      }
      if (i->body == j->body && i->promisee != j->promisee &&
          model.exclusive.contains(i->body)) {
        out.push_back(StateViolation{ViolationKind::Exclusiveness, *i, *j});
      }
    }
  }
  return out;
}

std::string format_violation(const PromiseModel& model, const StateViolation& v) {
  const char* kind = v.kind == ViolationKind::Conflict ? "conflict" : "exclusiveness";
  return std::string(kind) + ": " + format_promise(model, v.first) + " and " +
         format_promise(model, v.second);
}

}  // namespace promise

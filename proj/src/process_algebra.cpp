#include "promise/process_algebra.hpp"

#include <algorithm>

namespace promise {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string format_event(const PromiseModel& model, const Event& e) {
  const auto& agents = model.agents;
  const auto body = format_body(model.tasks, e.body);
  switch (e.kind) {
    case EventKind::Introduce:
      return "pi(" + agents.name(e.promiser) + ", " + body + ", " + agents.name(e.promisee) + ")";
    case EventKind::Withdraw:
      return "pw(" + agents.name(e.promiser) + ", " + body + ", " + agents.name(e.promisee) + ")";
    case EventKind::IntroduceGeneralized:
      return "pi(" + agents.name(e.promiser) + "[" + agents.name(e.performer) + "], " + body +
             ", " + agents.name(e.promisee) + "[" + agents.name(e.beneficiary) + "])";
  }
  return {};
}

// --- Condition ---------------------------------------------------------------

Condition::Condition() : Condition(cond::True{}) {}
Condition::Condition(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

Condition Condition::truth() { return Condition(cond::True{}); }
Condition Condition::falsity() { return Condition(cond::False{}); }
Condition Condition::has_promise(AgentRef a, TaskBody x, AgentRef b) {
  return Condition(cond::HasPromise{std::move(a), x, std::move(b)});
}
Condition Condition::exclusive(TaskBody x) { return Condition(cond::IsExclusive{x}); }
Condition Condition::negation(Condition c) { return Condition(cond::Not{std::move(c)}); }
Condition Condition::conjunction(Condition l, Condition r) {
  return Condition(cond::And{std::move(l), std::move(r)});
}
Condition Condition::disjunction(Condition l, Condition r) {
  return Condition(cond::Or{std::move(l), std::move(r)});
}
Condition Condition::implication(Condition l, Condition r) {
  return Condition(cond::Implies{std::move(l), std::move(r)});
}
Condition Condition::for_all(Variable var, std::optional<AgentRef> excluded, Condition body) {
  return Condition(cond::ForAll{std::move(var), std::move(excluded), std::move(body)});
}

std::strong_ordering Condition::operator<=>(const Condition& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return *node_ <=> *other.node_;
}

bool Condition::operator==(const Condition& other) const {
  return node_ == other.node_ || *node_ == *other.node_;
}

namespace {

using Bindings = std::map<std::string, AgentId, std::less<>>;

AgentId resolve(const AgentRef& ref, const Bindings& env) {
  if (const auto* id = std::get_if<AgentId>(&ref)) return *id;
  const auto& var = std::get<Variable>(ref);
  auto it = env.find(var.name);
  if (it == env.end()) {
    throw Error(Errc::UnboundVariable, "unbound agent variable '" + var.name + "'");
  }
  return it->second;
}

bool eval(const PromiseModel& model, const Condition& c, const State& s, Bindings& env) {
  return std::visit(
      overloaded{
          [](const cond::True&) { return true; },
          [](const cond::False&) { return false; },
          [&](const cond::HasPromise& h) {
            return has_promise(s, resolve(h.promiser, env), h.body, resolve(h.promisee, env));
          },
          [&](const cond::IsExclusive& e) { return model.exclusive.contains(e.body); },
          [&](const cond::Not& n) { return !eval(model, n.operand, s, env); },
          [&](const cond::And& a) {
            return eval(model, a.left, s, env) && eval(model, a.right, s, env);
          },
          [&](const cond::Or& o) {
            return eval(model, o.left, s, env) || eval(model, o.right, s, env);
          },
          [&](const cond::Implies& i) {
            return !eval(model, i.left, s, env) || eval(model, i.right, s, env);
          },
          [&](const cond::ForAll& f) {
            std::optional<AgentId> excluded;
            if (f.excluded) excluded = resolve(*f.excluded, env);
            // Save any outer binding of the same name; the quantifier shadows it.
            std::optional<AgentId> outer;
            if (auto it = env.find(f.var.name); it != env.end()) outer = it->second;
            bool result = true;
            for (AgentId agent : model.agents.ids()) {
              if (excluded && agent == *excluded) continue;
              env[f.var.name] = agent;
              if (!eval(model, f.body, s, env)) {
                result = false;
                break;
              }
            }
            if (outer) {
              env[f.var.name] = *outer;
            } else {
              env.erase(f.var.name);
            }
            return result;
          },
      },
      c.node());
}

}  // namespace

bool eval_condition(const PromiseModel& model, const Condition& cond, const State& s) {
  Bindings env;
  return eval(model, cond, s, env);
}

// --- Term --------------------------------------------------------------------

Term::Term() : Term(term::Deadlock{}) {}
Term::Term(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

Term Term::done() { return Term(term::Done{}); }
Term Term::deadlock() { return Term(term::Deadlock{}); }
Term Term::action(Event e) { return Term(term::Act{e}); }
Term Term::seq(Term l, Term r) { return Term(term::Seq{std::move(l), std::move(r)}); }
Term Term::alt(Term l, Term r) { return Term(term::Alt{std::move(l), std::move(r)}); }
Term Term::par(Term l, Term r) { return Term(term::Par{std::move(l), std::move(r)}); }
Term Term::guard(Condition c, Term body) {
  return Term(term::Guard{std::move(c), std::move(body)});
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (node_ == other.node_) return std::strong_ordering::equal;
  return *node_ <=> *other.node_;
}

bool Term::operator==(const Term& other) const {
  return node_ == other.node_ || *node_ == *other.node_;
}

std::size_t depth(const Term& t) {
  return std::visit(overloaded{
                        [](const term::Done&) -> std::size_t { return 1; },
                        [](const term::Deadlock&) -> std::size_t { return 1; },
                        [](const term::Act&) -> std::size_t { return 1; },
                        [](const term::Guard& g) { return 1 + depth(g.body); },
                        [](const auto& bin) {
                          return 1 + std::max(depth(bin.left), depth(bin.right));
                        },
                    },
                    t.node());
}

bool can_terminate(const Term& t) {
  return std::visit(overloaded{
                        [](const term::Done&) { return true; },
                        [](const term::Deadlock&) { return false; },
                        [](const term::Act&) { return false; },
                        [](const term::Guard&) { return false; },
                        [](const term::Seq& s) {
                          return can_terminate(s.left) && can_terminate(s.right);
                        },
                        [](const term::Par& p) {
                          return can_terminate(p.left) && can_terminate(p.right);
                        },
                        [](const term::Alt& a) {
                          return can_terminate(a.left) || can_terminate(a.right);
                        },
                    },
                    t.node());
}

namespace {

void collect(const PromiseModel& model, const Term& t, const State& s,
             std::vector<Transition>& out);

template <class Wrap>
void collect_wrapped(const PromiseModel& model, const Term& t, const State& s,
                     std::vector<Transition>& out, Wrap wrap) {
  std::vector<Transition> inner;
  collect(model, t, s, inner);
  for (auto& tr : inner) {
    tr.target.term = wrap(std::move(tr.target.term));
    out.push_back(std::move(tr));
  }
}

void collect(const PromiseModel& model, const Term& t, const State& s,
             std::vector<Transition>& out) {
  std::visit(
      overloaded{
          [](const term::Done&) {},
          [](const term::Deadlock&) {},
          [&](const term::Act& a) {
            const Event& e = a.event;
            switch (e.kind) {
              case EventKind::Introduce:
                if (pi_enabled(model, s, e.promise())) {
                  out.push_back({e, {Term::done(), s.with(e.promise())}});
                }
                break;
              case EventKind::Withdraw:
                if (pw_enabled(s, e.promise())) {
                  out.push_back({e, {Term::done(), s.without(e.promise())}});
                }
                break;
              case EventKind::IntroduceGeneralized:
                if (pi_generalized_enabled(model, s, e.generalized())) {
                  out.push_back({e, {Term::done(), s.with(e.generalized().induced())}});
                }
                break;
            }
          },
          [&](const term::Seq& q) {
            collect_wrapped(model, q.left, s, out,
                            [&](Term l) { return Term::seq(std::move(l), q.right); });
            if (can_terminate(q.left)) collect(model, q.right, s, out);
          },
          [&](const term::Alt& a) {
            collect(model, a.left, s, out);
            collect(model, a.right, s, out);
          },
          [&](const term::Par& p) {
            collect_wrapped(model, p.left, s, out,
                            [&](Term l) { return Term::par(std::move(l), p.right); });
            collect_wrapped(model, p.right, s, out,
                            [&](Term r) { return Term::par(p.left, std::move(r)); });
          },
          [&](const term::Guard& g) {
            if (eval_condition(model, g.cond, s)) collect(model, g.body, s, out);
          },
      },
      t.node());
}

}  // namespace

std::vector<Transition> step(const PromiseModel& model, const Configuration& c) {
  std::vector<Transition> out;
  collect(model, c.term, c.state, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Term make_protocol(const PromiseModel& model, AgentId offerer, AgentId receiver, TaskBody x) {
  if (!is_service(x) || !is_positive(x)) {
    throw Error(Errc::InvalidBody, "protocol task must be a positive service, got " +
                                       format_body(model.tasks, x));
  }
  const TaskBody use = usage(x);
  const TaskBody refuse = negate(use);
  // The bound variable must not shadow an agent name, or rendering would not re-parse.
  Variable c{"c"};
  for (int n = 1; model.agents.find(c.name); ++n) c.name = "c" + std::to_string(n);

  // E(~x) => forall c != offerer : not p(receiver, ~x, c)
  Condition free_to_accept = Condition::implication(
      Condition::exclusive(use),
      Condition::for_all(c, AgentRef{offerer},
                         Condition::negation(Condition::has_promise(receiver, use, c))));

  Term accept = Term::guard(std::move(free_to_accept),
                            Term::action(Event::pi(Promise{receiver, use, offerer})));
  Term decline = Term::seq(Term::action(Event::pi(Promise{receiver, refuse, offerer})),
                           Term::par(Term::action(Event::pw(Promise{offerer, x, receiver})),
                                     Term::action(Event::pw(Promise{receiver, refuse, offerer}))));
  return Term::seq(Term::action(Event::pi(Promise{offerer, x, receiver})),
                   Term::alt(std::move(accept), std::move(decline)));
}

std::vector<ObligationWarning> term_obligation_warnings(const PromiseModel& model,
                                                        const Term& t) {
  std::vector<ObligationWarning> out;
  auto walk = [&](const auto& self, const Term& u) -> void {
    std::visit(overloaded{
                   [](const term::Done&) {},
                   [](const term::Deadlock&) {},
                   [&](const term::Act& a) {
                     if (a.event.kind != EventKind::IntroduceGeneralized) return;
                     for (auto& w : obligation_warnings(model, a.event.generalized())) {
                       if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
                     }
                   },
                   [&](const term::Guard& g) { self(self, g.body); },
                   [&](const auto& bin) {
                     self(self, bin.left);
                     self(self, bin.right);
                   },
               },
               u.node());
  };
  walk(walk, t);
  return out;
}

}  // namespace promise

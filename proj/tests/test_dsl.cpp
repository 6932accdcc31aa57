#include <doctest.h>

#include "promise/dsl.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace promise;

namespace {

template <class F>
Errc validation_code(F&& f) {
  try {
    f();
  } catch (const dsl::ValidationError& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return Errc::Syntax;
}

dsl::SyntaxError syntax_error(std::string_view text) {
  try {
    dsl::parse_scenario(text);
  } catch (const dsl::SyntaxError& e) {
    return e;
  }
  FAIL("expected a syntax error");
  return dsl::SyntaxError(0, 0, "", "");
}

}  // namespace

TEST_CASE("car example scenario parses") {
  const auto sc = fixtures::load("jub.promise");
  const PromiseModel& m = sc.model;
  CHECK(m.agents.size() == 3);
  CHECK(m.tasks.find_atom("tbc2JUB"));
  const TaskBody ride = dsl::parse_body(m.tasks, "~tbc2JUB");
  CHECK(is_exclusive(m.exclusive, ride));
  CHECK(m.exclusive.bodies().size() == 1);
  REQUIRE(sc.entry);
  CHECK(std::holds_alternative<term::Par>(sc.entry->node()));
  CHECK(sc.initial_state.empty());

  const PromiseModel& mm = m;
  const Term expected = Term::par(
      make_protocol(mm, *m.agents.find("ja"), *m.agents.find("ma"), atom_body(*m.tasks.find_atom("tbc2JUB"))),
      make_protocol(mm, *m.agents.find("ju"), *m.agents.find("ma"), atom_body(*m.tasks.find_atom("tbc2JUB"))));
  CHECK(*sc.entry == expected);
}

TEST_CASE("ISP scenario parses") {
  const auto sc = fixtures::load("isp.promise");
  CHECK(sc.model.agents.size() == 3);
  CHECK(sc.model.agents.find("ISPA"));
  CHECK(is_exclusive(sc.model.exclusive, dsl::parse_body(sc.model.tasks, "~transport_packets")));
}

TEST_CASE("remaining bundled scenarios parse") {
  const auto travel = fixtures::load("travel.promise");
  const auto& tm = travel.model;
  CHECK(incompatible(tm.incompatibility, dsl::parse_body(tm.tasks, "train"), dsl::parse_body(tm.tasks, "car")));
  CHECK(incompatible(tm.incompatibility, dsl::parse_body(tm.tasks, "car"), dsl::parse_body(tm.tasks, "train")));
  const auto compliance = fixtures::load("compliance.promise");
  CHECK(compliance.initial_state.size() == 1);
  CHECK(compliance.model.order.leq(*compliance.model.agents.find("engineer"),
                                   *compliance.model.agents.find("boss")));
}

TEST_CASE("task bodies render in canonical order") {
  const auto sc = fixtures::load("jub.promise");
  const auto& u = sc.model.tasks;
  CHECK(dsl::render(sc.model, dsl::parse_body(u, "!~tbc2JUB")) == "!~tbc2JUB");
  CHECK(dsl::parse_body(u, "~!tbc2JUB") == dsl::parse_body(u, "!~tbc2JUB"));
  CHECK(dsl::parse_body(u, "~~tbc2JUB") == dsl::parse_body(u, "tbc2JUB"));
  CHECK(dsl::parse_body(u, "!!~tbc2JUB") == dsl::parse_body(u, "~tbc2JUB"));
  CHECK_THROWS_AS(dsl::parse_body(u, "bike"), Error);
}

TEST_CASE("validation errors carry the model cause") {
  CHECK(validation_code([] {
          dsl::parse_scenario("agent a\ntype t\ntask x : t\nincompatible x # x\n");
        }) == Errc::ReflexiveDeclaration);
  CHECK(validation_code([] {
          dsl::parse_scenario("agent a\ntype t\ntype u\ntask x : t\ntask y : u\nincompatible x # y\n");
        }) == Errc::TypeMismatch);
  CHECK(validation_code([] {
          dsl::parse_scenario("agent a\ntype t\ntask x : t\ntask y : t\nincompatible x # !y\nincompatible x # y\n");
        }) == Errc::NegationConflict);
  CHECK(validation_code([] { dsl::parse_scenario("agent a a\n"); }) == Errc::DuplicateName);
  CHECK(validation_code([] { dsl::parse_scenario("agent a\nrun pi(a, x, a)\n"); }) ==
        Errc::UnknownName);
  CHECK(validation_code([] { dsl::parse_scenario("agent a b\nsubord a <= b\nsubord b <= a\n"); }) ==
        Errc::OrderCycle);
  CHECK(validation_code([] {
          dsl::parse_scenario("agent a b\ntype t\ntask x : t\nrun protocol(a, b, ~x)\n");
        }) == Errc::InvalidBody);
  CHECK(validation_code([] {
          dsl::parse_scenario("agent a b\ntype t\ntask x : t\nrun pi(a, x, b)\nrun pi(b, x, a)\n");
        }) == Errc::DuplicateName);
}

TEST_CASE("redundant axiom declaration is accepted") {
  const auto sc = dsl::parse_scenario("agent a\ntype t\ntask x : t\nincompatible x # !x\n");
  // gamma and x each contribute their two axiom pairs.
  CHECK(sc.model.incompatibility.pairs().size() == 4);
}

TEST_CASE("validation error reports the line") {
  try {
    dsl::parse_scenario("agent a\n\n# note\ntype t\ntask x : t\nincompatible x # x\n");
    FAIL("no error");
  } catch (const dsl::ValidationError& e) {
    CHECK(e.line() == 6);
  }
}

TEST_CASE("syntax errors report line and column") {
  auto e = syntax_error("agent a b\ntype t\ntask x : t\nrun pi(a, x, b\n");
  CHECK(e.line() == 5);
  CHECK(e.expected() == "')'");
  e = syntax_error("agent a\ntype t\ntask x t\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 8);
  e = syntax_error("frobnicate a\n");
  CHECK(e.line() == 1);
  CHECK(e.column() == 1);
  CHECK(e.code() == Errc::Syntax);
}

TEST_CASE("operator precedence and continuation lines") {
  const auto sc = dsl::parse_scenario(
      "agent a b\ntype t\ntask x : t\n"
      "def q = pi(a, x, b) . pw(a, x, b) + pi(b, ~x, a) ||\n"
      "        delta\n"
      "run (q\n  . tick)\n");
  const PromiseModel& m = sc.model;
  REQUIRE(sc.definitions.size() == 1);
  const Term& q = sc.definitions[0].term;
  const auto* par = q.as<term::Par>();
  REQUIRE(par);
  const auto* alt = par->left.as<term::Alt>();
  REQUIRE(alt);
  CHECK(alt->left.as<term::Seq>());
  CHECK(dsl::render(m, q) == "pi(a, x, b) . pw(a, x, b) + pi(b, ~x, a) || delta");
  REQUIRE(sc.entry);
  CHECK(*sc.entry == Term::seq(q, Term::done()));

  const Term g = dsl::parse_term(m, "[p(a, x, b)] -> pw(a, x, b) . delta");
  REQUIRE(g.as<term::Seq>());
  CHECK(g.as<term::Seq>()->left.as<term::Guard>());
}

TEST_CASE("condition grammar") {
  const PromiseModel m = fixtures::tiny_model();
  const Condition c = dsl::parse_condition(m, "p(a, x, b) and not E(x) or true => false => true");
  const auto* imp = c.as<cond::Implies>();
  REQUIRE(imp);
  CHECK(imp->right.as<cond::Implies>());
  CHECK(imp->left.as<cond::Or>());
  CHECK(dsl::parse_condition(m, dsl::render(m, c)) == c);

  const Condition f = dsl::parse_condition(m, "forall v != a : p(v, ~x, a) and true");
  const auto* all = f.as<cond::ForAll>();
  REQUIRE(all);
  CHECK(all->body.as<cond::And>());
  const Condition nested = Condition::conjunction(f, Condition::truth());
  CHECK(dsl::parse_condition(m, dsl::render(m, nested)) == nested);
  CHECK_THROWS_AS(dsl::parse_condition(m, "p(v, x, a)"), Error);
}

TEST_CASE("trace files ignore comments and blank lines") {
  const auto sc = fixtures::load("jub.promise");
  const auto events =
      dsl::parse_trace(sc.model, "# lead\n\npi(ja, tbc2JUB, ma)  # trailing\npw(ja, tbc2JUB, ma)\n");
  REQUIRE(events.size() == 2);
  CHECK(events[0] == Event::pi(Promise{*sc.model.agents.find("ja"),
                                       dsl::parse_body(sc.model.tasks, "tbc2JUB"),
                                       *sc.model.agents.find("ma")}));
  CHECK(events[1].kind == EventKind::Withdraw);
  CHECK_THROWS_AS(dsl::parse_trace(sc.model, "pi(ja, tbc2JUB)\n"), dsl::SyntaxError);
}

TEST_CASE("generalized events parse and render") {
  const auto sc = fixtures::load("compliance.promise");
  const Event e = dsl::parse_event(sc.model, "pi(boss[engineer], support, customer[customer])");
  CHECK(e.kind == EventKind::IntroduceGeneralized);
  CHECK(dsl::render(sc.model, e) == "pi(boss[engineer], support, customer[customer])");
  // Self-performed generalized events still need the compliance promise.
  const Event self = dsl::parse_event(sc.model, "pi(boss[boss], support, customer[customer])");
  CHECK(self.kind == EventKind::IntroduceGeneralized);
  CHECK(self != dsl::parse_event(sc.model, "pi(boss, support, customer)"));
}

TEST_CASE("render then parse is the identity on bundled scenarios") {
  for (const char* name :
       {"jub.promise", "isp.promise", "travel.promise", "compliance.promise"}) {
    CAPTURE(name);
    const auto sc = fixtures::load(name);
    const std::string text = dsl::render(sc);
    const auto again = dsl::parse_scenario(text);
    CHECK(again == sc);
    CHECK(dsl::render(again) == text);
  }
}

TEST_CASE("render then parse is the identity on generated scenarios") {
  generators::ScenarioGenerator gen(7);
  for (int i = 0; i < 200; ++i) {
    const auto sc = gen.next();
    const std::string text = dsl::render(sc);
    CAPTURE(text);
    CHECK(dsl::parse_scenario(text) == sc);
  }
}

TEST_CASE("definitions are inlined at reference") {
  const auto sc = dsl::parse_scenario(
      "agent a b\ntype t\ntask x : t\ndef one = pi(a, x, b)\ndef two = one . pw(a, x, b)\nrun two + one\n");
  const PromiseModel& m = sc.model;
  CHECK(*sc.entry == dsl::parse_term(m, "pi(a, x, b) . pw(a, x, b) + pi(a, x, b)"));
  CHECK(validation_code([] { dsl::parse_scenario("agent a\nrun nope\n"); }) == Errc::UnknownName);
}

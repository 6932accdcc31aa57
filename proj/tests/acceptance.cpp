// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <iostream>
#include <sstream>

#include "promise/cli.hpp"
#include "promise/dsl.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/sos_oracle.hpp"

using namespace promise;

namespace {

struct Check {
  std::string detail;
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

template <class F>
void criterion(int n, const std::string& name, F&& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << n << ". " << name << " (" << ms << " ms)";
  if (!c.ok) {
    std::cout << ": " << c.detail;
    ++failures;
  }
  std::cout << "\n";
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

const char* const kCorpus[] = {"jub.promise", "isp.promise", "travel.promise",
                               "compliance.promise"};

oracle::TraceSet as_set(const std::vector<Trace>& traces) {
  oracle::TraceSet out;
  for (const auto& t : traces) out.emplace(t.events, t.outcome == Outcome::Successful);
  return out;
}

}  // namespace

int main() {
  const std::string jub = fixtures::scenario_path("jub.promise");
  const std::string worked_trace = fixtures::scenario_path("jub_paper_trace.txt");

  criterion(1, "task-body algebra laws over the corpus", [](Check& c) {
    for (const char* name : kCorpus) {
      const auto m = fixtures::load(name).model;
      const auto bodies = m.tasks.all_bodies();
      c.expect(bodies.size() == 4 * m.tasks.atom_count(), std::string(name) + ": body count");
      for (TaskBody x : bodies) {
        const std::string at = std::string(name) + ": " + format_body(m.tasks, x);
        c.expect(usage(usage(x)) == x, at + " ~~x");
        c.expect(negate(negate(x)) == x, at + " !!x");
        c.expect(usage(negate(x)) == negate(usage(x)), at + " ~!x");
        c.expect(is_service(usage(x)) == !is_service(x), at + " s(~x)");
        c.expect(is_positive(usage(x)) == is_positive(x), at + " p(~x)");
        c.expect(is_service(negate(x)) == is_service(x), at + " s(!x)");
        c.expect(is_positive(negate(x)) == !is_positive(x), at + " p(!x)");
        const TaskBody a = atom_body(x.atom);
        c.expect(is_service(a) && is_positive(a), at + " s(a), p(a)");
      }
    }
  });

  criterion(2, "incompatibility closure laws and error cases", [](Check& c) {
    for (const char* name : kCorpus) {
      const auto m = fixtures::load(name).model;
      const auto bodies = m.tasks.all_bodies();
      for (TaskBody x : bodies) {
        c.expect(incompatible(m.incompatibility, x, negate(x)), std::string(name) + ": x # !x");
        c.expect(!incompatible(m.incompatibility, x, x), std::string(name) + ": irreflexive");
        for (TaskBody y : bodies) {
          const bool xy = incompatible(m.incompatibility, x, y);
          c.expect(xy == incompatible(m.incompatibility, y, x), std::string(name) + ": symmetry");
          if (xy) {
            c.expect(m.tasks.type_of(x) == m.tasks.type_of(y), std::string(name) + ": types");
            c.expect(!incompatible(m.incompatibility, x, negate(y)), std::string(name) + ": x#y => !(x#!y)");
          }
        }
      }
    }
    auto code = [](std::string_view text) {
      try {
        dsl::parse_scenario(text);
      } catch (const Error& e) {
        return std::optional<Errc>(e.code());
      }
      return std::optional<Errc>();
    };
    c.expect(code("type t\ntype u\ntask x : t\ntask y : u\nincompatible x # y\n") == Errc::TypeMismatch,
             "TypeMismatch");
    c.expect(code("type t\ntask x : t\nincompatible x # x\n") == Errc::ReflexiveDeclaration,
             "ReflexiveDeclaration");
    c.expect(code("type t\ntask x : t\ntask y : t\nincompatible x # y\nincompatible x # !y\n") ==
                 Errc::NegationConflict,
             "NegationConflict");
  });

  criterion(3, "worked trace reproduction", [&](Check& c) {
    const auto v = run_cli({"verify-trace", jub, "--trace", worked_trace});
    c.expect(v.code == 0, "verify-trace exit " + std::to_string(v.code));
    c.expect(v.out ==
                 "accepted\nevents: 6\nmaximal: yes\noutcome: successful\n"
                 "final state: {ja:tbc2JUB->ma, ma:~tbc2JUB->ja}\n",
             "verdict: " + v.out);
    const auto sc = fixtures::load("jub.promise");
    const auto events = dsl::parse_trace(sc.model, fixtures::slurp(worked_trace));
    std::string block;
    for (const auto& e : events) block += "  " + format_event(sc.model, e) + "\n";
    const auto x = run_cli({"explore", jub});
    c.expect(x.code == 0, "explore exit");
    c.expect(x.out.find(" (successful)\n" + block) != std::string::npos, "trace not listed");
  });

  criterion(4, "exclusiveness safety over the full transition system", [](Check& c) {
    const auto sc = fixtures::load("jub.promise");
    const auto& m = sc.model;
    const Lts lts = build_lts(m, sc.initial_configuration());
    c.expect(lts.complete, "incomplete");
    const AgentId ma = *m.agents.find("ma");
    const TaskBody ride = usage(atom_body(*m.tasks.find_atom("tbc2JUB")));
    for (const auto& node : lts.nodes) {
      std::set<std::uint32_t> promisees;
      for (const auto& p : node.state) {
        if (p.promiser == ma && p.body == ride) promisees.insert(p.promisee.value);
      }
      c.expect(promisees.size() <= 1, "two promisees in " + format_state(m, node.state));
    }
    c.expect(find_deadlocks(lts).empty(), "deadlocks present");
  });

  criterion(5, "LTS traces equal the direct enumerator on all depth-3 terms", [](Check& c) {
    const auto m = fixtures::tiny_model();
    const std::vector<Term> leaves{
        Term::action(dsl::parse_event(m, "pi(a, x, b)")),
        Term::action(dsl::parse_event(m, "pi(b, ~x, a)")),
        Term::action(dsl::parse_event(m, "pi(b, !~x, a)")),
        Term::action(dsl::parse_event(m, "pw(a, x, b)")),
        Term::deadlock(),
    };
    const std::vector<Condition> guards{Condition::truth(), Condition::falsity(),
                                        dsl::parse_condition(m, "p(a, x, b)")};
    const auto terms = generators::all_terms(leaves, guards, 3);
    c.expect(terms.size() == 27365, "term count " + std::to_string(terms.size()));
    for (const auto& t : terms) {
      const auto got = as_set(maximal_traces(m, build_lts(m, Configuration{t, State{}})));
      if (got != oracle::traces(m, t)) {
        c.expect(false, "mismatch on " + dsl::render(m, t));
        return;
      }
    }
  });

  criterion(6, "strict conflict scope rejects the worked trace at event 4", [&](Check& c) {
    const auto v = run_cli({"verify-trace", jub, "--trace", worked_trace, "--strict-conflicts"});
    c.expect(v.code == 1, "exit " + std::to_string(v.code));
    c.expect(v.out.find("index: 3 (event 4)\nevent: pi(ma, !~tbc2JUB, ju)\n") != std::string::npos,
             "verdict: " + v.out);
  });

  criterion(7, "scenario render/parse round trip", [](Check& c) {
    std::vector<dsl::Scenario> all{fixtures::load("jub.promise"), fixtures::load("isp.promise")};
    generators::ScenarioGenerator gen(2024);
    for (int i = 0; i < 20; ++i) all.push_back(gen.next());
    for (const auto& sc : all) {
      const std::string text = dsl::render(sc);
      c.expect(dsl::parse_scenario(text) == sc, "differs after round trip:\n" + text);
    }
  });

  criterion(8, "deterministic run and explore output", [&](Check& c) {
    const auto r1 = run_cli({"run", jub, "--seed", "42"});
    const auto r2 = run_cli({"run", jub, "--seed", "42"});
    c.expect(r1.code == 0 && r1.out == r2.out, "run differs");
    const auto e1 = run_cli({"explore", jub});
    const auto e2 = run_cli({"explore", jub});
    c.expect(e1.code == 0 && e1.out == e2.out, "explore differs");
    const auto j1 = run_cli({"explore", jub, "--format", "json"});
    const auto j2 = run_cli({"explore", jub, "--format", "json"});
    c.expect(j1.out == j2.out, "json explore differs");
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed") << "\n";
  return failures == 0 ? 0 : 1;
}

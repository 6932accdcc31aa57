#include "promise/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "promise/dsl.hpp"

namespace promise::cli {

namespace {

using nlohmann::json;

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<dsl::Scenario> load_scenario(const CliConfig& config, std::ostream& err) {
  auto text = read_file(config.scenario_path, err);
  if (!text) return std::nullopt;
  try {
    dsl::Scenario sc = dsl::parse_scenario(*text);
    if (config.strict_conflicts) {
      sc.model.conflict_scope = ConflictScope::Promiser;
      for (const auto& v : state_violations(sc.model, sc.initial_state)) {
        err << config.scenario_path << ": initial state breaks strict "
            << format_violation(sc.model, v) << "\n";
        return std::nullopt;
      }
    }
    return sc;
  } catch (const Error& e) {
    err << config.scenario_path << ":" << e.what() << "\n";
    return std::nullopt;
  }
}

std::string warning_text(const PromiseModel& model, const ObligationWarning& w) {
  return "obligation: " + model.agents.name(w.obligee) + " is subordinated to " +
         model.agents.name(w.promiser) + " and is bound by its promise";
}

std::vector<std::string> order_failures(const PromiseModel& model) {
  std::vector<std::string> out;
  const auto ids = model.agents.ids();
  for (AgentId a : ids) {
    for (AgentId b : ids) {
      if (a != b && model.order.leq(a, b) && model.order.leq(b, a)) {
        out.push_back("antisymmetry fails for " + model.agents.name(a) + ", " +
                      model.agents.name(b));
      }
      for (AgentId c : ids) {
        if (model.order.leq(a, b) && model.order.leq(b, c) && !model.order.leq(a, c)) {
          out.push_back("transitivity fails for " + model.agents.name(a) + " <= " +
                        model.agents.name(b) + " <= " + model.agents.name(c));
        }
      }
    }
  }
  return out;
}

}  // namespace

int cmd_check(const CliConfig& config, std::ostream& out, std::ostream& err) {
  auto sc = load_scenario(config, err);
  if (!sc) return kExitFailure;
  const PromiseModel& model = sc->model;

  std::vector<std::string> failures = audit_laws(model.tasks, model.incompatibility);
  for (auto& f : order_failures(model)) failures.push_back(std::move(f));
  for (const auto& v : state_violations(model, sc->initial_state)) {
    failures.push_back("initial state: " + format_violation(model, v));
  }

  std::vector<std::string> warnings;
  auto add_warnings = [&](const Term& t) {
    for (const auto& w : term_obligation_warnings(model, t)) {
      auto text = warning_text(model, w);
      if (std::find(warnings.begin(), warnings.end(), text) == warnings.end()) {
        warnings.push_back(std::move(text));
      }
    }
  };
  for (const auto& d : sc->definitions) add_warnings(d.term);
  if (sc->entry) add_warnings(*sc->entry);

  const bool ok = failures.empty();
  if (config.format == Format::Json) {
    json j;
    j["agents"] = model.agents.size();
    j["task_bodies"] = model.tasks.all_bodies().size();
    j["incompatible_pairs"] = model.incompatibility.pairs().size();
    j["exclusive"] = model.exclusive.bodies().size();
    j["failures"] = failures;
    j["warnings"] = warnings;
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "agents: " << model.agents.size() << "\n"
        << "task bodies: " << model.tasks.all_bodies().size() << "\n"
        << "incompatible pairs: " << model.incompatibility.pairs().size() << "\n"
        << "exclusive: " << model.exclusive.bodies().size() << "\n"
        << "failures: " << failures.size() << "\n";
    for (const auto& f : failures) out << "  " << f << "\n";
    out << "warnings: " << warnings.size() << "\n";
    for (const auto& w : warnings) out << "  " << w << "\n";
    out << (ok ? "ok" : "FAILED") << "\n";
  }
  for (const auto& f : failures) err << "error: " << f << "\n";
  return ok ? kExitOk : kExitFailure;
}

int cmd_explore(const CliConfig& config, std::ostream& out, std::ostream& err) {
  auto sc = load_scenario(config, err);
  if (!sc) return kExitFailure;
  const PromiseModel& model = sc->model;

  const Lts lts = build_lts(model, sc->initial_configuration(), config.node_limit);
  if (!lts.complete) {
    err << "error: node limit " << config.node_limit << " reached after " << lts.edges.size()
        << " edges\n";
    return kExitLimit;
  }
  std::vector<Trace> traces;
  try {
    traces = maximal_traces(model, lts, config.max_traces);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitLimit;
  }
  const auto deadlocks = find_deadlocks(lts);
  const auto report = check_invariants(model, lts);

  if (config.format == Format::Json) {
    json j;
    j["nodes"] = lts.nodes.size();
    j["edges"] = lts.edges.size();
    j["traces"] = json::array();
    for (const auto& t : traces) {
      json events = json::array();
      for (const auto& e : t.events) events.push_back(format_event(model, e));
      j["traces"].push_back({{"events", events}, {"outcome", to_string(t.outcome)}});
    }
    j["deadlocks"] = json::array();
    for (std::size_t n : deadlocks) {
      j["deadlocks"].push_back({{"node", n},
                                {"term", dsl::render(model, lts.nodes[n].term)},
                                {"state", format_state(model, lts.nodes[n].state)}});
    }
    j["violations"] = json::array();
    for (const auto& v : report.violations) {
      j["violations"].push_back(
          {{"node", v.node}, {"violation", format_violation(model, v.violation)}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "nodes: " << lts.nodes.size() << "\n"
        << "edges: " << lts.edges.size() << "\n"
        << "traces: " << traces.size() << "\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
      out << "trace " << i + 1 << " (" << to_string(traces[i].outcome) << ")\n";
      for (const auto& e : traces[i].events) out << "  " << format_event(model, e) << "\n";
    }
    out << "deadlocks: " << deadlocks.size() << "\n";
    for (std::size_t n : deadlocks) {
      out << "  node " << n << ": " << dsl::render(model, lts.nodes[n].term) << " in "
          << format_state(model, lts.nodes[n].state) << "\n";
    }
    out << "violations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations) {
      out << "  node " << v.node << ": " << format_violation(model, v.violation) << "\n";
    }
  }
  return report.clean() ? kExitOk : kExitFailure;
}

int cmd_run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  auto sc = load_scenario(config, err);
  if (!sc) return kExitFailure;
  const PromiseModel& model = sc->model;

  std::mt19937_64 rng(config.seed);
  Configuration current = sc->initial_configuration();
  std::vector<Event> events;
  for (;;) {
    auto transitions = step(model, current);
    if (transitions.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, transitions.size() - 1);
    auto& chosen = transitions[pick(rng)];
    events.push_back(chosen.event);
    current = std::move(chosen.target);
  }
  const Outcome outcome = can_terminate(current.term) ? Outcome::Successful : Outcome::Deadlocked;

  if (config.format == Format::Json) {
    json j;
    j["seed"] = config.seed;
    j["events"] = json::array();
    for (const auto& e : events) j["events"].push_back(format_event(model, e));
    j["outcome"] = to_string(outcome);
    j["final_state"] = format_state(model, current.state);
    out << j.dump(2) << "\n";
  } else {
    // Doubles as a trace file: the metadata lines are comments.
    out << "# seed " << config.seed << "\n";
    for (const auto& e : events) out << format_event(model, e) << "\n";
    out << "# outcome: " << to_string(outcome) << "\n"
        << "# final state: " << format_state(model, current.state) << "\n";
  }
  return kExitOk;
}

int cmd_verify_trace(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.trace_path) {
    err << "error: verify-trace requires --trace FILE\n";
    return kExitUsage;
  }
  auto sc = load_scenario(config, err);
  if (!sc) return kExitFailure;
  const PromiseModel& model = sc->model;

  auto text = read_file(*config.trace_path, err);
  if (!text) return kExitFailure;
  std::vector<Event> events;
  try {
    events = dsl::parse_trace(model, *text);
  } catch (const Error& e) {
    err << *config.trace_path << ":" << e.what() << "\n";
    return kExitFailure;
  }

  const TraceVerdict verdict = verify_trace(model, sc->initial_configuration(), events);
  if (const auto* acc = std::get_if<Accepted>(&verdict)) {
    const std::string outcome = acc->outcome ? std::string(to_string(*acc->outcome)) : "none";
    if (config.format == Format::Json) {
      json j{{"verdict", "accepted"},
             {"events", events.size()},
             {"maximal", acc->maximal},
             {"outcome", outcome},
             {"final_state", format_state(model, acc->final_state)}};
      out << j.dump(2) << "\n";
    } else {
      out << "accepted\n"
          << "events: " << events.size() << "\n"
          << "maximal: " << (acc->maximal ? "yes" : "no") << "\n"
          << "outcome: " << outcome << "\n"
          << "final state: " << format_state(model, acc->final_state) << "\n";
    }
    return kExitOk;
  }

  const auto& rej = std::get<Rejected>(verdict);
  const std::string offending = format_event(model, events[rej.index]);
  std::vector<std::string> available;
  for (const auto& e : rej.available) available.push_back(format_event(model, e));
  if (config.format == Format::Json) {
    json j{{"verdict", "rejected"},
           {"index", rej.index},
           {"event", offending},
           {"available", available}};
    out << j.dump(2) << "\n";
  } else {
    out << "rejected\n"
        << "index: " << rej.index << " (event " << rej.index + 1 << ")\n"
        << "event: " << offending << "\n"
        << "available:";
    for (const auto& a : available) out << " " << a;
    out << "\n";
  }
  err << "error: event " << rej.index + 1 << " (" << offending << ") is not enabled\n";
  return kExitFailure;
}

int dispatch(const CliConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Check: return cmd_check(config, out, err);
    case Command::Explore: return cmd_explore(config, out, err);
    case Command::Run: return cmd_run(config, out, err);
    case Command::VerifyTrace: return cmd_verify_trace(config, out, err);
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Promise-theory scenarios: check laws, explore, run and verify traces", "promise"};
  app.require_subcommand(1);

  CliConfig config;
  std::string format = "text";

  auto add_command = [&](const std::string& name, const std::string& help, Command cmd) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", config.scenario_path, "Scenario file (.promise)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--trace", config.trace_path, "Trace file to verify");
    sub->add_flag("--strict-conflicts", config.strict_conflicts,
                  "Check new promises against all promises of the promiser");
    sub->add_option("--seed", config.seed, "Random-walk seed");
    sub->add_option("--node-limit", config.node_limit, "Maximum LTS nodes")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-traces", config.max_traces, "Maximum maximal traces")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->callback([&config, cmd] { config.command = cmd; });
  };
  add_command("check", "Validate a scenario and re-verify the algebraic laws", Command::Check);
  add_command("explore", "Build the full transition system and list maximal traces",
              Command::Explore);
  add_command("run", "Perform one seeded random walk", Command::Run);
  add_command("verify-trace", "Replay a trace file against a scenario", Command::VerifyTrace);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  config.format = format == "json" ? Format::Json : Format::Text;
  return dispatch(config, out, err);
}

}  // namespace promise::cli

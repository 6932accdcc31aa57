#include "promise/explorer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace promise {

std::string_view to_string(Outcome o) {
  return o == Outcome::Successful ? "successful" : "deadlocked";
}

Lts build_lts(const PromiseModel& model, const Configuration& initial, std::size_t node_limit) {
  if (node_limit == 0) throw Error(Errc::LimitExceeded, "node limit must be positive");

  Lts lts;
  std::map<Configuration, std::size_t> index;
  std::deque<std::size_t> frontier;

  auto intern = [&](const Configuration& c) -> std::optional<std::size_t> {
    if (auto it = index.find(c); it != index.end()) return it->second;
    if (lts.nodes.size() >= node_limit) return std::nullopt;
    const std::size_t id = lts.nodes.size();
    lts.nodes.push_back(c);
    lts.outgoing.emplace_back();
    index.emplace(c, id);
    frontier.push_back(id);
    return id;
  };

  intern(initial);
  while (!frontier.empty()) {
    const std::size_t src = frontier.front();
    frontier.pop_front();
    const Configuration current = lts.nodes[src];
    for (auto& tr : step(model, current)) {
      auto dst = intern(tr.target);
      if (!dst) {
        lts.complete = false;
        continue;
      }
      lts.outgoing[src].push_back(lts.edges.size());
      lts.edges.push_back(Edge{src, tr.event, *dst});
    }
  }
  return lts;
}

void sort_traces(const PromiseModel& model, std::vector<Trace>& traces) {
  auto key = [&](const Trace& t) {
    std::vector<std::string> rendered;
    rendered.reserve(t.events.size());
    for (const auto& e : t.events) rendered.push_back(format_event(model, e));
    return std::pair{rendered, t.outcome};
  };
  std::vector<std::pair<decltype(key(Trace{})), Trace>> keyed;
  keyed.reserve(traces.size());
  for (auto& t : traces) keyed.emplace_back(key(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  traces.clear();
  for (auto& [k, t] : keyed) traces.push_back(std::move(t));
}

std::vector<Trace> maximal_traces(const PromiseModel& model, const Lts& lts,
                                  std::size_t max_traces) {
  if (!lts.complete) {
    throw Error(Errc::LimitExceeded, "cannot enumerate traces of an incomplete LTS");
  }
  std::set<Trace> found;
  std::vector<Event> path;

  auto dfs = [&](const auto& self, std::size_t node) -> void {
    const auto& out = lts.outgoing[node];
    if (out.empty()) {
      const Outcome outcome =
          can_terminate(lts.nodes[node].term) ? Outcome::Successful : Outcome::Deadlocked;
      found.insert(Trace{path, outcome});
      if (found.size() > max_traces) {
        throw Error(Errc::LimitExceeded,
                    "more than " + std::to_string(max_traces) + " maximal traces");
      }
      return;
    }
    for (std::size_t e : out) {
      path.push_back(lts.edges[e].event);
      self(self, lts.edges[e].target);
      path.pop_back();
    }
  };
  if (!lts.nodes.empty()) dfs(dfs, lts.initial);

  std::vector<Trace> traces(found.begin(), found.end());
  sort_traces(model, traces);
  return traces;
}

std::size_t longest_path(const Lts& lts) {
  std::vector<std::optional<std::size_t>> memo(lts.nodes.size());
  auto longest = [&](const auto& self, std::size_t node) -> std::size_t {
    if (memo[node]) return *memo[node];
    std::size_t best = 0;
    for (std::size_t e : lts.outgoing[node]) {
      best = std::max(best, 1 + self(self, lts.edges[e].target));
    }
    memo[node] = best;
    return best;
  };
  return lts.nodes.empty() ? 0 : longest(longest, lts.initial);
}

TraceVerdict verify_trace(const PromiseModel& model, const Configuration& initial,
                          const std::vector<Event>& events) {
  std::set<Configuration> current{initial};
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::set<Configuration> next;
    std::set<Event> available;
    for (const auto& c : current) {
      for (auto& tr : step(model, c)) {
        available.insert(tr.event);
        if (tr.event == events[i]) next.insert(std::move(tr.target));
      }
    }
    if (next.empty()) {
      Rejected r{i, std::vector<Event>(available.begin(), available.end())};
      std::sort(r.available.begin(), r.available.end(), [&](const Event& a, const Event& b) {
        return format_event(model, a) < format_event(model, b);
      });
      return r;
    }
    current = std::move(next);
  }

  // Every configuration reached by the same events carries the same state.
  Accepted verdict{current.begin()->state, false, std::nullopt};
  for (const auto& c : current) {
    if (!step(model, c).empty()) continue;
    verdict.maximal = true;
    if (can_terminate(c.term)) {
      verdict.outcome = Outcome::Successful;
    } else if (!verdict.outcome) {
      verdict.outcome = Outcome::Deadlocked;
    }
  }
  return verdict;
}

InvariantReport check_invariants(const PromiseModel& model, const Lts& lts) {
  InvariantReport report;
  for (std::size_t n = 0; n < lts.nodes.size(); ++n) {
    for (auto& v : state_violations(model, lts.nodes[n].state)) {
      report.violations.push_back(NodeViolation{n, std::move(v)});
    }
  }
  return report;
}

std::vector<std::size_t> find_deadlocks(const Lts& lts) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < lts.nodes.size(); ++n) {
    if (lts.outgoing[n].empty() && !can_terminate(lts.nodes[n].term)) out.push_back(n);
  }
  return out;
}

}  // namespace promise

#pragma once

// Exhaustive exploration of the labelled transition system generated by
// `step`: reachable configurations, maximal traces, deadlocks, invariants.

#include <cstddef>
#include <variant>
#include <vector>

#include "promise/process_algebra.hpp"

namespace promise {

inline constexpr std::size_t kDefaultNodeLimit = 100000;
inline constexpr std::size_t kDefaultMaxTraces = 100000;

struct Edge {
  std::size_t source;
  Event event;
  std::size_t target;
};

struct Lts {
  std::vector<Configuration> nodes;  // nodes[initial] is the start configuration
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> outgoing;  // edge indices per node
  std::size_t initial = 0;
  bool complete = true;  // false when node_limit cut the exploration short
};

/// Breadth-first closure of `step`. Configurations are identified by
/// structural equality. Stops once `node_limit` nodes exist and marks the
/// result incomplete; the partial LTS is still returned.
Lts build_lts(const PromiseModel& model, const Configuration& initial,
              std::size_t node_limit = kDefaultNodeLimit);

enum class Outcome { Successful, Deadlocked };

std::string_view to_string(Outcome o);

struct Trace {
  std::vector<Event> events;
  Outcome outcome = Outcome::Successful;

  auto operator<=>(const Trace&) const = default;
};

/// Distinct (events, outcome) pairs from the initial node to nodes without
/// outgoing edges, ordered lexicographically by rendered events. Throws
/// Error(LimitExceeded) past `max_traces` traces or on an incomplete LTS.
std::vector<Trace> maximal_traces(const PromiseModel& model, const Lts& lts,
                                  std::size_t max_traces = kDefaultMaxTraces);

/// Orders traces as `maximal_traces` returns them.
void sort_traces(const PromiseModel& model, std::vector<Trace>& traces);

/// Length of the longest path from the initial node (the LTS is acyclic).
std::size_t longest_path(const Lts& lts);

struct Accepted {
  State final_state;
  bool maximal = false;
  std::optional<Outcome> outcome;  // set when maximal
};

struct Rejected {
  std::size_t index = 0;            // 0-based position of the first unavailable event
  std::vector<Event> available;     // events that were possible at that point
};

using TraceVerdict = std::variant<Accepted, Rejected>;

/// Replays `events` from `initial`, following every configuration that the
/// prefix can reach.
TraceVerdict verify_trace(const PromiseModel& model, const Configuration& initial,
                          const std::vector<Event>& events);

struct NodeViolation {
  std::size_t node;
  StateViolation violation;
};

struct InvariantReport {
  std::vector<NodeViolation> violations;
  bool clean() const { return violations.empty(); }
};

InvariantReport check_invariants(const PromiseModel& model, const Lts& lts);

/// Indices of nodes with no outgoing edges whose term cannot terminate.
std::vector<std::size_t> find_deadlocks(const Lts& lts);

}  // namespace promise

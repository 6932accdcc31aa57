#pragma once

// Task bodies: atoms closed under usage (~) and negation (!), with the
// service/positivity predicates, typing, incompatibility and exclusiveness.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "promise/error.hpp"

namespace promise {

struct TypeId {
  std::uint32_t value = 0;
  auto operator<=>(const TypeId&) const = default;
};

struct AtomId {
  std::uint32_t value = 0;
  auto operator<=>(const AtomId&) const = default;
};

/// Canonical element of the task-body set: an atom with usage and negation
/// parities. The rewrite laws ~~x = x, !!x = x and ~!x = !~x hold by
/// construction, so structural equality is task-body equality.
struct TaskBody {
  AtomId atom;
  bool usage = false;
  bool negated = false;

  auto operator<=>(const TaskBody&) const = default;
};

inline constexpr TaskBody atom_body(AtomId atom) { return TaskBody{atom, false, false}; }

inline constexpr TaskBody usage(TaskBody x) {
  x.usage = !x.usage;
  return x;
}

inline constexpr TaskBody negate(TaskBody x) {
  x.negated = !x.negated;
  return x;
}

inline constexpr bool is_service(TaskBody x) { return !x.usage; }
inline constexpr bool is_positive(TaskBody x) { return !x.negated; }

inline constexpr std::string_view kComplianceType = "compliance";
inline constexpr std::string_view kGammaAtom = "gamma";

/// True for ASCII identifiers: a letter followed by letters, digits or '_'.
bool is_identifier(std::string_view name);

/// The finite universe of types and atoms. Every universe starts with the
/// reserved type `compliance` and the compliance atom `gamma` of that type.
class TaskUniverse {
 public:
  static constexpr TypeId kCompliance{0};
  static constexpr AtomId kGamma{0};

  TaskUniverse();

  TypeId add_type(std::string name);
  AtomId add_atom(std::string name, TypeId type);

  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<AtomId> find_atom(std::string_view name) const;

  const std::string& type_name(TypeId id) const { return types_.at(id.value); }
  const std::string& atom_name(AtomId id) const { return atoms_.at(id.value).name; }
  TypeId atom_type(AtomId id) const { return atoms_.at(id.value).type; }

  std::size_t type_count() const { return types_.size(); }
  std::size_t atom_count() const { return atoms_.size(); }
  bool contains(TaskBody x) const { return x.atom.value < atoms_.size(); }

  TypeId type_of(TaskBody x) const { return atom_type(x.atom); }

  /// All 4 * atom_count() task bodies, in canonical order.
  std::vector<TaskBody> all_bodies() const;

  friend bool operator==(const TaskUniverse&, const TaskUniverse&) = default;

 private:
  struct Atom {
    std::string name;
    TypeId type;
    friend bool operator==(const Atom&, const Atom&) = default;
  };

  std::vector<std::string> types_;
  std::vector<Atom> atoms_;
};

/// Prefix syntax: `!` for negation outermost, then `~` for usage.
std::string format_body(const TaskUniverse& universe, TaskBody x);

using BodyPair = std::pair<TaskBody, TaskBody>;

/// Symmetric incompatibility closure over a universe. Pairs are stored
/// unordered as (min, max).
class IncompatibilityRelation {
 public:
  IncompatibilityRelation() = default;

  bool incompatible(TaskBody x, TaskBody y) const;

  const std::set<BodyPair>& pairs() const { return pairs_; }
  const std::set<BodyPair>& declared() const { return declared_; }

  friend bool operator==(const IncompatibilityRelation&,
                         const IncompatibilityRelation&) = default;

 private:
  friend IncompatibilityRelation build_incompatibility(const TaskUniverse&,
                                                       std::span<const BodyPair>);
  std::set<BodyPair> pairs_;
  std::set<BodyPair> declared_;
};

/// Smallest symmetric relation containing the declared pairs and every
/// axiom pair (x, !x). Throws Error with TypeMismatch, ReflexiveDeclaration,
/// NegationConflict, ReservedTask (gamma in a declaration) or UnknownName.
IncompatibilityRelation build_incompatibility(const TaskUniverse& universe,
                                              std::span<const BodyPair> declared);

inline bool incompatible(const IncompatibilityRelation& rel, TaskBody x, TaskBody y) {
  return rel.incompatible(x, y);
}

class ExclusivenessRegistry {
 public:
  void declare(TaskBody x) { exclusive_.insert(x); }
  bool contains(TaskBody x) const { return exclusive_.contains(x); }
  const std::set<TaskBody>& bodies() const { return exclusive_; }

  friend bool operator==(const ExclusivenessRegistry&,
                         const ExclusivenessRegistry&) = default;

 private:
  std::set<TaskBody> exclusive_;
};

inline bool is_exclusive(const ExclusivenessRegistry& reg, TaskBody x) {
  return reg.contains(x);
}

/// Brute-force audit of the usage/negation/service/positivity/typing laws
/// and the incompatibility laws over every task body of the universe.
/// Returns one human-readable line per violated instance; empty when clean.
std::vector<std::string> audit_laws(const TaskUniverse& universe,
                                    const IncompatibilityRelation& rel);

}  // namespace promise

#include "promise/task_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace promise {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::ReflexiveDeclaration: return "ReflexiveDeclaration";
    case Errc::NegationConflict: return "NegationConflict";
    case Errc::ReservedTask: return "ReservedTask";
    case Errc::InvalidName: return "InvalidName";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::UnknownName: return "UnknownName";
    case Errc::OrderCycle: return "OrderCycle";
    case Errc::NotEnabled: return "NotEnabled";
    case Errc::NotPresent: return "NotPresent";
    case Errc::NoCompliance: return "NoCompliance";
    case Errc::InvalidBody: return "InvalidBody";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::LimitExceeded: return "LimitExceeded";
    case Errc::Syntax: return "SyntaxError";
  }
  return "Unknown";
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

TaskUniverse::TaskUniverse() {
  types_.emplace_back(kComplianceType);
  atoms_.push_back(Atom{std::string(kGammaAtom), kCompliance});
}

TypeId TaskUniverse::add_type(std::string name) {
  if (!is_identifier(name)) {
    throw Error(Errc::InvalidName, "invalid type name '" + name + "'");
  }
  if (find_type(name)) {
    throw Error(Errc::DuplicateName, "type '" + name + "' declared twice");
  }
  types_.push_back(std::move(name));
  return TypeId{static_cast<std::uint32_t>(types_.size() - 1)};
}

AtomId TaskUniverse::add_atom(std::string name, TypeId type) {
  if (!is_identifier(name)) {
    throw Error(Errc::InvalidName, "invalid task name '" + name + "'");
  }
  if (find_atom(name)) {
    throw Error(Errc::DuplicateName, "task '" + name + "' declared twice");
  }
  if (type.value >= types_.size()) {
    throw Error(Errc::UnknownName, "task '" + name + "' has an undeclared type");
  }
  if (type == kCompliance) {
    throw Error(Errc::ReservedTask, "type 'compliance' is reserved for gamma");
  }
  atoms_.push_back(Atom{std::move(name), type});
  return AtomId{static_cast<std::uint32_t>(atoms_.size() - 1)};
}

std::optional<TypeId> TaskUniverse::find_type(std::string_view name) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i] == name) return TypeId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::optional<AtomId> TaskUniverse::find_atom(std::string_view name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].name == name) return AtomId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::vector<TaskBody> TaskUniverse::all_bodies() const {
  std::vector<TaskBody> out;
  out.reserve(atoms_.size() * 4);
  for (std::uint32_t i = 0; i < atoms_.size(); ++i) {
    for (bool u : {false, true}) {
      for (bool n : {false, true}) out.push_back(TaskBody{AtomId{i}, u, n});
    }
  }
  return out;
}

std::string format_body(const TaskUniverse& universe, TaskBody x) {
  std::string out;
  if (x.negated) out += '!';
  if (x.usage) out += '~';
  out += universe.atom_name(x.atom);
  return out;
}

namespace {

BodyPair unordered(TaskBody x, TaskBody y) {
  return x < y ? BodyPair{x, y} : BodyPair{y, x};
}

}  // namespace

bool IncompatibilityRelation::incompatible(TaskBody x, TaskBody y) const {
  return pairs_.contains(unordered(x, y));
}

IncompatibilityRelation build_incompatibility(const TaskUniverse& universe,
                                              std::span<const BodyPair> declared) {
  IncompatibilityRelation rel;
  for (TaskBody x : universe.all_bodies()) {
    rel.pairs_.insert(unordered(x, negate(x)));
  }

  for (const auto& [x, y] : declared) {
    if (!universe.contains(x) || !universe.contains(y)) {
      throw Error(Errc::UnknownName, "incompatibility mentions an unknown task");
    }
    const auto shown = format_body(universe, x) + " # " + format_body(universe, y);
    if (x.atom == TaskUniverse::kGamma || y.atom == TaskUniverse::kGamma) {
      throw Error(Errc::ReservedTask, "gamma cannot be declared incompatible: " + shown);
    }
    if (x == y) {
      throw Error(Errc::ReflexiveDeclaration, "a task is never incompatible with itself: " + shown);
    }
    if (universe.type_of(x) != universe.type_of(y)) {
      throw Error(Errc::TypeMismatch, "incompatible tasks must share a type: " + shown);
    }
    rel.declared_.insert(unordered(x, y));
    rel.pairs_.insert(unordered(x, y));
  }

  // x # y forbids x # !y; check every pair from both ends.
  for (const auto& [x, y] : rel.pairs_) {
    for (auto [u, v] : {BodyPair{x, y}, BodyPair{y, x}}) {
      if (rel.pairs_.contains(unordered(u, negate(v)))) {
        throw Error(Errc::NegationConflict,
                    "both " + format_body(universe, u) + " # " + format_body(universe, v) +
                        " and " + format_body(universe, u) + " # " +
                        format_body(universe, negate(v)));
      }
    }
  }
  return rel;
}

std::vector<std::string> audit_laws(const TaskUniverse& universe,
                                    const IncompatibilityRelation& rel) {
  std::vector<std::string> failures;
  auto fail = [&](TaskBody x, std::string_view law) {
    failures.push_back(std::string(law) + " fails for " + format_body(universe, x));
  };
  const auto bodies = universe.all_bodies();

  for (TaskBody x : bodies) {
    if (usage(usage(x)) != x) fail(x, "~~x = x");
    if (negate(negate(x)) != x) fail(x, "!!x = x");
    if (usage(negate(x)) != negate(usage(x))) fail(x, "~!x = !~x");
    if (is_service(negate(x)) != is_service(x)) fail(x, "s(!x) = s(x)");
    if (is_service(usage(x)) == is_service(x)) fail(x, "s(~x) = !s(x)");
    if (is_positive(negate(x)) == is_positive(x)) fail(x, "p(!x) = !p(x)");
    if (is_positive(usage(x)) != is_positive(x)) fail(x, "p(~x) = p(x)");
    if (universe.type_of(usage(x)) != universe.type_of(x) ||
        universe.type_of(negate(x)) != universe.type_of(x)) {
      fail(x, "t(~x) = t(x) = t(!x)");
    }
    if (!rel.incompatible(x, negate(x))) fail(x, "x # !x");
    if (rel.incompatible(x, x)) fail(x, "not x # x");
  }
  auto g = atom_body(TaskUniverse::kGamma);
  if (!is_service(g)) fail(g, "s(gamma) = true");
  if (!is_positive(g)) fail(g, "p(gamma) = true");

  for (TaskBody x : bodies) {
    for (TaskBody y : bodies) {
      if (!rel.incompatible(x, y)) continue;
      const auto pair = format_body(universe, x) + ", " + format_body(universe, y);
      if (!rel.incompatible(y, x)) failures.push_back("symmetry fails for " + pair);
      if (universe.type_of(x) != universe.type_of(y)) {
        failures.push_back("type homogeneity fails for " + pair);
      }
      if (rel.incompatible(x, negate(y))) {
        failures.push_back("x # y => not x # !y fails for " + pair);
      }
    }
  }
  return failures;
}

}  // namespace promise

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ratmon {

using Atom = std::string;
using ClassId = std::string;

// A signed literal `name=1` / `name=0`. When `witness` is set, `name` is a
// class id and the literal is the class witness [λ]⊤ / [λ]⊥.
struct Literal {
  std::string name;
  bool value = true;
  bool witness = false;

  auto operator<=>(const Literal&) const = default;
};

using PlainEvent = std::set<Atom>;
using PlainTrace = std::vector<PlainEvent>;
using SignedEvent = std::set<Literal>;
using SignedTrace = std::vector<SignedEvent>;

// What an event tells the monitor about each atom it knows.
using KnownValues = std::map<Atom, bool>;

struct AtomClass {
  std::vector<Atom> members;  // sorted

  ClassId id() const;
  const Atom& witness() const { return members.front(); }
  bool singleton() const { return members.size() == 1; }
};

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<Atom>> groups);

  const std::vector<AtomClass>& classes() const { return classes_; }
  std::set<Atom> atoms() const;
  bool covers(const Atom& atom) const { return index_.contains(atom); }
  const AtomClass& class_of(const Atom& atom) const;
  const AtomClass* find(const ClassId& id) const;
  std::vector<ClassId> non_singleton_ids() const;

  // Adds singleton classes for atoms not yet covered.
  Partition extended_with(const std::set<Atom>& atoms) const;

  bool operator==(const Partition& other) const;

 private:
  std::vector<AtomClass> classes_;
  std::map<Atom, std::size_t> index_;
  std::map<ClassId, std::size_t> by_id_;
};

Partition derive_classes(const std::set<Atom>& alphabet,
                         const std::vector<std::pair<Atom, Atom>>& relation);

struct VisibilitySpec {
  std::set<Atom> alphabet;
  std::vector<std::pair<Atom, Atom>> relation;
  Partition classes;
  std::map<ClassId, int> costs;

  static VisibilitySpec make(std::set<Atom> alphabet,
                             std::vector<std::pair<Atom, Atom>> relation,
                             std::map<ClassId, int> costs = {});
  int cost(const ClassId& id) const;
};

SignedEvent explicit_event(const PlainEvent& event, const std::set<Atom>& alphabet);
SignedTrace explicit_trace(const PlainTrace& trace, const std::set<Atom>& alphabet);

SignedEvent visible_event(const SignedEvent& explicit_ev, const Partition& classes,
                          const std::set<ClassId>& broken);
SignedTrace visible_trace(const SignedTrace& explicit_tr, const Partition& classes,
                          const std::set<ClassId>& broken);

bool is_consistent(const SignedEvent& event, const Partition& classes);

// Expands witnesses into per-member values. Throws on contradictions and on
// witnesses of unknown classes.
KnownValues known_values(const SignedEvent& event, const Partition& classes);

std::string to_string(const Literal& lit);
std::string to_string(const SignedEvent& event);
std::string to_string(const PlainEvent& event);

}  // namespace ratmon

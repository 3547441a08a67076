#include "ratmon/visibility.hpp"

#include <algorithm>
#include <numeric>

#include "ratmon/error.hpp"

namespace ratmon {

ClassId AtomClass::id() const {
  ClassId out;
  for (const auto& m : members) out += m;
  return out;
}

Partition::Partition(std::vector<std::vector<Atom>> groups) {
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty()) throw Error("empty class");
  }
  std::sort(groups.begin(), groups.end());
  for (auto& g : groups) {
    AtomClass c{std::move(g)};
    for (const auto& a : c.members) {
      if (a.empty()) throw Error("empty atom name");
      if (!index_.emplace(a, classes_.size()).second) {
        throw Error("atom '" + a + "' in two classes");
      }
    }
    ClassId id = c.id();
    if (!by_id_.emplace(id, classes_.size()).second) {
      throw Error("class id '" + id + "' is ambiguous");
    }
    classes_.push_back(std::move(c));
  }
}

std::set<Atom> Partition::atoms() const {
  std::set<Atom> out;
  for (const auto& [a, _] : index_) out.insert(a);
  return out;
}

const AtomClass& Partition::class_of(const Atom& atom) const {
  auto it = index_.find(atom);
  if (it == index_.end()) throw Error("atom '" + atom + "' is not covered by any class");
  return classes_[it->second];
}

const AtomClass* Partition::find(const ClassId& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &classes_[it->second];
}

std::vector<ClassId> Partition::non_singleton_ids() const {
  std::vector<ClassId> out;
  for (const auto& c : classes_) {
    if (!c.singleton()) out.push_back(c.id());
  }
  return out;
}

Partition Partition::extended_with(const std::set<Atom>& atoms) const {
  std::vector<std::vector<Atom>> groups;
  for (const auto& c : classes_) groups.push_back(c.members);
  for (const auto& a : atoms) {
    if (!covers(a)) groups.push_back({a});
  }
  return Partition(std::move(groups));
}

bool Partition::operator==(const Partition& other) const {
  if (classes_.size() != other.classes_.size()) return false;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].members != other.classes_[i].members) return false;
  }
  return true;
}

Partition derive_classes(const std::set<Atom>& alphabet,
                         const std::vector<std::pair<Atom, Atom>>& relation) {
  std::vector<Atom> atoms(alphabet.begin(), alphabet.end());
  std::map<Atom, std::size_t> pos;
  for (std::size_t i = 0; i < atoms.size(); ++i) pos[atoms[i]] = i;
  std::vector<std::size_t> parent(atoms.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : relation) {
    auto ia = pos.find(a);
    auto ib = pos.find(b);
    if (ia == pos.end()) throw Error("relation references unknown atom '" + a + "'");
    if (ib == pos.end()) throw Error("relation references unknown atom '" + b + "'");
    parent[root(ia->second)] = root(ib->second);
  }
  std::map<std::size_t, std::vector<Atom>> groups;
  for (std::size_t i = 0; i < atoms.size(); ++i) groups[root(i)].push_back(atoms[i]);
  std::vector<std::vector<Atom>> out;
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return Partition(std::move(out));
}

VisibilitySpec VisibilitySpec::make(std::set<Atom> alphabet,
                                    std::vector<std::pair<Atom, Atom>> relation,
                                    std::map<ClassId, int> costs) {
  VisibilitySpec s;
  s.classes = derive_classes(alphabet, relation);
  s.alphabet = std::move(alphabet);
  s.relation = std::move(relation);
  for (const auto& [id, c] : costs) {
    const AtomClass* cls = s.classes.find(id);
    if (cls == nullptr) throw Error("cost for unknown class '" + id + "'");
    if (c < 0) throw Error("negative cost for class '" + id + "'");
  }
  s.costs = std::move(costs);
  return s;
}

int VisibilitySpec::cost(const ClassId& id) const {
  const AtomClass* cls = classes.find(id);
  if (cls == nullptr) throw Error("unknown class '" + id + "'");
  if (cls->singleton()) return 0;
  auto it = costs.find(id);
  if (it == costs.end()) throw Error("no cost for class '" + id + "'");
  return it->second;
}

SignedEvent explicit_event(const PlainEvent& event, const std::set<Atom>& alphabet) {
  SignedEvent out;
  for (const auto& a : event) {
    if (!alphabet.contains(a)) throw Error("event atom '" + a + "' not in alphabet");
  }
  for (const auto& a : alphabet) out.insert(Literal{a, event.contains(a), false});
  return out;
}

SignedTrace explicit_trace(const PlainTrace& trace, const std::set<Atom>& alphabet) {
  SignedTrace out;
  out.reserve(trace.size());
  for (const auto& e : trace) out.push_back(explicit_event(e, alphabet));
  return out;
}

SignedEvent visible_event(const SignedEvent& explicit_ev, const Partition& classes,
                          const std::set<ClassId>& broken) {
  std::map<Atom, bool> value;
  for (const auto& lit : explicit_ev) {
    if (lit.witness) throw Error("explicit event contains a witness literal");
    value[lit.name] = lit.value;
  }
  SignedEvent out;
  for (const auto& c : classes.classes()) {
    if (c.singleton() || broken.contains(c.id())) {
      for (const auto& m : c.members) {
        auto it = value.find(m);
        if (it != value.end()) out.insert(Literal{m, it->second, false});
      }
      continue;
    }
    bool all_true = true;
    bool all_false = true;
    for (const auto& m : c.members) {
      auto it = value.find(m);
      if (it == value.end()) {
        all_true = all_false = false;
        break;
      }
      (it->second ? all_false : all_true) = false;
    }
    if (all_true) out.insert(Literal{c.id(), true, true});
    if (all_false) out.insert(Literal{c.id(), false, true});
  }
  return out;
}

SignedTrace visible_trace(const SignedTrace& explicit_tr, const Partition& classes,
                          const std::set<ClassId>& broken) {
  for (const auto& id : broken) {
    const AtomClass* c = classes.find(id);
    if (c == nullptr || c->singleton()) throw Error("cannot break class '" + id + "'");
  }
  SignedTrace out;
  out.reserve(explicit_tr.size());
  for (const auto& e : explicit_tr) out.push_back(visible_event(e, classes, broken));
  return out;
}

KnownValues known_values(const SignedEvent& event, const Partition& classes) {
  KnownValues out;
  auto set = [&](const Atom& a, bool v) {
    auto [it, inserted] = out.emplace(a, v);
    if (!inserted && it->second != v) throw Error("inconsistent event: '" + a + "' is both 1 and 0");
  };
  for (const auto& lit : event) {
    if (!lit.witness) {
      set(lit.name, lit.value);
      continue;
    }
    const AtomClass* c = classes.find(lit.name);
    if (c == nullptr) throw Error("witness of unknown class '" + lit.name + "'");
    for (const auto& m : c->members) set(m, lit.value);
  }
  return out;
}

bool is_consistent(const SignedEvent& event, const Partition& classes) {
  try {
    known_values(event, classes);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string to_string(const Literal& lit) {
  std::string s = lit.witness ? "[" + lit.name + "]" : lit.name;
  return s + (lit.value ? "=1" : "=0");
}

std::string to_string(const SignedEvent& event) {
  std::string out;
  for (const auto& lit : event) {
    if (!out.empty()) out += ' ';
    out += to_string(lit);
  }
  return out;
}

std::string to_string(const PlainEvent& event) {
  std::string out;
  for (const auto& a : event) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace ratmon

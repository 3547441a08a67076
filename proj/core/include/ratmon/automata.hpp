#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratmon/formula.hpp"
#include "ratmon/verdict.hpp"

namespace ratmon {

// Finite set of propositions an automaton can observe. Propositions over the
// same atom with different signs are mutually exclusive and form one
// variable; a valuation assigns each variable one of its propositions or
// none. Valuations are exactly the consistent events restricted to the
// observed propositions.
class Alphabet {
 public:
  Alphabet() { build(); }
  explicit Alphabet(std::vector<Prop> props);

  std::size_t size() const { return props_.size(); }
  const std::vector<Prop>& props() const { return props_; }
  const Prop& prop(std::size_t i) const { return props_[i]; }
  std::optional<std::size_t> find(const Prop& p) const;
  bool exclusive(std::size_t a, std::size_t b) const;

  std::size_t valuation_count() const { return masks_.size(); }
  std::uint64_t mask(std::size_t valuation) const { return masks_[valuation]; }
  // Presence bitmask to valuation index; throws if the mask is inconsistent.
  std::size_t valuation_of(std::uint64_t mask) const;

  std::uint64_t mask_of(const PlainEvent& event) const;
  std::uint64_t mask_of(const KnownValues& known) const;

  bool operator==(const Alphabet& o) const { return props_ == o.props_; }

 private:
  void build();

  std::vector<Prop> props_;
  std::vector<std::size_t> var_of_;
  std::vector<std::vector<std::size_t>> vars_;
  std::vector<std::size_t> radix_weight_;
  std::vector<std::uint64_t> masks_;
};

struct Guard {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool accepts(std::uint64_t mask) const { return (mask & pos) == pos && (mask & neg) == 0; }
  bool operator==(const Guard&) const = default;
};

enum class AutomatonKind { Nba, Nfa, Dfa };

struct Transition {
  std::size_t from;
  Guard guard;
  std::size_t to;
};

struct GuardedAutomaton {
  AutomatonKind kind = AutomatonKind::Nba;
  Alphabet alphabet;
  std::size_t state_count = 0;
  std::vector<std::size_t> initial;
  std::vector<Transition> transitions;
  std::vector<bool> accepting;

  std::vector<std::vector<std::size_t>> successors_by_state() const;
};

// Total deterministic automaton over the valuations of its alphabet.
struct Dfa {
  Alphabet alphabet;
  std::size_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;  // [state][valuation]
  std::vector<bool> accepting;

  std::size_t state_count() const { return next.size(); }
  bool accepts(const std::vector<std::uint64_t>& word_masks) const;
  GuardedAutomaton guarded() const;
};

struct MooreMachine {
  Alphabet alphabet;
  std::size_t initial = 0;
  std::vector<std::vector<std::uint32_t>> next;  // [state][valuation]
  std::vector<Verdict> output;

  std::size_t state_count() const { return next.size(); }
  bool operator==(const MooreMachine&) const = default;
};

Alphabet alphabet_of(const std::vector<Formula>& formulas);

// Tableau construction; `f` must be in NNF and its props must be in `sigma`.
GuardedAutomaton ltl_to_nba(const Formula& f, const Alphabet& sigma);
std::vector<bool> nonempty_states(const GuardedAutomaton& nba);
GuardedAutomaton nba_to_nfa(const GuardedAutomaton& nba, const std::vector<bool>& live);
Dfa determinize(const GuardedAutomaton& nfa);
Dfa minimize(const Dfa& dfa);

// Steps (ii) to (v): the DFA of the finite prefixes of L(f) that still have
// an infinite continuation in L(f).
Dfa prefix_dfa(const Formula& nnf, const Alphabet& sigma, bool minimal = true);

MooreMachine product2(const Dfa& pos, const Dfa& neg);
MooreMachine product3(const Dfa& pos, const Dfa& neg, const Dfa& und);

std::string to_dot(const GuardedAutomaton& a, const std::string& name = "A");
std::string to_dot(const MooreMachine& m, const std::string& name = "M");
std::string guard_to_string(const Guard& g, const Alphabet& sigma);

}  // namespace ratmon

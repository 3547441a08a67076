#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "ratmon/formula.hpp"
#include "ratmon/verdict.hpp"
#include "ratmon/visibility.hpp"

// Brute-force semantics used to cross-check the automata pipeline. Nothing
// here depends on the automata code.
namespace ratmon::oracle {

using PropKey = std::pair<Atom, Sign>;
using LassoEvent = std::set<PropKey>;

// u·v^ω
struct LassoWord {
  std::vector<LassoEvent> stem;
  std::vector<LassoEvent> loop;
};

LassoEvent lasso_event(const PlainEvent& e);
LassoEvent lasso_event(const KnownValues& known);

// Exact truth on u·v^ω by fixpoints over the lasso positions.
bool eval_lasso(const Formula& f, const LassoWord& w);
// Direct recursion on positions of the unrolled word.
bool eval_unrolled(const Formula& f, const LassoWord& w);

struct Limits {
  std::size_t max_atoms = 5;
  std::size_t max_prefix = 16;
  std::size_t max_loop_words = 1u << 16;
};

struct Bits {
  bool sat = false;
  bool viol = false;
  bool undef = false;
};

// Existence of satisfying, violating and undefined continuations of a
// visible prefix, searching loops of length up to `bound`.
Bits imperfect_bits(const Formula& f, const Partition& classes, const SignedTrace& prefix,
                    std::size_t bound, const Limits& limits = {});
Verdict oracle_verdict(const Formula& f, const Partition& classes, const SignedTrace& prefix,
                       std::size_t bound, const Limits& limits = {});
Verdict standard_verdict(const Formula& f, const PlainTrace& prefix, std::size_t bound,
                         const Limits& limits = {});

// Does some infinite word extending `prefix` satisfy ε(f)? Finite-prefix
// acceptance of the pipeline's Â automata.
bool has_satisfying_extension(const Formula& f, const Partition& classes,
                              const SignedTrace& prefix, std::size_t bound,
                              const Limits& limits = {});

}  // namespace ratmon::oracle

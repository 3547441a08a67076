#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "ratmon/visibility.hpp"

namespace ratmon {

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Release,
  Eventually,
  Always,
};

// Leaf kinds. Plain leaves test atom presence. Known leaves belong to
// explicit formulas and test that the atom is known true (p⊤) or known
// false (p⊥); `cls` records the class the literal was produced for.
enum class Sign { Plain, KnownTrue, KnownFalse };

struct Prop {
  Atom atom;
  Sign sign = Sign::Plain;
  ClassId cls;

  bool operator==(const Prop& o) const { return atom == o.atom && sign == o.sign; }
  auto operator<=>(const Prop& o) const {
    if (auto c = atom <=> o.atom; c != 0) return c;
    return sign <=> o.sign;
  }
};

class Formula {
 public:
  Formula();  // true

  static Formula truth();
  static Formula falsity();
  static Formula atom(Atom name);
  static Formula leaf(Prop prop);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula until(Formula a, Formula b);
  static Formula release(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  Op op() const;
  const Prop& prop() const;
  const Formula& lhs() const;  // also the operand of unary nodes
  const Formula& rhs() const;

  bool is_const() const { return op() == Op::True || op() == Op::False; }
  bool is_literal() const;
  std::size_t operator_count() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula make(Op op, Formula a, Formula b);

  std::shared_ptr<const Node> node_;
};

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);
std::string to_string(const Prop& p);

// Negation pushed to leaves, ->, F and G expanded.
Formula to_nnf(const Formula& f);
bool is_nnf(const Formula& f);

// F and G expanded, -> kept, negation pushed to leaves. Input for metrics.
Formula to_metric_form(const Formula& f);

std::set<Atom> atoms_of(const Formula& f);
std::set<Prop> props_of(const Formula& f);

// ε(f) for an NNF formula: p ↦ p⊤, ¬p ↦ p⊥, tagged with p's class.
Formula explicit_formula(const Formula& nnf, const Partition& classes);

// ¬ε(f) ∧ ¬ε(nnf(¬f)) in NNF over the doubled alphabet, where a negated
// signed leaf means the literal is absent.
Formula undefined_formula(const Formula& nnf, const Partition& classes);

// One step of three-valued progression on a formula in NNF or metric form.
// Atoms without a known value stay in the residual.
Formula progress(const Formula& f, const KnownValues& known);
Formula progress(const Formula& f, const SignedEvent& event, const Partition& classes);

}  // namespace ratmon

#include "ratmon/formula.hpp"

#include <cctype>
#include <vector>

#include "ratmon/error.hpp"

namespace ratmon {

struct Formula::Node {
  Op op;
  Prop prop;
  Formula a;
  Formula b;
  std::size_t operators = 0;
};

Formula::Formula() : node_(truth().node_) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::make(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->operators = 1 + a.operator_count() + b.operator_count();
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::truth() {
  static const Formula t = [] {
    auto n = std::make_shared<Node>(Node{Op::True, {}, Formula(nullptr), Formula(nullptr), 0});
    return Formula(std::move(n));
  }();
  return t;
}

Formula Formula::falsity() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>(Node{Op::False, {}, Formula(nullptr), Formula(nullptr), 0});
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::atom(Atom name) { return leaf(Prop{std::move(name), Sign::Plain, {}}); }

Formula Formula::leaf(Prop prop) {
  if (prop.atom.empty()) throw Error("empty atom name");
  auto n = std::make_shared<Node>(
      Node{Op::Atom, std::move(prop), Formula(nullptr), Formula(nullptr), 0});
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) { return make(Op::Not, std::move(f), Formula(nullptr)); }
Formula Formula::conj(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) {
  return make(Op::Implies, std::move(a), std::move(b));
}
Formula Formula::next(Formula f) { return make(Op::Next, std::move(f), Formula(nullptr)); }
Formula Formula::until(Formula a, Formula b) {
  return make(Op::Until, std::move(a), std::move(b));
}
Formula Formula::release(Formula a, Formula b) {
  return make(Op::Release, std::move(a), std::move(b));
}
Formula Formula::eventually(Formula f) {
  return make(Op::Eventually, std::move(f), Formula(nullptr));
}
Formula Formula::always(Formula f) { return make(Op::Always, std::move(f), Formula(nullptr)); }

Op Formula::op() const { return node_->op; }
const Prop& Formula::prop() const { return node_->prop; }
const Formula& Formula::lhs() const { return node_->a; }
const Formula& Formula::rhs() const { return node_->b; }
std::size_t Formula::operator_count() const { return node_ ? node_->operators : 0; }

bool Formula::is_literal() const {
  return op() == Op::Atom || (op() == Op::Not && lhs().op() == Op::Atom);
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (op() != other.op() || operator_count() != other.operator_count()) return false;
  switch (op()) {
    case Op::True:
    case Op::False:
      return true;
    case Op::Atom:
      return prop() == other.prop();
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      return lhs() == other.lhs();
    default:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Not, And, Or, Implies, LParen, RParen, Next, Eventually, Always, Until,
                 Release, True, False, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      std::string word(s.substr(start, i - start));
      Tok k = Tok::Ident;
      if (word == "X") k = Tok::Next;
      else if (word == "F") k = Tok::Eventually;
      else if (word == "G") k = Tok::Always;
      else if (word == "U") k = Tok::Until;
      else if (word == "R") k = Tok::Release;
      else if (word == "true") k = Tok::True;
      else if (word == "false") k = Tok::False;
      out.push_back({k, std::move(word), start});
      continue;
    }
    switch (ch) {
      case '!': out.push_back({Tok::Not, "!", start}); ++i; continue;
      case '&': out.push_back({Tok::And, "&", start}); ++i; continue;
      case '|': out.push_back({Tok::Or, "|", start}); ++i; continue;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Implies, "->", start});
          i += 2;
          continue;
        }
        break;
      default:
        break;
    }
    throw ParseError("unknown token '" + std::string(1, ch) + "'", start);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return Formula::implies(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = binary_temporal();
    while (accept(Tok::And)) f = Formula::conj(f, binary_temporal());
    return f;
  }

  Formula binary_temporal() {
    Formula lhs = unary();
    if (accept(Tok::Until)) return Formula::until(lhs, binary_temporal());
    if (accept(Tok::Release)) return Formula::release(lhs, binary_temporal());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    if (accept(Tok::Next)) return Formula::next(unary());
    if (accept(Tok::Eventually)) return Formula::eventually(unary());
    if (accept(Tok::Always)) return Formula::always(unary());
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: ++i_; return Formula::atom(t.text);
      case Tok::True: ++i_; return Formula::truth();
      case Tok::False: ++i_; return Formula::falsity();
      case Tok::LParen: {
        ++i_;
        Formula f = implication();
        if (!accept(Tok::RParen)) throw ParseError("expected ')'", peek().pos);
        return f;
      }
      case Tok::End: throw ParseError("missing operand", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always: return 5;
    default: return 6;
  }
}

void print(const Formula& f, std::string& out);

void print_child(const Formula& f, int min_prec, std::string& out) {
  bool parens = precedence(f.op()) < min_prec;
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

void print(const Formula& f, std::string& out) {
  int p = precedence(f.op());
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += to_string(f.prop()); return;
    case Op::Not: out += '!'; print_child(f.lhs(), p, out); return;
    case Op::Next: out += "X "; print_child(f.lhs(), p, out); return;
    case Op::Eventually: out += "F "; print_child(f.lhs(), p, out); return;
    case Op::Always: out += "G "; print_child(f.lhs(), p, out); return;
    case Op::And:
    case Op::Or:
      print_child(f.lhs(), p, out);
      out += f.op() == Op::And ? " & " : " | ";
      print_child(f.rhs(), p + 1, out);
      return;
    case Op::Implies:
    case Op::Until:
    case Op::Release:
      print_child(f.lhs(), p + 1, out);
      out += f.op() == Op::Implies ? " -> " : f.op() == Op::Until ? " U " : " R ";
      print_child(f.rhs(), p, out);
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string to_string(const Prop& p) {
  if (p.sign == Sign::Plain) return p.atom;
  std::string s;
  if (!p.cls.empty() && p.cls != p.atom) s = "[" + p.cls + "]";
  return s + p.atom + (p.sign == Sign::KnownTrue ? "=1" : "=0");
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

// ---------------------------------------------------------- normal forms

namespace {

Formula push_negations(const Formula& f, bool neg, bool keep_implies) {
  auto rec = [&](const Formula& g, bool n) { return push_negations(g, n, keep_implies); };
  switch (f.op()) {
    case Op::True: return neg ? Formula::falsity() : f;
    case Op::False: return neg ? Formula::truth() : f;
    case Op::Atom: return neg ? Formula::negation(f) : f;
    case Op::Not: return rec(f.lhs(), !neg);
    case Op::And:
      return neg ? Formula::disj(rec(f.lhs(), true), rec(f.rhs(), true))
                 : Formula::conj(rec(f.lhs(), false), rec(f.rhs(), false));
    case Op::Or:
      return neg ? Formula::conj(rec(f.lhs(), true), rec(f.rhs(), true))
                 : Formula::disj(rec(f.lhs(), false), rec(f.rhs(), false));
    case Op::Implies:
      if (neg) return Formula::conj(rec(f.lhs(), false), rec(f.rhs(), true));
      if (keep_implies) return Formula::implies(rec(f.lhs(), false), rec(f.rhs(), false));
      return Formula::disj(rec(f.lhs(), true), rec(f.rhs(), false));
    case Op::Next: return Formula::next(rec(f.lhs(), neg));
    case Op::Until:
      return neg ? Formula::release(rec(f.lhs(), true), rec(f.rhs(), true))
                 : Formula::until(rec(f.lhs(), false), rec(f.rhs(), false));
    case Op::Release:
      return neg ? Formula::until(rec(f.lhs(), true), rec(f.rhs(), true))
                 : Formula::release(rec(f.lhs(), false), rec(f.rhs(), false));
    case Op::Eventually:
      return neg ? Formula::release(Formula::falsity(), rec(f.lhs(), true))
                 : Formula::until(Formula::truth(), rec(f.lhs(), false));
    case Op::Always:
      return neg ? Formula::until(Formula::truth(), rec(f.lhs(), true))
                 : Formula::release(Formula::falsity(), rec(f.lhs(), false));
  }
  return f;
}

void collect(const Formula& f, std::set<Prop>& out) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return;
    case Op::Atom:
      out.insert(f.prop());
      return;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      collect(f.lhs(), out);
      return;
    default:
      collect(f.lhs(), out);
      collect(f.rhs(), out);
  }
}

}  // namespace

Formula to_nnf(const Formula& f) { return push_negations(f, false, false); }
Formula to_metric_form(const Formula& f) { return push_negations(f, false, true); }

bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return true;
    case Op::Not:
      return f.lhs().op() == Op::Atom;
    case Op::Implies:
    case Op::Eventually:
    case Op::Always:
      return false;
    case Op::Next:
      return is_nnf(f.lhs());
    default:
      return is_nnf(f.lhs()) && is_nnf(f.rhs());
  }
}

std::set<Prop> props_of(const Formula& f) {
  std::set<Prop> out;
  collect(f, out);
  return out;
}

std::set<Atom> atoms_of(const Formula& f) {
  std::set<Atom> out;
  for (const auto& p : props_of(f)) out.insert(p.atom);
  return out;
}

Formula explicit_formula(const Formula& nnf, const Partition& classes) {
  auto signed_leaf = [&](const Prop& p, Sign sign) {
    if (p.sign != Sign::Plain) throw Error("formula is already explicit");
    return Formula::leaf(Prop{p.atom, sign, classes.class_of(p.atom).id()});
  };
  switch (nnf.op()) {
    case Op::True:
    case Op::False:
      return nnf;
    case Op::Atom:
      return signed_leaf(nnf.prop(), Sign::KnownTrue);
    case Op::Not:
      if (nnf.lhs().op() != Op::Atom) throw Error("explicit: formula is not in NNF");
      return signed_leaf(nnf.lhs().prop(), Sign::KnownFalse);
    case Op::And:
      return Formula::conj(explicit_formula(nnf.lhs(), classes),
                           explicit_formula(nnf.rhs(), classes));
    case Op::Or:
      return Formula::disj(explicit_formula(nnf.lhs(), classes),
                           explicit_formula(nnf.rhs(), classes));
    case Op::Next:
      return Formula::next(explicit_formula(nnf.lhs(), classes));
    case Op::Until:
      return Formula::until(explicit_formula(nnf.lhs(), classes),
                            explicit_formula(nnf.rhs(), classes));
    case Op::Release:
      return Formula::release(explicit_formula(nnf.lhs(), classes),
                              explicit_formula(nnf.rhs(), classes));
    default:
      throw Error("explicit: formula is not in NNF");
  }
}

Formula undefined_formula(const Formula& nnf, const Partition& classes) {
  Formula pos = explicit_formula(nnf, classes);
  Formula neg = explicit_formula(to_nnf(Formula::negation(nnf)), classes);
  return to_nnf(Formula::conj(Formula::negation(pos), Formula::negation(neg)));
}

// ------------------------------------------------------------ progression

namespace {

Formula mk_not(const Formula& a) {
  if (a.op() == Op::True) return Formula::falsity();
  if (a.op() == Op::False) return Formula::truth();
  return to_metric_form(Formula::negation(a));
}

Formula mk_and(const Formula& a, const Formula& b) {
  if (a.op() == Op::False || b.op() == Op::False) return Formula::falsity();
  if (a.op() == Op::True) return b;
  if (b.op() == Op::True) return a;
  if (a == b) return a;
  return Formula::conj(a, b);
}

Formula mk_or(const Formula& a, const Formula& b) {
  if (a.op() == Op::True || b.op() == Op::True) return Formula::truth();
  if (a.op() == Op::False) return b;
  if (b.op() == Op::False) return a;
  if (a == b) return a;
  return Formula::disj(a, b);
}

Formula mk_implies(const Formula& a, const Formula& b) {
  if (a.op() == Op::True) return b;
  if (a.op() == Op::False || b.op() == Op::True) return Formula::truth();
  if (b.op() == Op::False) return mk_not(a);
  return Formula::implies(a, b);
}

Formula progress_leaf(const Formula& f, const Prop& p, bool negated, const KnownValues& known) {
  if (p.sign != Sign::Plain) throw Error("progress: explicit formulas are not supported");
  auto it = known.find(p.atom);
  if (it == known.end()) return f;
  return it->second != negated ? Formula::truth() : Formula::falsity();
}

}  // namespace

Formula progress(const Formula& f, const KnownValues& known) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
      return progress_leaf(f, f.prop(), false, known);
    case Op::Not:
      if (f.lhs().op() == Op::Atom) return progress_leaf(f, f.lhs().prop(), true, known);
      return mk_not(progress(f.lhs(), known));
    case Op::And:
      return mk_and(progress(f.lhs(), known), progress(f.rhs(), known));
    case Op::Or:
      return mk_or(progress(f.lhs(), known), progress(f.rhs(), known));
    case Op::Implies:
      return mk_implies(progress(f.lhs(), known), progress(f.rhs(), known));
    case Op::Next:
      return f.lhs();
    case Op::Until:
      return mk_or(progress(f.rhs(), known), mk_and(progress(f.lhs(), known), f));
    case Op::Release:
      return mk_and(progress(f.rhs(), known), mk_or(progress(f.lhs(), known), f));
    case Op::Eventually:
      return mk_or(progress(f.lhs(), known), f);
    case Op::Always:
      return mk_and(progress(f.lhs(), known), f);
  }
  return f;
}

Formula progress(const Formula& f, const SignedEvent& event, const Partition& classes) {
  return progress(f, known_values(event, classes));
}

}  // namespace ratmon

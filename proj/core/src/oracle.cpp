#include "ratmon/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "ratmon/error.hpp"

namespace ratmon::oracle {

namespace {

enum class Kind { True, False, Lit, And, Or, Next, Until, Release };

struct Node {
  Kind kind;
  int prop = -1;
  bool present = true;
  int a = -1;
  int b = -1;
};

// Hash-consed positive formulas over presence tests of registered keys.
class Store {
 public:
  Store() {
    nodes_.push_back({Kind::True});
    nodes_.push_back({Kind::False});
  }

  static constexpr int kTrue = 0;
  static constexpr int kFalse = 1;

  int key(const PropKey& k) {
    auto [it, inserted] = keys_.emplace(k, static_cast<int>(keys_.size()));
    if (inserted && keys_.size() > 64) throw Error("oracle: more than 64 propositions");
    return it->second;
  }
  const std::map<PropKey, int>& keys() const { return keys_; }

  int lit(int prop, bool present) { return intern({Kind::Lit, prop, present}); }
  int next(int a) { return intern({Kind::Next, -1, true, a}); }
  int until(int a, int b) { return intern({Kind::Until, -1, true, a, b}); }
  int release(int a, int b) { return intern({Kind::Release, -1, true, a, b}); }

  int conj(int a, int b) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue || a == b) return a;
    if (a > b) std::swap(a, b);
    return intern({Kind::And, -1, true, a, b});
  }

  int disj(int a, int b) {
    if (a == kTrue || b == kTrue) return kTrue;
    if (a == kFalse) return b;
    if (b == kFalse || a == b) return a;
    if (a > b) std::swap(a, b);
    return intern({Kind::Or, -1, true, a, b});
  }

  const Node& operator[](int i) const { return nodes_[i]; }

  // Converts a formula; `explicit_leaves` reads plain atoms as ε does.
  int convert(const Formula& f, bool positive, bool explicit_leaves) {
    auto rec = [&](const Formula& g, bool p) { return convert(g, p, explicit_leaves); };
    switch (f.op()) {
      case Op::True: return positive ? kTrue : kFalse;
      case Op::False: return positive ? kFalse : kTrue;
      case Op::Atom: {
        const Prop& p = f.prop();
        if (explicit_leaves) {
          if (p.sign != Sign::Plain) throw Error("oracle: formula is already explicit");
          return lit(key({p.atom, positive ? Sign::KnownTrue : Sign::KnownFalse}), true);
        }
        return lit(key({p.atom, p.sign}), positive);
      }
      case Op::Not: return rec(f.lhs(), !positive);
      case Op::And:
        return positive ? conj(rec(f.lhs(), true), rec(f.rhs(), true))
                        : disj(rec(f.lhs(), false), rec(f.rhs(), false));
      case Op::Or:
        return positive ? disj(rec(f.lhs(), true), rec(f.rhs(), true))
                        : conj(rec(f.lhs(), false), rec(f.rhs(), false));
      case Op::Implies:
        return positive ? disj(rec(f.lhs(), false), rec(f.rhs(), true))
                        : conj(rec(f.lhs(), true), rec(f.rhs(), false));
      case Op::Next: return next(rec(f.lhs(), positive));
      case Op::Until:
        return positive ? until(rec(f.lhs(), true), rec(f.rhs(), true))
                        : release(rec(f.lhs(), false), rec(f.rhs(), false));
      case Op::Release:
        return positive ? release(rec(f.lhs(), true), rec(f.rhs(), true))
                        : until(rec(f.lhs(), false), rec(f.rhs(), false));
      case Op::Eventually:
        return positive ? until(kTrue, rec(f.lhs(), true)) : release(kFalse, rec(f.lhs(), false));
      case Op::Always:
        return positive ? release(kFalse, rec(f.lhs(), true)) : until(kTrue, rec(f.lhs(), false));
    }
    return kFalse;
  }

  int progress(int id, std::uint64_t event) {
    auto memo_key = std::make_pair(id, event);
    auto it = prog_memo_.find(memo_key);
    if (it != prog_memo_.end()) return it->second;
    Node n = nodes_[id];
    int r = kFalse;
    switch (n.kind) {
      case Kind::True: r = kTrue; break;
      case Kind::False: r = kFalse; break;
      case Kind::Lit: r = ((event >> n.prop & 1) != 0) == n.present ? kTrue : kFalse; break;
      case Kind::And: r = conj(progress(n.a, event), progress(n.b, event)); break;
      case Kind::Or: r = disj(progress(n.a, event), progress(n.b, event)); break;
      case Kind::Next: r = n.a; break;
      case Kind::Until: r = disj(progress(n.b, event), conj(progress(n.a, event), id)); break;
      case Kind::Release: r = conj(progress(n.b, event), disj(progress(n.a, event), id)); break;
    }
    prog_memo_.emplace(memo_key, r);
    return r;
  }

  // Canonical DNF over non-boolean nodes, clauses minimal under inclusion.
  // Keeps the set of residuals reachable by progression finite.
  int normalize(int id) {
    auto it = norm_memo_.find(id);
    if (it != norm_memo_.end()) return it->second;
    std::vector<std::vector<int>> clauses = dnf(id);
    std::sort(clauses.begin(), clauses.end(),
              [](const auto& x, const auto& y) { return x.size() != y.size() ? x.size() < y.size() : x < y; });
    std::vector<std::vector<int>> kept;
    for (const auto& c : clauses) {
      bool absorbed = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
        return std::includes(c.begin(), c.end(), k.begin(), k.end());
      });
      if (!absorbed) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    int r = kFalse;
    for (const auto& c : kept) {
      int term = kTrue;
      for (int x : c) term = term == kTrue ? x : intern({Kind::And, -1, true, term, x});
      r = r == kFalse ? term : intern({Kind::Or, -1, true, r, term});
    }
    norm_memo_.emplace(id, r);
    return r;
  }

  // Subformulas of `root`, children first.
  std::vector<int> postorder(int root) const {
    std::vector<int> out;
    std::unordered_set<int> seen;
    std::vector<std::pair<int, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [id, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        out.push_back(id);
        continue;
      }
      if (!seen.insert(id).second) continue;
      stack.emplace_back(id, true);
      const Node& n = nodes_[id];
      if (n.b >= 0) stack.emplace_back(n.b, false);
      if (n.a >= 0) stack.emplace_back(n.a, false);
    }
    return out;
  }

  // Positions 0..n-1 of a lasso with stem length `stem`; bit i of the
  // result says whether `root` holds at position i.
  bool eval(int root, const std::vector<int>& order, const std::vector<std::uint64_t>& events,
            std::size_t stem) {
    std::size_t n = events.size();
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    auto pre = [&](std::uint64_t x) {
      // Positions whose successor is in x.
      std::uint64_t r = x >> 1;
      if (x >> stem & 1) r |= std::uint64_t{1} << (n - 1);
      else r &= ~(std::uint64_t{1} << (n - 1));
      return r & all;
    };
    for (int id : order) {
      const Node& nd = nodes_[id];
      std::uint64_t v = 0;
      switch (nd.kind) {
        case Kind::True: v = all; break;
        case Kind::False: v = 0; break;
        case Kind::Lit:
          for (std::size_t i = 0; i < n; ++i) {
            if (((events[i] >> nd.prop & 1) != 0) == nd.present) v |= std::uint64_t{1} << i;
          }
          break;
        case Kind::And: v = value_[nd.a] & value_[nd.b]; break;
        case Kind::Or: v = value_[nd.a] | value_[nd.b]; break;
        case Kind::Next: v = pre(value_[nd.a]); break;
        case Kind::Until: {
          std::uint64_t x = 0;
          while (true) {
            std::uint64_t y = value_[nd.b] | (value_[nd.a] & pre(x));
            if (y == x) break;
            x = y;
          }
          v = x;
          break;
        }
        case Kind::Release: {
          std::uint64_t x = all;
          while (true) {
            std::uint64_t y = value_[nd.b] & (value_[nd.a] | pre(x));
            if (y == x) break;
            x = y;
          }
          v = x;
          break;
        }
      }
      value_[id] = v;
    }
    return value_[root] & 1;
  }

  void reserve_values() { value_.resize(nodes_.size()); }

 private:
  std::vector<std::vector<int>> dnf(int id) const {
    const Node& n = nodes_[id];
    switch (n.kind) {
      case Kind::True: return {{}};
      case Kind::False: return {};
      case Kind::Or: {
        auto x = dnf(n.a);
        auto y = dnf(n.b);
        x.insert(x.end(), y.begin(), y.end());
        return x;
      }
      case Kind::And: {
        std::vector<std::vector<int>> out;
        for (const auto& x : dnf(n.a)) {
          for (const auto& y : dnf(n.b)) {
            std::vector<int> c;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(c));
            out.push_back(std::move(c));
          }
        }
        return out;
      }
      default: return {{id}};
    }
  }

  int intern(Node n) {
    auto k = std::make_tuple(static_cast<int>(n.kind), n.prop, n.present, n.a, n.b);
    auto [it, inserted] = ids_.emplace(k, static_cast<int>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  }

  std::vector<Node> nodes_;
  std::map<std::tuple<int, int, bool, int, int>, int> ids_;
  std::map<PropKey, int> keys_;
  std::map<std::pair<int, std::uint64_t>, int> prog_memo_;
  std::unordered_map<int, int> norm_memo_;
  std::vector<std::uint64_t> value_;
};

std::uint64_t event_mask(Store& store, const LassoEvent& e) {
  std::uint64_t m = 0;
  for (const auto& k : e) {
    auto it = store.keys().find(k);
    if (it != store.keys().end()) m |= std::uint64_t{1} << it->second;
  }
  return m;
}

bool eval_in_store(Store& store, int root, const std::vector<std::uint64_t>& events,
                   std::size_t stem) {
  if (events.size() > 64) throw Error("oracle: lasso longer than 64 positions");
  store.reserve_values();
  return store.eval(root, store.postorder(root), events, stem);
}

// Does some infinite word over `letters` satisfy residual `r0`?
class ExtensionSearch {
 public:
  ExtensionSearch(Store& store, std::vector<std::uint64_t> letters, std::size_t bound)
      : store_(store), letters_(std::move(letters)), bound_(bound) {}

  bool run(int r0) {
    std::unordered_set<int> seen{r0};
    std::deque<int> queue{r0};
    while (!queue.empty()) {
      int r = queue.front();
      queue.pop_front();
      if (r == Store::kTrue) return true;
      if (r == Store::kFalse) continue;
      if (loop_satisfies(r)) return true;
      for (std::uint64_t e : letters_) {
        int s = store_.normalize(store_.progress(r, e));
        if (seen.insert(s).second) queue.push_back(s);
      }
    }
    return false;
  }

 private:
  bool loop_satisfies(int r) {
    store_.reserve_values();
    std::vector<int> order = store_.postorder(r);
    for (std::size_t len = 1; len <= bound_; ++len) {
      std::vector<std::size_t> digits(len, 0);
      std::vector<std::uint64_t> word(len, letters_[0]);
      while (true) {
        if (store_.eval(r, order, word, 0)) return true;
        std::size_t i = 0;
        while (i < len && ++digits[i] == letters_.size()) {
          digits[i] = 0;
          word[i] = letters_[0];
          ++i;
        }
        if (i == len) break;
        word[i] = letters_[digits[i]];
      }
    }
    return false;
  }

  Store& store_;
  std::vector<std::uint64_t> letters_;
  std::size_t bound_;
};

void check_limits(std::size_t atoms, std::size_t prefix, std::size_t bound, const Limits& limits) {
  if (atoms > limits.max_atoms) throw Error("oracle: too many atoms (" + std::to_string(atoms) + ")");
  if (prefix > limits.max_prefix) throw Error("oracle: prefix too long");
  if (bound == 0) throw Error("oracle: loop bound must be positive");
  double letters = static_cast<double>(std::uint64_t{1} << atoms);
  double words = 0;
  double p = 1;
  for (std::size_t l = 1; l <= bound; ++l) {
    p *= letters;
    words += p;
  }
  if (words > static_cast<double>(limits.max_loop_words)) {
    throw Error("oracle: too many loop words for bound " + std::to_string(bound));
  }
}

}  // namespace

LassoEvent lasso_event(const PlainEvent& e) {
  LassoEvent out;
  for (const auto& a : e) out.emplace(a, Sign::Plain);
  return out;
}

LassoEvent lasso_event(const KnownValues& known) {
  LassoEvent out;
  for (const auto& [a, v] : known) out.emplace(a, v ? Sign::KnownTrue : Sign::KnownFalse);
  return out;
}

bool eval_lasso(const Formula& f, const LassoWord& w) {
  if (w.loop.empty()) throw Error("lasso loop must be nonempty");
  Store store;
  int root = store.convert(f, true, false);
  std::vector<std::uint64_t> events;
  for (const auto& e : w.stem) events.push_back(event_mask(store, e));
  for (const auto& e : w.loop) events.push_back(event_mask(store, e));
  return eval_in_store(store, root, events, w.stem.size());
}

namespace {

class Unrolled {
 public:
  explicit Unrolled(const LassoWord& w) : w_(w), width_(w.stem.size() + w.loop.size()) {}

  bool eval(const Formula& f, std::size_t i) const {
    i = canon(i);
    switch (f.op()) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Atom: return at(i).contains(PropKey{f.prop().atom, f.prop().sign});
      case Op::Not: return !eval(f.lhs(), i);
      case Op::And: return eval(f.lhs(), i) && eval(f.rhs(), i);
      case Op::Or: return eval(f.lhs(), i) || eval(f.rhs(), i);
      case Op::Implies: return !eval(f.lhs(), i) || eval(f.rhs(), i);
      case Op::Next: return eval(f.lhs(), i + 1);
      case Op::Eventually:
        for (std::size_t j = i; j < i + width_; ++j) {
          if (eval(f.lhs(), j)) return true;
        }
        return false;
      case Op::Always:
        for (std::size_t j = i; j < i + width_; ++j) {
          if (!eval(f.lhs(), j)) return false;
        }
        return true;
      case Op::Until:
        for (std::size_t j = i; j < i + width_; ++j) {
          if (eval(f.rhs(), j)) return true;
          if (!eval(f.lhs(), j)) return false;
        }
        return false;
      case Op::Release:
        for (std::size_t j = i; j < i + width_; ++j) {
          if (!eval(f.rhs(), j)) return false;
          if (eval(f.lhs(), j)) return true;
        }
        return true;
    }
    return false;
  }

 private:
  std::size_t canon(std::size_t i) const {
    std::size_t u = w_.stem.size();
    return i < u ? i : u + (i - u) % w_.loop.size();
  }
  const LassoEvent& at(std::size_t i) const {
    return i < w_.stem.size() ? w_.stem[i] : w_.loop[i - w_.stem.size()];
  }

  const LassoWord& w_;
  std::size_t width_;
};

struct Prepared {
  Store store;
  int pos = 0;
  int neg = 0;
  std::vector<std::uint64_t> prefix;
  std::vector<std::uint64_t> letters;
};

Prepared prepare(const Formula& f, bool explicit_leaves, std::size_t bound, const Limits& limits,
                 std::size_t prefix_len) {
  Prepared p;
  std::set<Atom> atoms;
  for (const auto& pr : props_of(f)) atoms.insert(pr.atom);
  check_limits(atoms.size(), prefix_len, bound, limits);
  p.pos = p.store.convert(f, true, explicit_leaves);
  p.neg = p.store.convert(f, false, explicit_leaves);
  std::vector<Atom> list(atoms.begin(), atoms.end());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << list.size()); ++bits) {
    LassoEvent e;
    for (std::size_t i = 0; i < list.size(); ++i) {
      bool on = bits >> i & 1;
      if (explicit_leaves) e.emplace(list[i], on ? Sign::KnownTrue : Sign::KnownFalse);
      else if (on) e.emplace(list[i], Sign::Plain);
    }
    p.letters.push_back(event_mask(p.store, e));
  }
  return p;
}

int progress_all(Store& store, int id, const std::vector<std::uint64_t>& prefix) {
  for (std::uint64_t e : prefix) id = store.normalize(store.progress(id, e));
  return id;
}

}  // namespace

bool eval_unrolled(const Formula& f, const LassoWord& w) {
  if (w.loop.empty()) throw Error("lasso loop must be nonempty");
  return Unrolled(w).eval(f, 0);
}

Bits imperfect_bits(const Formula& f, const Partition& classes, const SignedTrace& prefix,
                    std::size_t bound, const Limits& limits) {
  Prepared p = prepare(f, true, bound, limits, prefix.size());
  for (const auto& e : prefix) p.prefix.push_back(event_mask(p.store, lasso_event(known_values(e, classes))));
  Bits bits;
  ExtensionSearch search(p.store, p.letters, bound);
  bits.sat = search.run(progress_all(p.store, p.pos, p.prefix));
  bits.viol = search.run(progress_all(p.store, p.neg, p.prefix));
  std::vector<std::uint64_t> word = p.prefix;
  word.push_back(0);
  bool pos_holds = eval_in_store(p.store, p.pos, word, p.prefix.size());
  bool neg_holds = eval_in_store(p.store, p.neg, word, p.prefix.size());
  bits.undef = !pos_holds && !neg_holds;
  return bits;
}

Verdict oracle_verdict(const Formula& f, const Partition& classes, const SignedTrace& prefix,
                       std::size_t bound, const Limits& limits) {
  Bits b = imperfect_bits(f, classes, prefix, bound, limits);
  return classify(b.sat, b.viol, b.undef);
}

Verdict standard_verdict(const Formula& f, const PlainTrace& prefix, std::size_t bound,
                         const Limits& limits) {
  Prepared p = prepare(f, false, bound, limits, prefix.size());
  for (const auto& e : prefix) p.prefix.push_back(event_mask(p.store, lasso_event(e)));
  ExtensionSearch search(p.store, p.letters, bound);
  bool sat = search.run(progress_all(p.store, p.pos, p.prefix));
  bool viol = search.run(progress_all(p.store, p.neg, p.prefix));
  return classify(sat, viol);
}

bool has_satisfying_extension(const Formula& f, const Partition& classes,
                              const SignedTrace& prefix, std::size_t bound, const Limits& limits) {
  Prepared p = prepare(f, true, bound, limits, prefix.size());
  for (const auto& e : prefix) p.prefix.push_back(event_mask(p.store, lasso_event(known_values(e, classes))));
  ExtensionSearch search(p.store, p.letters, bound);
  return search.run(progress_all(p.store, p.pos, p.prefix));
}

}  // namespace ratmon::oracle

#include "ratmon/automata.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "ratmon/error.hpp"

namespace ratmon {

namespace {
constexpr std::size_t kMaxValuations = std::size_t{1} << 22;
}

// ---------------------------------------------------------------- alphabet

Alphabet::Alphabet(std::vector<Prop> props) : props_(std::move(props)) {
  for (auto& p : props_) p.cls.clear();
  std::sort(props_.begin(), props_.end());
  props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
  if (props_.size() > 64) throw Error("more than 64 propositions");
  build();
}

void Alphabet::build() {
  var_of_.assign(props_.size(), 0);
  vars_.clear();
  for (std::size_t i = 0; i < props_.size(); ++i) {
    if (i == 0 || props_[i].atom != props_[i - 1].atom) vars_.emplace_back();
    vars_.back().push_back(i);
    var_of_[i] = vars_.size() - 1;
  }
  radix_weight_.assign(vars_.size(), 0);
  std::size_t total = 1;
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    radix_weight_[v] = total;
    total *= vars_[v].size() + 1;
    if (total > kMaxValuations) throw Error("alphabet has too many valuations");
  }
  masks_.assign(total, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      std::size_t digit = (idx / radix_weight_[v]) % (vars_[v].size() + 1);
      if (digit > 0) m |= std::uint64_t{1} << vars_[v][digit - 1];
    }
    masks_[idx] = m;
  }
}

std::optional<std::size_t> Alphabet::find(const Prop& p) const {
  auto it = std::lower_bound(props_.begin(), props_.end(), p);
  if (it == props_.end() || !(*it == p)) return std::nullopt;
  return static_cast<std::size_t>(it - props_.begin());
}

bool Alphabet::exclusive(std::size_t a, std::size_t b) const {
  return a != b && var_of_[a] == var_of_[b];
}

std::size_t Alphabet::valuation_of(std::uint64_t mask) const {
  std::size_t idx = 0;
  for (std::size_t v = 0; v < vars_.size(); ++v) {
    std::size_t digit = 0;
    for (std::size_t k = 0; k < vars_[v].size(); ++k) {
      if (mask >> vars_[v][k] & 1) {
        if (digit != 0) throw Error("inconsistent event for atom '" + props_[vars_[v][k]].atom + "'");
        digit = k + 1;
      }
    }
    idx += digit * radix_weight_[v];
  }
  return idx;
}

std::uint64_t Alphabet::mask_of(const PlainEvent& event) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < props_.size(); ++i) {
    if (props_[i].sign == Sign::Plain && event.contains(props_[i].atom)) m |= std::uint64_t{1} << i;
  }
  return m;
}

std::uint64_t Alphabet::mask_of(const KnownValues& known) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < props_.size(); ++i) {
    auto it = known.find(props_[i].atom);
    if (it == known.end()) continue;
    bool on = props_[i].sign == Sign::KnownFalse ? !it->second : it->second;
    if (on) m |= std::uint64_t{1} << i;
  }
  return m;
}

Alphabet alphabet_of(const std::vector<Formula>& formulas) {
  std::vector<Prop> props;
  for (const auto& f : formulas) {
    for (const auto& p : props_of(f)) props.push_back(p);
  }
  return Alphabet(std::move(props));
}

// ----------------------------------------------------------------- tableau

namespace {

struct Sub {
  Op op;
  int prop = -1;
  bool neg = false;
  int a = -1;
  int b = -1;
};

class Closure {
 public:
  explicit Closure(const Alphabet& sigma) : sigma_(sigma) {}

  int intern(const Formula& f) {
    Sub s{f.op()};
    switch (f.op()) {
      case Op::True:
      case Op::False:
        break;
      case Op::Atom:
        s.prop = prop_index(f.prop());
        break;
      case Op::Not:
        if (f.lhs().op() != Op::Atom) throw Error("tableau input is not in NNF");
        s.op = Op::Atom;
        s.prop = prop_index(f.lhs().prop());
        s.neg = true;
        break;
      case Op::Next:
        s.a = intern(f.lhs());
        break;
      case Op::And:
      case Op::Or:
      case Op::Until:
      case Op::Release:
        s.a = intern(f.lhs());
        s.b = intern(f.rhs());
        break;
      default:
        throw Error("tableau input is not in NNF");
    }
    auto key = std::make_tuple(static_cast<int>(s.op), s.prop, s.neg, s.a, s.b);
    auto [it, inserted] = ids_.emplace(key, static_cast<int>(subs_.size()));
    if (inserted) subs_.push_back(s);
    return it->second;
  }

  const Sub& operator[](int i) const { return subs_[i]; }
  std::size_t size() const { return subs_.size(); }

 private:
  int prop_index(const Prop& p) {
    auto idx = sigma_.find(p);
    if (!idx) throw Error("proposition '" + to_string(p) + "' missing from alphabet");
    return static_cast<int>(*idx);
  }

  const Alphabet& sigma_;
  std::vector<Sub> subs_;
  std::map<std::tuple<int, int, bool, int, int>, int> ids_;
};

struct TableauNode {
  std::set<int> incoming;
  std::set<int> todo;
  std::set<int> old;
  std::set<int> next;
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
  std::vector<bool> acc;
};

constexpr int kInit = -1;

class Tableau {
 public:
  Tableau(const Closure& cl, const Alphabet& sigma, std::vector<int> untils)
      : cl_(cl), sigma_(sigma), untils_(std::move(untils)) {
    exclusive_.assign(sigma.size(), 0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        if (sigma.exclusive(i, j)) exclusive_[i] |= std::uint64_t{1} << j;
      }
    }
  }

  std::vector<TableauNode> expand_all(int root) {
    TableauNode start;
    start.incoming.insert(kInit);
    start.todo.insert(root);
    stack_.push_back(std::move(start));
    while (!stack_.empty()) {
      TableauNode n = std::move(stack_.back());
      stack_.pop_back();
      expand(std::move(n));
    }
    return std::move(done_);
  }

 private:
  void add(TableauNode& n, int id) {
    if (!n.old.contains(id)) n.todo.insert(id);
  }

  void expand(TableauNode n) {
    if (n.todo.empty()) {
      // Successors depend on Next only; the automaton sees the literals and
      // the acceptance sets. Nodes agreeing on those are merged.
      n.acc.resize(untils_.size());
      for (std::size_t k = 0; k < untils_.size(); ++k) {
        int u = untils_[k];
        n.acc[k] = !n.old.contains(u) || implied(n, cl_[u].b);
      }
      auto key = std::make_tuple(n.pos, n.neg, n.next, n.acc);
      auto it = seen_.find(key);
      if (it != seen_.end()) {
        done_[it->second].incoming.insert(n.incoming.begin(), n.incoming.end());
        return;
      }
      int id = static_cast<int>(done_.size());
      seen_.emplace(std::move(key), id);
      TableauNode succ;
      succ.incoming.insert(id);
      succ.todo = n.next;
      done_.push_back(std::move(n));
      stack_.push_back(std::move(succ));
      return;
    }
    int eta = *n.todo.begin();
    n.todo.erase(n.todo.begin());
    if (n.old.contains(eta)) {
      stack_.push_back(std::move(n));
      return;
    }
    const Sub& s = cl_[eta];
    if (s.op != Op::Atom && implied(n, eta)) {
      n.old.insert(eta);
      stack_.push_back(std::move(n));
      return;
    }
    switch (s.op) {
      case Op::False:
        return;
      case Op::True:
        n.old.insert(eta);
        stack_.push_back(std::move(n));
        return;
      case Op::Atom: {
        std::uint64_t bit = std::uint64_t{1} << s.prop;
        if (s.neg) {
          if (n.pos & bit) return;
          n.neg |= bit;
        } else {
          if ((n.neg & bit) || (n.pos & exclusive_[s.prop])) return;
          n.pos |= bit;
        }
        n.old.insert(eta);
        stack_.push_back(std::move(n));
        return;
      }
      case Op::And:
        n.old.insert(eta);
        add(n, s.a);
        add(n, s.b);
        stack_.push_back(std::move(n));
        return;
      case Op::Next:
        n.old.insert(eta);
        n.next.insert(s.a);
        stack_.push_back(std::move(n));
        return;
      case Op::Or:
      case Op::Until:
      case Op::Release: {
        TableauNode n1 = n;
        TableauNode n2 = std::move(n);
        n1.old.insert(eta);
        n2.old.insert(eta);
        if (s.op == Op::Or) {
          add(n1, s.a);
          add(n2, s.b);
        } else if (s.op == Op::Until) {
          add(n1, s.a);
          n1.next.insert(eta);
          add(n2, s.b);
        } else {
          add(n1, s.b);
          n1.next.insert(eta);
          add(n2, s.a);
          add(n2, s.b);
        }
        stack_.push_back(std::move(n2));
        stack_.push_back(std::move(n1));
        return;
      }
      default:
        throw Error("unexpected operator in tableau");
    }
  }

  // Syntactic implication by the node's Old and Next sets.
  bool implied(const TableauNode& n, int eta) const {
    if (n.old.contains(eta)) return true;
    const Sub& s = cl_[eta];
    switch (s.op) {
      case Op::True:
        return true;
      case Op::And:
        return implied(n, s.a) && implied(n, s.b);
      case Op::Or:
        return implied(n, s.a) || implied(n, s.b);
      case Op::Next:
        return n.next.contains(s.a);
      case Op::Until:
        return implied(n, s.b) || (implied(n, s.a) && n.next.contains(eta));
      case Op::Release:
        return (implied(n, s.a) && implied(n, s.b)) || (implied(n, s.b) && n.next.contains(eta));
      default:
        return false;
    }
  }

  const Closure& cl_;
  const Alphabet& sigma_;
  std::vector<int> untils_;
  std::vector<std::uint64_t> exclusive_;
  std::vector<TableauNode> stack_;
  std::vector<TableauNode> done_;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::set<int>, std::vector<bool>>, int> seen_;
};

}  // namespace

std::vector<std::vector<std::size_t>> GuardedAutomaton::successors_by_state() const {
  std::vector<std::vector<std::size_t>> out(state_count);
  for (std::size_t i = 0; i < transitions.size(); ++i) out[transitions[i].from].push_back(i);
  return out;
}

GuardedAutomaton ltl_to_nba(const Formula& f, const Alphabet& sigma) {
  Closure cl(sigma);
  int root = cl.intern(f);
  std::vector<int> untils;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (cl[static_cast<int>(i)].op == Op::Until) untils.push_back(static_cast<int>(i));
  }
  std::vector<TableauNode> nodes = Tableau(cl, sigma, untils).expand_all(root);
  auto in_acceptance_set = [&](int node, std::size_t k) { return bool(nodes[node].acc[k]); };

  // Edges of the generalized automaton; state 0 is the initial state, node
  // k is state k + 1.
  std::vector<std::vector<int>> into(nodes.size());
  std::vector<std::vector<int>> out_edges(nodes.size() + 1);
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    for (int from : nodes[q].incoming) out_edges[from + 1].push_back(static_cast<int>(q));
  }

  GuardedAutomaton nba;
  nba.kind = AutomatonKind::Nba;
  nba.alphabet = sigma;
  std::size_t k = untils.size();
  std::size_t copies = std::max<std::size_t>(k, 1);
  std::map<std::pair<int, std::size_t>, std::size_t> id;
  std::deque<std::pair<int, std::size_t>> queue;
  auto state = [&](int s, std::size_t c) {
    auto [it, inserted] = id.emplace(std::make_pair(s, c), id.size());
    if (inserted) {
      queue.emplace_back(s, c);
      bool acc = k == 0 || (s > 0 && c == 0 && in_acceptance_set(s - 1, 0));
      nba.accepting.push_back(acc);
    }
    return it->second;
  };
  nba.initial.push_back(state(0, 0));
  while (!queue.empty()) {
    auto [s, c] = queue.front();
    queue.pop_front();
    std::size_t from = id.at({s, c});
    std::size_t next_copy = c;
    if (k > 0 && s > 0 && in_acceptance_set(s - 1, c)) next_copy = (c + 1) % copies;
    for (int q : out_edges[s]) {
      Guard g{nodes[q].pos, nodes[q].neg};
      std::size_t to = state(q + 1, next_copy);
      nba.transitions.push_back({from, g, to});
    }
  }
  nba.state_count = id.size();
  return nba;
}

// ----------------------------------------------------------- emptiness

std::vector<bool> nonempty_states(const GuardedAutomaton& nba) {
  std::size_t n = nba.state_count;
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::vector<std::size_t>> pred(n);
  std::vector<bool> self_loop(n, false);
  for (const auto& t : nba.transitions) {
    succ[t.from].push_back(t.to);
    pred[t.to].push_back(t.from);
    if (t.from == t.to) self_loop[t.from] = true;
  }

  // Tarjan, iterative.
  std::vector<int> index(n, -1);
  std::vector<int> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<int> comp(n, -1);
  std::vector<std::size_t> comp_size;
  int counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, i] = work.back();
      if (i < succ[v].size()) {
        std::size_t w = succ[v][i++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int c = static_cast<int>(comp_size.size());
        comp_size.push_back(0);
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = c;
          ++comp_size[c];
        } while (w != v);
      }
      std::size_t done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }

  std::vector<bool> good_comp(comp_size.size(), false);
  for (std::size_t q = 0; q < n; ++q) {
    bool nontrivial = comp_size[comp[q]] > 1 || self_loop[q];
    if (nontrivial && nba.accepting[q]) good_comp[comp[q]] = true;
  }
  std::vector<bool> live(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t q = 0; q < n; ++q) {
    if (good_comp[comp[q]]) {
      live[q] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    std::size_t q = queue.front();
    queue.pop_front();
    for (std::size_t p : pred[q]) {
      if (!live[p]) {
        live[p] = true;
        queue.push_back(p);
      }
    }
  }
  return live;
}

GuardedAutomaton nba_to_nfa(const GuardedAutomaton& nba, const std::vector<bool>& live) {
  if (live.size() != nba.state_count) throw Error("state set does not match automaton");
  GuardedAutomaton nfa = nba;
  nfa.kind = AutomatonKind::Nfa;
  nfa.accepting = live;
  return nfa;
}

// -------------------------------------------------------- determinization

namespace {

// Restricts an NFA to states that can reach acceptance and merges states
// related by the coarsest forward bisimulation. Language preserving.
GuardedAutomaton reduce_nfa(const GuardedAutomaton& nfa) {
  std::size_t n = nfa.state_count;
  std::vector<std::vector<std::size_t>> pred(n);
  for (const auto& t : nfa.transitions) pred[t.to].push_back(t.from);
  std::vector<bool> useful(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t q = 0; q < n; ++q) {
    if (nfa.accepting[q]) {
      useful[q] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    std::size_t q = queue.front();
    queue.pop_front();
    for (std::size_t p : pred[q]) {
      if (!useful[p]) {
        useful[p] = true;
        queue.push_back(p);
      }
    }
  }
  auto out = nfa.successors_by_state();

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> block(n, kNone);
  std::size_t blocks = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (useful[q]) block[q] = nfa.accepting[q] ? 1 : 0;
  }
  using Sig = std::pair<std::size_t, std::vector<std::tuple<std::uint64_t, std::uint64_t, std::size_t>>>;
  for (;;) {
    std::map<Sig, std::size_t> ids;
    std::vector<std::size_t> next(n, kNone);
    for (std::size_t q = 0; q < n; ++q) {
      if (!useful[q]) continue;
      Sig sig{block[q], {}};
      for (std::size_t ti : out[q]) {
        const Transition& t = nfa.transitions[ti];
        if (useful[t.to]) sig.second.emplace_back(t.guard.pos, t.guard.neg, block[t.to]);
      }
      std::sort(sig.second.begin(), sig.second.end());
      sig.second.erase(std::unique(sig.second.begin(), sig.second.end()), sig.second.end());
      next[q] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    bool stable = ids.size() == blocks;
    blocks = ids.size();
    block = std::move(next);
    if (stable) break;
  }

  GuardedAutomaton r;
  r.kind = nfa.kind;
  r.alphabet = nfa.alphabet;
  r.state_count = blocks;
  r.accepting.assign(blocks, false);
  std::set<std::tuple<std::size_t, std::uint64_t, std::uint64_t, std::size_t>> edges;
  for (std::size_t q = 0; q < n; ++q) {
    if (!useful[q]) continue;
    r.accepting[block[q]] = nfa.accepting[q];
    for (std::size_t ti : out[q]) {
      const Transition& t = nfa.transitions[ti];
      if (useful[t.to]) edges.emplace(block[q], t.guard.pos, t.guard.neg, block[t.to]);
    }
  }
  for (const auto& [from, pos, neg, to] : edges) r.transitions.push_back({from, Guard{pos, neg}, to});
  std::set<std::size_t> init;
  for (std::size_t q : nfa.initial) {
    if (useful[q]) init.insert(block[q]);
  }
  r.initial.assign(init.begin(), init.end());
  return r;
}

}  // namespace

Dfa determinize(const GuardedAutomaton& input) {
  GuardedAutomaton nfa = reduce_nfa(input);
  std::size_t n = nfa.state_count;
  std::vector<bool> useful(n, true);
  // Subsets are bitsets over NFA states; succ[v][q] is the successor set of q
  // under valuation v, restricted to useful states.
  std::size_t words = (n + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  std::size_t vals = nfa.alphabet.valuation_count();
  std::vector<std::uint64_t> masks(vals);
  for (std::size_t v = 0; v < vals; ++v) masks[v] = nfa.alphabet.mask(v);
  if (n * vals * words > (std::size_t{1} << 27)) throw Error("automaton too large to determinize");
  std::vector<Bits> succ(n * vals, Bits(words, 0));
  for (const auto& t : nfa.transitions) {
    if (!useful[t.to]) continue;
    for (std::size_t v = 0; v < vals; ++v) {
      if (t.guard.accepts(masks[v])) succ[v * n + t.from][t.to / 64] |= std::uint64_t{1} << (t.to % 64);
    }
  }

  struct BitsHash {
    std::size_t operator()(const Bits& b) const {
      std::size_t h = 1469598103934665603ull;
      for (auto w : b) h = (h ^ w) * 1099511628211ull;
      return h;
    }
  };
  Dfa dfa;
  dfa.alphabet = nfa.alphabet;
  std::unordered_map<Bits, std::uint32_t, BitsHash> id;
  std::vector<Bits> subsets;
  auto intern = [&](Bits s) {
    auto [it, inserted] = id.emplace(s, static_cast<std::uint32_t>(subsets.size()));
    if (inserted) subsets.push_back(std::move(s));
    return it->second;
  };
  Bits init(words, 0);
  for (std::size_t q : nfa.initial) {
    if (useful[q]) init[q / 64] |= std::uint64_t{1} << (q % 64);
  }
  dfa.initial = intern(std::move(init));
  std::vector<std::size_t> members;
  Bits target(words);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    members.clear();
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t x = subsets[i][w]; x; x &= x - 1) members.push_back(w * 64 + std::countr_zero(x));
    }
    std::vector<std::uint32_t> row(vals);
    for (std::size_t v = 0; v < vals; ++v) {
      std::fill(target.begin(), target.end(), 0);
      for (std::size_t q : members) {
        const Bits& s = succ[v * n + q];
        for (std::size_t w = 0; w < words; ++w) target[w] |= s[w];
      }
      row[v] = intern(target);
    }
    dfa.next.push_back(std::move(row));
  }
  for (const auto& s : subsets) {
    bool acc = false;
    for (std::size_t q = 0; q < n && !acc; ++q) acc = ((s[q / 64] >> (q % 64)) & 1) && nfa.accepting[q];
    dfa.accepting.push_back(acc);
  }
  return dfa;
}

bool Dfa::accepts(const std::vector<std::uint64_t>& word_masks) const {
  std::size_t q = initial;
  for (std::uint64_t m : word_masks) q = next[q][alphabet.valuation_of(m)];
  return accepting[q];
}

Dfa minimize(const Dfa& dfa) {
  std::size_t n = dfa.state_count();
  std::size_t vals = dfa.alphabet.valuation_count();
  std::vector<std::uint32_t> cls(n);
  for (std::size_t q = 0; q < n; ++q) cls[q] = dfa.accepting[q] ? 1 : 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> sig_id;
    std::vector<std::uint32_t> next_cls(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::uint32_t> sig;
      sig.reserve(vals + 1);
      sig.push_back(cls[q]);
      for (std::size_t v = 0; v < vals; ++v) sig.push_back(cls[dfa.next[q][v]]);
      auto [it, _] = sig_id.emplace(std::move(sig), static_cast<std::uint32_t>(sig_id.size()));
      next_cls[q] = it->second;
    }
    cls = std::move(next_cls);
    if (sig_id.size() == count) break;
    count = sig_id.size();
  }
  // Renumber classes in breadth-first order from the initial state.
  std::vector<std::size_t> repr(count, n);
  for (std::size_t q = 0; q < n; ++q) {
    if (repr[cls[q]] == n) repr[cls[q]] = q;
  }
  std::vector<int> order(count, -1);
  std::vector<std::uint32_t> bfs;
  order[cls[dfa.initial]] = 0;
  bfs.push_back(cls[dfa.initial]);
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    std::size_t q = repr[bfs[i]];
    for (std::size_t v = 0; v < vals; ++v) {
      std::uint32_t c = cls[dfa.next[q][v]];
      if (order[c] < 0) {
        order[c] = static_cast<int>(bfs.size());
        bfs.push_back(c);
      }
    }
  }
  Dfa out;
  out.alphabet = dfa.alphabet;
  out.initial = 0;
  for (std::uint32_t c : bfs) {
    std::size_t q = repr[c];
    std::vector<std::uint32_t> row(vals);
    for (std::size_t v = 0; v < vals; ++v) row[v] = static_cast<std::uint32_t>(order[cls[dfa.next[q][v]]]);
    out.next.push_back(std::move(row));
    out.accepting.push_back(dfa.accepting[q]);
  }
  return out;
}

Dfa prefix_dfa(const Formula& nnf, const Alphabet& sigma, bool minimal) {
  GuardedAutomaton nba = ltl_to_nba(nnf, sigma);
  GuardedAutomaton nfa = nba_to_nfa(nba, nonempty_states(nba));
  Dfa dfa = determinize(nfa);
  return minimal ? minimize(dfa) : dfa;
}

// --------------------------------------------------------------- products

namespace {

template <std::size_t N>
MooreMachine product(const std::array<const Dfa*, N>& parts,
                     const std::function<Verdict(const std::array<bool, N>&)>& label) {
  const Alphabet& sigma = parts[0]->alphabet;
  for (const Dfa* d : parts) {
    if (!(d->alphabet == sigma)) throw Error("product of automata over different alphabets");
  }
  std::size_t vals = sigma.valuation_count();
  MooreMachine m;
  m.alphabet = sigma;
  std::map<std::array<std::size_t, N>, std::uint32_t> id;
  std::vector<std::array<std::size_t, N>> states;
  auto intern = [&](const std::array<std::size_t, N>& s) {
    auto [it, inserted] = id.emplace(s, static_cast<std::uint32_t>(states.size()));
    if (inserted) states.push_back(s);
    return it->second;
  };
  std::array<std::size_t, N> init{};
  for (std::size_t k = 0; k < N; ++k) init[k] = parts[k]->initial;
  m.initial = intern(init);
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::array<bool, N> in{};
    for (std::size_t k = 0; k < N; ++k) in[k] = parts[k]->accepting[states[i][k]];
    m.output.push_back(label(in));
    std::vector<std::uint32_t> row(vals);
    for (std::size_t v = 0; v < vals; ++v) {
      std::array<std::size_t, N> t{};
      for (std::size_t k = 0; k < N; ++k) t[k] = parts[k]->next[states[i][k]][v];
      row[v] = intern(t);
    }
    m.next.push_back(std::move(row));
  }
  return m;
}

}  // namespace

MooreMachine product2(const Dfa& pos, const Dfa& neg) {
  return product<2>({&pos, &neg}, [](const std::array<bool, 2>& in) {
    if (!in[0] && !in[1]) throw Error("prefix with no continuation in either automaton");
    return classify(in[0], in[1]);
  });
}

MooreMachine product3(const Dfa& pos, const Dfa& neg, const Dfa& und) {
  return product<3>({&pos, &neg, &und}, [](const std::array<bool, 3>& in) {
    if ((!in[0] && !in[1] && !in[2]) || (in[0] && in[1] && !in[2])) {
      throw Error("reachable product state with impossible membership combination");
    }
    return classify(in[0], in[1], in[2]);
  });
}

// -------------------------------------------------------------------- DOT

std::string guard_to_string(const Guard& g, const Alphabet& sigma) {
  std::string out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    bool p = g.pos >> i & 1;
    bool n = g.neg >> i & 1;
    if (!p && !n) continue;
    if (!out.empty()) out += " & ";
    if (n) out += '!';
    out += to_string(sigma.prop(i));
  }
  return out.empty() ? "true" : out;
}

namespace {

// Cover a set of valuations with cubes over the alphabet's propositions.
std::vector<Guard> cover(const Alphabet& sigma, const std::vector<std::size_t>& valuations) {
  std::uint64_t all = sigma.size() == 64 ? ~std::uint64_t{0}
                                         : (std::uint64_t{1} << sigma.size()) - 1;
  std::set<std::pair<std::uint64_t, std::uint64_t>> level;
  for (std::size_t v : valuations) {
    std::uint64_t m = sigma.mask(v);
    level.emplace(m, all & ~m);
  }
  std::set<std::pair<std::uint64_t, std::uint64_t>> primes;
  while (!level.empty()) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> merged;
    std::set<std::pair<std::uint64_t, std::uint64_t>> used;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cubes(level.begin(), level.end());
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      for (std::size_t j = i + 1; j < cubes.size(); ++j) {
        auto [p1, n1] = cubes[i];
        auto [p2, n2] = cubes[j];
        if ((p1 | n1) != (p2 | n2)) continue;
        std::uint64_t diff = p1 ^ p2;
        if (diff == 0 || (diff & (diff - 1)) != 0 || (n1 ^ n2) != diff) continue;
        merged.emplace(p1 & ~diff, n1 & ~diff);
        used.insert(cubes[i]);
        used.insert(cubes[j]);
      }
    }
    for (const auto& c : cubes) {
      if (!used.contains(c)) primes.insert(c);
    }
    level = std::move(merged);
  }
  // Greedy cover.
  std::vector<std::size_t> todo = valuations;
  std::vector<Guard> out;
  while (!todo.empty()) {
    Guard best;
    std::size_t best_count = 0;
    for (const auto& [p, n] : primes) {
      Guard g{p, n};
      std::size_t c = std::count_if(todo.begin(), todo.end(),
                                    [&](std::size_t v) { return g.accepts(sigma.mask(v)); });
      if (c > best_count) {
        best = g;
        best_count = c;
      }
    }
    std::erase_if(todo, [&](std::size_t v) { return best.accepts(sigma.mask(v)); });
    // A positive literal already excludes the other signs of its atom.
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (!(best.pos >> i & 1)) continue;
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        if (sigma.exclusive(i, j)) best.neg &= ~(std::uint64_t{1} << j);
      }
    }
    out.push_back(best);
  }
  return out;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

template <typename Row>
void dot_edges(std::ostringstream& os, const Alphabet& sigma, std::size_t from, const Row& row) {
  std::map<std::size_t, std::vector<std::size_t>> by_target;
  for (std::size_t v = 0; v < row.size(); ++v) by_target[row[v]].push_back(v);
  for (const auto& [to, vals] : by_target) {
    std::string label;
    for (const Guard& g : cover(sigma, vals)) {
      if (!label.empty()) label += " | ";
      label += guard_to_string(g, sigma);
    }
    os << "  q" << from << " -> q" << to << " [label=\"" << dot_escape(label) << "\"];\n";
  }
}

}  // namespace

GuardedAutomaton Dfa::guarded() const {
  GuardedAutomaton a;
  a.kind = AutomatonKind::Dfa;
  a.alphabet = alphabet;
  a.state_count = state_count();
  a.initial = {initial};
  a.accepting = accepting;
  for (std::size_t q = 0; q < state_count(); ++q) {
    std::map<std::size_t, std::vector<std::size_t>> by_target;
    for (std::size_t v = 0; v < next[q].size(); ++v) by_target[next[q][v]].push_back(v);
    for (const auto& [to, vals] : by_target) {
      for (const Guard& g : cover(alphabet, vals)) a.transitions.push_back({q, g, to});
    }
  }
  return a;
}

std::string to_dot(const GuardedAutomaton& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t q = 0; q < a.state_count; ++q) {
    os << "  q" << q << " [shape=" << (a.accepting[q] ? "doublecircle" : "circle") << "];\n";
  }
  for (std::size_t q : a.initial) os << "  init -> q" << q << ";\n";
  for (const auto& t : a.transitions) {
    os << "  q" << t.from << " -> q" << t.to << " [label=\""
       << dot_escape(guard_to_string(t.guard, a.alphabet)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const MooreMachine& m, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t q = 0; q < m.state_count(); ++q) {
    os << "  q" << q << " [shape=box,label=\"q" << q << "\\n" << verdict_symbol(m.output[q])
       << "\"];\n";
  }
  os << "  init -> q" << m.initial << ";\n";
  for (std::size_t q = 0; q < m.state_count(); ++q) dot_edges(os, m.alphabet, q, m.next[q]);
  os << "}\n";
  return os.str();
}

}  // namespace ratmon

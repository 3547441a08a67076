#pragma once

#include <functional>
#include <set>
#include <vector>

#include "ratmon/automata.hpp"
#include "ratmon/case_study.hpp"
#include "ratmon/formula.hpp"
#include "ratmon/oracle.hpp"
#include "ratmon/random.hpp"
#include "ratmon/visibility.hpp"

namespace testutil {

using namespace ratmon;

// The visible version of the full rover run with no class broken.
inline SignedTrace rover_visible(const std::set<ClassId>& broken = {}) {
  VisibilitySpec vs = casestudy::spec();
  return visible_trace(explicit_trace(casestudy::global_trace(), vs.alphabet), vs.classes, broken);
}

// Every plain event over `atoms`.
inline std::vector<PlainEvent> all_plain_events(const std::vector<Atom>& atoms) {
  std::vector<PlainEvent> out;
  for (std::size_t m = 0; m < (std::size_t{1} << atoms.size()); ++m) {
    PlainEvent e;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (m >> i & 1) e.insert(atoms[i]);
    }
    out.push_back(e);
  }
  return out;
}

// Every consistent known-value event over `atoms` (each atom unknown, true or false).
inline std::vector<KnownValues> all_known_events(const std::vector<Atom>& atoms) {
  std::vector<KnownValues> out(1);
  for (const auto& a : atoms) {
    std::vector<KnownValues> next;
    for (const auto& k : out) {
      next.push_back(k);
      auto t = k;
      t[a] = true;
      next.push_back(t);
      auto f = k;
      f[a] = false;
      next.push_back(f);
    }
    out = std::move(next);
  }
  return out;
}

// Calls fn for every word of each length in [lo, hi] over `letters`.
template <typename T>
void for_each_word(const std::vector<T>& letters, std::size_t lo, std::size_t hi,
                   const std::function<void(const std::vector<T>&)>& fn) {
  std::vector<T> word;
  std::function<void(std::size_t)> rec = [&](std::size_t len) {
    if (word.size() == len) {
      fn(word);
      return;
    }
    for (const auto& l : letters) {
      word.push_back(l);
      rec(len);
      word.pop_back();
    }
  };
  for (std::size_t len = lo; len <= hi; ++len) rec(len);
}

// Plain subset simulation of a guarded automaton on a finite word of masks.
inline bool simulate(const GuardedAutomaton& a, const std::vector<std::uint64_t>& word) {
  std::set<std::size_t> cur(a.initial.begin(), a.initial.end());
  for (std::uint64_t m : word) {
    std::set<std::size_t> next;
    for (const auto& t : a.transitions) {
      if (cur.contains(t.from) && t.guard.accepts(m)) next.insert(t.to);
    }
    cur = std::move(next);
  }
  for (std::size_t q : cur) {
    if (a.accepting[q]) return true;
  }
  return false;
}

// Büchi acceptance of u·v^ω by search over (state, position) pairs: some
// accepting pair reachable from the start lies on a cycle.
inline bool nba_accepts_lasso(const GuardedAutomaton& a, const std::vector<std::uint64_t>& stem,
                              const std::vector<std::uint64_t>& loop) {
  std::size_t len = stem.size() + loop.size();
  auto letter = [&](std::size_t i) { return i < stem.size() ? stem[i] : loop[i - stem.size()]; };
  auto succ_pos = [&](std::size_t i) { return i + 1 < len ? i + 1 : stem.size(); };
  auto id = [&](std::size_t q, std::size_t i) { return q * len + i; };
  std::vector<std::vector<std::size_t>> adj(a.state_count * len);
  for (const auto& t : a.transitions) {
    for (std::size_t i = 0; i < len; ++i) {
      if (t.guard.accepts(letter(i))) adj[id(t.from, i)].push_back(id(t.to, succ_pos(i)));
    }
  }
  auto reach = [&](std::vector<std::size_t> from, bool include_start) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> stack;
    for (std::size_t x : from) {
      if (include_start) {
        seen[x] = true;
        stack.push_back(x);
      } else {
        for (std::size_t y : adj[x]) {
          if (!seen[y]) seen[y] = true, stack.push_back(y);
        }
      }
    }
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : adj[x]) {
        if (!seen[y]) seen[y] = true, stack.push_back(y);
      }
    }
    return seen;
  };
  std::vector<std::size_t> starts;
  for (std::size_t q : a.initial) starts.push_back(id(q, 0));
  auto live = reach(starts, true);
  for (std::size_t q = 0; q < a.state_count; ++q) {
    if (!a.accepting[q]) continue;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t x = id(q, i);
      if (live[x] && reach({x}, false)[x]) return true;
    }
  }
  return false;
}

// States from which an accepting state on a cycle is reachable.
inline std::vector<bool> nonempty_by_search(const GuardedAutomaton& a) {
  std::vector<std::vector<std::size_t>> adj(a.state_count);
  for (const auto& t : a.transitions) adj[t.from].push_back(t.to);
  auto reach = [&](std::size_t from, bool include_start) {
    std::vector<bool> seen(a.state_count, false);
    std::vector<std::size_t> stack;
    if (include_start) {
      seen[from] = true;
      stack.push_back(from);
    } else {
      for (std::size_t y : adj[from]) {
        if (!seen[y]) seen[y] = true, stack.push_back(y);
      }
    }
    while (!stack.empty()) {
      std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : adj[x]) {
        if (!seen[y]) seen[y] = true, stack.push_back(y);
      }
    }
    return seen;
  };
  std::vector<bool> good(a.state_count, false);
  for (std::size_t r = 0; r < a.state_count; ++r) good[r] = a.accepting[r] && reach(r, false)[r];
  std::vector<bool> out(a.state_count, false);
  for (std::size_t q = 0; q < a.state_count; ++q) {
    auto seen = reach(q, true);
    for (std::size_t r = 0; r < a.state_count && !out[q]; ++r) out[q] = seen[r] && good[r];
  }
  return out;
}

// Random visibility setup over `pool`: a random partition and a random
// broken set among its non-singleton classes.
struct RandomView {
  Partition classes;
  std::set<ClassId> broken;
};

inline RandomView random_view(Rng& rng, const std::vector<Atom>& pool) {
  std::vector<std::vector<Atom>> groups;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size());
  for (const auto& a : pool) {
    std::size_t g = pick(rng) % (groups.size() + 1);
    if (g == groups.size()) {
      groups.push_back({a});
    } else {
      groups[g].push_back(a);
    }
  }
  RandomView v{Partition(groups), {}};
  std::bernoulli_distribution coin(0.5);
  for (const auto& id : v.classes.non_singleton_ids()) {
    if (coin(rng)) v.broken.insert(id);
  }
  return v;
}

}  // namespace testutil

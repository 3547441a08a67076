#pragma once

// Randomized checks shared by the unit tests (small runs) and the acceptance
// binary (full runs).

#include <algorithm>
#include <sstream>
#include <string>

#include "support.hpp"
#include "ratmon/error.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/rational.hpp"

namespace suites {

using namespace ratmon;

// The satisfying, violating and undefined prefix languages as NFAs, simulated directly.
struct MembershipNfas {
  GuardedAutomaton sat, viol, und;
  Partition classes;

  MembershipNfas(const Formula& f, const Partition& cls) : classes(cls) {
    Formula n = to_nnf(f);
    auto make = [](const Formula& g) {
      GuardedAutomaton nba = ltl_to_nba(g, alphabet_of({g}));
      return nba_to_nfa(nba, nonempty_states(nba));
    };
    sat = make(explicit_formula(n, classes));
    viol = make(explicit_formula(to_nnf(Formula::negation(f)), classes));
    und = make(undefined_formula(n, classes));
  }

  struct Bits {
    bool sat, viol, und;
  };

  Bits bits(const SignedTrace& prefix) const {
    auto member = [&](const GuardedAutomaton& a) {
      std::vector<std::uint64_t> word;
      for (const auto& e : prefix) word.push_back(a.alphabet.mask_of(known_values(e, classes)));
      return testutil::simulate(a, word);
    };
    return {member(sat), member(viol), member(und)};
  }
};

struct PropertyStats {
  std::size_t formulas = 0;
  std::size_t cases = 0;
  std::size_t final_checked = 0;
  std::size_t final_ok = 0;
  std::size_t impossible = 0;
  std::size_t refinement_checked = 0;
  std::size_t refinement_ok = 0;
  std::size_t batch_checked = 0;
  std::size_t batch_ok = 0;
  std::size_t membership_checked = 0;
  std::size_t membership_ok = 0;
  std::vector<std::string> failures;
};

inline bool respects_order(const std::vector<Verdict>& steps, Verdict initial) {
  Verdict prev = initial;
  for (Verdict v : steps) {
    if (!may_evolve(prev, v)) return false;
    prev = v;
  }
  return true;
}

// `formulas` random formulas, each run on `traces` random traces under a
// random partition and broken set.
inline PropertyStats run_property_suite(std::uint64_t seed, std::size_t formulas, std::size_t traces,
                                        int max_operators = 8, std::size_t max_length = 12) {
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  const std::set<Atom> alphabet(pool.begin(), pool.end());
  PropertyStats st;
  auto note = [&](const std::string& what, const Formula& f) {
    if (st.failures.size() < 20) st.failures.push_back(what + ": " + to_string(f));
  };
  for (std::size_t i = 0; i < formulas; ++i) {
    Rng rng(derive_seed(seed, i));
    std::uniform_int_distribution<int> ops(1, max_operators);
    Formula f = random_formula(rng, ops(rng), pool);
    testutil::RandomView view = testutil::random_view(rng, pool);
    auto std_m = build_standard(f);
    auto imp_m = build_imperfect(f, view.classes);
    MembershipNfas nfas(f, view.classes);
    ++st.formulas;
    Verdict std0 = Monitor(std_m).verdict();
    Verdict imp0 = Monitor(imp_m).verdict();
    std::uniform_int_distribution<std::size_t> len(1, max_length);
    for (std::size_t j = 0; j < traces; ++j) {
      ++st.cases;
      PlainTrace plain = random_plain_trace(rng, len(rng), pool);
      SignedTrace vis = visible_trace(explicit_trace(plain, alphabet), view.classes, view.broken);
      std::vector<Verdict> sv = run(std_m, plain);
      std::vector<Verdict> iv = run(imp_m, vis);

      ++st.final_checked;
      bool final_agree = true;
      for (std::size_t k = 0; k < iv.size(); ++k) {
        if ((iv[k] == Verdict::True || iv[k] == Verdict::False) && sv[k] != iv[k]) final_agree = false;
      }
      st.final_ok += final_agree;
      if (!final_agree) note("final verdicts", f);

      ++st.refinement_checked;
      bool order = respects_order(sv, std0) && respects_order(iv, imp0);
      st.refinement_ok += order;
      if (!order) note("refinement", f);

      ++st.batch_checked;
      Monitor inc(imp_m);
      bool batch = true;
      for (std::size_t k = 0; k < vis.size(); ++k) {
        Verdict step = inc.step(vis[k]);
        SignedTrace prefix(vis.begin(), vis.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        if (step != iv[k] || run(imp_m, prefix).back() != step) batch = false;
      }
      batch = batch && inc.steps() == vis.size();
      st.batch_ok += batch;
      if (!batch) note("batch/incremental", f);

      ++st.membership_checked;
      bool member = true;
      for (std::size_t k = 0; k <= vis.size(); ++k) {
        SignedTrace prefix(vis.begin(), vis.begin() + static_cast<std::ptrdiff_t>(k));
        auto b = nfas.bits(prefix);
        if ((!b.sat && !b.viol && !b.und) || (b.sat && b.viol && !b.und)) {
          ++st.impossible;
          member = false;
          continue;
        }
        Verdict want = classify(b.sat, b.viol, b.und);
        Verdict got = k == 0 ? imp0 : iv[k - 1];
        if (want != got) member = false;
      }
      st.membership_ok += member;
      if (!member) note("membership", f);
    }
  }
  return st;
}

struct OracleStats {
  std::size_t instances = 0;
  std::size_t agree = 0;
  std::size_t standard_agree = 0;
  std::size_t max_bound = 0;
  std::vector<std::string> failures;
};

// Pipeline against the brute-force oracle on small instances: formulas up to
// `max_operators` over three atoms, prefixes up to five events, loop bound
// min(machine states, cap).
inline OracleStats run_oracle_suite(std::uint64_t seed, std::size_t instances, std::size_t cap,
                                    int max_operators = 6) {
  const std::vector<Atom> pool = {"p", "q", "r"};
  const std::set<Atom> alphabet(pool.begin(), pool.end());
  OracleStats st;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    std::uniform_int_distribution<int> ops(1, max_operators);
    Formula f = random_formula(rng, ops(rng), pool);
    testutil::RandomView view = testutil::random_view(rng, pool);
    std::uniform_int_distribution<std::size_t> len(0, 5);
    PlainTrace plain = random_plain_trace(rng, len(rng), pool);
    SignedTrace vis = visible_trace(explicit_trace(plain, alphabet), view.classes, view.broken);

    auto imp_m = build_imperfect(f, view.classes);
    auto std_m = build_standard(f);
    Monitor mi(imp_m);
    for (const auto& e : vis) mi.step(e);
    Monitor ms(std_m);
    for (const auto& e : plain) ms.step(e);

    std::size_t bound = std::min(imp_m->machine.state_count(), cap);
    std::size_t std_bound = std::min(std_m->machine.state_count(), cap);
    st.max_bound = std::max({st.max_bound, bound, std_bound});
    Verdict want = oracle::oracle_verdict(f, view.classes, vis, bound);
    Verdict want_std = oracle::standard_verdict(f, plain, std_bound);
    ++st.instances;
    st.agree += want == mi.verdict();
    st.standard_agree += want_std == ms.verdict();
    if ((want != mi.verdict() || want_std != ms.verdict()) && st.failures.size() < 20) {
      std::ostringstream os;
      os << to_string(f) << " len " << vis.size() << ": pipeline " << verdict_name(mi.verdict())
         << "/" << verdict_name(ms.verdict()) << " oracle " << verdict_name(want) << "/"
         << verdict_name(want_std);
      st.failures.push_back(os.str());
    }
  }
  return st;
}

struct KnapsackStats {
  std::size_t instances = 0;
  std::size_t optimal = 0;
  std::size_t feasible = 0;
};

inline KnapsackStats run_knapsack_suite(std::uint64_t seed, std::size_t instances) {
  KnapsackStats st;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    std::uniform_int_distribution<std::size_t> count(0, 12);
    std::uniform_int_distribution<int> cost(0, 6);
    std::uniform_int_distribution<int> bound(0, 20);
    std::uniform_int_distribution<int> atoms(2, 4);
    std::uniform_real_distribution<double> pay(0.0, 1.0);
    std::bernoulli_distribution zero(0.15);
    std::bernoulli_distribution coarse(0.3);
    std::vector<KnapsackItem> items;
    std::size_t n = count(rng);
    for (std::size_t k = 0; k < n; ++k) {
      double p = zero(rng) ? 0.0 : pay(rng);
      if (coarse(rng)) p = std::round(p * 4) / 4;  // force ties
      items.push_back({"k" + std::to_string(k), p, cost(rng), static_cast<std::size_t>(atoms(rng))});
    }
    int b = bound(rng);
    std::set<ClassId> chosen = knapsack(items, b, derive_seed(seed, i + 7));

    double best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      double p = 0;
      int c = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (mask >> k & 1) p += items[k].payoff, c += items[k].cost;
      }
      if (c <= b) best = std::max(best, p);
    }
    double p = 0;
    int c = 0;
    for (const auto& it : items) {
      if (chosen.contains(it.id)) p += it.payoff, c += it.cost;
    }
    ++st.instances;
    st.feasible += c <= b;
    st.optimal += std::abs(p - best) <= 1e-9 * 16;
  }
  return st;
}

}  // namespace suites

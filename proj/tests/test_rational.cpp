#include <doctest.h>

#include "suites.hpp"

using namespace ratmon;

namespace {

struct Rules {
  bool conj_min;
  double next;
  double ul, ur, rl, rr;
};

// Weight tables of the four built-in metrics, transcribed separately from
// the library.
Rules rules(const std::string& name) {
  if (name == "metric0") return {true, 0.1, 0.9, 0.1, 0.9, 0.1};
  if (name == "metric1") return {false, 0.5, 0.3, 0.7, 0.5, 0.5};
  if (name == "metric2") return {false, 0.5, 0.3, 0.7, 0.3, 0.7};
  return {false, 1.0, 0.3, 0.7, 0.3, 0.7};
}

double ref_metric(const Formula& f, const Atom& p, const Rules& r) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return 0;
    case Op::Atom:
      return f.prop().atom == p ? 1 : 0;
    case Op::Not:
      return ref_metric(f.lhs(), p, r);
    case Op::Or:
    case Op::Implies:
      return (ref_metric(f.lhs(), p, r) + ref_metric(f.rhs(), p, r)) / 2;
    case Op::And: {
      double a = ref_metric(f.lhs(), p, r), b = ref_metric(f.rhs(), p, r);
      return r.conj_min ? std::min(a, b) : std::max(a, b);
    }
    case Op::Next:
      return r.next * ref_metric(f.lhs(), p, r);
    case Op::Until:
      return r.ul * ref_metric(f.lhs(), p, r) + r.ur * ref_metric(f.rhs(), p, r);
    case Op::Release:
      return r.rl * ref_metric(f.lhs(), p, r) + r.rr * ref_metric(f.rhs(), p, r);
    default:
      FAIL("unexpected operator");
      return 0;
  }
}

Formula prop(std::size_t i) { return parse_formula(casestudy::properties()[i].text); }

enum { kPhi1, kPhi2, kPhi3, kPsi1, kPsi2, kPsi3, kPsi };

RationalConfig config(int bound, std::optional<int> window = std::nullopt) {
  RationalConfig c;
  c.metric = MetricSpec::builtin("metric2");
  c.bound = bound;
  c.window = window;
  return c;
}

}  // namespace

TEST_CASE("metric values of the rover properties") {
  MetricSpec m2 = MetricSpec::builtin("metric2");
  Formula phi1 = to_metric_form(prop(kPhi1));
  CHECK(metric(phi1, "c", m2) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(metric(phi1, "s", m2) == 0.0);

  Formula psi = to_metric_form(prop(kPsi));
  // The reference expression for c, evaluated as written.
  double c_expr = (((0.3 * 0) + (0.7 * ((0.0) + (0.5 * 1)) / 2)) + 0.0) / 2;
  CHECK(metric(psi, "c", m2) == doctest::Approx(c_expr).epsilon(1e-12));
  CHECK(metric(psi, "gamma", m2) == doctest::Approx(0.175).epsilon(1e-12));
  for (const char* a : {"s", "alpha", "beta"}) CHECK(metric(psi, a, m2) == 0.0);
  CHECK(metric(psi, "zz", m2) == 0.0);
}

TEST_CASE("metrics match the reference rules") {
  Rng rng(8);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  for (const auto& name : MetricSpec::builtin_names()) {
    MetricSpec spec = MetricSpec::builtin(name);
    Rules r = rules(name);
    for (int i = 0; i < 300; ++i) {
      Formula f = to_metric_form(random_formula(rng, 1 + i % 10, pool));
      for (const auto& a : pool) {
        double v = metric(f, a, spec);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v == doctest::Approx(ref_metric(f, a, r)).epsilon(1e-12));
      }
    }
  }
  MetricSpec bad;
  bad.next = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(MetricSpec::builtin("metric9"), Error);
}

TEST_CASE("payoffs") {
  VisibilitySpec vs = casestudy::spec();
  MetricSpec m2 = MetricSpec::builtin("metric2");
  auto p1 = payoff(vs.classes, to_metric_form(prop(kPhi1)), m2);
  CHECK(p1.at("cs") == doctest::Approx(0.7));
  CHECK(p1.at("alphabetagamma") == 0.0);
  CHECK(p1.size() == 2);

  auto pp = payoff(vs.classes, to_metric_form(prop(kPsi)), m2);
  CHECK(pp.at("alphabetagamma") == doctest::Approx(0.175));
  CHECK(pp.at("cs") == doctest::Approx(metric(to_metric_form(prop(kPsi)), "c", m2)));

  auto none = payoff(vs.classes, parse_formula("G (mb -> F w)"), m2);
  for (const auto& [id, v] : none) CHECK(v == 0.0);
}

TEST_CASE("knapsack examples") {
  CHECK(knapsack({{"cs", 0.7, 2, 2}, {"alphabetagamma", 0.0, 3, 3}}, 3) == std::set<ClassId>{"cs"});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(knapsack({{"cs", 0.175, 2, 2}, {"alphabetagamma", 0.175, 3, 3}}, 3, seed) ==
          std::set<ClassId>{"alphabetagamma"});
  }
  CHECK(knapsack({{"cs", 0.7, 2, 2}}, 0).empty());
  CHECK(knapsack({}, 5).empty());
  CHECK(knapsack({{"a", 0.5, 0, 2}}, 0) == std::set<ClassId>{"a"});
}

TEST_CASE("knapsack ties follow the seed") {
  std::vector<KnapsackItem> items = {{"ab", 0.5, 1, 2}, {"cd", 0.5, 1, 2}, {"ef", 0.5, 1, 2}};
  std::set<std::set<ClassId>> seen;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    auto pick = knapsack(items, 1, seed);
    CHECK(pick.size() == 1);
    CHECK(knapsack(items, 1, seed) == pick);
    seen.insert(pick);
  }
  CHECK(seen.size() > 1);
}

TEST_CASE("knapsack against brute force, small run") {
  suites::KnapsackStats st = suites::run_knapsack_suite(3, 300);
  CHECK(st.optimal == st.instances);
  CHECK(st.feasible == st.instances);
}

TEST_CASE("active monitor") {
  VisibilitySpec vs = casestudy::spec();
  PlainTrace t = casestudy::global_trace();
  RationalRun r = active_monitor(t, prop(kPhi1), vs, config(3));
  CHECK(r.broken_per_window == std::vector<std::set<ClassId>>{{"cs"}});
  CHECK(r.final == Verdict::True);
  CHECK(r.visible[1] == visible_event(explicit_event(t[1], vs.alphabet), vs.classes, {"cs"}));

  ActiveMonitor psi1(build_imperfect(prop(kPsi1), vs.classes), vs, {"cs"});
  for (const auto& e : t) psi1.step(e);
  CHECK(psi1.verdict() == Verdict::False);

  Verdict plain = run(build_imperfect(prop(kPhi2), vs.classes), testutil::rover_visible()).back();
  RationalRun r2 = active_monitor(t, prop(kPhi2), vs, config(2));
  CHECK(r2.broken_per_window[0].empty());
  CHECK(r2.final == plain);
  CHECK(plain == Verdict::UnknownNotFalse);

  CHECK_THROWS_AS(active_monitor(t, prop(kPhi1), vs, config(-1)), Error);
}

TEST_CASE("reactive monitor") {
  VisibilitySpec vs = casestudy::spec();
  PlainTrace t = casestudy::global_trace();
  RationalRun r = reactive_monitor(t, prop(kPsi), vs, config(3, 2));
  CHECK(r.final == Verdict::False);
  REQUIRE(r.broken_per_window.size() == 3);
  CHECK(r.broken_per_window[0] == std::set<ClassId>{"alphabetagamma"});
  CHECK(r.broken_per_window[1] == std::set<ClassId>{"cs"});
  CHECK(r.steps[1] == Verdict::Unknown);
  CHECK(r.steps[2] == Verdict::False);

  CHECK(reactive_monitor(t, prop(kPhi3), vs, config(3, 2)).final == Verdict::Unknown);
  CHECK_THROWS_AS(reactive_monitor(t, prop(kPsi), vs, config(3)), Error);
  CHECK_THROWS_AS(reactive_monitor(t, prop(kPsi), vs, config(3, 0)), Error);

  ReactiveMonitor m(prop(kPsi), vs, config(3, 2));
  for (const auto& e : t) m.step(e);
  CHECK(m.residual().op() == Op::False);
}

TEST_CASE("reactive equals active when one window covers the trace") {
  Rng rng(12);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  for (int i = 0; i < 80; ++i) {
    Formula f = random_formula(rng, 1 + i % 6, pool);
    VisibilitySpec vs = VisibilitySpec::make({pool.begin(), pool.end()}, {{"p", "q"}, {"r", "s"}},
                                             {{"pq", 1 + i % 3}, {"rs", 2}});
    PlainTrace t = random_plain_trace(rng, 1 + i % 8, pool);
    RationalConfig c = config(i % 4, static_cast<int>(t.size() + i % 3));
    c.seed = static_cast<std::uint64_t>(i);
    RationalRun a = active_monitor(t, f, vs, c);
    RationalRun b = reactive_monitor(t, f, vs, c);
    CHECK(a.steps == b.steps);
    CHECK(a.visible == b.visible);
    CHECK(a.broken_per_window[0] == b.broken_per_window[0]);
  }
}

TEST_CASE("more visibility only adds information") {
  // The verdict bits move monotonically with the broken set: the satisfying
  // and violating bits can only turn on and the undefined bit only off.
  // The verdict itself need not refine: phi3 on the rover run is ?≁⊥
  // with nothing broken and ? once c/s is broken.
  VisibilitySpec vs = casestudy::spec();
  auto m3 = build_imperfect(prop(kPhi3), vs.classes);
  Verdict none = run(m3, testutil::rover_visible()).back();
  Verdict cs = run(m3, testutil::rover_visible({"cs"})).back();
  CHECK(none == Verdict::UnknownNotFalse);
  CHECK(cs == Verdict::Unknown);
  CHECK_FALSE(may_evolve(none, cs));

  Rng rng(31);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  const std::set<Atom> alphabet(pool.begin(), pool.end());
  std::size_t refined = 0, total = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 1 + i % 8, pool);
    Partition classes({{"p", "q"}, {"r", "s"}});
    auto m = build_imperfect(f, classes);
    PlainTrace t = random_plain_trace(rng, 1 + i % 10, pool);
    SignedTrace ex = explicit_trace(t, alphabet);
    for (const std::set<ClassId>& more : {std::set<ClassId>{"pq"}, std::set<ClassId>{"pq", "rs"}}) {
      VerdictBits lo = verdict_bits(run(m, visible_trace(ex, classes, {})).back());
      VerdictBits hi = verdict_bits(run(m, visible_trace(ex, classes, more)).back());
      Verdict vlo = run(m, visible_trace(ex, classes, {})).back();
      Verdict vhi = run(m, visible_trace(ex, classes, more)).back();
      CAPTURE(to_string(f));
      CHECK((!lo.sat || hi.sat));
      CHECK((!lo.viol || hi.viol));
      CHECK((!hi.undef || lo.undef));
      ++total;
      refined += may_evolve(vlo, vhi);
    }
  }
  MESSAGE("verdict refinement under more visibility: " << refined << "/" << total);
}

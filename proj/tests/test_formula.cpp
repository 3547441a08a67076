#include <doctest.h>

#include "support.hpp"
#include "ratmon/error.hpp"

using namespace ratmon;

namespace {

Formula parse(const char* s) { return parse_formula(s); }

// Drops signs and witness tags, mapping each leaf back to its plain atom.
Formula erase_signs(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom: {
      Formula a = Formula::atom(f.prop().atom);
      return f.prop().sign == Sign::KnownFalse ? Formula::negation(a) : a;
    }
    case Op::Not:
      return Formula::negation(erase_signs(f.lhs()));
    case Op::Next:
      return Formula::next(erase_signs(f.lhs()));
    case Op::And:
      return Formula::conj(erase_signs(f.lhs()), erase_signs(f.rhs()));
    case Op::Or:
      return Formula::disj(erase_signs(f.lhs()), erase_signs(f.rhs()));
    case Op::Until:
      return Formula::until(erase_signs(f.lhs()), erase_signs(f.rhs()));
    case Op::Release:
      return Formula::release(erase_signs(f.lhs()), erase_signs(f.rhs()));
    default:
      FAIL("unexpected operator");
      return f;
  }
}

}  // namespace

TEST_CASE("parser builds the expected trees") {
  Formula phi1 = parse("F (c & X w)");
  CHECK(phi1 == Formula::eventually(Formula::conj(Formula::atom("c"), Formula::next(Formula::atom("w")))));

  Formula psi1 = parse("G ((b1|b2|b3) -> X !c)");
  Formula lhs = Formula::disj(Formula::disj(Formula::atom("b1"), Formula::atom("b2")), Formula::atom("b3"));
  CHECK(psi1 == Formula::always(Formula::implies(lhs, Formula::next(Formula::negation(Formula::atom("c"))))));

  CHECK(parse("a -> b -> c") == Formula::implies(Formula::atom("a"), Formula::implies(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse("a U b U c") == Formula::until(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse("a & b | c") == Formula::disj(Formula::conj(Formula::atom("a"), Formula::atom("b")), Formula::atom("c")));
  CHECK(parse("!a U b") == Formula::until(Formula::negation(Formula::atom("a")), Formula::atom("b")));
  CHECK(parse("a U b & c") == Formula::conj(Formula::until(Formula::atom("a"), Formula::atom("b")), Formula::atom("c")));
  CHECK(parse("true").op() == Op::True);
  CHECK(parse("Xa").op() == Op::Atom);  // identifier, not X applied to a
}

TEST_CASE("parser errors carry positions") {
  try {
    parse("p U");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(parse("p & $"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
  CHECK_THROWS_AS(parse("p q"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("printing round-trips through the parser") {
  Rng rng(7);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 1 + i % 8, pool);
    CAPTURE(to_string(f));
    CHECK(parse_formula(to_string(f)) == f);
  }
}

TEST_CASE("nnf rewrites") {
  CHECK(to_nnf(parse("!X p")) == Formula::next(Formula::negation(Formula::atom("p"))));
  CHECK(to_nnf(parse("!(p U q)")) ==
        Formula::release(Formula::negation(Formula::atom("p")), Formula::negation(Formula::atom("q"))));
  CHECK(to_nnf(parse("!!p")) == Formula::atom("p"));
  CHECK(is_nnf(to_nnf(parse("G (a -> F !b)"))));
  CHECK_FALSE(is_nnf(parse("a -> b")));
}

TEST_CASE("nnf is idempotent and language preserving") {
  Rng rng(11);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  std::vector<PlainEvent> events = testutil::all_plain_events(pool);
  std::uniform_int_distribution<std::size_t> len(0, 4);
  std::uniform_int_distribution<std::size_t> ev(0, events.size() - 1);
  for (int i = 0; i < 400; ++i) {
    Formula f = random_formula(rng, 1 + i % 8, pool);
    Formula n = to_nnf(f);
    CAPTURE(to_string(f));
    CHECK(is_nnf(n));
    CHECK(to_nnf(n) == n);
    for (int k = 0; k < 10; ++k) {
      oracle::LassoWord w;
      std::size_t u = len(rng);
      std::size_t v = 1 + len(rng) % 4;
      for (std::size_t j = 0; j < u; ++j) w.stem.push_back(oracle::lasso_event(events[ev(rng)]));
      for (std::size_t j = 0; j < v; ++j) w.loop.push_back(oracle::lasso_event(events[ev(rng)]));
      CHECK(oracle::eval_lasso(f, w) == oracle::eval_lasso(n, w));
    }
  }
}

TEST_CASE("metric form keeps implications") {
  Formula m = to_metric_form(parse("G (!gamma -> !mb)"));
  REQUIRE(m.op() == Op::Release);
  CHECK(m.rhs().op() == Op::Implies);
  CHECK(to_metric_form(parse("!(a -> b)")) == Formula::conj(Formula::atom("a"), Formula::negation(Formula::atom("b"))));
}

TEST_CASE("explicit formulas of the rover properties") {
  VisibilitySpec vs = casestudy::spec();
  Formula e1 = explicit_formula(to_nnf(parse("F (c & X w)")), vs.classes);
  CHECK(to_string(e1) == "true U ([cs]c=1 & X w=1)");
  REQUIRE(e1.rhs().lhs().op() == Op::Atom);
  CHECK(e1.rhs().lhs().prop().cls == "cs");
  CHECK(e1.rhs().rhs().lhs().prop().cls == "w");

  Formula e3 = explicit_formula(to_nnf(parse("F ((!c & b1 & X b2) | (!c & b2 & X b3))")), vs.classes);
  CHECK(to_string(e3) == "true U ([cs]c=0 & b1=1 & X b2=1 | [cs]c=0 & b2=1 & X b3=1)");

  Partition single({{"p"}});
  Formula np = explicit_formula(to_nnf(parse("!p")), single);
  REQUIRE(np.op() == Op::Atom);
  CHECK(np.prop().sign == Sign::KnownFalse);
  CHECK_THROWS_AS(explicit_formula(parse("a -> b"), Partition({{"a"}, {"b"}})), Error);
  CHECK_THROWS_AS(explicit_formula(parse("a"), Partition({{"b"}})), Error);
}

TEST_CASE("explicit preserves the operator tree") {
  Rng rng(3);
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  for (int i = 0; i < 300; ++i) {
    Formula n = to_nnf(random_formula(rng, 1 + i % 8, pool));
    Partition classes = testutil::random_view(rng, pool).classes;
    Formula e = explicit_formula(n, classes);
    CAPTURE(to_string(n));
    // Leaves keep their atom and record its class.
    std::function<void(const Formula&)> check_leaves = [&](const Formula& f) {
      if (f.op() == Op::Atom) {
        CHECK(f.prop().sign != Sign::Plain);
        CHECK(f.prop().cls == classes.class_of(f.prop().atom).id());
      }
      if (f.op() == Op::Next) check_leaves(f.lhs());
      if (f.op() == Op::And || f.op() == Op::Or || f.op() == Op::Until || f.op() == Op::Release) {
        check_leaves(f.lhs());
        check_leaves(f.rhs());
      }
    };
    check_leaves(e);
    CHECK(erase_signs(e) == n);
  }
}

TEST_CASE("undefined formulas") {
  Partition single({{"p"}});
  Formula u = undefined_formula(parse("p"), single);
  Formula pt = Formula::leaf({"p", Sign::KnownTrue, "p"});
  Formula pf = Formula::leaf({"p", Sign::KnownFalse, "p"});
  CHECK(u == Formula::conj(Formula::negation(pt), Formula::negation(pf)));

  // ⊗(X p) holds exactly on the words whose second event lacks both literals.
  Formula ux = undefined_formula(to_nnf(parse("X p")), single);
  auto events = testutil::all_known_events({"p"});
  std::vector<oracle::LassoEvent> letters;
  for (const auto& k : events) letters.push_back(oracle::lasso_event(k));
  std::size_t checked = 0;
  testutil::for_each_word<oracle::LassoEvent>(letters, 1, 3, [&](const auto& stem) {
    testutil::for_each_word<oracle::LassoEvent>(letters, 1, 2, [&](const auto& loop) {
      oracle::LassoWord w{stem, loop};
      const auto& second = stem.size() > 1 ? stem[1] : loop[(1 - stem.size()) % loop.size()];
      bool expected = second.empty();
      CHECK(oracle::eval_lasso(ux, w) == expected);
      ++checked;
    });
  });
  CHECK(checked == (3 + 9 + 27) * (3 + 9));

  // ε(true) holds everywhere, so ⊗true holds nowhere.
  Formula ut = undefined_formula(Formula::truth(), single);
  testutil::for_each_word<oracle::LassoEvent>(letters, 1, 2, [&](const auto& loop) {
    CHECK_FALSE(oracle::eval_lasso(ut, {{}, loop}));
  });
}

TEST_CASE("progression") {
  KnownValues p_true{{"p", true}};
  CHECK(progress(to_nnf(parse("F p")), p_true).op() == Op::True);
  Formula gp = to_nnf(parse("G p"));
  CHECK(progress(gp, p_true) == gp);
  CHECK(progress(gp, KnownValues{{"p", false}}).op() == Op::False);
  // Unknown atoms stay in the residual.
  Formula r = progress(to_metric_form(parse("F (c & X w)")), KnownValues{});
  CHECK(atoms_of(r) == std::set<Atom>{"c", "w"});

  // ψ2 after the second event of the rover run with the gauges broken.
  VisibilitySpec vs = casestudy::spec();
  SignedTrace vis = testutil::rover_visible({"alphabetagamma"});
  Formula psi2 = to_metric_form(parse("G (gamma -> !(b1 | b2 | b3))"));
  Formula after0 = progress(psi2, vis[0], vs.classes);
  CHECK(after0 == psi2);
  CHECK(progress(after0, vis[1], vs.classes).op() == Op::False);
}

TEST_CASE("progression is sound on fully known events") {
  Rng rng(5);
  const std::vector<Atom> pool = {"p", "q", "r"};
  auto events = testutil::all_plain_events(pool);
  std::uniform_int_distribution<std::size_t> ev(0, events.size() - 1);
  std::uniform_int_distribution<std::size_t> len(1, 3);
  for (int i = 0; i < 300; ++i) {
    Formula f = to_nnf(random_formula(rng, 1 + i % 6, pool));
    PlainEvent head = events[ev(rng)];
    KnownValues known;
    for (const auto& a : pool) known[a] = head.contains(a);
    Formula rest = progress(f, known);
    for (int k = 0; k < 5; ++k) {
      oracle::LassoWord tail;
      for (std::size_t j = 0; j < len(rng); ++j) tail.stem.push_back(oracle::lasso_event(events[ev(rng)]));
      for (std::size_t j = 0; j < len(rng); ++j) tail.loop.push_back(oracle::lasso_event(events[ev(rng)]));
      oracle::LassoWord whole = tail;
      whole.stem.insert(whole.stem.begin(), oracle::lasso_event(head));
      CAPTURE(to_string(f));
      CAPTURE(to_string(rest));
      CHECK(oracle::eval_lasso(f, whole) == oracle::eval_lasso(rest, tail));
    }
  }
}

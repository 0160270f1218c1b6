#include "covrel/catalog.hpp"
#include "covrel/conditions.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace covrel;

namespace {

Interval iv(Rational lo, Rational hi) { return Interval(lo, hi); }

FPoly F(std::vector<Rational> d) { return FPoly(std::move(d)); }

KernelSpec bilinear(Rational a0, Rational a1, Rational c1, Rational alpha = 0, Rational beta = 1) {
  return KernelSpec{BilinearKernel{a0, a1, c1}, Strip{iv(alpha, beta), alpha, beta}};
}

KernelSpec rect_kernel(const Strip& st, const Interval& T, const Interval& S) {
  return KernelSpec{PiecewiseRectKernel{{RectPiece{Rect{T, S}, Poly2::constant(1)}}}, st};
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  long integer(long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }
  Rational rat(long k = 3) { return Rational(integer(-4 * k, 4 * k), 4); }
  Rational nonzero() {
    Rational r = 0;
    while (r == 0) r = rat();
    return r;
  }
  // Piecewise polynomial on [0,4] with half-integer breakpoints.
  PieceFn piecewise() {
    std::vector<Piece> out;
    for (long lo = 0; lo < 8; ++lo) {
      if (integer(0, 2) == 0) continue;
      std::vector<Rational> c;
      for (long j = 0, d = integer(0, 2); j <= d; ++j) c.push_back(rat());
      out.push_back(Piece{iv(Rational(lo, 2), Rational(lo + 1, 2)), Atom(Poly1(c))});
    }
    return PieceFn(out);
  }
};

bool yes(const Verdict& v) { return v.holds == Holds::Yes; }
bool no(const Verdict& v) { return v.holds == Holds::No; }

}  // namespace

TEST(Prop1, Examples) {
  EXPECT_TRUE(yes(check_prop1(1, F({0, 0, 1}))));
  const Verdict v = check_prop1(2, F({0, 0, 1}));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_TRUE(yes(check_prop1(Rational(-7, 3), F({0, 1}))));
}

TEST(Prop2, Examples) {
  EXPECT_TRUE(yes(check_prop2(bilinear(Rational(-1, 2), 1, 0), F({0, 1, 1}))));
  EXPECT_TRUE(yes(check_prop2(bilinear(1, 0, 0), F({0, 0, 1}))));
  const Verdict v = check_prop2(bilinear(1, 0, 0, 0, 2), F({0, 0, 1}));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness && v.witness->region);
  EXPECT_GT(v.witness->region->measure(), 0);
  EXPECT_EQ(check_prop2(KernelSpec{GridKernel{{0, 1}, {0, 1}, {{1, 1}, {1, 1}}}, Strip{iv(0, 1), 0, 1}}, F({0, 1})).holds,
            Holds::Undecidable);
}

TEST(Lemma1, Examples) {
  const PieceFn f = PieceFn::on(iv(0, 2), Atom(Poly1({1, 1})));
  EXPECT_TRUE(yes(lemma1_decide(f, iv(0, 2), f, iv(0, 2))));
  const Verdict v = lemma1_decide(PieceFn::indicator(iv(0, 2)), iv(0, 2), PieceFn::indicator(iv(1, 3)), iv(1, 3));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness);
  EXPECT_NE(v.witness->detail.find("[0,1]"), std::string::npos);
  EXPECT_TRUE(yes(lemma1_decide(PieceFn::indicator(iv(1, 2)), iv(0, 2), PieceFn::indicator(iv(1, 2)), iv(1, 2))));
}

TEST(Lemma1, YesImpliesEqualIntegrals) {
  Gen g(41);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const PieceFn f = g.piecewise();
    const Interval I1 = iv(0, 4), I2 = iv(Rational(g.integer(0, 4), 2), 4);
    // Either g = f (yes only when f vanishes outside I2) or a random function.
    const PieceFn h = g.integer(0, 1) ? piece_restrict(f, I2) : g.piecewise();
    if (!yes(lemma1_decide(f, I1, h, I2))) continue;
    ++checked;
    for (int k = 0; k < 50; ++k) {
      const PieceFn x = g.piecewise();
      EXPECT_EQ(piece_integral(piece_mul(f, x), I1).exact(), piece_integral(piece_mul(h, x), I2).exact());
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(IntMult, Examples) {
  const PieceFn five = PieceFn::on(iv(0, 2), Atom(5));
  EXPECT_TRUE(yes(check_int_mult(bilinear(-1, 1, 0, 0, 2), five, F({0, 1, 1}))));
  const Verdict v = check_int_mult(bilinear(Rational(-9, 10), 1, 0, 0, 2), five, F({0, 1, 1}));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness && v.witness->region);
  EXPECT_EQ(v.witness->region->measure(), 4);
  EXPECT_TRUE(yes(check_int_mult(bilinear(0, 0, 0, 0, 2), five, F({0, 1, 1}))));
}

TEST(IntMult, DeltaZeroTermRejects) {
  const PieceFn five = PieceFn::on(iv(0, 2), Atom(5));
  const Verdict v = check_int_mult(bilinear(-1, 1, 0, 0, 2), five, F({1, 1, 1}));
  EXPECT_TRUE(no(v));
}

TEST(Cor2, ClassifyExamples) {
  const Poly1 b0 = Poly1::constant(3);
  const Cor2Result c1 = cor2_classify(2, 1, -1, b0, 1, 0, 0, 1);
  EXPECT_EQ(c1.tag, CaseTag::Case1);
  EXPECT_TRUE(yes(c1.verdict));
  const Cor2Result c2 = cor2_classify(-1, 1, 0, b0, 1, 1, 0, 2);
  EXPECT_EQ(c2.tag, CaseTag::Case2);
  EXPECT_TRUE(yes(c2.verdict));
  const Cor2Result c6 = cor2_classify(1, 0, 0, b0, 0, 1, 0, 1);
  EXPECT_EQ(c6.tag, CaseTag::Case6);
  EXPECT_TRUE(yes(c6.verdict));
}

TEST(Cor2, DegenerateAndInapplicable) {
  EXPECT_EQ(cor2_classify(0, 0, 0, Poly1::constant(1), 1, 1, 0, 1).tag, CaseTag::DegenerateAZero);
  EXPECT_EQ(cor2_classify(1, 0, 0, Poly1(), 0, 1, 0, 1).tag, CaseTag::DegenerateBZero);
  EXPECT_EQ(cor2_classify(1, 0, 0, Poly1({0, 1}), 0, 1, 0, 1).tag, CaseTag::NotApplicable);
  const Cor2Result bad = cor2_classify(Rational(-9, 10), 1, 0, Poly1::constant(1), 1, 1, 0, 2);
  EXPECT_EQ(bad.tag, CaseTag::NoSolution);
  EXPECT_TRUE(no(bad.verdict));
}

TEST(Cor2, SolveExamples) {
  EXPECT_EQ(cor2_solve_a0(1, 1, 1, 0, 0, 2).a0, Rational(-1));
  EXPECT_EQ(cor2_solve_a0(0, 1, 0, 0, 0, 1).a0, Rational(1));
  const Cor2Solution s5 = cor2_solve_a0(0, 1, 0, 1, 0, 1);
  EXPECT_EQ(s5.tag, CaseTag::Case5);
  EXPECT_EQ(s5.a0, Rational(1, 2));
  EXPECT_TRUE(yes(check_int_mult(bilinear(*s5.a0, 0, 1), PieceFn::on(iv(0, 1), Atom(1)), F({0, 0, 1}))));
  EXPECT_TRUE(cor2_solve_a0(1, 0, 3, 4, 0, 1).free);
  EXPECT_FALSE(cor2_solve_a0(2, 1, 1, 1, 0, 1).a0.has_value());
}

TEST(Cor2, SolvedA0HoldsAndPerturbationBreaks) {
  Gen g(42);
  int solved = 0;
  for (int i = 0; i < 300; ++i) {
    const Rational d1 = g.rat(), d2 = g.nonzero();
    const bool use_a1 = g.integer(0, 1) == 1;
    const Rational a1 = use_a1 ? g.nonzero() : Rational(0), c1 = use_a1 ? Rational(0) : g.rat();
    const Rational alpha = g.rat(), beta = alpha + Rational(g.integer(1, 8), 2);
    const Cor2Solution sol = cor2_solve_a0(d1, d2, a1, c1, alpha, beta);
    if (!sol.a0) continue;
    ++solved;
    const PieceFn b = PieceFn::on(iv(alpha, beta), Atom(g.nonzero()));
    const FPoly f = F({0, d1, d2});
    EXPECT_TRUE(yes(check_int_mult(bilinear(*sol.a0, a1, c1, alpha, beta), b, f)));
    const Rational eps = Rational(g.integer(1, 20), 10) * (g.integer(0, 1) ? 1 : -1);
    EXPECT_TRUE(no(check_int_mult(bilinear(*sol.a0 + eps, a1, c1, alpha, beta), b, f)));
  }
  EXPECT_GT(solved, 100);
}

TEST(Cor2, Prop2ImpliesIntMultForScalars) {
  Gen g(43);
  int hits = 0;
  for (int i = 0; i < 400; ++i) {
    const Rational alpha = 0, beta = Rational(g.integer(1, 4), 2);
    KernelSpec k = bilinear(g.rat(), g.rat(), g.rat(), alpha, beta);
    FPoly f = F({0, g.rat(), g.rat()});
    if (i % 2 == 0) {
      const Cor2Solution sol = cor2_solve_a0(f.delta(1), f.delta(2), global_poly(k).coeff(1, 0), 0, alpha, beta);
      if (sol.a0) k = bilinear(*sol.a0, global_poly(k).coeff(1, 0), 0, alpha, beta);
    }
    if (!yes(check_prop2(k, f))) continue;
    ++hits;
    for (int j = 0; j < 3; ++j)
      EXPECT_TRUE(yes(check_int_mult(k, PieceFn::on(iv(alpha, beta), Atom(g.nonzero())), f)));
  }
  EXPECT_GT(hits, 50);
}

TEST(Cor3, Examples) {
  const Strip st{iv(0, 4), 0, 1};
  const KernelSpec k = rect_kernel(st, iv(0, 2), iv(0, 1));
  const PieceFn b = PieceFn::indicator(iv(3, 4));
  EXPECT_TRUE(yes(check_cor3(k, b, F({0, 1, 1}))));
  EXPECT_TRUE(no(check_cor3(k, b, F({1, 1, 1}))));
  const Verdict v = check_cor3(rect_kernel(st, iv(3, 4), iv(0, 1)), b, F({0, 1}));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness && v.witness->region);
  EXPECT_EQ(v.witness->region->measure(), 1);
}

TEST(Cor4, Examples) {
  const Scenario e1 = example1(F({0, 2, -2}));
  const auto& sk = std::get<SeparableKernel>(as_integral(e1.A)->kernel.form);
  const PieceFn& b = as_mult(e1.B)->symbol;
  EXPECT_TRUE(yes(check_cor4(sk, e1.strip(), b, F({0, 2, -2}))));
  EXPECT_TRUE(yes(check_cor4(sk, e1.strip(), b, F({0, 1, 1, -2}))));
  EXPECT_TRUE(no(check_cor4(sk, e1.strip(), b, F({0, 1, 1}))));

  const Scenario e3 = example3(F({0, 0, 1}));
  const auto& k3 = std::get<SeparableKernel>(as_integral(e3.A)->kernel.form);
  const PieceFn& b3 = as_mult(e3.B)->symbol;
  EXPECT_TRUE(yes(check_cor4(k3, e3.strip(), b3, F({0, 0, 1}))));
  EXPECT_TRUE(no(check_cor4(k3, e3.strip(), b3, F({0, 0, 0}))));
  EXPECT_TRUE(no(check_cor4(k3, e3.strip(), b3, F({0, 0, 2}))));

  EXPECT_TRUE(yes(check_cor4(SeparableKernel{PieceFn(), PieceFn::indicator(iv(0, 1))}, e3.strip(), b3, F({0, 0, 2}))));
}

TEST(Cor4, ScaleInvarianceOfSupportVerdicts) {
  Gen g(44);
  const Strip st{iv(0, 4), 0, 2};
  for (int i = 0; i < 100; ++i) {
    const SeparableKernel sk{g.piecewise(), piece_restrict(g.piecewise(), iv(0, 2))};
    const PieceFn b = g.piecewise();
    const FPoly f = F({0, g.rat(), g.rat()});
    const Rational c = g.nonzero();
    EXPECT_EQ(check_cor4(sk, st, b, f).holds, check_cor4(sk, st, piece_scale(c, b), f).holds);
    const PieceFn far = piece_restrict(b, iv(2, 4));
    const KernelSpec k{sk, st};
    EXPECT_EQ(check_cor3(k, far, f).holds, check_cor3(k, piece_scale(c, far), f).holds);
  }
}

TEST(Prop4, Examples) {
  const Strip st{iv(-1, 2), 0, 1};
  EXPECT_TRUE(yes(check_prop4(PieceFn::indicator(iv(0, 1)), rect_kernel(st, iv(0, 1), iv(0, 1)), F({0, 0, 0, 1}))));

  const Strip st6{iv(-2, 1), 0, 1};
  const PieceFn a6 = PieceFn::on(iv(-2, 0), Atom(-1));
  EXPECT_TRUE(yes(check_prop4(a6, rect_kernel(st6, iv(-2, -1), iv(0, 1)), F({-1, 2}))));

  const Strip st5{iv(0, 3), 0, 1};
  const PieceFn two(std::vector<Piece>{{iv(0, Rational(1, 2)), Atom(1)}, {iv(Rational(1, 2), 1), Atom(-2)}});
  const KernelSpec k5 = rect_kernel(st5, iv(0, Rational(1, 3)), iv(Rational(1, 3), Rational(1, 2)));
  EXPECT_TRUE(yes(check_prop4(two, k5, F({-2, 3}))));
  const Verdict v = check_prop4(two, k5, F({-1, 3}));
  EXPECT_TRUE(no(v));
  ASSERT_TRUE(v.witness && v.witness->region);
  EXPECT_EQ(v.witness->region->measure(), Rational(1, 18));
}

TEST(Prop4, TwoLevelCatalogCases) {
  for (int c = 1; c <= 6; ++c) {
    const Example e = find_example("E5." + std::to_string(c));
    const auto* a = as_mult(e.scenario.A);
    const auto* k = as_integral(e.scenario.B);
    EXPECT_TRUE(yes(check_prop4(a->symbol, k->kernel, e.scenario.F))) << e.id;
    FPoly shifted(std::vector<Rational>{e.scenario.F.delta(0) + 1, e.scenario.F.delta(1)});
    EXPECT_TRUE(no(check_prop4(a->symbol, k->kernel, shifted))) << e.id;
  }
}

TEST(Laurent, ObstructionExamples) {
  const Laurent1 inv(std::map<int, Rational>{{-1, 1}});
  const Verdict v = check_laurent_obstruction(inv, F({0, 1, 1}), 1, 2, iv(1, 2));
  EXPECT_TRUE(yes(v));
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_FALSE(v.witness->detail.empty());
  EXPECT_TRUE(yes(check_laurent_obstruction(Laurent1(std::map<int, Rational>{{-2, 3}}), F({0, 1}), 1, 3, iv(1, 3))));
  for (const auto& e : laurent_coeff_system(inv, 0, 0, 0, F({0, 1, 1}), 1, 2)) EXPECT_TRUE(e.satisfied());
  EXPECT_EQ(check_laurent_obstruction(Laurent1(), F({0, 1}), 1, 2, iv(1, 2)).case_tag, CaseTag::DegenerateBZero);
}

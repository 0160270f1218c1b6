#pragma once

// Built-in reference scenarios. Data is pinned as published; corrected
// variants live under their own ids.

#include "covrel/operators.hpp"

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covrel {

struct Example {
  std::string id;
  Scenario scenario;
  std::optional<Rational> stated_mu;      // published value of ∫ a c, if any
  std::optional<Rational> stated_lambda;  // published value of Σ δ_j μ^{j-1}, if any
  std::vector<std::string> notes;
};

namespace catalog_detail {

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline Interval iv(const Rational& lo, const Rational& hi) { return Interval(lo, hi); }

inline PieceFn one(const Interval& I) { return PieceFn::indicator(I); }

inline PieceFn poly_on(const Interval& I, std::vector<Rational> c) { return PieceFn::on(I, Atom(Poly1(std::move(c)))); }

inline FPoly F(std::vector<Rational> d) { return FPoly(std::move(d)); }

inline Scenario base(std::string label, Interval hull, Rational alpha, Rational beta, FPoly f) {
  Scenario s;
  s.label = std::move(label);
  s.hull = hull;
  s.alpha = alpha;
  s.beta = beta;
  s.F = std::move(f);
  return s;
}

inline Scenario int_mult(std::string label, Interval hull, Rational alpha, Rational beta, FPoly f, KernelForm kernel, PieceFn b) {
  Scenario s = base(std::move(label), hull, alpha, beta, std::move(f));
  s.A = IntegralOp{KernelSpec{std::move(kernel), s.strip()}};
  s.B = MultiplicationOp{std::move(b)};
  return s;
}

inline Scenario mult_int(std::string label, Interval hull, Rational alpha, Rational beta, FPoly f, PieceFn a, KernelForm kernel) {
  Scenario s = base(std::move(label), hull, alpha, beta, std::move(f));
  s.A = MultiplicationOp{std::move(a)};
  s.B = IntegralOp{KernelSpec{std::move(kernel), s.strip()}};
  return s;
}

inline KernelForm rect_kernel(const Interval& T, const Interval& S) {
  return PiecewiseRectKernel{{RectPiece{Rect{T, S}, Poly2::constant(1)}}};
}

// Two-level symbol γ1 on [0,1/2), -γ2 on [1/2,1] with γ1 = 1, γ2 = 2 and
// F = δ0 + 3z, hull [0,3]. Each case pairs δ0 with a kernel inside its region.
inline Example two_level(int which) {
  const Rational g1 = 1, g2 = 2, d1 = 3;
  const PieceFn a(std::vector<Piece>{{iv(0, q(1, 2)), Atom(g1)}, {iv(q(1, 2), 1), Atom(-g2)}});
  struct Case {
    Rational d0;
    Interval T, S;
    std::string rule;
  };
  const std::vector<Case> cases{
      {-d1 * g1, iv(2, 3), iv(0, q(1, 2)), "delta0 = -delta1*gamma1, supp k in (R minus [0,1]) x [0,1/2]"},
      {d1 * g2, iv(2, 3), iv(q(1, 2), 1), "delta0 = delta1*gamma2, supp k in (R minus [0,1]) x [1/2,1]"},
      {g1 - d1 * g1, iv(0, q(1, 3)), iv(q(1, 3), q(1, 2)), "delta0 + delta1*gamma1 - gamma1 = 0, supp k in [0,1/2] x [0,1/2]"},
      {-d1 * g1 - g2, iv(q(1, 2), q(2, 3)), iv(0, q(1, 2)), "delta0 + delta1*gamma1 + gamma2 = 0, supp k in [1/2,1] x [0,1/2]"},
      {g1 + d1 * g2, iv(0, q(1, 3)), iv(q(2, 3), 1), "delta0 - delta1*gamma2 - gamma1 = 0, supp k in [0,1/2] x [1/2,1]"},
      {-g2 + d1 * g2, iv(q(2, 3), 1), iv(q(2, 3), 1), "delta0 - delta1*gamma2 + gamma2 = 0, supp k in [1/2,1] x [1/2,1]"},
  };
  const Case& c = cases.at(static_cast<std::size_t>(which - 1));
  const std::string id = "E5." + std::to_string(which);
  Example e{id, mult_int(id, iv(0, 3), 0, 1, F({c.d0, d1}), a, rect_kernel(c.T, c.S)), std::nullopt, std::nullopt,
            {"case " + std::to_string(which) + ": " + c.rule, "gamma1 = 1, gamma2 = 2, delta1 = 3, delta0 = " + to_string(c.d0),
             "kernel = indicator of " + Rect{c.T, c.S}.str()}};
  if (which == 4) e.notes.push_back("published kernel interval [2/3,1/2] is inverted; [1/2,2/3] is used");
  return e;
}

}  // namespace catalog_detail

inline std::vector<std::string> example_ids() {
  return {"P1", "P2", "E1", "E2", "E2-corrected", "E3", "E4", "E5", "E5.1", "E5.2", "E5.3", "E5.4", "E5.5", "E5.6", "E6", "E7", "LAURENT"};
}

/// Example 1 with a caller-chosen F; the published F is 2z - 2z^2.
inline Scenario example1(const FPoly& f) {
  using namespace catalog_detail;
  return int_mult("E1", iv(0, 2), 0, 2, f, SeparableKernel{poly_on(iv(0, 2), {0, 2}), one(iv(0, 1))}, poly_on(iv(1, 2), {0, 0, 1}));
}

/// Indicator kernel 1_[α,β](t) on the strip, b = 1_[α,β], hull [-1,2].
inline Scenario example3(const FPoly& f) {
  using namespace catalog_detail;
  const Interval I = iv(0, 1);
  return int_mult("E3", iv(-1, 2), 0, 1, f, SeparableKernel{one(I), one(I)}, one(I));
}

inline Example find_example(const std::string& id) {
  using namespace catalog_detail;
  if (id == "P1") {
    Scenario s = mult_int("P1", iv(0, 1), 0, 1, F({0, -1, 1}), PieceFn::on(iv(0, 1), Atom(2)), BilinearKernel{1, 0, 0});
    return {id, s, std::nullopt, std::nullopt, {"A = 2I, F(z) = z^2 - z, F(2) = 2"}};
  }
  if (id == "P2") {
    Scenario s = int_mult("P2", iv(0, 1), 0, 1, F({0, 1, 1}), BilinearKernel{q(-1, 2), 1, 0}, PieceFn::on(iv(0, 1), Atom(5)));
    return {id, s, std::nullopt, std::nullopt, {"B = 5I, k = t - 1/2, k_1 = 0 so F(A) = A"}};
  }
  if (id == "E1")
    return {id, example1(F({0, 2, -2})), q(1), q(0), {"relation holds iff the deltas sum to 0"}};
  if (id == "E2" || id == "E2-corrected") {
    const bool fixed = id == "E2-corrected";
    Scenario s = int_mult(id, iv(0, 2), 0, 2, F({0, 0, 3}),
                          SeparableKernel{PieceFn::on(iv(0, 2), Atom::analytic(TrigKind::Sin, std::numbers::pi, 0.0)),
                                          one(fixed ? iv(0, 2) : iv(0, 1))},
                          poly_on(iv(1, 2), {0, 0, 1}));
    Example e{id, s, q(0), std::nullopt, {"F(z) = 3z^2"}};
    if (fixed) e.notes.push_back("variant with c = indicator of [0,2], for which mu = 0");
    return e;
  }
  if (id == "E3") return {id, example3(F({0, 0, 1})), std::nullopt, q(1), {"relation holds iff lambda = 1"}};
  if (id == "E4") {
    Scenario s = mult_int("E4", iv(-1, 2), 0, 1, F({0, 0, 1}), one(iv(0, 1)), rect_kernel(iv(0, 1), iv(0, 1)));
    return {id, s, std::nullopt, std::nullopt, {"a = indicator of [0,1], k = indicator of [0,1]^2, F(z) = z^2"}};
  }
  if (id.rfind("E5.", 0) == 0 && id.size() == 4 && id[3] >= '1' && id[3] <= '6') return two_level(id[3] - '0');
  if (id == "E6") {
    Scenario s = mult_int("E6", iv(-2, 1), 0, 1, F({-1, 2}), PieceFn::on(iv(-2, 0), Atom(-1)),
                          SeparableKernel{one(iv(-2, -1)), one(iv(0, 1))});
    return {id, s, std::nullopt, std::nullopt, {"a = -1 + indicator of [0,1], k = indicator of [-2,-1] x [0,1], F(z) = -1 + 2z"}};
  }
  if (id == "E7") {
    const PieceFn a(std::vector<Piece>{{iv(0, 1), Atom(Poly1({1, 0, 1}))}, {iv(1, 4), Atom(1)}});
    Scenario s = mult_int("E7", iv(0, 4), 0, 2, F({-1, 2}), a,
                          SeparableKernel{poly_on(iv(3, 4), {1, 0, 1}), poly_on(iv(1, 2), {1, 0, 0, 0, 1})});
    return {id, s, std::nullopt, std::nullopt, {"gamma0 = 1, delta1 = 2, delta0 = gamma0 - delta1*gamma0 = -1"}};
  }
  if (id == "LAURENT") {
    Scenario s = int_mult("LAURENT", iv(1, 2), 1, 2, F({0, 1, 1}), BilinearKernel{1, 0, 0},
                          PieceFn::on(iv(1, 2), Atom(Laurent1(std::map<int, Rational>{{-1, 1}}))));
    return {id, s, std::nullopt, std::nullopt, {"b = 1/t on [1,2]: every nonzero bilinear kernel fails"}};
  }
  std::string known;
  for (const auto& k : example_ids()) known += (known.empty() ? "" : ", ") + k;
  throw std::out_of_range("unknown example id '" + id + "'; known ids: " + known);
}

}  // namespace covrel

#pragma once

// Seeded random scenario families for checker/oracle agreement sweeps. About
// half of each family is built to satisfy the relation.

#include "covrel/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace covrel {

enum class Family { Bilinear, Separable, MultA };

inline std::optional<Family> family_from_name(const std::string& n) {
  if (n == "bilinear") return Family::Bilinear;
  if (n == "separable") return Family::Separable;
  if (n == "multA") return Family::MultA;
  return std::nullopt;
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::Bilinear: return "bilinear";
    case Family::Separable: return "separable";
    case Family::MultA: return "multA";
  }
  return "?";
}

namespace sweep_detail {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi) { return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (rng_() >> 63) != 0; }
  /// Small rational: integer in [-k, k] over 1 or 2.
  Rational small(long k = 3) { return Rational(integer(-k, k), integer(1, 2)); }
  Rational nonzero(long k = 3) {
    for (;;)
      if (Rational r = small(k); r != 0) return r;
  }
  static long quarters(const Rational& len) { return static_cast<long>(std::floor(to_double(len * 4) + 1e-9)); }
  /// Grid point lo + m/4 inside [lo, hi].
  Rational quarter(const Rational& lo, const Rational& hi) {
    return lo + Rational(integer(0, quarters(hi - lo)), 4);
  }
  /// Subinterval of [lo, hi] with quarter-grid ends and length >= 1/4.
  Interval sub(const Rational& lo, const Rational& hi) {
    Rational a = quarter(lo, hi), b = quarter(lo, hi);
    if (a > b) std::swap(a, b);
    if (b - a < Rational(1, 4)) {
      if (b + Rational(1, 4) <= hi) b = a + Rational(1, 4);
      else a = b - Rational(1, 4);
    }
    return Interval(a, b);
  }
  Poly1 poly(int max_degree) {
    std::vector<Rational> c;
    const int d = static_cast<int>(integer(0, max_degree));
    for (int i = 0; i <= d; ++i) c.push_back(small(2));
    if (Poly1(c).is_zero()) c.assign(1, nonzero());
    return Poly1(c);
  }
  /// One or two nonzero polynomial pieces inside [lo, hi].
  PieceFn piecewise(const Rational& lo, const Rational& hi, int max_degree) {
    const Interval I = sub(lo, hi);
    if (coin() || I.hi - I.lo < Rational(1, 2)) return PieceFn::on(I, Atom(poly(max_degree)));
    const Rational m = I.lo + Rational(quarters(I.hi - I.lo) / 2, 4);
    return PieceFn(std::vector<Piece>{{Interval(I.lo, m), Atom(poly(max_degree))}, {Interval(m, I.hi), Atom(poly(max_degree))}});
  }
  /// F with δ0 = 0 and degree 1..3.
  FPoly f_no_constant() {
    std::vector<Rational> d{0};
    const int n = static_cast<int>(integer(1, 3));
    for (int j = 1; j <= n; ++j) d.push_back(small(2));
    if (FPoly(d).is_zero()) d[1] = 1;
    return FPoly(d);
  }

 private:
  std::mt19937_64 rng_;
};

inline Scenario make(std::string label, Interval hull, Rational alpha, Rational beta, FPoly F) {
  Scenario s;
  s.label = std::move(label);
  s.hull = hull;
  s.alpha = alpha;
  s.beta = beta;
  s.F = std::move(F);
  return s;
}

inline Scenario bilinear(Gen& g, const std::string& label) {
  const Rational alpha = g.integer(-1, 1), beta = alpha + g.integer(1, 2);
  Scenario s;
  if (g.coin()) {
    // Planted: closed-form a0 for a random Cor. 2 case.
    const Rational d2 = g.nonzero(2), d1 = g.coin() ? Rational(1) : g.small(2);
    Rational a1 = 0, c1 = 0;
    (g.coin() ? a1 : c1) = g.nonzero();
    if (d1 != 1 && g.integer(0, 2) == 0) a1 = c1 = 0;
    const Cor2Solution sol = cor2_solve_a0(d1, d2, a1, c1, alpha, beta);
    BilinearParams p{sol.a0.value_or(g.nonzero()), a1, c1, g.nonzero(), d1, d2, alpha, beta};
    s = bilinear_scenario(p);
    s.label = label;
    return s;
  }
  s = make(label, Interval(alpha, beta), alpha, beta, g.f_no_constant());
  s.A = IntegralOp{KernelSpec{BilinearKernel{g.small(), g.small(), g.small()}, s.strip()}};
  if (g.coin()) s.B = MultiplicationOp{PieceFn::on(s.hull, Atom(g.nonzero()))};
  else s.B = MultiplicationOp{g.piecewise(alpha, beta, 1)};
  return s;
}

inline Scenario separable(Gen& g, const std::string& label) {
  const Interval hull(0, 2);
  const Rational alpha = g.coin() ? Rational(0) : Rational(1, 2), beta = g.coin() ? Rational(2) : Rational(3, 2);
  Scenario s = make(label, hull, alpha, beta, g.f_no_constant());
  const Interval Ia = g.sub(0, 2);
  const Interval Ic = g.sub(alpha, beta);
  SeparableKernel k{PieceFn::on(Ia, Atom(g.poly(1))), PieceFn::on(Ic, Atom(g.poly(1)))};
  const Scalar mu = mu_separable(k.a, k.c, alpha, beta);
  const Rational m = mu.exact();
  switch (g.integer(0, 3)) {
    case 0: {
      // λ = 1 and b constant on the hull.
      std::vector<Rational> d = s.F.deltas();
      d.resize(4, Rational(0));
      Rational rest = 0;
      for (std::size_t j = 2; j < d.size(); ++j) rest += d[j] * rpow(m, static_cast<int>(j) - 1);
      d[1] = 1 - rest;
      s.F = FPoly(d);
      s.B = MultiplicationOp{PieceFn::on(hull, Atom(g.nonzero()))};
      break;
    }
    case 1: {
      // b vanishes on supp a and on supp c.
      std::vector<Piece> pieces;
      for (const auto& gap : {Interval(0, std::min(Ia.lo, Ic.lo)), Interval(std::max(Ia.hi, Ic.hi), 2)})
        if (gap.lo < gap.hi) pieces.push_back({gap, Atom(g.poly(1))});
      s.B = MultiplicationOp{pieces.empty() ? PieceFn::on(hull, Atom(g.nonzero())) : PieceFn(pieces)};
      if (pieces.empty()) s.F = FPoly(std::vector<Rational>{0, 1});
      break;
    }
    default:
      s.B = MultiplicationOp{g.piecewise(0, 2, 2)};
  }
  s.A = IntegralOp{KernelSpec{k, s.strip()}};
  return s;
}

inline Scenario mult_a(Gen& g, const std::string& label) {
  const Interval hull(0, 2);
  const Rational alpha = 0, beta = 2;
  std::vector<Rational> d{g.small(2), g.nonzero(2)};
  if (g.coin()) d.push_back(g.small(1));
  Scenario s = make(label, hull, alpha, beta, FPoly(d));
  // Piecewise-constant symbol on quarter cells [0,1/2], [1/2,1], [1,3/2], [3/2,2].
  std::vector<Rational> v(4);
  for (auto& x : v) x = g.small(2);
  const bool planted = g.coin();
  if (planted) v[static_cast<std::size_t>(g.integer(0, 3))] = s.F(v[static_cast<std::size_t>(g.integer(0, 3))]);
  const bool sloped = g.integer(0, 4) == 0;  // last cell carries a nonconstant atom
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < 4; ++i) {
    const Interval span(Rational(static_cast<long>(i), 2), Rational(static_cast<long>(i) + 1, 2));
    if (sloped && i == 3) pieces.push_back({span, Atom(Poly1({g.small(1), g.nonzero(2)}))});
    else if (v[i] != 0) pieces.push_back({span, Atom(v[i])});
  }
  s.A = MultiplicationOp{PieceFn(pieces)};
  const PieceFn& a = std::get<MultiplicationOp>(s.A).symbol;

  PiecewiseRectKernel k;
  auto cell = [](std::size_t i) { return Interval(Rational(static_cast<long>(i), 2), Rational(static_cast<long>(i) + 1, 2)); };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const Atom* ai = a.atom_on(cell(i));
      const Atom* aj = a.atom_on(cell(j));
      const auto ci = ai ? ai->constant_value() : std::optional<Rational>(0);
      const auto cj = aj ? aj->constant_value() : std::optional<Rational>(0);
      const bool match = ci && cj && *ci == s.F(*cj);
      if ((planted && match) || (!planted && g.integer(0, 5) == 0))
        k.pieces.push_back(RectPiece{Rect{cell(i), cell(j)}, Poly2::constant(g.nonzero())});
    }
  if (k.pieces.empty()) k.pieces.push_back(RectPiece{Rect{g.sub(0, 2), g.sub(0, 2)}, Poly2::constant(1)});
  s.B = IntegralOp{KernelSpec{k, s.strip()}};
  return s;
}

}  // namespace sweep_detail

inline Scenario sweep_scenario(Family f, std::uint64_t seed, int index) {
  sweep_detail::Gen g(seed * 1000003ULL + static_cast<std::uint64_t>(index));
  const std::string label = to_string(f) + "#" + std::to_string(index);
  switch (f) {
    case Family::Bilinear: return sweep_detail::bilinear(g, label);
    case Family::Separable: return sweep_detail::separable(g, label);
    case Family::MultA: return sweep_detail::mult_a(g, label);
  }
  return {};
}

struct SweepRow {
  std::string label;
  Holds holds;
  double residual;
  Agreement agreement;
};

struct SweepSummary {
  Family family;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<SweepRow> rows;
  int agree = 0, disagree = 0, unavailable = 0;
  int yes = 0, no = 0, undecidable = 0;

  ExitCode exit_code() const { return disagree > 0 ? ExitCode::Disagree : ExitCode::AgreeYes; }
};

inline SweepSummary run_sweep(Family f, int count, std::uint64_t seed) {
  if (count < 1) throw InputError("sweep-count", "--count must be >= 1");
  SweepSummary sum{f, count, seed, {}};
  for (int i = 0; i < count; ++i) {
    const Scenario s = sweep_scenario(f, seed, i);
    const Report r = verify(s);
    sum.rows.push_back({s.label, r.symbolic.holds, r.numeric.residual, r.agreement});
    (r.agreement == Agreement::Agree ? sum.agree : r.agreement == Agreement::Disagree ? sum.disagree : sum.unavailable)++;
    (r.symbolic.holds == Holds::Yes ? sum.yes : r.symbolic.holds == Holds::No ? sum.no : sum.undecidable)++;
  }
  return sum;
}

inline Json sweep_json(const SweepSummary& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    if (r.agreement != Agreement::Agree)
      rows.push_back(Json{{"label", r.label}, {"holds", to_string(r.holds)}, {"residual", r.residual}, {"agreement", to_string(r.agreement)}});
  Json j;
  j["family"] = to_string(s.family);
  j["count"] = s.count;
  j["seed"] = s.seed;
  j["verdicts"] = Json{{"yes", s.yes}, {"no", s.no}, {"undecidable", s.undecidable}};
  j["agreement"] = Json{{"agree", s.agree}, {"disagree", s.disagree}, {"symbolic-unavailable", s.unavailable}};
  j["exceptions"] = rows;
  j["exit_code"] = static_cast<int>(s.exit_code());
  return j;
}

inline std::string sweep_pretty(const SweepSummary& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %6s %6s %6s %6s | %6s %9s %12s\n", "family", "count", "yes", "no", "undec", "agree", "disagree",
                "unavailable");
  std::string out = buf;
  std::snprintf(buf, sizeof buf, "%-10s %6d %6d %6d %6d | %6d %9d %12d\n", to_string(s.family).c_str(), s.count, s.yes, s.no,
                s.undecidable, s.agree, s.disagree, s.unavailable);
  out += buf;
  for (const auto& r : s.rows)
    if (r.agreement != Agreement::Agree)
      out += "  " + r.label + ": " + to_string(r.holds) + ", residual " + fmt_residual(r.residual) + ", " + to_string(r.agreement) + "\n";
  return out;
}

}  // namespace covrel

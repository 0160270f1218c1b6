#pragma once

// Symbolic deciders for the covariance relation AB = BF(A).

#include "covrel/kernel_calculus.hpp"
#include "covrel/laurent.hpp"

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covrel {

// ---------------------------------------------------------------------------
// Cell-level zero tests
// ---------------------------------------------------------------------------

namespace detail {

inline bool atom_nonzero(const Atom* a) { return a && !a->is_zero(); }

inline std::optional<Rational> cell_constant(const Atom* a) {
  if (!a) return Rational(0);
  return a->constant_value();
}

// λ p(t) - q(s) vanishes on an open rectangle iff λp and q are the same
// constant. λ may be a float carried from an analytic integral.
inline bool separable_difference_zero(const Scalar& lambda, const Atom* p, const Atom* q) {
  if (lambda.is_zero()) return !atom_nonzero(q);
  auto cp = cell_constant(p);
  auto cq = cell_constant(q);
  if (!cp || !cq) return false;
  return (lambda * Scalar(*cp)).equals(Scalar(*cq));
}

inline std::string scalar_text(const Scalar& s) { return s.str(); }

// Grid for a t-function on the hull and an s-function on [alpha, beta].
inline std::vector<Interval> t_cells(const std::vector<Rational>& breaks, const Strip& st) {
  return cells_of(clip_breaks(merge_breaks(breaks, {st.alpha, st.beta}), st.hull));
}
inline std::vector<Interval> s_cells(const std::vector<Rational>& breaks, const Strip& st) {
  return cells_of(clip_breaks(breaks, st.s_range()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Props 1 and 2, Lemma 1
// ---------------------------------------------------------------------------

/// A = alpha·I: the relation holds iff F(alpha) = alpha.
inline Verdict check_prop1(const Rational& alpha, const FPoly& F) {
  const Rational v = F(alpha);
  if (v == alpha) return verdict_yes({"F(" + to_string(alpha) + ") = " + to_string(v)});
  return verdict_no(Witness{"equation", std::nullopt, "F(" + to_string(alpha) + ") = " + to_string(v) + " != " + to_string(alpha)});
}

/// B = beta·I with beta != 0: the relation holds iff F(A) = A.
inline Verdict check_prop2(const KernelSpec& k, const FPoly& F) {
  if (k.is_grid()) return verdict_undecidable("grid-sampled kernel: symbolic check unavailable");
  if (F.delta(0) != 0)
    return verdict_no(Witness{"equation", std::nullopt, "delta_0 = " + to_string(F.delta(0)) + " != 0, so F(A) has a multiple of I"});
  const Strip& st = k.strip;
  try {
    if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) {
      const Scalar mu = mu_separable(sk->a, sk->c, st.alpha, st.beta);
      const Scalar lambda = shifted_F(F, sk->scale * mu);
      if (lambda.equals(Scalar(1))) return verdict_yes({"lambda = " + lambda.str()});
      Verdict v = verdict_from_region(kernel_support(k), "F_n(k) - k = (lambda - 1) k with lambda = " + lambda.str());
      return v;
    }
    const CellKernel K = detail::cells_or_throw(k);
    const CellKernel D = fn_of_cells(K, F) - K;
    return verdict_from_region(D.support(), "F_n(k) - k is nonzero");
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

/// ∫ f x over [α1,β1] equals ∫ g x over [α2,β2] for every x iff f = g on
/// the overlap G and each vanishes outside G.
inline Verdict lemma1_decide(const PieceFn& f, const Interval& I1, const PieceFn& g, const Interval& I2) {
  auto nonnull = [](const PieceFn& h, const Interval& span) {
    for (const auto& piece : piece_support(piece_restrict(h, span)))
      if (piece.lo < piece.hi) return std::optional<Interval>(piece);
    return std::optional<Interval>();
  };
  auto outside = [](const Interval& I, const std::optional<Interval>& G) {
    std::vector<Interval> r;
    if (!G) return std::vector<Interval>{I};
    if (I.lo < G->lo) r.emplace_back(I.lo, G->lo);
    if (G->hi < I.hi) r.emplace_back(G->hi, I.hi);
    return r;
  };
  try {
    const auto G = intersect(I1, I2);
    if (G && G->lo < G->hi)
      if (auto bad = nonnull(piece_sub(f, g), *G))
        return verdict_no(Witness{"interval", std::nullopt, "f != g on " + bad->str() + " inside G = " + G->str()});
    for (const auto& part : outside(I1, G))
      if (auto bad = nonnull(f, part)) return verdict_no(Witness{"interval", std::nullopt, "f != 0 on " + bad->str() + " outside G"});
    for (const auto& part : outside(I2, G))
      if (auto bad = nonnull(g, part)) return verdict_no(Witness{"interval", std::nullopt, "g != 0 on " + bad->str() + " outside G"});
    return verdict_yes();
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

// ---------------------------------------------------------------------------
// Integral A, multiplication B
// ---------------------------------------------------------------------------

namespace detail {

inline Verdict delta0_term(const FPoly& F) {
  Verdict v = verdict_no(Witness{"multiplication-term", std::nullopt,
                                 "delta_0 * b != 0: delta_0 = " + to_string(F.delta(0)) + ", b nonzero on a set of positive measure"});
  v.notes.push_back("design-decision reduction: a nonzero multiplication term cannot equal an integral operator");
  return v;
}

inline bool symbol_zero(const PieceFn& b) { return piece_support(b).empty() || support_measure(piece_support(b)) == 0; }

}  // namespace detail

/// Separable kernel σ a(t)c(s): the relation holds iff
/// supp(a ⊗ c) ∩ supp(λ b(t) - b(s)) is null, λ = Σ δ_j (σμ)^{j-1}.
inline Verdict check_cor4(const SeparableKernel& k, const Strip& st, const PieceFn& b, const FPoly& F) {
  try {
    if (F.delta(0) != 0 && !detail::symbol_zero(b)) return detail::delta0_term(F);
    if (k.scale.is_zero()) return verdict_yes({"A = 0"});
    const Scalar mu = mu_separable(k.a, k.c, st.alpha, st.beta);
    const Scalar lambda = shifted_F(F, k.scale * mu);
    std::vector<Rect> bad;
    for (const auto& T : detail::t_cells(merge_breaks(k.a.breakpoints(), b.breakpoints()), st)) {
      const Atom* aT = k.a.atom_on(T);
      if (!detail::atom_nonzero(aT)) continue;
      for (const auto& S : detail::s_cells(merge_breaks(k.c.breakpoints(), b.breakpoints()), st)) {
        if (!detail::atom_nonzero(k.c.atom_on(S))) continue;
        if (!detail::separable_difference_zero(lambda, b.atom_on(T), b.atom_on(S))) bad.push_back(Rect{T, S});
      }
    }
    Verdict v = verdict_from_region(RectRegion::from_disjoint(std::move(bad)), "a(t)c(s)(lambda b(t) - b(s)) != 0");
    v.notes.push_back("mu = " + mu.str());
    v.notes.push_back("lambda = " + lambda.str());
    return v;
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

/// b(t) F_n(k)(t,s) = k(t,s) b(s) a.e. on hull × [alpha, beta], plus
/// δ_0·b = 0 when δ_0 != 0.
inline Verdict check_int_mult(const KernelSpec& k, const PieceFn& b, const FPoly& F) {
  if (k.is_grid()) return verdict_undecidable("grid-sampled kernel: symbolic check unavailable");
  const Strip& st = k.strip;
  try {
    if (detail::symbol_zero(b)) {
      Verdict v = verdict_yes({"B = 0: both sides vanish"});
      v.case_tag = CaseTag::DegenerateBZero;
      return v;
    }
    if (kernel_support(k).measure() == 0) {
      Verdict v = F.delta(0) == 0 ? verdict_yes({"A = 0: both sides vanish"}) : detail::delta0_term(F);
      v.case_tag = CaseTag::DegenerateAZero;
      return v;
    }
    if (F.delta(0) != 0) return detail::delta0_term(F);
    if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) return check_cor4(*sk, st, b, F);

    const std::vector<Rational> bb = b.breakpoints();
    const CellKernel K0 = detail::cells_or_throw(k);
    const CellKernel K = K0.refined(bb, bb);
    const CellKernel Fn = fn_of_cells(K0, F).refined(K.t_breaks(), K.s_breaks());
    const CellKernel Kr = K.refined(Fn.t_breaks(), Fn.s_breaks());
    std::vector<Rect> bad;
    bool undecided = false;
    for (std::size_t i = 0; i < Fn.nt(); ++i)
      for (std::size_t j = 0; j < Fn.ns(); ++j) {
        const Interval T = Fn.t_cell(i), S = Fn.s_cell(j);
        const Poly2& P = Fn.cell(i, j);
        const Poly2& Q = Kr.cell(i, j);
        const Atom* bT = b.atom_on(T);
        const Atom* bS = b.atom_on(S);
        bool zero;
        if ((!bT || bT->is_exact()) && (!bS || bS->is_exact())) {
          auto [mT, pT] = bT ? bT->exact_part().split() : std::pair<int, Poly1>{0, Poly1()};
          auto [mS, pS] = bS ? bS->exact_part().split() : std::pair<int, Poly1>{0, Poly1()};
          // Clear denominators: multiply through by t^mT s^mS, nonzero off 0.
          const Poly2 lhs = Poly2::in_t(pT) * P * Poly2::in_s(Poly1::monomial(mS));
          const Poly2 rhs = Q * Poly2::in_t(Poly1::monomial(mT)) * Poly2::in_s(pS);
          zero = (lhs - rhs).is_zero();
        } else {
          const bool bTz = !detail::atom_nonzero(bT), bSz = !detail::atom_nonzero(bS);
          if (P.is_zero() || bTz) zero = Q.is_zero() || bSz;
          else if (Q.is_zero() || bSz) zero = false;
          else {
            undecided = true;
            continue;
          }
        }
        if (!zero) bad.push_back(Rect{T, S});
      }
    RectRegion region = RectRegion::from_disjoint(std::move(bad));
    if (undecided && region.measure() == 0)
      return verdict_undecidable("analytic symbol against a nonzero kernel: identity testing is numeric-only");
    return verdict_from_region(region, "b(t) F_n(k) - k b(s) != 0");
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

/// supp b ∩ [alpha, beta] null: the relation holds iff δ_0 = 0 and
/// (supp b × R) ∩ supp F_n(k) is null.
inline Verdict check_cor3(const KernelSpec& k, const PieceFn& b, const FPoly& F) {
  if (k.is_grid()) return verdict_undecidable("grid-sampled kernel: symbolic check unavailable");
  const Strip& st = k.strip;
  try {
    const auto supp = piece_support(b);
    std::vector<Interval> meet;
    for (const auto& I : supp)
      if (auto c = intersect(I, st.s_range()); c && c->lo < c->hi) meet.push_back(*c);
    if (!meet.empty()) {
      Verdict v = verdict_undecidable("hypothesis fails: supp b meets [alpha,beta] in " + meet.front().str());
      v.case_tag = CaseTag::NotApplicable;
      return v;
    }
    if (supp.empty()) {
      Verdict v = verdict_yes({"B = 0"});
      v.case_tag = CaseTag::DegenerateBZero;
      return v;
    }
    if (F.delta(0) != 0)
      return verdict_no(Witness{"equation", std::nullopt, "delta_0 = " + to_string(F.delta(0)) + " != 0 while b has positive-measure support"});
    std::vector<Rect> band;
    for (const auto& I : supp) band.push_back(Rect{I, st.s_range()});
    const RectRegion region = region_intersect(RectRegion::from_disjoint(std::move(band)), kernel_support(fn_of_kernel(k, F)));
    return verdict_from_region(region, "b(t) F_n(k)(t,s) != 0");
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

// ---------------------------------------------------------------------------
// Multiplication A, integral B
// ---------------------------------------------------------------------------

/// The relation holds iff supp(a(t) - F(a(s))) ∩ supp k is null.
inline Verdict check_prop4(const PieceFn& a, const KernelSpec& k, const FPoly& F) {
  if (k.is_grid()) return verdict_undecidable("grid-sampled kernel: symbolic check unavailable");
  const Strip& st = k.strip;
  try {
    const PieceFn Fa = f_of_symbol(a, F, st.hull);
    std::vector<Rect> diff;
    for (const auto& T : detail::t_cells(a.breakpoints(), st))
      for (const auto& S : detail::s_cells(Fa.breakpoints(), st))
        if (!detail::separable_difference_zero(Scalar(1), a.atom_on(T), Fa.atom_on(S))) diff.push_back(Rect{T, S});
    const RectRegion region = region_intersect(RectRegion::from_disjoint(std::move(diff)), kernel_support(k));
    return verdict_from_region(region, "k(t,s)(a(t) - F(a(s))) != 0");
  } catch (const SymbolicUnavailable& e) {
    return verdict_undecidable(e.what());
  }
}

// ---------------------------------------------------------------------------
// Bilinear kernel with constant b
// ---------------------------------------------------------------------------

struct Cor2Result {
  CaseTag tag = CaseTag::NotApplicable;
  Verdict verdict;
  std::string identity;  // the case identity that was checked
};

struct Cor2Solution {
  CaseTag tag = CaseTag::NoSolution;
  std::optional<Rational> a0;  // set when the case pins a0
  bool free = false;           // Case1: any a0
};

/// Closed-form a0 for F(z) = δ1 z + δ2 z^2, constant b and k = a0 + a1 t + c1 s.
inline Cor2Solution cor2_solve_a0(const Rational& d1, const Rational& d2, const Rational& a1, const Rational& c1,
                                  const Rational& alpha, const Rational& beta) {
  const Rational L = beta - alpha;
  if (d2 == 0) {
    if (d1 == 1) return {CaseTag::Case1, std::nullopt, true};
    return {CaseTag::NoSolution, std::nullopt, false};
  }
  if (a1 != 0 && c1 != 0) return {CaseTag::NoSolution, std::nullopt, false};
  if (d1 == 1) {
    if (a1 != 0) return {CaseTag::Case2, Rational(-(beta + alpha) / 2 * a1), false};
    if (c1 != 0) return {CaseTag::Case3, Rational(-(beta + alpha) / 2 * c1), false};
    return {CaseTag::DegenerateAZero, std::nullopt, false};
  }
  const Rational sq = beta * beta - alpha * alpha;
  if (a1 != 0) return {CaseTag::Case4, Rational((2 - 2 * d1 - d2 * sq * a1) / (2 * d2 * L)), false};
  if (c1 != 0) return {CaseTag::Case5, Rational((2 - 2 * d1 - d2 * sq * c1) / (2 * d2 * L)), false};
  return {CaseTag::Case6, Rational((1 - d1) / (d2 * L)), false};
}

/// Tags the guard pattern and decides the relation by the exact identity
/// b(t)(δ1 k + δ2 k_1) = k b(s).
inline Cor2Result cor2_classify(const Rational& a0, const Rational& a1, const Rational& c1, const Poly1& b,
                                const Rational& d1, const Rational& d2, const Rational& alpha, const Rational& beta) {
  Cor2Result r;
  const Poly2 k = Poly2::bilinear(a0, a1, c1);
  const Poly2 k1 = nu_poly(bilinear_nu(a0, a1, c1, alpha, beta));
  const Poly2 defect = Poly2::in_t(b) * (d1 * k + d2 * k1) - k * Poly2::in_s(b);
  const Rect strip{Interval(alpha, beta), Interval(alpha, beta)};
  r.verdict = defect.is_zero()
                  ? verdict_yes()
                  : verdict_no(Witness{"region", RectRegion::from_disjoint({strip}), "b(t)F_2(k) - k b(s) is a nonzero polynomial"});

  if (b.is_zero()) {
    r.tag = CaseTag::DegenerateBZero;
    r.identity = "b = 0";
  } else if (b.degree() > 0) {
    r.tag = CaseTag::NotApplicable;
    r.identity = "b is not constant";
  } else if (k.is_zero()) {
    r.tag = CaseTag::DegenerateAZero;
    r.identity = "k = 0";
  } else {
    const Cor2Solution sol = cor2_solve_a0(d1, d2, a1, c1, alpha, beta);
    r.tag = sol.tag;
    if (sol.free) {
      r.identity = "delta2 = 0, delta1 = 1: F is the identity, any a0, a1, c1";
      r.verdict.notes.push_back("trivial case: F(z) = z, so AB = BA with B a multiple of I");
    } else if (sol.a0) {
      r.identity = "a0 = " + to_string(*sol.a0);
      if (a0 != *sol.a0) r.tag = CaseTag::NoSolution;
    } else if (sol.tag == CaseTag::DegenerateAZero) {
      r.identity = "delta2 != 0, delta1 = 1, a1 = c1 = 0 forces a0 = 0, i.e. A = 0";
    } else if (d2 == 0) {
      r.identity = "delta2 = 0 requires delta1 = 1 for nonzero k";
    } else {
      r.identity = "delta2 != 0 requires a1 * c1 = 0";
    }
  }
  r.verdict.case_tag = r.tag;
  return r;
}

// ---------------------------------------------------------------------------
// Laurent symbol
// ---------------------------------------------------------------------------

/// Confirms that only the zero bilinear kernel satisfies the coefficient
/// system for a Laurent symbol. The derivation chain is the witness.
inline Verdict check_laurent_obstruction(const Laurent1& b, const FPoly& F, const Rational& alpha, const Rational& beta,
                                         const Interval& hull) {
  if (b.is_zero()) {
    Verdict v = verdict_yes({"B = 0"});
    v.case_tag = CaseTag::DegenerateBZero;
    return v;
  }
  if (hull.contains_zero()) throw std::domain_error("laurent-contains-zero: hull " + hull.str());
  const auto eqs = laurent_coeff_system(b, 0, 0, 0, F, alpha, beta);
  std::array<bool, 3> zero{false, false, false};
  std::vector<std::string> chain;
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& e : eqs) {
      const SymPoly reduced = e.expr.with_zeros(zero);
      if (auto v = reduced.single_variable_monomial(); v && !zero[static_cast<std::size_t>(*v)]) {
        zero[static_cast<std::size_t>(*v)] = true;
        chain.push_back(e.str() + " => " + SymPoly::kNames[static_cast<std::size_t>(*v)] + " = 0");
        progress = true;
      }
    }
  }
  std::string derivation;
  for (const auto& step : chain) derivation += (derivation.empty() ? "" : "; ") + step;
  if (zero[0] && zero[1] && zero[2]) {
    Verdict v = verdict_yes({"obstruction confirmed: a0 = a1 = c1 = 0 is forced"});
    v.witness = Witness{"derivation", std::nullopt, derivation};
    return v;
  }
  std::string free;
  for (std::size_t i = 0; i < 3; ++i)
    if (!zero[i]) free += std::string(free.empty() ? "" : ", ") + SymPoly::kNames[i];
  return verdict_no(Witness{"derivation", std::nullopt, derivation + (derivation.empty() ? "" : "; ") + "not forced: " + free});
}

}  // namespace covrel

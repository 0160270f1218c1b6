#pragma once

// Iterated kernels, F_n(k), the separable shortcut and F applied to symbols.

#include "covrel/operators.hpp"

#include <stdexcept>
#include <string>
#include <variant>

namespace covrel {

/// Coefficients of k_1 = nu0 + nu1 t + nu2 s + nu3 ts for a bilinear k.
template <class T>
struct NuCoeffs {
  T nu0, nu1, nu2, nu3;
};

/// Generic over the coefficient ring so the same formulas serve numbers and
/// symbolic unknowns.
template <class T>
NuCoeffs<T> bilinear_nu(const T& a0, const T& a1, const T& c1, const Rational& alpha, const Rational& beta) {
  const Rational L = beta - alpha;
  const Rational M1 = (beta * beta - alpha * alpha) / 2;
  const Rational M2 = (beta * beta * beta - alpha * alpha * alpha) / 3;
  return NuCoeffs<T>{
      a0 * a0 * L + a0 * (a1 + c1) * M1 + a1 * c1 * M2,
      a1 * a1 * M1 + a1 * a0 * L,
      a0 * c1 * L + c1 * c1 * M1,
      a1 * c1 * L,
  };
}

inline Poly2 nu_poly(const NuCoeffs<Rational>& nu) { return Poly2({{nu.nu0, nu.nu2}, {nu.nu1, nu.nu3}}); }

/// mu = ∫_alpha^beta a(s) c(s) ds; exact for polynomial atoms.
inline Scalar mu_separable(const PieceFn& a, const PieceFn& c, const Rational& alpha, const Rational& beta) {
  if (!(alpha < beta)) throw std::invalid_argument("mu_separable: alpha must be < beta");
  return piece_integral(piece_mul(a, c), Interval(alpha, beta));
}

inline Scalar scalar_pow(const Scalar& x, int k) {
  Scalar r = Rational(1);
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

/// Σ_{j>=1} δ_j x^{j-1}.
inline Scalar shifted_F(const FPoly& F, const Scalar& x) {
  Scalar acc = Rational(0);
  for (int j = F.degree(); j >= 1; --j) acc = acc * x + Scalar(F.delta(j));
  return acc;
}

namespace detail {

inline void require_symbolic(const KernelSpec& k) {
  if (k.is_grid()) throw SymbolicUnavailable("symbolic-unavailable: grid-sampled kernel");
}

inline CellKernel cells_or_throw(const KernelSpec& k) {
  auto ck = CellKernel::from(k);
  if (!ck) throw SymbolicUnavailable("symbolic-unavailable: kernel has no exact cell form");
  return *ck;
}

}  // namespace detail

/// Σ_{j>=1} δ_j K_{j-1} on the tensor grid of K.
inline CellKernel fn_of_cells(const CellKernel& K, const FPoly& F) {
  CellKernel acc = Rational(0) * K;
  CellKernel power = K;
  for (int j = 1; j <= F.degree(); ++j) {
    if (F.delta(j) != 0) acc = acc + F.delta(j) * power;
    if (j < F.degree()) power = K.compose(power);
  }
  return acc;
}

inline KernelSpec iterated_kernel(const KernelSpec& k, int m) {
  if (m < 0) throw std::invalid_argument("iterated_kernel: m must be >= 0");
  detail::require_symbolic(k);
  if (m == 0) return k;
  const Strip& st = k.strip;
  if (k.is_global_polynomial()) {
    const Poly2 base = global_poly(k);
    Poly2 km = base;
    for (int i = 0; i < m; ++i) km = poly2_integrate_mid(base, km, st.alpha, st.beta);
    return KernelSpec{PolynomialKernel{km}, st};
  }
  if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    const Scalar mu = mu_separable(sk->a, sk->c, st.alpha, st.beta);
    return KernelSpec{SeparableKernel{sk->a, sk->c, sk->scale * scalar_pow(sk->scale * mu, m)}, st};
  }
  const CellKernel K = detail::cells_or_throw(k);
  CellKernel km = K;
  for (int i = 0; i < m; ++i) km = K.compose(km);
  return KernelSpec{km.to_pieces(), st};
}

/// F_n(k) = Σ_{j>=1} δ_j k_{j-1}; δ_0 is deliberately left out.
inline KernelSpec fn_of_kernel(const KernelSpec& k, const FPoly& F) {
  detail::require_symbolic(k);
  const Strip& st = k.strip;
  if (k.is_global_polynomial()) {
    const Poly2 base = global_poly(k);
    Poly2 acc, power = base;
    for (int j = 1; j <= F.degree(); ++j) {
      acc = acc + F.delta(j) * power;
      if (j < F.degree()) power = poly2_integrate_mid(base, power, st.alpha, st.beta);
    }
    return KernelSpec{PolynomialKernel{acc}, st};
  }
  if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    const Scalar mu = mu_separable(sk->a, sk->c, st.alpha, st.beta);
    return KernelSpec{SeparableKernel{sk->a, sk->c, sk->scale * shifted_F(F, sk->scale * mu)}, st};
  }
  return KernelSpec{fn_of_cells(detail::cells_or_throw(k), F).to_pieces(), st};
}

/// F∘a on the hull, with the value F(0) = δ_0 wherever a has no piece.
inline PieceFn f_of_symbol(const PieceFn& a, const FPoly& F, const Interval& hull) {
  auto apply = [&](const Atom& x) {
    Atom acc;
    for (int j = F.degree(); j >= 0; --j) acc = acc * x + Atom(F.delta(j));
    return acc;
  };
  std::vector<Piece> out;
  for (const auto& cell : cells_of(clip_breaks(a.breakpoints(), hull))) {
    const Atom* x = a.atom_on(cell);
    Atom v = x ? apply(*x) : Atom(F.delta(0));
    if (!v.is_structurally_zero()) out.push_back(Piece{cell, std::move(v)});
  }
  return PieceFn(std::move(out));
}

/// Closed support of a symbolic kernel as a rectangle union.
inline RectRegion kernel_support(const KernelSpec& k) {
  detail::require_symbolic(k);
  if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    if (sk->scale.is_zero()) return {};
    std::vector<Rect> rects;
    const Interval srange = k.strip.s_range();
    for (const auto& T : piece_support(sk->a))
      for (const auto& S0 : piece_support(sk->c))
        if (auto S = intersect(S0, srange)) rects.push_back(Rect{T, *S});
    return RectRegion::from_disjoint(std::move(rects));
  }
  return detail::cells_or_throw(k).support();
}

}  // namespace covrel

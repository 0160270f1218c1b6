#pragma once

// Kernels of integral operators on the strip hull × [alpha, beta].

#include "covrel/pieces.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace covrel {

struct Strip {
  Interval hull;
  Rational alpha;
  Rational beta;

  Interval s_range() const { return Interval(alpha, beta); }
};

/// k(t,s) = a0 + a1 t + c1 s
struct BilinearKernel {
  Rational a0, a1, c1;
};

struct PolynomialKernel {
  Poly2 poly;
};

/// k(t,s) = scale · a(t) c(s)
struct SeparableKernel {
  PieceFn a;
  PieceFn c;
  Scalar scale = Rational(1);
};

struct RectPiece {
  Rect rect;
  Poly2 poly;
};

/// Sum of polynomial patches, each supported on its closed rectangle.
struct PiecewiseRectKernel {
  std::vector<RectPiece> pieces;
};

/// Samples on a tensor grid, bilinearly interpolated; numeric tier only.
struct GridKernel {
  std::vector<double> t_nodes;
  std::vector<double> s_nodes;
  std::vector<std::vector<double>> samples;  // samples[i][j] = k(t_i, s_j)
};

using KernelForm = std::variant<BilinearKernel, PolynomialKernel, SeparableKernel, PiecewiseRectKernel, GridKernel>;

struct KernelSpec {
  KernelForm form;
  Strip strip;

  bool is_grid() const { return std::holds_alternative<GridKernel>(form); }
  bool is_separable() const { return std::holds_alternative<SeparableKernel>(form); }
  /// Bilinear or Polynomial: one polynomial over the whole strip.
  bool is_global_polynomial() const {
    return std::holds_alternative<BilinearKernel>(form) || std::holds_alternative<PolynomialKernel>(form);
  }
};

inline Poly2 global_poly(const KernelSpec& k) {
  if (auto* b = std::get_if<BilinearKernel>(&k.form)) return Poly2::bilinear(b->a0, b->a1, b->c1);
  if (auto* p = std::get_if<PolynomialKernel>(&k.form)) return p->poly;
  throw std::logic_error("kernel is not a global polynomial");
}

// ---------------------------------------------------------------------------
// CellKernel: exact piecewise-polynomial kernel on a tensor grid
// ---------------------------------------------------------------------------

/// Exact kernel on a tensor grid of the strip: t-breaks span the hull and
/// include alpha and beta, s-breaks span [alpha, beta]. Each cell carries one
/// polynomial (zero polynomial where the kernel vanishes).
class CellKernel {
 public:
  CellKernel(std::vector<Rational> tb, std::vector<Rational> sb, std::vector<Poly2> cells)
      : tb_(std::move(tb)), sb_(std::move(sb)), cells_(std::move(cells)) {
    if (tb_.size() < 2 || sb_.size() < 2) throw std::logic_error("CellKernel: need at least one cell per axis");
    if (!cells_.empty() && cells_.size() != nt() * ns()) throw std::logic_error("CellKernel: cell count mismatch");
    cells_.resize(nt() * ns());
  }

  /// Exact tensor-grid form, or nullopt for Grid kernels and separable
  /// kernels whose atoms are not polynomials.
  static std::optional<CellKernel> from(const KernelSpec& k) {
    const Strip& st = k.strip;
    const std::vector<Rational> base_t = clip_breaks({st.alpha, st.beta}, st.hull);
    const std::vector<Rational> base_s{st.alpha, st.beta};
    if (k.is_global_polynomial()) {
      CellKernel ck(base_t, base_s, {});
      ck.cells_.assign(ck.nt() * ck.ns(), global_poly(k));
      return ck;
    }
    if (auto* rk = std::get_if<PiecewiseRectKernel>(&k.form)) {
      std::vector<Rational> tb = base_t, sb = base_s;
      for (const auto& p : rk->pieces) {
        tb.push_back(p.rect.t.lo);
        tb.push_back(p.rect.t.hi);
        sb.push_back(p.rect.s.lo);
        sb.push_back(p.rect.s.hi);
      }
      tb = clip_breaks(tb, st.hull);
      sb = clip_breaks(sb, st.s_range());
      CellKernel ck(tb, sb, {});
      ck.cells_.assign(ck.nt() * ck.ns(), Poly2());
      for (std::size_t i = 0; i < ck.nt(); ++i)
        for (std::size_t j = 0; j < ck.ns(); ++j) {
          const Interval T = ck.t_cell(i), S = ck.s_cell(j);
          for (const auto& p : rk->pieces)
            if (p.rect.t.contains(T) && p.rect.s.contains(S)) ck.cells_[i * ck.ns() + j] = ck.cells_[i * ck.ns() + j] + p.poly;
        }
      return ck;
    }
    if (auto* sk = std::get_if<SeparableKernel>(&k.form)) {
      if (!sk->scale.is_exact()) return std::nullopt;
      for (const auto* f : {&sk->a, &sk->c})
        for (const auto& p : f->pieces())
          if (p.atom.kind() != Atom::Kind::Polynomial) return std::nullopt;
      const std::vector<Rational> tb = clip_breaks(merge_breaks(base_t, sk->a.breakpoints()), st.hull);
      const std::vector<Rational> sb = clip_breaks(sk->c.breakpoints(), st.s_range());
      CellKernel ck(tb, sb, {});
      ck.cells_.assign(ck.nt() * ck.ns(), Poly2());
      for (std::size_t i = 0; i < ck.nt(); ++i) {
        const Atom* a = sk->a.atom_on(ck.t_cell(i));
        if (!a) continue;
        for (std::size_t j = 0; j < ck.ns(); ++j) {
          const Atom* c = sk->c.atom_on(ck.s_cell(j));
          if (!c) continue;
          ck.cells_[i * ck.ns() + j] =
              sk->scale.exact() * (Poly2::in_t(a->exact_part().to_poly()) * Poly2::in_s(c->exact_part().to_poly()));
        }
      }
      return ck;
    }
    return std::nullopt;
  }

  std::size_t nt() const { return tb_.size() - 1; }
  std::size_t ns() const { return sb_.size() - 1; }
  const std::vector<Rational>& t_breaks() const { return tb_; }
  const std::vector<Rational>& s_breaks() const { return sb_; }
  Interval t_cell(std::size_t i) const { return Interval(tb_[i], tb_[i + 1]); }
  Interval s_cell(std::size_t j) const { return Interval(sb_[j], sb_[j + 1]); }
  const Poly2& cell(std::size_t i, std::size_t j) const { return cells_[i * ns() + j]; }

  /// Same kernel on a finer grid (new breaks are merged in).
  CellKernel refined(const std::vector<Rational>& extra_t, const std::vector<Rational>& extra_s) const {
    std::vector<Rational> tb = clip_breaks(merge_breaks(tb_, extra_t), t_cell_span());
    std::vector<Rational> sb = clip_breaks(merge_breaks(sb_, extra_s), s_cell_span());
    CellKernel out(tb, sb, std::vector<Poly2>((tb.size() - 1) * (sb.size() - 1)));
    for (std::size_t i = 0; i < out.nt(); ++i)
      for (std::size_t j = 0; j < out.ns(); ++j)
        out.cells_[i * out.ns() + j] = cell(locate(tb_, out.tb_[i]), locate(sb_, out.sb_[j]));
    return out;
  }

  /// ∫_alpha^beta this(t,τ) rhs(τ,s) dτ on the same grid; rhs must share
  /// this kernel's t and s breaks.
  CellKernel compose(const CellKernel& rhs) const {
    const Rational& alpha = sb_.front();
    const Rational& beta = sb_.back();
    const std::vector<Rational> tau = clip_breaks(merge_breaks(sb_, rhs.tb_), Interval(alpha, beta));
    CellKernel out(tb_, rhs.sb_, std::vector<Poly2>(nt() * rhs.ns()));
    for (std::size_t q = 0; q + 1 < tau.size(); ++q) {
      const Rational& u = tau[q];
      const Rational& v = tau[q + 1];
      if (!(u < v)) continue;
      const std::size_t j = locate(sb_, u);
      const std::size_t l = locate(rhs.tb_, u);
      for (std::size_t i = 0; i < nt(); ++i) {
        const Poly2& left = cell(i, j);
        if (left.is_zero()) continue;
        for (std::size_t m = 0; m < rhs.ns(); ++m) {
          const Poly2& right = rhs.cell(l, m);
          if (right.is_zero()) continue;
          out.cells_[i * out.ns() + m] = out.cells_[i * out.ns() + m] + poly2_integrate_mid(left, right, u, v);
        }
      }
    }
    return out;
  }

  friend CellKernel operator+(const CellKernel& a, const CellKernel& b) { return a.zip(b, [](const Poly2& x, const Poly2& y) { return x + y; }); }
  friend CellKernel operator-(const CellKernel& a, const CellKernel& b) { return a.zip(b, [](const Poly2& x, const Poly2& y) { return x - y; }); }
  friend CellKernel operator*(const Rational& s, const CellKernel& a) {
    CellKernel r = a;
    for (auto& c : r.cells_) c = s * c;
    return r;
  }

  bool is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Poly2& p) { return p.is_zero(); });
  }

  /// Union of cells where the polynomial is not identically zero.
  RectRegion support() const {
    std::vector<Rect> rects;
    for (std::size_t i = 0; i < nt(); ++i)
      for (std::size_t j = 0; j < ns(); ++j)
        if (!cell(i, j).is_zero()) rects.push_back(Rect{t_cell(i), s_cell(j)});
    return RectRegion::from_disjoint(std::move(rects));
  }

  /// Nonzero cells as rectangle patches.
  PiecewiseRectKernel to_pieces() const {
    PiecewiseRectKernel out;
    for (std::size_t i = 0; i < nt(); ++i)
      for (std::size_t j = 0; j < ns(); ++j)
        if (!cell(i, j).is_zero()) out.pieces.push_back(RectPiece{Rect{t_cell(i), s_cell(j)}, cell(i, j)});
    return out;
  }

 private:
  Interval t_cell_span() const { return Interval(tb_.front(), tb_.back()); }
  Interval s_cell_span() const { return Interval(sb_.front(), sb_.back()); }

  // Index of the cell [b[k], b[k+1]] with b[k] <= x < b[k+1].
  static std::size_t locate(const std::vector<Rational>& b, const Rational& x) {
    auto it = std::upper_bound(b.begin(), b.end(), x);
    std::size_t k = static_cast<std::size_t>(it - b.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, b.size() - 2);
  }

  template <class Op>
  CellKernel zip(const CellKernel& b, Op op) const {
    const CellKernel x = refined(b.tb_, b.sb_);
    const CellKernel y = b.refined(tb_, sb_);
    CellKernel r = x;
    for (std::size_t c = 0; c < r.cells_.size(); ++c) r.cells_[c] = op(x.cells_[c], y.cells_[c]);
    return r;
  }

  std::vector<Rational> tb_;
  std::vector<Rational> sb_;
  std::vector<Poly2> cells_;
};

// ---------------------------------------------------------------------------
// NumericKernel: double-precision evaluator for assembly and sampling
// ---------------------------------------------------------------------------

namespace detail {

inline double eval2(const std::vector<std::vector<double>>& c, double t, double s) {
  double acc = 0.0;
  for (auto i = c.rbegin(); i != c.rend(); ++i) {
    double row = 0.0;
    for (auto j = i->rbegin(); j != i->rend(); ++j) row = row * s + *j;
    acc = acc * t + row;
  }
  return acc;
}

}  // namespace detail

/// Double-precision evaluator of a kernel; zero for s outside [alpha, beta].
class NumericKernel {
 public:
  explicit NumericKernel(const KernelSpec& k)
      : spec_(&k), alpha_(to_double(k.strip.alpha)), beta_(to_double(k.strip.beta)) {
    if (k.is_global_polynomial()) {
      global_ = global_poly(k).to_doubles();
    } else if (auto* rk = std::get_if<PiecewiseRectKernel>(&k.form)) {
      for (const auto& p : rk->pieces)
        patches_.push_back({to_double(p.rect.t.lo), to_double(p.rect.t.hi), to_double(p.rect.s.lo),
                            to_double(p.rect.s.hi), p.poly.to_doubles()});
    }
  }

  double operator()(double t, double s) const {
    if (s < alpha_ || s > beta_) return 0.0;
    const KernelForm& f = spec_->form;
    if (!global_.empty() || spec_->is_global_polynomial()) return detail::eval2(global_, t, s);
    if (auto* sk = std::get_if<SeparableKernel>(&f)) return sk->scale.value() * sk->a.eval(t) * sk->c.eval(s);
    if (std::holds_alternative<PiecewiseRectKernel>(f)) {
      double v = 0.0;
      for (const auto& p : patches_)
        if (p.t0 <= t && t <= p.t1 && p.s0 <= s && s <= p.s1) v += detail::eval2(p.c, t, s);
      return v;
    }
    return grid_eval(std::get<GridKernel>(f), t, s);
  }

 private:
  struct Patch {
    double t0, t1, s0, s1;
    std::vector<std::vector<double>> c;
  };

  static double grid_eval(const GridKernel& g, double t, double s) {
    if (t < g.t_nodes.front() || t > g.t_nodes.back() || s < g.s_nodes.front() || s > g.s_nodes.back()) return 0.0;
    auto bracket = [](const std::vector<double>& n, double x) {
      std::size_t k = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), x) - n.begin());
      k = k == 0 ? 0 : k - 1;
      k = std::min(k, n.size() - 2);
      return std::pair{k, (x - n[k]) / (n[k + 1] - n[k])};
    };
    auto [i, u] = bracket(g.t_nodes, t);
    auto [j, v] = bracket(g.s_nodes, s);
    return (1 - u) * (1 - v) * g.samples[i][j] + u * (1 - v) * g.samples[i + 1][j] + (1 - u) * v * g.samples[i][j + 1] +
           u * v * g.samples[i + 1][j + 1];
  }

  const KernelSpec* spec_;
  double alpha_, beta_;
  std::vector<std::vector<double>> global_;
  std::vector<Patch> patches_;
};

}  // namespace covrel

#pragma once

// Operator descriptions, full problem instances, verdicts and the
// Schur-type operator norm bound.

#include "covrel/kernel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covrel {

/// F(z) = Σ δ_j z^j.
class FPoly {
 public:
  FPoly() = default;
  explicit FPoly(std::vector<Rational> deltas) : p_(std::move(deltas)) {}
  explicit FPoly(Poly1 p) : p_(std::move(p)) {}

  const Poly1& poly() const { return p_; }
  const std::vector<Rational>& deltas() const { return p_.coeffs(); }
  Rational delta(int j) const { return p_.coeff(j); }
  int degree() const { return p_.degree(); }
  bool is_zero() const { return p_.is_zero(); }
  Rational operator()(const Rational& z) const { return p_(z); }

  std::string str() const {
    std::string out;
    for (int j = 0; j <= degree(); ++j) {
      if (delta(j) == 0) continue;
      if (!out.empty()) out += " + ";
      out += "(" + to_string(delta(j)) + ")";
      if (j >= 1) out += "z";
      if (j >= 2) out += "^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
  }

 private:
  Poly1 p_;
};

struct MultiplicationOp {
  PieceFn symbol;
};

struct IntegralOp {
  KernelSpec kernel;
};

using OperatorSpec = std::variant<MultiplicationOp, IntegralOp>;

struct GridConfig {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int panels = 0;  // 0 selects the default max(8, 4 × breakpoint gaps)
  int nodes_per_panel = 6;
  std::vector<double> p_norms{1.0, 2.0, kInf};
};

struct Scenario {
  std::string label;
  Interval hull;
  Rational alpha;
  Rational beta;
  FPoly F;
  OperatorSpec A;
  OperatorSpec B;
  GridConfig grid;

  Strip strip() const { return Strip{hull, alpha, beta}; }
};

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Holds { Yes, No, Undecidable };

enum class CaseTag { Case1, Case2, Case3, Case4, Case5, Case6, NotApplicable, NoSolution, DegenerateAZero, DegenerateBZero };

inline std::string to_string(Holds h) {
  switch (h) {
    case Holds::Yes: return "yes";
    case Holds::No: return "no";
    case Holds::Undecidable: return "undecidable-symbolically";
  }
  return "?";
}

inline std::string to_string(CaseTag c) {
  static constexpr std::array<const char*, 10> names{"Case1", "Case2", "Case3", "Case4", "Case5", "Case6",
                                                     "NotApplicable", "NoSolution", "DegenerateAZero", "DegenerateBZero"};
  return names[static_cast<std::size_t>(c)];
}

/// Evidence for a negative verdict: a region of positive measure where the
/// defect lives, or a violated coefficient equation.
struct Witness {
  std::string kind;  // "region" | "equation" | "multiplication-term" | "derivation"
  std::optional<RectRegion> region;
  std::string detail;
};

struct Verdict {
  Holds holds = Holds::Undecidable;
  std::optional<CaseTag> case_tag;
  std::optional<Witness> witness;
  std::optional<double> numeric_residual;
  std::vector<std::string> notes;

  bool yes() const { return holds == Holds::Yes; }
  bool no() const { return holds == Holds::No; }
};

inline Verdict verdict_yes(std::vector<std::string> notes = {}) {
  Verdict v;
  v.holds = Holds::Yes;
  v.notes = std::move(notes);
  return v;
}

inline Verdict verdict_no(Witness w, std::vector<std::string> notes = {}) {
  Verdict v;
  v.holds = Holds::No;
  v.witness = std::move(w);
  v.notes = std::move(notes);
  return v;
}

inline Verdict verdict_undecidable(std::string why) {
  Verdict v;
  v.holds = Holds::Undecidable;
  v.notes.push_back(std::move(why));
  return v;
}

/// Yes when the region is null, otherwise no with the region as witness.
inline Verdict verdict_from_region(const RectRegion& defect, std::string what) {
  if (defect.measure() == 0) return verdict_yes();
  return verdict_no(Witness{"region", defect, std::move(what) + " on " + defect.str() + ", measure " + to_string(defect.measure())});
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Diagnostic {
  std::string code;
  std::string message;
};

/// Value of a symbol that is constant on the whole hull.
inline std::optional<Rational> constant_symbol(const PieceFn& f, const Interval& hull) {
  std::optional<Rational> value;
  Rational covered = hull.lo;
  for (const auto& p : f.pieces()) {
    auto c = intersect(p.span, hull);
    if (!c || c->lo == c->hi) continue;
    if (!p.atom.is_exact()) return std::nullopt;
    auto v = p.atom.constant_value();
    if (!v) return std::nullopt;
    if (c->lo > covered) {
      if (value && *value != 0) return std::nullopt;
      value = Rational(0);
    }
    if (value && *value != *v) return std::nullopt;
    value = *v;
    covered = std::max(covered, c->hi);
  }
  if (covered < hull.hi) {
    if (value && *value != 0) return std::nullopt;
    value = Rational(0);
  }
  return value.value_or(Rational(0));
}

inline const MultiplicationOp* as_mult(const OperatorSpec& op) { return std::get_if<MultiplicationOp>(&op); }
inline const IntegralOp* as_integral(const OperatorSpec& op) { return std::get_if<IntegralOp>(&op); }

namespace detail {

inline void validate_piecefn(const PieceFn& f, const Interval& hull, const std::string& where, std::vector<Diagnostic>& out) {
  for (const auto& p : f.pieces()) {
    if (!hull.contains(p.span))
      out.push_back({"piece-outside-hull", where + ": piece " + p.span.str() + " leaves hull " + hull.str()});
    if (p.atom.has_negative_powers() && hull.contains_zero())
      out.push_back({"laurent-contains-zero", where + ": Laurent atom on a hull containing 0"});
    for (const auto& term : p.atom.trig_terms())
      for (const auto& fac : term.factors)
        if (fac.omega == 0.0) out.push_back({"analytic-zero-frequency", where + ": analytic atom with zero frequency"});
  }
}

inline void validate_kernel(const KernelSpec& k, std::vector<Diagnostic>& out) {
  const Interval& hull = k.strip.hull;
  if (auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    validate_piecefn(sk->a, hull, "kernel.a", out);
    validate_piecefn(sk->c, hull, "kernel.c", out);
  }
  if (auto* gk = std::get_if<GridKernel>(&k.form)) {
    auto increasing = [](const std::vector<double>& v) {
      if (v.size() < 2) return false;
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i])) return false;
      return true;
    };
    if (!increasing(gk->t_nodes) || !increasing(gk->s_nodes))
      out.push_back({"grid-kernel-nodes", "grid kernel nodes must be strictly increasing with at least 2 entries"});
    bool shape_ok = gk->samples.size() == gk->t_nodes.size();
    for (const auto& row : gk->samples) shape_ok = shape_ok && row.size() == gk->s_nodes.size();
    if (!shape_ok) out.push_back({"grid-kernel-shape", "grid kernel samples must be |t_nodes| x |s_nodes|"});
  }
}

}  // namespace detail

/// Every invariant violation, as machine-readable diagnostics.
inline std::vector<Diagnostic> scenario_validate(const Scenario& s) {
  std::vector<Diagnostic> out;
  if (!(s.hull.lo < s.hull.hi)) out.push_back({"empty-hull", "hull " + s.hull.str() + " has no interior"});
  if (!(s.alpha < s.beta)) {
    out.push_back({"alpha-not-less-than-beta", "alpha=" + to_string(s.alpha) + " must be < beta=" + to_string(s.beta)});
  } else if (!(s.hull.lo <= s.alpha && s.beta <= s.hull.hi)) {
    out.push_back({"strip-outside-hull", "[alpha,beta] must lie inside the hull"});
  }
  const auto* ma = as_mult(s.A);
  const auto* mb = as_mult(s.B);
  if (!ma && !mb) out.push_back({"operator-shape", "A and B cannot both be integral operators"});
  if (ma && mb && !constant_symbol(ma->symbol, s.hull))
    out.push_back({"operator-shape", "with two multiplication operators A must be a constant (scalar) symbol"});
  for (const auto* op : {&s.A, &s.B}) {
    const std::string which = op == &s.A ? "A" : "B";
    if (const auto* m = as_mult(*op)) detail::validate_piecefn(m->symbol, s.hull, which + ".symbol", out);
    if (const auto* in = as_integral(*op)) {
      if (!(in->kernel.strip.hull == s.hull) || in->kernel.strip.alpha != s.alpha || in->kernel.strip.beta != s.beta)
        out.push_back({"kernel-strip-mismatch", which + ": kernel strip differs from the scenario strip"});
      detail::validate_kernel(in->kernel, out);
    }
  }
  if (s.grid.nodes_per_panel < 2 || s.grid.nodes_per_panel > 16)
    out.push_back({"grid-nodes-range", "nodes_per_panel must be in [2,16]"});
  if (s.grid.panels < 0) out.push_back({"grid-panels", "panels must be >= 0"});
  if (s.grid.p_norms.empty()) out.push_back({"p-norms-empty", "at least one p-norm is required"});
  for (double p : s.grid.p_norms)
    if (!(p >= 1.0)) out.push_back({"p-norm-below-one", "p-norms must be >= 1"});
  return out;
}

// ---------------------------------------------------------------------------
// Schur-type bound
// ---------------------------------------------------------------------------

namespace detail {

inline double poly_eval_d(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline std::vector<double> poly_deriv_d(const std::vector<double>& c) {
  std::vector<double> r;
  for (std::size_t i = 1; i < c.size(); ++i) r.push_back(c[i] * static_cast<double>(i));
  return r;
}

// Real roots of c in (a, b): roots of the derivative split [a,b] into
// monotone segments, each bisected if it changes sign.
inline std::vector<double> roots_in(std::vector<double> c, double a, double b) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  std::vector<double> knots{a};
  for (double r : roots_in(poly_deriv_d(c), a, b)) knots.push_back(r);
  knots.push_back(b);
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    double lo = knots[k], hi = knots[k + 1];
    double flo = poly_eval_d(c, lo), fhi = poly_eval_d(c, hi);
    if (flo == 0.0 || fhi == 0.0 || (flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = poly_eval_d(c, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

// ∫_a^b |c(x)| dx via the antiderivative between sign changes.
inline double abs_poly_integral(const std::vector<double>& c, double a, double b) {
  std::vector<double> anti{0.0};
  for (std::size_t i = 0; i < c.size(); ++i) anti.push_back(c[i] / static_cast<double>(i + 1));
  std::vector<double> knots{a};
  for (double r : roots_in(c, a, b)) knots.push_back(r);
  knots.push_back(b);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k)
    total += std::abs(poly_eval_d(anti, knots[k + 1]) - poly_eval_d(anti, knots[k]));
  return total;
}

// Composite Gauss–Legendre fallback for non-polynomial atoms.
template <class Fn>
double abs_integral_numeric(Fn f, double a, double b, int panels = 256) {
  static constexpr std::array<double, 5> x{0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t q = 0; q < x.size(); ++q) total += w[q] * std::abs(f(mid + 0.5 * h * x[q])) * 0.5 * h;
  }
  return total;
}

inline double atom_abs_integral(const Atom& atom, const Interval& span) {
  const double a = to_double(span.lo), b = to_double(span.hi);
  if (atom.kind() == Atom::Kind::Polynomial) return abs_poly_integral(atom.exact_part().to_poly().to_doubles(), a, b);
  return abs_integral_numeric([&](double t) { return atom.eval(t); }, a, b);
}

constexpr int kSupSamples = 256;

inline std::vector<double> sample_points(const Interval& span) {
  const double a = to_double(span.lo), b = to_double(span.hi);
  std::vector<double> r;
  for (int i = 0; i <= kSupSamples; ++i) r.push_back(a + (b - a) * i / kSupSamples);
  return r;
}

inline double piece_abs_integral(const PieceFn& f, const Interval& span) {
  double total = 0.0;
  for (const auto& p : f.pieces())
    if (auto c = intersect(p.span, span); c && c->lo < c->hi) total += atom_abs_integral(p.atom, *c);
  return total;
}

inline double piece_sup_abs(const PieceFn& f, const Interval& span) {
  double m = 0.0;
  for (const auto& p : f.pieces())
    if (auto c = intersect(p.span, span); c && c->lo < c->hi)
      for (double x : sample_points(*c)) m = std::max(m, std::abs(p.atom.eval(x)));
  return m;
}

// Restrict a bivariate polynomial to a fixed value of one variable.
inline std::vector<double> fix_s(const std::vector<std::vector<double>>& c, double s) {
  std::vector<double> r;
  for (const auto& row : c) r.push_back(poly_eval_d(row, s));
  return r;
}
inline std::vector<double> fix_t(const std::vector<std::vector<double>>& c, double t) {
  std::size_t m = c.empty() ? 0 : c[0].size();
  std::vector<double> r(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (auto i = c.rbegin(); i != c.rend(); ++i) acc = acc * t + (*i)[j];
    r[j] = acc;
  }
  return r;
}

}  // namespace detail

/// λ = max(sup_s ∫_hull |k| dt, sup_t ∫_alpha^beta |k| ds). Integrals are
/// exact (root-split antiderivatives) for polynomial pieces; suprema are
/// taken over a breakpoint-aligned sample that includes every cell endpoint.
inline double schur_bound(const KernelSpec& k) {
  const Strip& st = k.strip;
  const Interval srange = st.s_range();
  if (auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    const double sc = std::abs(sk->scale.value());
    const double col = detail::piece_abs_integral(sk->a, st.hull) * detail::piece_sup_abs(sk->c, srange);
    const double row = detail::piece_sup_abs(sk->a, st.hull) * detail::piece_abs_integral(sk->c, srange);
    return sc * std::max(col, row);
  }
  if (auto ck = CellKernel::from(k)) {
    std::vector<std::vector<std::vector<double>>> dcells(ck->nt() * ck->ns());
    for (std::size_t i = 0; i < ck->nt(); ++i)
      for (std::size_t j = 0; j < ck->ns(); ++j) dcells[i * ck->ns() + j] = ck->cell(i, j).to_doubles();
    double col = 0.0, row = 0.0;
    for (std::size_t j = 0; j < ck->ns(); ++j)
      for (double s : detail::sample_points(ck->s_cell(j))) {
        double total = 0.0;
        for (std::size_t i = 0; i < ck->nt(); ++i)
          total += detail::abs_poly_integral(detail::fix_s(dcells[i * ck->ns() + j], s), to_double(ck->t_breaks()[i]),
                                             to_double(ck->t_breaks()[i + 1]));
        col = std::max(col, total);
      }
    for (std::size_t i = 0; i < ck->nt(); ++i)
      for (double t : detail::sample_points(ck->t_cell(i))) {
        double total = 0.0;
        for (std::size_t j = 0; j < ck->ns(); ++j)
          total += detail::abs_poly_integral(detail::fix_t(dcells[i * ck->ns() + j], t), to_double(ck->s_breaks()[j]),
                                             to_double(ck->s_breaks()[j + 1]));
        row = std::max(row, total);
      }
    return std::max(col, row);
  }
  // Grid-sampled kernel: the interpolant is integrated numerically.
  const NumericKernel nk(k);
  const auto& g = std::get<GridKernel>(k.form);
  if (g.t_nodes.size() < 2 || g.s_nodes.size() < 2) throw std::invalid_argument("grid kernel needs at least 2 nodes per axis");
  const double h0 = to_double(st.hull.lo), h1 = to_double(st.hull.hi);
  const double a = to_double(st.alpha), b = to_double(st.beta);
  double col = 0.0, row = 0.0;
  for (double s : detail::sample_points(srange))
    col = std::max(col, detail::abs_integral_numeric([&](double t) { return nk(t, s); }, h0, h1));
  for (double t : detail::sample_points(st.hull))
    row = std::max(row, detail::abs_integral_numeric([&](double s) { return nk(t, s); }, a, b));
  return std::max(col, row);
}

}  // namespace covrel

#pragma once

// Piecewise functions on a bounded interval and exact 2-D rectangle regions.

#include "covrel/poly.hpp"
#include "covrel/trig.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covrel {

struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("interval with lo > hi");
  }

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(double x) const { return to_double(lo) <= x && x <= to_double(hi); }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  std::string str() const { return "[" + to_string(lo) + "," + to_string(hi) + "]"; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed intersection, or nullopt when the intervals are disjoint.
inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Rational lo = std::max(a.lo, b.lo);
  Rational hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return Interval(std::move(lo), std::move(hi));
}

// ---------------------------------------------------------------------------
// Atom
// ---------------------------------------------------------------------------

/// Function on a single piece: an exact Laurent part plus analytic registry
/// terms. Pure polynomial and pure Laurent atoms stay in the exact tier.
class Atom {
 public:
  enum class Kind { Polynomial, Laurent, Analytic };

  Atom() = default;
  Atom(Poly1 p) : exact_(p) {}                // NOLINT(google-explicit-constructor)
  Atom(Laurent1 l) : exact_(std::move(l)) {}  // NOLINT(google-explicit-constructor)
  Atom(const Rational& c) : exact_(Laurent1::constant(c)) {}  // NOLINT(google-explicit-constructor)
  Atom(int c) : Atom(Rational(c)) {}                          // NOLINT(google-explicit-constructor)

  static Atom analytic(TrigKind kind, double omega, double phase, std::vector<double> factor = {1.0}) {
    if (omega == 0.0) throw std::invalid_argument("analytic-zero-frequency");
    Atom a;
    a.trig_.push_back(TrigTerm{std::move(factor), {TrigFactor{kind, omega, phase}}});
    a.normalize();
    return a;
  }

  Kind kind() const {
    if (!trig_.empty()) return Kind::Analytic;
    return exact_.has_negative_powers() ? Kind::Laurent : Kind::Polynomial;
  }
  bool is_exact() const { return trig_.empty(); }
  const Laurent1& exact_part() const { return exact_; }
  const std::vector<TrigTerm>& trig_terms() const { return trig_; }
  bool has_negative_powers() const { return exact_.has_negative_powers(); }

  /// Representation-level zero; never throws.
  bool is_structurally_zero() const { return exact_.is_zero() && trig_.empty(); }

  /// Zero on a set of positive measure (equivalently everywhere on the piece:
  /// every atom is real-analytic on the open piece).
  bool is_zero() const {
    check_decidable();
    return is_structurally_zero();
  }

  /// The constant value if the atom is constant on the piece.
  std::optional<Rational> constant_value() const {
    check_decidable();
    if (!trig_.empty()) return std::nullopt;
    if (exact_.is_zero()) return Rational(0);
    if (exact_.terms().size() == 1 && exact_.terms().begin()->first == 0) return exact_.terms().begin()->second;
    return std::nullopt;
  }

  double eval(double t) const {
    double v = exact_.eval(t);
    for (const auto& term : trig_) v += term.eval(t);
    return v;
  }

  /// Exact when no analytic term and no 1/t term is involved.
  Scalar integral(const Rational& lo, const Rational& hi) const {
    Scalar acc = exact_.integral(lo, hi);
    if (trig_.empty()) return acc;
    double v = acc.value();
    for (const auto& term : trig_) v += trig_term_integral(term, to_double(lo), to_double(hi));
    return Scalar(v);
  }

  friend Atom operator+(const Atom& a, const Atom& b) {
    Atom r;
    r.exact_ = a.exact_ + b.exact_;
    r.trig_ = a.trig_;
    r.trig_.insert(r.trig_.end(), b.trig_.begin(), b.trig_.end());
    r.normalize();
    return r;
  }
  friend Atom operator-(const Atom& a) { return Rational(-1) * a; }
  friend Atom operator-(const Atom& a, const Atom& b) { return a + (-b); }
  friend Atom operator*(const Rational& s, const Atom& a) {
    Atom r;
    r.exact_ = s * a.exact_;
    r.trig_ = a.trig_;
    const double sd = to_double(s);
    for (auto& term : r.trig_)
      for (auto& c : term.poly) c *= sd;
    r.normalize();
    return r;
  }
  friend Atom operator*(const Atom& a, const Atom& b) {
    Atom r;
    r.exact_ = a.exact_ * b.exact_;
    for (const auto& ta : a.trig_) r.trig_.push_back(times_exact(ta, b.exact_));
    for (const auto& tb : b.trig_) r.trig_.push_back(times_exact(tb, a.exact_));
    for (const auto& ta : a.trig_)
      for (const auto& tb : b.trig_) {
        TrigTerm t;
        t.poly = poly_mul(ta.poly, tb.poly);
        t.factors = ta.factors;
        t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
        std::sort(t.factors.begin(), t.factors.end());
        r.trig_.push_back(std::move(t));
      }
    r.normalize();
    return r;
  }

  Atom pow(int k) const {
    Atom r(1);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

 private:
  void check_decidable() const {
    if (trig_.size() > 1)
      throw SymbolicUnavailable("atom mixes several analytic terms; identity testing is numeric-only");
  }

  static std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  }

  static TrigTerm times_exact(const TrigTerm& t, const Laurent1& e) {
    if (e.has_negative_powers())
      throw std::domain_error("product of a Laurent atom and an analytic atom is not supported");
    TrigTerm r = t;
    r.poly = poly_mul(t.poly, e.is_zero() ? std::vector<double>{} : e.to_poly().to_doubles());
    return r;
  }

  void normalize() {
    std::vector<TrigTerm> merged;
    for (auto& term : trig_) {
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const TrigTerm& m) { return m.factors == term.factors; });
      if (it == merged.end()) {
        merged.push_back(term);
      } else {
        if (it->poly.size() < term.poly.size()) it->poly.resize(term.poly.size(), 0.0);
        for (std::size_t i = 0; i < term.poly.size(); ++i) it->poly[i] += term.poly[i];
      }
    }
    std::erase_if(merged, [](const TrigTerm& t) { return t.poly_is_zero() || t.factors.empty(); });
    for (auto& t : merged)
      while (!t.poly.empty() && t.poly.back() == 0.0) t.poly.pop_back();
    trig_ = std::move(merged);
  }

  Laurent1 exact_;
  std::vector<TrigTerm> trig_;
};

// ---------------------------------------------------------------------------
// PieceFn
// ---------------------------------------------------------------------------

struct Piece {
  Interval span;
  Atom atom;
};

/// Piecewise function, zero outside its pieces. Piece interiors are
/// pairwise disjoint and pieces are kept sorted.
class PieceFn {
 public:
  PieceFn() = default;
  explicit PieceFn(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
      return a.span.lo < b.span.lo || (a.span.lo == b.span.lo && a.span.hi < b.span.hi);
    });
    for (std::size_t i = 1; i < pieces_.size(); ++i)
      if (pieces_[i].span.lo < pieces_[i - 1].span.hi)
        throw std::invalid_argument("pieces-overlap: " + pieces_[i - 1].span.str() + " and " + pieces_[i].span.str());
    for (const auto& p : pieces_)
      if (p.atom.has_negative_powers() && p.span.contains_zero())
        throw std::domain_error("laurent-contains-zero: " + p.span.str());
  }

  static PieceFn on(const Interval& span, Atom atom) { return PieceFn({Piece{span, std::move(atom)}}); }
  static PieceFn indicator(const Interval& span) { return on(span, Atom(1)); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  std::vector<Rational> breakpoints() const {
    std::vector<Rational> r;
    for (const auto& p : pieces_) {
      r.push_back(p.span.lo);
      r.push_back(p.span.hi);
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }

  /// Atom covering the open cell, or nullptr when the function is zero there.
  /// The cell must not straddle a breakpoint.
  const Atom* atom_on(const Interval& cell) const {
    for (const auto& p : pieces_)
      if (p.span.lo <= cell.lo && cell.hi <= p.span.hi && p.span.lo < p.span.hi) return &p.atom;
    return nullptr;
  }

  /// Value at t; at a shared breakpoint the left piece wins.
  double eval(double t) const {
    for (const auto& p : pieces_)
      if (p.span.contains(t)) return p.atom.eval(t);
    return 0.0;
  }

  bool has_negative_powers() const {
    return std::any_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.atom.has_negative_powers(); });
  }
  bool has_analytic() const {
    return std::any_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return !p.atom.is_exact(); });
  }
  bool is_exact() const { return !has_analytic(); }

  /// Hull of all pieces, or nullopt for the empty function.
  std::optional<Interval> hull() const {
    if (pieces_.empty()) return std::nullopt;
    Rational lo = pieces_.front().span.lo, hi = pieces_.front().span.hi;
    for (const auto& p : pieces_) {
      lo = std::min(lo, p.span.lo);
      hi = std::max(hi, p.span.hi);
    }
    return Interval(lo, hi);
  }

 private:
  std::vector<Piece> pieces_;
};

/// Sorted unique union of breakpoint lists.
inline std::vector<Rational> merge_breaks(std::vector<Rational> a, const std::vector<Rational>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

/// Breaks restricted to [lo, hi] with the endpoints added.
inline std::vector<Rational> clip_breaks(const std::vector<Rational>& b, const Interval& span) {
  std::vector<Rational> r{span.lo, span.hi};
  for (const auto& x : b)
    if (span.lo < x && x < span.hi) r.push_back(x);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

/// Elementary cells of positive length between consecutive breaks.
inline std::vector<Interval> cells_of(const std::vector<Rational>& breaks) {
  std::vector<Interval> r;
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (breaks[i - 1] < breaks[i]) r.emplace_back(breaks[i - 1], breaks[i]);
  return r;
}

namespace detail {

template <class Op>
PieceFn combine(const PieceFn& f, const PieceFn& g, Op op) {
  std::vector<Piece> out;
  for (const auto& cell : cells_of(merge_breaks(f.breakpoints(), g.breakpoints()))) {
    const Atom* a = f.atom_on(cell);
    const Atom* b = g.atom_on(cell);
    if (!a && !b) continue;
    Atom r = op(a ? *a : Atom(), b ? *b : Atom());
    if (r.is_structurally_zero()) continue;
    if (r.has_negative_powers() && cell.contains_zero()) throw std::domain_error("laurent-contains-zero: " + cell.str());
    out.push_back(Piece{cell, std::move(r)});
  }
  return PieceFn(std::move(out));
}

}  // namespace detail

inline PieceFn piece_add(const PieceFn& f, const PieceFn& g) {
  return detail::combine(f, g, [](const Atom& a, const Atom& b) { return a + b; });
}
inline PieceFn piece_sub(const PieceFn& f, const PieceFn& g) {
  return detail::combine(f, g, [](const Atom& a, const Atom& b) { return a - b; });
}
inline PieceFn piece_mul(const PieceFn& f, const PieceFn& g) {
  return detail::combine(f, g, [](const Atom& a, const Atom& b) { return a * b; });
}
inline PieceFn piece_scale(const Rational& s, const PieceFn& f) {
  std::vector<Piece> out;
  if (s == 0) return {};
  for (const auto& p : f.pieces()) out.push_back(Piece{p.span, s * p.atom});
  return PieceFn(std::move(out));
}

/// Restriction of f to span (zero elsewhere).
inline PieceFn piece_restrict(const PieceFn& f, const Interval& span) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces())
    if (auto c = intersect(p.span, span); c && c->lo < c->hi) out.push_back(Piece{*c, p.atom});
  return PieceFn(std::move(out));
}

/// Minimal closed intervals outside which f vanishes a.e. Polynomial and
/// analytic atoms only have isolated zeros, so a nonzero atom covers its
/// whole piece. Throws SymbolicUnavailable for undecidable atoms.
inline std::vector<Interval> piece_support(const PieceFn& f) {
  std::vector<Interval> out;
  for (const auto& p : f.pieces()) {
    if (p.span.lo == p.span.hi || p.atom.is_zero()) continue;
    if (!out.empty() && out.back().hi >= p.span.lo)
      out.back().hi = std::max(out.back().hi, p.span.hi);
    else
      out.push_back(p.span);
  }
  return out;
}

inline Rational support_measure(const std::vector<Interval>& s) {
  Rational m = 0;
  for (const auto& i : s) m += i.length();
  return m;
}

/// ∫_span f, exact when every touched atom is exact.
inline Scalar piece_integral(const PieceFn& f, const Interval& span) {
  Scalar acc = Rational(0);
  for (const auto& p : f.pieces())
    if (auto c = intersect(p.span, span); c && c->lo < c->hi) acc = acc + p.atom.integral(c->lo, c->hi);
  return acc;
}

// ---------------------------------------------------------------------------
// RectRegion
// ---------------------------------------------------------------------------

struct Rect {
  Interval t;
  Interval s;

  Rational area() const { return t.length() * s.length(); }
  std::string str() const { return t.str() + "x" + s.str(); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

inline std::optional<Rect> intersect(const Rect& a, const Rect& b) {
  auto t = intersect(a.t, b.t);
  auto s = intersect(a.s, b.s);
  if (!t || !s) return std::nullopt;
  return Rect{*t, *s};
}

/// Finite union of closed axis-aligned rectangles, stored as pairwise
/// interior-disjoint pieces so the measure is a plain sum.
class RectRegion {
 public:
  RectRegion() = default;

  /// Arbitrary (possibly overlapping) rectangles; decomposed on insertion.
  static RectRegion from_rects(const std::vector<Rect>& rects) {
    RectRegion r;
    for (const auto& x : rects) r.add(x);
    return r;
  }

  /// Caller guarantees the rectangles are already interior-disjoint.
  static RectRegion from_disjoint(std::vector<Rect> rects) {
    RectRegion r;
    r.rects_ = std::move(rects);
    return r;
  }

  void add(const Rect& r) {
    std::vector<Rect> pending{r};
    for (const auto& have : rects_) {
      std::vector<Rect> next;
      for (const auto& p : pending) subtract(p, have, next);
      pending = std::move(next);
      if (pending.empty()) return;
    }
    rects_.insert(rects_.end(), pending.begin(), pending.end());
  }

  const std::vector<Rect>& rects() const { return rects_; }
  bool empty() const { return rects_.empty(); }

  Rational measure() const {
    Rational m = 0;
    for (const auto& r : rects_) m += r.area();
    return m;
  }

  bool contains(double t, double s) const {
    return std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) { return r.t.contains(t) && r.s.contains(s); });
  }

  std::string str() const {
    std::string out;
    for (const auto& r : rects_) out += (out.empty() ? "" : " u ") + r.str();
    return out.empty() ? "{}" : out;
  }

 private:
  // p minus the interior of q, as up to four closed pieces. Degenerate p
  // inside q vanishes; it carries no measure.
  static void subtract(const Rect& p, const Rect& q, std::vector<Rect>& out) {
    auto overlap = intersect(p, q);
    if (!overlap) {
      out.push_back(p);
      return;
    }
    if (p.area() == 0) {
      if (!(q.t.contains(p.t) && q.s.contains(p.s))) out.push_back(p);
      return;
    }
    if (overlap->area() == 0) {
      out.push_back(p);
      return;
    }
    const Rect& o = *overlap;
    if (p.t.lo < o.t.lo) out.push_back(Rect{Interval(p.t.lo, o.t.lo), p.s});
    if (o.t.hi < p.t.hi) out.push_back(Rect{Interval(o.t.hi, p.t.hi), p.s});
    if (p.s.lo < o.s.lo) out.push_back(Rect{o.t, Interval(p.s.lo, o.s.lo)});
    if (o.s.hi < p.s.hi) out.push_back(Rect{o.t, Interval(o.s.hi, p.s.hi)});
  }

  std::vector<Rect> rects_;
};

inline Rational region_measure(const RectRegion& r) { return r.measure(); }

/// Pairwise intersection; the result stays interior-disjoint because each
/// input is.
inline RectRegion region_intersect(const RectRegion& a, const RectRegion& b) {
  std::vector<Rect> out;
  for (const auto& x : a.rects())
    for (const auto& y : b.rects())
      if (auto c = intersect(x, y)) out.push_back(*c);
  return RectRegion::from_disjoint(std::move(out));
}

}  // namespace covrel

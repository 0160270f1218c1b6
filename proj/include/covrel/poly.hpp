#pragma once

// Univariate, Laurent and dense bivariate polynomials over the rationals.

#include "covrel/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covrel {

inline Rational rpow(const Rational& x, int k) {
  if (k < 0) {
    if (x == 0) throw std::domain_error("negative power of zero");
    return Rational(1) / rpow(x, -k);
  }
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// ---------------------------------------------------------------------------
// Poly1
// ---------------------------------------------------------------------------

/// Dense univariate polynomial; coefficient i multiplies x^i. Trailing zeros
/// are always stripped so equal polynomials compare equal.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Poly1 constant(const Rational& v) { return Poly1({v}); }
  static Poly1 monomial(int power, const Rational& coeff = 1) {
    std::vector<Rational> c(static_cast<std::size_t>(power) + 1, Rational(0));
    c.back() = coeff;
    return Poly1(std::move(c));
  }

  const std::vector<Rational>& coeffs() const { return c_; }
  /// -1 stands in for the degree of the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Rational coeff(int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : Rational(0);
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
  }

  Poly1 antiderivative() const {
    std::vector<Rational> r(c_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + 1] = c_[i] / Rational(static_cast<long>(i + 1));
    return Poly1(std::move(r));
  }

  Poly1 derivative() const {
    std::vector<Rational> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * Rational(static_cast<long>(i)));
    return Poly1(std::move(r));
  }

  std::vector<double> to_doubles() const {
    std::vector<double> r;
    r.reserve(c_.size());
    for (const auto& v : c_) r.push_back(to_double(v));
    return r;
  }

  friend Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly1(std::move(r));
  }
  friend Poly1 operator-(const Poly1& a) {
    std::vector<Rational> r = a.c_;
    for (auto& v : r) v = -v;
    return Poly1(std::move(r));
  }
  friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + (-b); }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(r));
  }
  friend Poly1 operator*(const Rational& s, const Poly1& p) {
    std::vector<Rational> r = p.c_;
    for (auto& v : r) v *= s;
    return Poly1(std::move(r));
  }
  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline Rational poly_eval(const Poly1& p, const Rational& x) { return p(x); }

inline Rational poly_definite_integral(const Poly1& p, const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("poly_definite_integral: lo > hi");
  const Poly1 anti = p.antiderivative();
  return anti(hi) - anti(lo);
}

// ---------------------------------------------------------------------------
// Laurent1
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial: exponent -> coefficient, zeros never stored.
class Laurent1 {
 public:
  Laurent1() = default;
  explicit Laurent1(std::map<int, Rational> terms) : t_(std::move(terms)) { normalize(); }
  explicit Laurent1(const Poly1& p) {
    for (int i = 0; i <= p.degree(); ++i)
      if (p.coeff(i) != 0) t_[i] = p.coeff(i);
  }

  static Laurent1 constant(const Rational& v) { return Laurent1(std::map<int, Rational>{{0, v}}); }

  const std::map<int, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int min_exponent() const { return t_.empty() ? 0 : t_.begin()->first; }
  int max_exponent() const { return t_.empty() ? 0 : t_.rbegin()->first; }
  bool has_negative_powers() const { return !t_.empty() && t_.begin()->first < 0; }
  Rational coeff(int k) const {
    auto it = t_.find(k);
    return it == t_.end() ? Rational(0) : it->second;
  }

  /// The polynomial p and shift m >= 0 with this = x^{-m} p(x).
  std::pair<int, Poly1> split() const {
    const int m = has_negative_powers() ? -min_exponent() : 0;
    std::vector<Rational> c(t_.empty() ? 0 : static_cast<std::size_t>(max_exponent() + m + 1), Rational(0));
    for (const auto& [k, v] : t_) c[static_cast<std::size_t>(k + m)] = v;
    return {m, Poly1(std::move(c))};
  }

  Poly1 to_poly() const {
    if (has_negative_powers()) throw std::domain_error("Laurent polynomial has negative powers");
    return split().second;
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (const auto& [k, v] : t_) acc += v * rpow(x, k);
    return acc;
  }

  double eval(double x) const {
    double acc = 0.0;
    for (const auto& [k, v] : t_) acc += to_double(v) * std::pow(x, k);
    return acc;
  }

  /// Exact unless a 1/x term contributes a logarithm.
  Scalar integral(const Rational& lo, const Rational& hi) const {
    if (lo > hi) throw std::invalid_argument("Laurent1::integral: lo > hi");
    if (has_negative_powers() && lo <= 0 && hi >= 0)
      throw std::domain_error("laurent-contains-zero");
    Rational exact = 0;
    double logs = 0.0;
    bool has_log = false;
    for (const auto& [k, v] : t_) {
      if (k == -1) {
        has_log = true;
        logs += to_double(v) * std::log(to_double(hi / lo));
      } else {
        exact += v * (rpow(hi, k + 1) - rpow(lo, k + 1)) / Rational(k + 1);
      }
    }
    if (!has_log) return Scalar(exact);
    return Scalar(to_double(exact) + logs);
  }

  friend Laurent1 operator+(const Laurent1& a, const Laurent1& b) {
    std::map<int, Rational> r = a.t_;
    for (const auto& [k, v] : b.t_) r[k] += v;
    return Laurent1(std::move(r));
  }
  friend Laurent1 operator-(const Laurent1& a) {
    std::map<int, Rational> r = a.t_;
    for (auto& kv : r) kv.second = -kv.second;
    return Laurent1(std::move(r));
  }
  friend Laurent1 operator-(const Laurent1& a, const Laurent1& b) { return a + (-b); }
  friend Laurent1 operator*(const Laurent1& a, const Laurent1& b) {
    std::map<int, Rational> r;
    for (const auto& [i, u] : a.t_)
      for (const auto& [j, v] : b.t_) r[i + j] += u * v;
    return Laurent1(std::move(r));
  }
  friend Laurent1 operator*(const Rational& s, const Laurent1& a) {
    std::map<int, Rational> r = a.t_;
    for (auto& kv : r) kv.second *= s;
    return Laurent1(std::move(r));
  }
  friend bool operator==(const Laurent1& a, const Laurent1& b) { return a.t_ == b.t_; }

 private:
  void normalize() { std::erase_if(t_, [](const auto& kv) { return kv.second == 0; }); }
  std::map<int, Rational> t_;
};

// ---------------------------------------------------------------------------
// Poly2
// ---------------------------------------------------------------------------

/// Dense bivariate polynomial, entry (i, j) multiplies t^i s^j.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(std::vector<std::vector<Rational>> c) : c_(std::move(c)) { normalize(); }

  static Poly2 constant(const Rational& v) { return Poly2({{v}}); }
  /// a0 + a1 t + c1 s
  static Poly2 bilinear(const Rational& a0, const Rational& a1, const Rational& c1) {
    return Poly2({{a0, c1}, {a1, Rational(0)}});
  }
  static Poly2 in_t(const Poly1& p) {
    std::vector<std::vector<Rational>> c;
    for (const auto& v : p.coeffs()) c.push_back({v});
    return Poly2(std::move(c));
  }
  static Poly2 in_s(const Poly1& p) { return Poly2({p.coeffs()}); }

  int rows() const { return static_cast<int>(c_.size()); }
  int cols() const { return c_.empty() ? 0 : static_cast<int>(c_[0].size()); }
  bool is_zero() const { return c_.empty(); }
  const std::vector<std::vector<Rational>>& coeffs() const { return c_; }
  Rational coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows() || j >= cols()) return 0;
    return c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  Rational operator()(const Rational& t, const Rational& s) const {
    Rational acc = 0;
    for (int i = rows() - 1; i >= 0; --i) {
      Rational row = 0;
      for (int j = cols() - 1; j >= 0; --j) row = row * s + c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      acc = acc * t + row;
    }
    return acc;
  }

  std::vector<std::vector<double>> to_doubles() const {
    std::vector<std::vector<double>> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (const auto& v : c_[i]) r[i].push_back(to_double(v));
    return r;
  }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    const std::size_t n = static_cast<std::size_t>(std::max(a.rows(), b.rows()));
    const std::size_t m = static_cast<std::size_t>(std::max(a.cols(), b.cols()));
    std::vector<std::vector<Rational>> r(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < a.c_[i].size(); ++j) r[i][j] += a.c_[i][j];
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_[i].size(); ++j) r[i][j] += b.c_[i][j];
    return Poly2(std::move(r));
  }
  friend Poly2 operator*(const Rational& s, const Poly2& p) {
    auto r = p.c_;
    for (auto& row : r)
      for (auto& v : row) v *= s;
    return Poly2(std::move(r));
  }
  friend Poly2 operator-(const Poly2& a) { return Rational(-1) * a; }
  friend Poly2 operator-(const Poly2& a, const Poly2& b) { return a + (-b); }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const std::size_t n = a.c_.size() + b.c_.size() - 1;
    const std::size_t m = a.c_[0].size() + b.c_[0].size() - 1;
    std::vector<std::vector<Rational>> r(n, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
        if (a.c_[i][j] == 0) continue;
        for (std::size_t k = 0; k < b.c_.size(); ++k)
          for (std::size_t l = 0; l < b.c_[k].size(); ++l) r[i + k][j + l] += a.c_[i][j] * b.c_[k][l];
      }
    return Poly2(std::move(r));
  }
  friend bool operator==(const Poly2& a, const Poly2& b) { return a.c_ == b.c_; }

 private:
  void normalize() {
    std::size_t m = 0;
    for (const auto& row : c_) m = std::max(m, row.size());
    for (auto& row : c_) row.resize(m, Rational(0));
    auto row_zero = [](const std::vector<Rational>& row) {
      return std::all_of(row.begin(), row.end(), [](const Rational& v) { return v == 0; });
    };
    while (!c_.empty() && row_zero(c_.back())) c_.pop_back();
    if (c_.empty()) return;
    std::size_t cols = m;
    while (cols > 0 && std::all_of(c_.begin(), c_.end(), [&](const auto& row) { return row[cols - 1] == 0; }))
      --cols;
    for (auto& row : c_) row.resize(cols);
  }
  std::vector<std::vector<Rational>> c_;
};

/// Exact ∫_lo^hi kL(t,τ) kR(τ,s) dτ, reading kL's second variable and kR's
/// first variable as τ.
inline Poly2 poly2_integrate_mid(const Poly2& kL, const Poly2& kR, const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("poly2_integrate_mid: lo > hi");
  if (kL.is_zero() || kR.is_zero()) return {};
  const int maxpow = kL.cols() + kR.rows();
  std::vector<Rational> moment(static_cast<std::size_t>(maxpow), Rational(0));
  for (int p = 0; p < maxpow; ++p) moment[static_cast<std::size_t>(p)] = (rpow(hi, p + 1) - rpow(lo, p + 1)) / Rational(p + 1);
  std::vector<std::vector<Rational>> r(static_cast<std::size_t>(kL.rows()),
                                       std::vector<Rational>(static_cast<std::size_t>(kR.cols()), Rational(0)));
  for (int i = 0; i < kL.rows(); ++i)
    for (int j = 0; j < kL.cols(); ++j) {
      const Rational& u = kL.coeffs()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (u == 0) continue;
      for (int k = 0; k < kR.rows(); ++k)
        for (int l = 0; l < kR.cols(); ++l) {
          const Rational& v = kR.coeffs()[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
          if (v == 0) continue;
          r[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] += u * v * moment[static_cast<std::size_t>(j + k)];
        }
    }
  return Poly2(std::move(r));
}

}  // namespace covrel

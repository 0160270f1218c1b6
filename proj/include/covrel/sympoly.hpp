#pragma once

// Polynomials with rational coefficients in the kernel unknowns a0, a1, c1.

#include "covrel/rational.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace covrel {

class SymPoly {
 public:
  using Exponents = std::array<int, 3>;  // powers of (a0, a1, c1)

  static constexpr std::array<const char*, 3> kNames{"a0", "a1", "c1"};

  SymPoly() = default;
  SymPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) t_[{0, 0, 0}] = c;
  }
  static SymPoly var(int index) {
    SymPoly p;
    Exponents e{0, 0, 0};
    e[static_cast<std::size_t>(index)] = 1;
    p.t_[e] = 1;
    return p;
  }

  const std::map<Exponents, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  Rational eval(const std::array<Rational, 3>& x) const {
    Rational acc = 0;
    for (const auto& [e, c] : t_) {
      Rational m = c;
      for (std::size_t v = 0; v < 3; ++v)
        for (int k = 0; k < e[v]; ++k) m *= x[v];
      acc += m;
    }
    return acc;
  }

  /// Set the variables flagged in `zero` to 0.
  SymPoly with_zeros(const std::array<bool, 3>& zero) const {
    SymPoly r;
    for (const auto& [e, c] : t_) {
      bool vanishes = false;
      for (std::size_t v = 0; v < 3; ++v) vanishes = vanishes || (zero[v] && e[v] > 0);
      if (!vanishes) r.t_[e] = c;
    }
    return r;
  }

  /// The variable index if this is c·v^k for a single variable v.
  std::optional<int> single_variable_monomial() const {
    if (t_.size() != 1) return std::nullopt;
    const Exponents& e = t_.begin()->first;
    std::optional<int> found;
    for (int v = 0; v < 3; ++v) {
      if (e[static_cast<std::size_t>(v)] == 0) continue;
      if (found) return std::nullopt;
      found = v;
    }
    return found;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string out;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::string mono;
      for (std::size_t v = 0; v < 3; ++v) {
        if (e[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += kNames[v];
        if (e[v] > 1) mono += "^" + std::to_string(e[v]);
      }
      std::string coef = to_string(c);
      std::string term;
      if (mono.empty()) term = coef;
      else if (c == 1) term = mono;
      else if (c == -1) term = "-" + mono;
      else term = coef + "*" + mono;
      if (out.empty()) out = term;
      else if (term[0] == '-') out += " - " + term.substr(1);
      else out += " + " + term;
    }
    return out;
  }

  friend SymPoly operator+(const SymPoly& a, const SymPoly& b) {
    SymPoly r = a;
    for (const auto& [e, c] : b.t_) r.t_[e] += c;
    r.normalize();
    return r;
  }
  friend SymPoly operator-(const SymPoly& a) { return Rational(-1) * a; }
  friend SymPoly operator-(const SymPoly& a, const SymPoly& b) { return a + (-b); }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly r;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) r.t_[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
    r.normalize();
    return r;
  }
  friend SymPoly operator*(const Rational& s, const SymPoly& a) { return SymPoly(s) * a; }
  friend SymPoly operator*(const SymPoly& a, const Rational& s) { return SymPoly(s) * a; }
  friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.t_ == b.t_; }

 private:
  void normalize() { std::erase_if(t_, [](const auto& kv) { return kv.second == 0; }); }
  std::map<Exponents, Rational> t_;
};

}  // namespace covrel

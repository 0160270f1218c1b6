#pragma once

// Coefficient matching for a bilinear kernel against a Laurent symbol.

#include "covrel/kernel_calculus.hpp"
#include "covrel/sympoly.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covrel {

/// Coefficient of t^t_power s^s_power in k(t,s) b(s) - b(t) F_2(k)(t,s),
/// as a polynomial in (a0, a1, c1), together with its value at a candidate.
struct CoeffEquation {
  int t_power = 0;
  int s_power = 0;
  SymPoly expr;
  Rational value;

  bool satisfied() const { return value == 0; }
  std::string str() const {
    return "[t^" + std::to_string(t_power) + " s^" + std::to_string(s_power) + "] " + expr.str() + " = 0";
  }
};

inline std::vector<CoeffEquation> laurent_coeff_system(const Laurent1& b, const Rational& a0, const Rational& a1,
                                                       const Rational& c1, const FPoly& F, const Rational& lo,
                                                       const Rational& hi) {
  if (lo <= 0 && hi >= 0) throw std::domain_error("laurent-contains-zero: [" + to_string(lo) + "," + to_string(hi) + "]");
  if (F.delta(0) != 0) throw std::invalid_argument("laurent_coeff_system: delta_0 must be 0");
  if (F.degree() > 2) throw std::invalid_argument("laurent_coeff_system: F must be at most quadratic");

  const SymPoly A0 = SymPoly::var(0), A1 = SymPoly::var(1), C1 = SymPoly::var(2);
  const auto nu = bilinear_nu(A0, A1, C1, lo, hi);
  const Rational d1 = F.delta(1), d2 = F.delta(2);

  // Kernel parts as (t power, s power) -> coefficient.
  const std::map<std::pair<int, int>, SymPoly> k{{{0, 0}, A0}, {{1, 0}, A1}, {{0, 1}, C1}};
  const std::map<std::pair<int, int>, SymPoly> fk{{{0, 0}, d1 * A0 + d2 * nu.nu0},
                                                  {{1, 0}, d1 * A1 + d2 * nu.nu1},
                                                  {{0, 1}, d1 * C1 + d2 * nu.nu2},
                                                  {{1, 1}, d2 * nu.nu3}};

  std::map<std::pair<int, int>, SymPoly> total;
  for (const auto& [j, bj] : b.terms()) {
    for (const auto& [e, c] : k) total[{e.first, e.second + j}] = total[{e.first, e.second + j}] + bj * c;
    for (const auto& [e, c] : fk) total[{e.first + j, e.second}] = total[{e.first + j, e.second}] - bj * c;
  }

  std::vector<CoeffEquation> out;
  for (const auto& [e, expr] : total) {
    if (expr.is_zero()) continue;
    out.push_back(CoeffEquation{e.first, e.second, expr, expr.eval({a0, a1, c1})});
  }
  return out;
}

}  // namespace covrel

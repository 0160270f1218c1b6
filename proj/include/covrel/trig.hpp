#pragma once

// Registry of analytic atoms: sin(ω·+φ) and cos(ω·+φ), optionally multiplied
// by a polynomial. Integrals use closed-form antiderivatives.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace covrel {

enum class TrigKind { Sin, Cos };

inline std::string_view trig_name(TrigKind k) { return k == TrigKind::Sin ? "sin" : "cos"; }

inline std::optional<TrigKind> trig_from_name(std::string_view name) {
  if (name == "sin") return TrigKind::Sin;
  if (name == "cos") return TrigKind::Cos;
  return std::nullopt;
}

/// One registry function f(ω t + φ). Zero set is {t : ω t + φ ∈ zeros(f)},
/// a discrete set whenever ω ≠ 0.
struct TrigFactor {
  TrigKind kind = TrigKind::Sin;
  double omega = 1.0;
  double phase = 0.0;

  double eval(double t) const {
    const double x = omega * t + phase;
    return kind == TrigKind::Sin ? std::sin(x) : std::cos(x);
  }

  friend auto operator<=>(const TrigFactor& a, const TrigFactor& b) {
    return std::tie(a.kind, a.omega, a.phase) <=> std::tie(b.kind, b.omega, b.phase);
  }
  friend bool operator==(const TrigFactor&, const TrigFactor&) = default;
};

/// poly(t) · Π factors(t); poly is float since this tier is numeric-only.
struct TrigTerm {
  std::vector<double> poly{1.0};
  std::vector<TrigFactor> factors;  // sorted

  double eval(double t) const {
    double p = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * t + *it;
    for (const auto& f : factors) p *= f.eval(t);
    return p;
  }

  bool poly_is_zero() const {
    return std::all_of(poly.begin(), poly.end(), [](double v) { return v == 0.0; });
  }
};

namespace detail {

// A·cos(Ω t + Φ)
struct CosWave {
  double amp;
  double omega;
  double phase;
};

// Product of registry factors as a sum of cosine waves (product-to-sum).
inline std::vector<CosWave> expand_waves(const std::vector<TrigFactor>& factors) {
  std::vector<CosWave> waves{{1.0, 0.0, 0.0}};
  for (const auto& f : factors) {
    const double ph = f.kind == TrigKind::Sin ? f.phase - std::numbers::pi / 2 : f.phase;
    std::vector<CosWave> next;
    next.reserve(waves.size() * 2);
    for (const auto& w : waves) {
      next.push_back({w.amp / 2, w.omega - f.omega, w.phase - ph});
      next.push_back({w.amp / 2, w.omega + f.omega, w.phase + ph});
    }
    waves = std::move(next);
  }
  return waves;
}

// Antiderivative of x^n cos(Ω x + Φ), Ω ≠ 0, via repeated integration by parts.
inline double cos_moment_antiderivative(int n, double omega, double phase, double x) {
  const double base = std::sin(omega * x + phase) / omega;
  if (n == 0) return base;
  return std::pow(x, n) * base -
         (n / omega) * cos_moment_antiderivative(n - 1, omega, phase - std::numbers::pi / 2, x);
}

}  // namespace detail

/// ∫_lo^hi term(t) dt in closed form.
inline double trig_term_integral(const TrigTerm& term, double lo, double hi) {
  double total = 0.0;
  for (const auto& w : detail::expand_waves(term.factors)) {
    for (std::size_t n = 0; n < term.poly.size(); ++n) {
      const double c = term.poly[n];
      if (c == 0.0) continue;
      if (w.omega == 0.0) {
        const double k = static_cast<double>(n + 1);
        total += c * w.amp * std::cos(w.phase) * (std::pow(hi, k) - std::pow(lo, k)) / k;
      } else {
        const int ni = static_cast<int>(n);
        total += c * w.amp *
                 (detail::cos_moment_antiderivative(ni, w.omega, w.phase, hi) -
                  detail::cos_moment_antiderivative(ni, w.omega, w.phase, lo));
      }
    }
  }
  return total;
}

}  // namespace covrel

#pragma once

// Quadrature oracle: breakpoint-aligned composite Gauss-Legendre grids,
// operator matrices, F(A) by Horner and the commutation residual.

#include "covrel/operators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace covrel {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauleg(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
}

struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> breakpoints;
  std::vector<double> panel_edges;
  std::vector<int> panel_of;  // panel index of each node

  std::size_t size() const { return nodes.size(); }
  std::size_t panels() const { return panel_edges.empty() ? 0 : panel_edges.size() - 1; }
};

namespace detail {

inline void collect(const PieceFn& f, std::vector<Rational>& out) {
  for (const auto& x : f.breakpoints()) out.push_back(x);
}

inline void collect(const KernelSpec& k, std::vector<Rational>& out) {
  if (const auto* sk = std::get_if<SeparableKernel>(&k.form)) {
    collect(sk->a, out);
    collect(sk->c, out);
  } else if (const auto* rk = std::get_if<PiecewiseRectKernel>(&k.form)) {
    for (const auto& p : rk->pieces)
      for (const auto& x : {p.rect.t.lo, p.rect.t.hi, p.rect.s.lo, p.rect.s.hi}) out.push_back(x);
  }
}

inline void collect(const OperatorSpec& op, std::vector<Rational>& out) {
  if (const auto* m = as_mult(op)) collect(m->symbol, out);
  if (const auto* in = as_integral(op)) collect(in->kernel, out);
}

}  // namespace detail

/// Every breakpoint of the scenario inside the hull, including hull ends,
/// alpha and beta.
inline std::vector<Rational> scenario_breakpoints(const Scenario& s) {
  std::vector<Rational> b{s.alpha, s.beta};
  detail::collect(s.A, b);
  detail::collect(s.B, b);
  return clip_breaks(b, s.hull);
}

/// Panels never straddle a breakpoint. Each gap gets a share of the total
/// panel count proportional to its length, at least one.
inline Grid build_grid(const Scenario& s) {
  if (!(s.hull.lo < s.hull.hi)) throw std::invalid_argument("empty-hull");
  const auto br = scenario_breakpoints(s);
  const std::size_t gaps = br.size() - 1;
  const int requested = s.grid.panels > 0 ? s.grid.panels : std::max<int>(8, 4 * static_cast<int>(gaps));
  const Rational total_len = s.hull.length();

  std::vector<double> xg, wg;
  gauleg(s.grid.nodes_per_panel, xg, wg);

  Grid g;
  for (const auto& x : br) g.breakpoints.push_back(to_double(x));
  for (std::size_t k = 0; k < gaps; ++k) {
    const Rational len = br[k + 1] - br[k];
    const double share = to_double(len / total_len) * requested;
    const int n = std::max(1, static_cast<int>(std::floor(share + 0.5)));
    for (int p = 0; p < n; ++p) {
      const double a = to_double(br[k] + len * Rational(p, n));
      const double b = to_double(br[k] + len * Rational(p + 1, n));
      g.panel_edges.push_back(a);
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t q = 0; q < xg.size(); ++q) {
        g.nodes.push_back(mid + half * xg[q]);
        g.weights.push_back(half * wg[q]);
        g.panel_of.push_back(static_cast<int>(g.panel_edges.size()) - 1);
      }
    }
  }
  g.panel_edges.push_back(to_double(br.back()));
  return g;
}

inline double symbol_at(const PieceFn& f, double t) {
  if (f.has_negative_powers() && std::abs(t) < 1e-9) throw std::domain_error("Laurent atom evaluated near 0");
  return f.eval(t);
}

/// Multiplication: diagonal of symbol values. Integral: k(t_i, s_j) w_j for
/// s_j in [alpha, beta].
inline Eigen::MatrixXd assemble(const OperatorSpec& op, const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  if (const auto* m = as_mult(op)) {
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) = symbol_at(m->symbol, g.nodes[static_cast<std::size_t>(i)]);
    return M;
  }
  const KernelSpec& k = as_integral(op)->kernel;
  const NumericKernel nk(k);
  const double a = to_double(k.strip.alpha), b = to_double(k.strip.beta);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double s = g.nodes[static_cast<std::size_t>(j)];
    if (s < a || s > b) continue;
    const double w = g.weights[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) M(i, j) = nk(g.nodes[static_cast<std::size_t>(i)], s) * w;
  }
  return M;
}

/// δ_0 I + δ_1 A + ... + δ_n A^n by Horner's scheme.
inline Eigen::MatrixXd matrix_F(const Eigen::MatrixXd& A, const FPoly& F) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix_F: square matrix required");
  const auto n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  if (F.is_zero()) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd R = to_double(F.delta(F.degree())) * I;
  for (int j = F.degree() - 1; j >= 0; --j) R = R * A + to_double(F.delta(j)) * I;
  return R;
}

/// (Σ w_i |x_i|^p)^{1/p}, or max |x_i| for p = ∞.
inline double discrete_norm(const Eigen::VectorXd& x, double p, const Grid& g) {
  if (!(p >= 1.0)) throw std::invalid_argument("discrete_norm: p must be >= 1");
  if (static_cast<std::size_t>(x.size()) != g.size()) throw std::invalid_argument("discrete_norm: size mismatch");
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += g.weights[static_cast<std::size_t>(i)] * std::pow(std::abs(x(i)), p);
  return std::pow(acc, 1.0 / p);
}

inline std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

struct TestVector {
  std::string id;
  Eigen::VectorXd x;
};

constexpr std::uint64_t kSuiteSeed = 0x5EED;
constexpr int kRandomTests = 20;
constexpr int kRandomKnots = 11;

/// Monomials t^0..t^5, panel indicators and seeded random piecewise-linear
/// functions, all sampled at the grid nodes.
inline std::vector<TestVector> test_suite(const Grid& g, const Interval& hull) {
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<TestVector> out;
  for (int d = 0; d <= 5; ++d) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = std::pow(g.nodes[static_cast<std::size_t>(i)], d);
    out.push_back({"t^" + std::to_string(d), x});
  }
  for (std::size_t p = 0; p < g.panels(); ++p) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (g.panel_of[static_cast<std::size_t>(i)] == static_cast<int>(p)) x(i) = 1.0;
    out.push_back({"panel" + std::to_string(p), x});
  }
  std::mt19937_64 rng(kSuiteSeed);
  auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  const double lo = to_double(hull.lo), hi = to_double(hull.hi);
  for (int r = 0; r < kRandomTests; ++r) {
    std::vector<double> v(kRandomKnots);
    for (auto& y : v) y = uniform();
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = (g.nodes[static_cast<std::size_t>(i)] - lo) / (hi - lo) * (kRandomKnots - 1);
      const int k = std::clamp(static_cast<int>(u), 0, kRandomKnots - 2);
      const double f = u - k;
      x(i) = (1 - f) * v[static_cast<std::size_t>(k)] + f * v[static_cast<std::size_t>(k + 1)];
    }
    out.push_back({"rand" + std::to_string(r), x});
  }
  return out;
}

struct TestResidual {
  std::string id;
  std::vector<double> values;  // one per requested p
};

struct ResidualReport {
  double residual = 0.0;
  std::vector<double> p_norms;
  std::vector<TestResidual> per_test;
  std::size_t grid_size = 0;
};

/// max over tests and p of ‖(AB - BF(A))x‖_p / ‖x‖_p.
inline ResidualReport residual(const Scenario& s, const Grid& g) {
  const Eigen::MatrixXd A = assemble(s.A, g);
  const Eigen::MatrixXd B = assemble(s.B, g);
  const Eigen::MatrixXd D = A * B - B * matrix_F(A, s.F);
  ResidualReport rep;
  rep.p_norms = s.grid.p_norms;
  rep.grid_size = g.size();
  for (const auto& t : test_suite(g, s.hull)) {
    const Eigen::VectorXd y = D * t.x;
    TestResidual tr{t.id, {}};
    for (double p : s.grid.p_norms) {
      const double nx = discrete_norm(t.x, p, g);
      const double r = nx > 0 ? discrete_norm(y, p, g) / nx : 0.0;
      tr.values.push_back(r);
      rep.residual = std::max(rep.residual, r);
    }
    rep.per_test.push_back(std::move(tr));
  }
  return rep;
}

inline ResidualReport residual(const Scenario& s) { return residual(s, build_grid(s)); }

}  // namespace covrel

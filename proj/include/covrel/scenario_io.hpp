#pragma once

// JSON scenario files. Rationals travel as "p/q" strings; analytic atoms as
// {name, params}.

#include "covrel/operators.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace covrel {

using Json = nlohmann::ordered_json;

/// Input rejected before any checker runs; carries every diagnostic found.
class InputError : public std::runtime_error {
 public:
  explicit InputError(std::vector<Diagnostic> d)
      : std::runtime_error(d.empty() ? "input error" : d.front().code + ": " + d.front().message), diags_(std::move(d)) {}
  InputError(const std::string& code, const std::string& message) : InputError(std::vector<Diagnostic>{{code, message}}) {}
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

namespace io {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

inline const Json& at(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline Rational rational(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational (\"p/q\" string or number)");
}

inline Json rational(const Rational& r) { return to_string(r); }

/// Float parameter: a number, or a string such as "pi", "-2pi", "pi/2", "0.5".
inline double real(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail(path, "expected a number");
  std::string s = j.get<std::string>();
  double factor = 1.0;
  if (auto p = s.find("pi"); p != std::string::npos) {
    std::string head = s.substr(0, p), tail = s.substr(p + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    double coef = 1.0;
    if (head == "-") coef = -1.0;
    else if (!head.empty() && head != "+") coef = to_double(rational(Json(head), path));
    double div = 1.0;
    if (!tail.empty()) {
      if (tail.front() != '/') fail(path, "bad multiple of pi: '" + s + "'");
      div = to_double(rational(Json(tail.substr(1)), path));
    }
    factor = coef * std::numbers::pi / div;
    return factor;
  }
  return to_double(rational(j, path));
}

inline Json real(double v) { return v; }

inline std::vector<Rational> rational_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Rational> r;
  for (std::size_t i = 0; i < j.size(); ++i) r.push_back(rational(j[i], idx(path, i)));
  return r;
}

inline std::vector<double> real_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> r;
  for (std::size_t i = 0; i < j.size(); ++i) r.push_back(real(j[i], idx(path, i)));
  return r;
}

inline Json rational_list(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational(x));
  return a;
}

// -- atoms ------------------------------------------------------------------

inline Atom atom(const Json& j, const std::string& path) {
  if (j.is_string() || j.is_number()) return Atom(rational(j, path));
  if (!j.is_object()) fail(path, "expected an atom object");
  if (j.contains("terms")) {
    const Json& t = j["terms"];
    if (!t.is_array()) fail(sub(path, "terms"), "expected an array");
    Atom acc;
    for (std::size_t i = 0; i < t.size(); ++i) acc = acc + atom(t[i], idx(sub(path, "terms"), i));
    return acc;
  }
  if (j.contains("poly")) return Atom(Poly1(rational_list(j["poly"], sub(path, "poly"))));
  if (j.contains("laurent")) {
    const Json& l = j["laurent"];
    if (!l.is_object()) fail(sub(path, "laurent"), "expected {exponent: coefficient}");
    std::map<int, Rational> terms;
    for (auto it = l.begin(); it != l.end(); ++it) {
      int e = 0;
      const std::string& key = it.key();
      auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), e);
      if (ec != std::errc() || ptr != key.data() + key.size()) fail(sub(path, "laurent"), "bad exponent '" + key + "'");
      terms[e] += rational(it.value(), sub(sub(path, "laurent"), key));
    }
    return Atom(Laurent1(std::move(terms)));
  }
  if (j.contains("name")) {
    const auto kind = trig_from_name(at(j, "name", path).get<std::string>());
    if (!kind) fail(sub(path, "name"), "unknown analytic atom (registry: sin, cos)");
    const auto params = real_list(at(j, "params", path), sub(path, "params"));
    if (params.empty() || params.size() > 2) fail(sub(path, "params"), "expected [omega] or [omega, phase]");
    std::vector<double> factor{1.0};
    if (j.contains("factor")) factor = real_list(j["factor"], sub(path, "factor"));
    const double phase = params.size() > 1 ? params[1] : 0.0;
    if (params[0] == 0.0) throw InputError("analytic-zero-frequency", path + ": omega must be nonzero");
    return Atom::analytic(*kind, params[0], phase, factor);
  }
  fail(path, "expected one of poly, laurent, name, terms");
}

inline Json trig_term(const TrigTerm& t) {
  // Terms with several factors come from products; write them as nested sums
  // only when a single registry factor is present.
  if (t.factors.size() != 1) throw std::invalid_argument("cannot serialize a product of analytic factors");
  Json o;
  o["name"] = std::string(trig_name(t.factors[0].kind));
  o["params"] = Json::array({t.factors[0].omega, t.factors[0].phase});
  if (!(t.poly.size() == 1 && t.poly[0] == 1.0)) o["factor"] = t.poly;
  return o;
}

inline Json atom(const Atom& a) {
  Json exact;
  const Laurent1& e = a.exact_part();
  if (e.has_negative_powers()) {
    Json l = Json::object();
    for (const auto& [k, v] : e.terms()) l[std::to_string(k)] = rational(v);
    exact["laurent"] = l;
  } else {
    exact["poly"] = rational_list(e.to_poly().coeffs());
  }
  if (a.trig_terms().empty()) return exact;
  if (e.is_zero() && a.trig_terms().size() == 1) return trig_term(a.trig_terms()[0]);
  Json terms = Json::array();
  if (!e.is_zero()) terms.push_back(exact);
  for (const auto& t : a.trig_terms()) terms.push_back(trig_term(t));
  Json o;
  o["terms"] = terms;
  return o;
}

// -- piecewise functions ----------------------------------------------------

inline Interval interval_pair(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [lo, hi]");
  Rational lo = rational(j[0], idx(path, 0)), hi = rational(j[1], idx(path, 1));
  if (lo > hi) fail(path, "interval with lo > hi");
  return Interval(lo, hi);
}

inline Json interval_pair(const Interval& i) { return Json::array({rational(i.lo), rational(i.hi)}); }

inline PieceFn piecefn(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of pieces");
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = idx(path, i);
    pieces.push_back(Piece{interval_pair(at(j[i], "interval", p), sub(p, "interval")), atom(at(j[i], "atom", p), sub(p, "atom"))});
  }
  try {
    return PieceFn(std::move(pieces));
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    const std::string code = msg.substr(0, msg.find(':'));
    throw InputError(code == "pieces-overlap" || code == "laurent-contains-zero" ? code : "parse-error", path + ": " + msg);
  }
}

inline Json piecefn(const PieceFn& f) {
  Json a = Json::array();
  for (const auto& p : f.pieces()) {
    Json o;
    o["interval"] = interval_pair(p.span);
    o["atom"] = atom(p.atom);
    a.push_back(o);
  }
  return a;
}

// -- kernels ----------------------------------------------------------------

inline Poly2 poly2(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a matrix of rationals");
  std::vector<std::vector<Rational>> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(rational_list(j[i], idx(path, i)));
  return Poly2(std::move(c));
}

inline Json poly2(const Poly2& p) {
  Json a = Json::array();
  for (const auto& row : p.coeffs()) a.push_back(rational_list(row));
  return a;
}

inline KernelSpec kernel(const Json& j, const Strip& st, const std::string& path) {
  const std::string kind = at(j, "kind", path).get<std::string>();
  if (kind == "bilinear")
    return KernelSpec{BilinearKernel{rational(at(j, "a0", path), sub(path, "a0")), rational(at(j, "a1", path), sub(path, "a1")),
                                     rational(at(j, "c1", path), sub(path, "c1"))},
                      st};
  if (kind == "polynomial") return KernelSpec{PolynomialKernel{poly2(at(j, "coeffs", path), sub(path, "coeffs"))}, st};
  if (kind == "separable") {
    SeparableKernel sk{piecefn(at(j, "a", path), sub(path, "a")), piecefn(at(j, "c", path), sub(path, "c"))};
    if (j.contains("scale")) {
      const Json& s = j["scale"];
      if (s.is_number_float()) sk.scale = Scalar(s.get<double>());
      else sk.scale = Scalar(rational(s, sub(path, "scale")));
    }
    return KernelSpec{sk, st};
  }
  if (kind == "piecewise_rect") {
    PiecewiseRectKernel rk;
    const Json& ps = at(j, "pieces", path);
    if (!ps.is_array()) fail(sub(path, "pieces"), "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string p = idx(sub(path, "pieces"), i);
      rk.pieces.push_back(RectPiece{Rect{interval_pair(at(ps[i], "t", p), sub(p, "t")), interval_pair(at(ps[i], "s", p), sub(p, "s"))},
                                    poly2(at(ps[i], "poly", p), sub(p, "poly"))});
    }
    return KernelSpec{rk, st};
  }
  if (kind == "grid") {
    GridKernel g;
    g.t_nodes = real_list(at(j, "t_nodes", path), sub(path, "t_nodes"));
    g.s_nodes = real_list(at(j, "s_nodes", path), sub(path, "s_nodes"));
    const Json& rows = at(j, "samples", path);
    if (!rows.is_array()) fail(sub(path, "samples"), "expected a matrix");
    for (std::size_t i = 0; i < rows.size(); ++i) g.samples.push_back(real_list(rows[i], idx(sub(path, "samples"), i)));
    return KernelSpec{g, st};
  }
  fail(sub(path, "kind"), "unknown kernel kind '" + kind + "' (bilinear, polynomial, separable, piecewise_rect, grid)");
}

inline Json kernel(const KernelSpec& k) {
  Json o;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, BilinearKernel>) {
          o["kind"] = "bilinear";
          o["a0"] = rational(f.a0);
          o["a1"] = rational(f.a1);
          o["c1"] = rational(f.c1);
        } else if constexpr (std::is_same_v<T, PolynomialKernel>) {
          o["kind"] = "polynomial";
          o["coeffs"] = poly2(f.poly);
        } else if constexpr (std::is_same_v<T, SeparableKernel>) {
          o["kind"] = "separable";
          o["a"] = piecefn(f.a);
          o["c"] = piecefn(f.c);
          if (!f.scale.equals(Scalar(1)) || !f.scale.is_exact()) {
            if (f.scale.is_exact()) o["scale"] = rational(f.scale.exact());
            else o["scale"] = f.scale.value();
          }
        } else if constexpr (std::is_same_v<T, PiecewiseRectKernel>) {
          o["kind"] = "piecewise_rect";
          Json ps = Json::array();
          for (const auto& p : f.pieces) {
            Json q;
            q["t"] = interval_pair(p.rect.t);
            q["s"] = interval_pair(p.rect.s);
            q["poly"] = poly2(p.poly);
            ps.push_back(q);
          }
          o["pieces"] = ps;
        } else {
          o["kind"] = "grid";
          o["t_nodes"] = f.t_nodes;
          o["s_nodes"] = f.s_nodes;
          o["samples"] = f.samples;
        }
      },
      k.form);
  return o;
}

inline OperatorSpec op(const Json& j, const Strip& st, const std::string& path) {
  const std::string type = at(j, "type", path).get<std::string>();
  if (type == "multiplication") return MultiplicationOp{piecefn(at(j, "symbol", path), sub(path, "symbol"))};
  if (type == "integral") return IntegralOp{kernel(at(j, "kernel", path), st, sub(path, "kernel"))};
  fail(sub(path, "type"), "expected 'multiplication' or 'integral'");
}

inline Json op(const OperatorSpec& o) {
  Json j;
  if (const auto* m = as_mult(o)) {
    j["type"] = "multiplication";
    j["symbol"] = piecefn(m->symbol);
  } else {
    j["type"] = "integral";
    j["kernel"] = kernel(as_integral(o)->kernel);
  }
  return j;
}

inline Json p_norm(double p) {
  if (std::isinf(p)) return "inf";
  if (p == std::floor(p) && p < 1e15) return static_cast<long long>(p);
  return p;
}

inline double p_norm(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  return real(j, path);
}

}  // namespace io

inline Scenario scenario_from_json(const Json& j) {
  using namespace io;
  if (!j.is_object()) fail("", "scenario must be a JSON object");
  Scenario s;
  s.label = j.contains("label") ? j["label"].get<std::string>() : "";
  const Json& h = at(j, "hull", "");
  const Rational lo = rational(at(h, "lo", "hull"), "hull.lo"), hi = rational(at(h, "hi", "hull"), "hull.hi");
  if (lo > hi) throw InputError("empty-hull", "hull lo > hi");
  s.hull = Interval(lo, hi);
  s.alpha = rational(at(j, "alpha", ""), "alpha");
  s.beta = rational(at(j, "beta", ""), "beta");
  s.F = FPoly(rational_list(at(at(j, "F", ""), "deltas", "F"), "F.deltas"));
  const Strip st{s.hull, s.alpha, s.beta};
  s.A = op(at(j, "A", ""), st, "A");
  s.B = op(at(j, "B", ""), st, "B");
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    if (g.contains("panels")) s.grid.panels = g["panels"].get<int>();
    if (g.contains("nodes_per_panel")) s.grid.nodes_per_panel = g["nodes_per_panel"].get<int>();
    if (g.contains("p_norms")) {
      s.grid.p_norms.clear();
      const Json& ps = g["p_norms"];
      if (!ps.is_array()) fail("grid.p_norms", "expected an array");
      for (std::size_t i = 0; i < ps.size(); ++i) s.grid.p_norms.push_back(p_norm(ps[i], idx("grid.p_norms", i)));
    }
  }
  return s;
}

inline Json scenario_to_json(const Scenario& s) {
  using namespace io;
  Json j;
  j["label"] = s.label;
  j["hull"] = Json{{"lo", rational(s.hull.lo)}, {"hi", rational(s.hull.hi)}};
  j["alpha"] = rational(s.alpha);
  j["beta"] = rational(s.beta);
  j["F"] = Json{{"deltas", rational_list(s.F.deltas())}};
  j["A"] = op(s.A);
  j["B"] = op(s.B);
  Json ps = Json::array();
  for (double p : s.grid.p_norms) ps.push_back(p_norm(p));
  j["grid"] = Json{{"panels", s.grid.panels}, {"nodes_per_panel", s.grid.nodes_per_panel}, {"p_norms", ps}};
  return j;
}

/// Parse text into a scenario; JSON syntax errors and bad fields become
/// InputError diagnostics.
inline Scenario parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("parse-error", e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ParseError& e) {
    throw InputError("parse-error", e.what());
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse-error", e.what());
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("parse-error", e.what());
  }
}

inline std::string dump_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

}  // namespace covrel

#pragma once

// Command layer: checker dispatch, oracle cross-check and report rendering.

#include "covrel/catalog.hpp"
#include "covrel/conditions.hpp"
#include "covrel/discretize.hpp"
#include "covrel/kernel_calculus.hpp"
#include "covrel/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace covrel {

constexpr double kAcceptResidual = 1e-8;
constexpr double kRejectResidual = 1e-4;

enum class ExitCode : int { AgreeYes = 0, AgreeNo = 1, Disagree = 2, InputError = 3, Inconclusive = 4 };

enum class Agreement { Agree, Disagree, SymbolicUnavailable };

inline std::string to_string(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::SymbolicUnavailable: return "symbolic-unavailable";
  }
  return "?";
}

struct Report {
  std::string label;
  Verdict symbolic;
  ResidualReport numeric;
  Agreement agreement = Agreement::SymbolicUnavailable;
  std::vector<std::string> audit_notes;
  ExitCode exit_code = ExitCode::AgreeYes;
};

/// Agreement and exit code from a verdict and a residual.
inline std::pair<Agreement, ExitCode> judge(Holds h, double r) {
  if (h == Holds::Yes) return r <= kAcceptResidual ? std::pair{Agreement::Agree, ExitCode::AgreeYes} : std::pair{Agreement::Disagree, ExitCode::Disagree};
  if (h == Holds::No) return r >= kRejectResidual ? std::pair{Agreement::Agree, ExitCode::AgreeNo} : std::pair{Agreement::Disagree, ExitCode::Disagree};
  if (r <= kAcceptResidual) return {Agreement::SymbolicUnavailable, ExitCode::AgreeYes};
  if (r >= kRejectResidual) return {Agreement::SymbolicUnavailable, ExitCode::AgreeNo};
  return {Agreement::SymbolicUnavailable, ExitCode::Inconclusive};
}

/// Picks the checker that matches the operator shapes.
inline Verdict check_scenario(const Scenario& s) {
  const auto* ma = as_mult(s.A);
  const auto* mb = as_mult(s.B);
  if (ma) {
    if (auto alpha = constant_symbol(ma->symbol, s.hull)) {
      Verdict v = check_prop1(*alpha, s.F);
      v.notes.insert(v.notes.begin(), "A = " + to_string(*alpha) + "I");
      return v;
    }
    return check_prop4(ma->symbol, as_integral(s.B)->kernel, s.F);
  }
  const KernelSpec& k = as_integral(s.A)->kernel;
  const PieceFn& b = mb->symbol;
  if (auto beta = constant_symbol(b, s.hull)) {
    if (*beta == 0) {
      Verdict v = verdict_yes({"B = 0: both sides vanish"});
      v.case_tag = CaseTag::DegenerateBZero;
      return v;
    }
    Verdict v = check_prop2(k, s.F);
    v.notes.insert(v.notes.begin(), "B = " + to_string(*beta) + "I");
    return v;
  }
  bool meets = false;
  for (const auto& I : piece_support(b))
    if (auto c = intersect(I, s.strip().s_range()); c && c->lo < c->hi) meets = true;
  if (!meets && !k.is_grid()) return check_cor3(k, b, s.F);
  return check_int_mult(k, b, s.F);
}

inline Report verify(const Scenario& s) {
  if (auto d = scenario_validate(s); !d.empty()) throw InputError(std::move(d));
  Report r;
  r.label = s.label;
  r.symbolic = check_scenario(s);
  r.numeric = residual(s);
  r.symbolic.numeric_residual = r.numeric.residual;
  std::tie(r.agreement, r.exit_code) = judge(r.symbolic.holds, r.numeric.residual);
  return r;
}

// -- audit notes for built-in examples ----------------------------------------

inline std::string scalar_note(const Scalar& x) {
  if (x.is_exact()) return to_string(x.exact());
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12f", x.value());
  return buf;
}

inline std::vector<std::string> audit(const Example& e) {
  std::vector<std::string> out = e.notes;
  const Scenario& s = e.scenario;
  const SeparableKernel* sk = nullptr;
  if (const auto* in = as_integral(s.A)) sk = std::get_if<SeparableKernel>(&in->kernel.form);
  if (sk) {
    const Scalar mu = sk->scale * mu_separable(sk->a, sk->c, s.alpha, s.beta);
    std::string line = "computed mu = " + scalar_note(mu);
    if (e.stated_mu) {
      const bool same = mu.equals(Scalar(*e.stated_mu));
      line += same ? ", matches stated mu = " + to_string(*e.stated_mu)
                   : ", DISCREPANCY: stated mu = " + to_string(*e.stated_mu);
    }
    out.push_back(line);
    const Scalar lambda = shifted_F(s.F, mu);
    line = "computed lambda = " + scalar_note(lambda);
    if (e.stated_lambda)
      line += lambda.equals(Scalar(*e.stated_lambda)) ? ", matches stated lambda = " + to_string(*e.stated_lambda)
                                                      : ", DISCREPANCY: stated lambda = " + to_string(*e.stated_lambda);
    out.push_back(line);
  }
  if (e.id == "LAURENT") {
    const auto* mb = as_mult(s.B);
    const Laurent1& b = mb->symbol.pieces().front().atom.exact_part();
    const Verdict ob = check_laurent_obstruction(b, s.F, s.alpha, s.beta, s.hull);
    out.push_back(std::string("laurent obstruction ") + (ob.yes() ? "confirmed" : "not confirmed") + ": " +
                  (ob.witness ? ob.witness->detail : ""));
  }
  return out;
}

inline Report reproduce(const Example& e) {
  Report r = verify(e.scenario);
  r.audit_notes = audit(e);
  return r;
}

/// All ids a reproduce argument stands for; "E5" is the six two-level cases.
inline std::vector<std::string> expand_example_id(const std::string& id) {
  if (id == "E5") return {"E5.1", "E5.2", "E5.3", "E5.4", "E5.5", "E5.6"};
  return {id};
}

// -- bilinear family with constant b ------------------------------------------

struct BilinearParams {
  Rational a0 = 0, a1 = 0, c1 = 0, b0 = 1, d1 = 0, d2 = 0, alpha = 0, beta = 1;
};

/// k = a0 + a1 t + c1 s on hull [α,β], b ≡ b0, F = d1 z + d2 z^2.
inline Scenario bilinear_scenario(const BilinearParams& p) {
  Scenario s;
  s.label = "bilinear";
  s.hull = Interval(p.alpha, p.beta);
  s.alpha = p.alpha;
  s.beta = p.beta;
  s.F = FPoly(std::vector<Rational>{0, p.d1, p.d2});
  s.A = IntegralOp{KernelSpec{BilinearKernel{p.a0, p.a1, p.c1}, s.strip()}};
  s.B = MultiplicationOp{p.b0 == 0 ? PieceFn() : PieceFn::on(s.hull, Atom(p.b0))};
  return s;
}

inline Cor2Result classify(const BilinearParams& p) {
  if (!(p.alpha < p.beta)) throw InputError("alpha-not-less-than-beta", "alpha must be < beta");
  return cor2_classify(p.a0, p.a1, p.c1, Poly1::constant(p.b0), p.d1, p.d2, p.alpha, p.beta);
}

inline Cor2Solution solve(const BilinearParams& p) {
  if (!(p.alpha < p.beta)) throw InputError("alpha-not-less-than-beta", "alpha must be < beta");
  return cor2_solve_a0(p.d1, p.d2, p.a1, p.c1, p.alpha, p.beta);
}

// -- JSON rendering ------------------------------------------------------------

inline Json witness_json(const Witness& w) {
  Json j;
  j["kind"] = w.kind;
  j["detail"] = w.detail;
  if (w.region) {
    Json rects = Json::array();
    for (const auto& r : w.region->rects())
      rects.push_back(Json::array({io::rational(r.t.lo), io::rational(r.t.hi), io::rational(r.s.lo), io::rational(r.s.hi)}));
    j["rects"] = rects;
    j["measure"] = io::rational(w.region->measure());
  }
  return j;
}

inline Json verdict_json(const Verdict& v) {
  Json j;
  j["holds"] = to_string(v.holds);
  j["case"] = to_string(v.case_tag.value_or(CaseTag::NotApplicable));
  if (v.witness) j["witness"] = witness_json(*v.witness);
  j["notes"] = v.notes;
  return j;
}

inline Json numeric_json(const ResidualReport& n) {
  Json j;
  j["residual"] = n.residual;
  j["grid_size"] = n.grid_size;
  Json ps = Json::array();
  for (double p : n.p_norms) ps.push_back(p_label(p));
  j["p_norms"] = ps;
  Json tests = Json::array();
  for (const auto& t : n.per_test) {
    Json v = Json::object();
    for (std::size_t i = 0; i < t.values.size(); ++i) v[p_label(n.p_norms[i])] = t.values[i];
    tests.push_back(Json{{"id", t.id}, {"values", v}});
  }
  j["per_test"] = tests;
  return j;
}

inline Json report_json(const Report& r) {
  Json j;
  j["label"] = r.label;
  j["symbolic"] = verdict_json(r.symbolic);
  j["numeric"] = numeric_json(r.numeric);
  j["agreement"] = to_string(r.agreement);
  j["audit_notes"] = r.audit_notes;
  j["exit_code"] = static_cast<int>(r.exit_code);
  return j;
}

inline Json diagnostics_json(const std::vector<Diagnostic>& d) {
  Json a = Json::array();
  for (const auto& x : d) a.push_back(Json{{"code", x.code}, {"message", x.message}});
  return Json{{"diagnostics", a}, {"exit_code", static_cast<int>(ExitCode::InputError)}};
}

inline std::string fmt_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

inline std::string report_pretty(const Report& r) {
  std::string out = "scenario   " + r.label + "\n";
  out += "verdict    " + to_string(r.symbolic.holds) + " (" + to_string(r.symbolic.case_tag.value_or(CaseTag::NotApplicable)) + ")\n";
  if (r.symbolic.witness) {
    out += "witness    " + r.symbolic.witness->kind + ": " + r.symbolic.witness->detail + "\n";
    if (r.symbolic.witness->region) out += "region     " + r.symbolic.witness->region->str() + "\n";
  }
  for (const auto& n : r.symbolic.notes) out += "note       " + n + "\n";
  out += "residual   " + fmt_residual(r.numeric.residual) + " on " + std::to_string(r.numeric.grid_size) + " nodes\n";
  out += "agreement  " + to_string(r.agreement) + "\n";
  for (const auto& n : r.audit_notes) out += "audit      " + n + "\n";
  out += "exit       " + std::to_string(static_cast<int>(r.exit_code)) + "\n";
  return out;
}

}  // namespace covrel

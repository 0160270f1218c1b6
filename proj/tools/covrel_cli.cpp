// covrel: verify, classify and solve covariance commutation relations
// AB = BF(A) between integral and multiplication operators.
//
// Exit codes: 0 agree-yes, 1 agree-no, 2 disagreement, 3 input error,
// 4 inconclusive oracle band with no symbolic verdict.

#include "covrel/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace covrel;

struct Globals {
  std::string out;
  bool pretty = false;
  int grid_panels = -1;
  int grid_nodes = -1;
  std::string p_norms;
};

struct Emitter {
  const Globals& g;

  void write(const std::string& text) const {
    if (g.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw InputError("output-unwritable", "cannot open '" + g.out + "' for writing");
    f << text;
  }
  void json(const Json& j) const { write(j.dump(2) + "\n"); }
};

int input_error(const std::vector<Diagnostic>& d) {
  std::cout << diagnostics_json(d).dump(2) << "\n";
  return static_cast<int>(ExitCode::InputError);
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t(detail::trim(item));
    if (t == "inf" || t == "infinity") out.push_back(GridConfig::kInf);
    else out.push_back(to_double(parse_rational(t)));
  }
  return out;
}

void apply_grid_flags(Scenario& s, const Globals& g) {
  if (g.grid_panels >= 0) s.grid.panels = g.grid_panels;
  if (g.grid_nodes >= 0) s.grid.nodes_per_panel = g.grid_nodes;
  if (!g.p_norms.empty()) s.grid.p_norms = parse_p_list(g.p_norms);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("file-unreadable", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int emit_report(const Report& r, const Emitter& e) {
  if (e.g.pretty) e.write(report_pretty(r));
  else e.json(report_json(r));
  return static_cast<int>(r.exit_code);
}

struct ParamFlags {
  std::string a0 = "0", a1 = "0", c1 = "0", b0 = "1", d1 = "0", d2 = "0", alpha = "0", beta = "1";

  void attach(CLI::App* cmd, bool with_a0) {
    if (with_a0) cmd->add_option("--a0", a0, "kernel constant term");
    cmd->add_option("--a1", a1, "kernel t coefficient");
    cmd->add_option("--c1", c1, "kernel s coefficient");
    cmd->add_option("--b0", b0, "constant symbol b");
    cmd->add_option("--d1", d1, "delta_1");
    cmd->add_option("--d2", d2, "delta_2");
    cmd->add_option("--alpha", alpha, "integration lower limit");
    cmd->add_option("--beta", beta, "integration upper limit");
  }

  BilinearParams parse() const {
    auto field = [](const char* name, const std::string& v) {
      try {
        return parse_rational(v);
      } catch (const ParseError& e) {
        throw InputError("parse-error", std::string("--") + name + ": " + e.what());
      }
    };
    return {field("a0", a0), field("a1", a1), field("c1", c1), field("b0", b0),
            field("d1", d1), field("d2", d2), field("alpha", alpha), field("beta", beta)};
  }
};

int cmd_verify(const std::string& path, const Globals& g) {
  Scenario s = parse_scenario(read_file(path));
  apply_grid_flags(s, g);
  return emit_report(verify(s), Emitter{g});
}

int cmd_classify(const ParamFlags& flags, const Globals& g) {
  const BilinearParams p = flags.parse();
  const Cor2Result r = classify(p);
  Json j;
  j["case"] = to_string(r.tag);
  j["identity"] = r.identity;
  j["holds"] = to_string(r.verdict.holds);
  if (r.verdict.witness) j["witness"] = witness_json(*r.verdict.witness);
  j["notes"] = r.verdict.notes;
  const int code = r.verdict.yes() ? 0 : 1;
  j["exit_code"] = code;
  const Emitter e{g};
  if (g.pretty) e.write("case      " + to_string(r.tag) + "\nidentity  " + r.identity + "\nholds     " + to_string(r.verdict.holds) + "\n");
  else e.json(j);
  return code;
}

int cmd_solve(const ParamFlags& flags, const std::string& emit_path, const Globals& g) {
  BilinearParams p = flags.parse();
  const Cor2Solution sol = solve(p);
  Json j;
  j["case"] = to_string(sol.tag);
  if (sol.free) j["a0"] = "free";
  else if (sol.a0) j["a0"] = to_string(*sol.a0);
  else j["a0"] = "no solution";
  const int code = sol.free || sol.a0 ? 0 : 1;
  j["exit_code"] = code;
  if (sol.a0 && !emit_path.empty()) {
    p.a0 = *sol.a0;
    Scenario s = bilinear_scenario(p);
    s.label = "solved-" + to_string(sol.tag);
    std::ofstream f(emit_path, std::ios::binary);
    if (!f) throw InputError("output-unwritable", "cannot open '" + emit_path + "' for writing");
    f << dump_scenario(s);
  }
  const Emitter e{g};
  if (g.pretty) e.write("case  " + to_string(sol.tag) + "\na0    " + j["a0"].get<std::string>() + "\n");
  else e.json(j);
  return code;
}

int cmd_reproduce(const std::string& id, const Globals& g) {
  std::vector<Example> examples;
  try {
    for (const auto& x : expand_example_id(id)) examples.push_back(find_example(x));
  } catch (const std::out_of_range& e) {
    throw InputError("unknown-example", e.what());
  }
  std::vector<Report> reports;
  for (auto& ex : examples) {
    apply_grid_flags(ex.scenario, g);
    reports.push_back(reproduce(ex));
  }
  const Emitter e{g};
  if (reports.size() == 1) return emit_report(reports.front(), e);

  int code = 0;
  for (const auto& r : reports) code = std::max(code, static_cast<int>(r.exit_code));
  if (g.pretty) {
    std::string text;
    for (const auto& r : reports) text += report_pretty(r) + "\n";
    e.write(text);
  } else {
    Json all = Json::array();
    for (const auto& r : reports) all.push_back(report_json(r));
    e.json(Json{{"id", id}, {"reports", all}, {"exit_code", code}});
  }
  return code;
}

int cmd_sweep(int count, std::uint64_t seed, const std::string& family, const Globals& g) {
  const auto f = family_from_name(family);
  if (!f) throw InputError("unknown-family", "family must be one of bilinear, separable, multA");
  const SweepSummary s = run_sweep(*f, count, seed);
  const Emitter e{g};
  if (g.pretty) e.write(sweep_pretty(s));
  else e.json(sweep_json(s));
  return static_cast<int>(s.exit_code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covrel: integral/multiplication operator pairs satisfying AB = BF(A)"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "write the report to PATH instead of stdout");
  app.add_flag("--pretty", g.pretty, "human-readable rendering");
  app.add_option("--grid-panels", g.grid_panels, "minimum panel count (0 = default rule)");
  app.add_option("--grid-nodes", g.grid_nodes, "Gauss nodes per panel, 2..16");
  app.add_option("--p", g.p_norms, "comma-separated p-norms, e.g. \"1,2,inf\"");

  std::string scenario_path;
  auto* verify_cmd = app.add_subcommand("verify", "check a scenario file symbolically and numerically");
  verify_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();

  ParamFlags classify_flags;
  auto* classify_cmd = app.add_subcommand("classify", "bilinear kernel, constant b: match the case and check it");
  classify_flags.attach(classify_cmd, true);

  ParamFlags solve_flags;
  std::string emit_path;
  auto* solve_cmd = app.add_subcommand("solve", "bilinear kernel, constant b: closed-form a0");
  solve_flags.attach(solve_cmd, false);
  solve_cmd->add_option("--emit-scenario", emit_path, "also write the solved scenario to PATH");

  std::string example_id;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run a built-in reference scenario");
  reproduce_cmd->add_option("id", example_id, "example id")->required();

  int count = 0;
  std::uint64_t seed = 1;
  std::string family = "bilinear";
  auto* sweep_cmd = app.add_subcommand("sweep", "random checker/oracle agreement sweep");
  sweep_cmd->add_option("--count", count, "number of scenarios")->required();
  sweep_cmd->add_option("--seed", seed, "generator seed");
  sweep_cmd->add_option("--family", family, "bilinear | separable | multA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return input_error({{"usage", e.what()}});
  }

  try {
    if (*verify_cmd) return cmd_verify(scenario_path, g);
    if (*classify_cmd) return cmd_classify(classify_flags, g);
    if (*solve_cmd) return cmd_solve(solve_flags, emit_path, g);
    if (*reproduce_cmd) return cmd_reproduce(example_id, g);
    if (*sweep_cmd) return cmd_sweep(count, seed, family, g);
  } catch (const InputError& e) {
    return input_error(e.diagnostics());
  } catch (const ParseError& e) {
    return input_error({{"parse-error", e.what()}});
  }
  return static_cast<int>(ExitCode::InputError);
}

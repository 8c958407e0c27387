#include "nlwave/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlwave/conditions.hpp"
#include "nlwave/inverse.hpp"
#include "nlwave/quadrature.hpp"

namespace nlwave::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

[[noreturn]] void bad_input(const std::string& msg) { throw std::invalid_argument(msg); }

// ---------------------------------------------------------------------------
// CSV helpers

std::vector<std::vector<double>> read_csv(const std::string& path, int columns) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) bad_input("'" + path + "': empty file");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) < columns)
      bad_input("'" + path + "': expected " + std::to_string(columns) + " columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) bad_input("'" + path + "': no data rows");
  return rows;
}

UniformGrid grid_from_column(const std::vector<double>& v, const std::string& what) {
  const int n = static_cast<int>(v.size());
  if (n < 2) bad_input(what + ": need at least 2 samples");
  const double step = (v.back() - v.front()) / (n - 1);
  if (!(step > 0.0)) bad_input(what + ": sample abscissae must increase");
  for (int i = 0; i < n; ++i)
    if (std::fabs(v[i] - (v.front() + i * step)) > 1e-9 * std::max(1.0, std::fabs(v.back())))
      bad_input(what + ": samples are not on a uniform grid");
  return UniformGrid(v.front(), v.back(), n);
}

Func1D read_func1d(const std::string& path) {
  auto rows = read_csv(path, 2);
  std::vector<double> xs, vs;
  for (auto& r : rows) {
    xs.push_back(r[0]);
    vs.push_back(r[1]);
  }
  return Func1D::from_samples(grid_from_column(xs, path), std::move(vs));
}

Func2D read_func2d(const std::string& path) {
  auto rows = read_csv(path, 3);
  std::vector<double> xs, ts;
  for (auto& r : rows) {
    if (xs.empty() || r[0] != xs.back()) xs.push_back(r[0]);
  }
  const std::size_t nt = rows.size() / xs.size();
  if (xs.size() * nt != rows.size()) bad_input(path + ": ragged tensor grid");
  for (std::size_t j = 0; j < nt; ++j) ts.push_back(rows[j][1]);
  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const auto& r = rows[i * nt + j];
      if (r[0] != xs[i] || r[1] != ts[j]) bad_input(path + ": rows not in x-major order");
      values[i * nt + j] = r[2];
    }
  return Func2D::from_samples(grid_from_column(xs, path + " (x)"),
                              grid_from_column(ts, path + " (t)"), std::move(values));
}

// ---------------------------------------------------------------------------
// config

const std::string* find_function(const Config& c, const std::string& name) {
  for (const auto& [key, value] : c.functions)
    if (key == name) return &value;
  return nullptr;
}

Config parse_config_json(const ordered_json& j) {
  Config c;
  static const std::vector<std::string> known = {
      "beta", "delta1", "delta2", "T",        "K",       "nt",     "nx",
      "tol",  "max_iter", "threads", "coupling_mode", "preset", "functions"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const std::string& k : known) ok = ok || k == key;
    if (!ok) bad_input("unknown config key '" + key + "'");
  }
  if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
  if (j.contains("functions")) {
    if (c.preset) bad_input("config must contain exactly one of 'functions' and 'preset'");
    for (const auto& [key, value] : j.at("functions").items()) {
      if (key != "f" && key != "phi" && key != "psi" && key != "h" && key != "a")
        bad_input("unknown function key '" + key + "'");
      c.functions.emplace_back(key, value.get<std::string>());
    }
  } else if (!c.preset) {
    bad_input("config must contain exactly one of 'functions' and 'preset'");
  }
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key);
  };
  get("beta", c.beta);
  get("delta1", c.delta1);
  get("delta2", c.delta2);
  if (j.contains("T")) c.T = j.at("T").get<double>();
  if (c.T && !(*c.T > 0.0)) bad_input("T must be positive");
  get("K", c.K);
  get("nt", c.nt);
  get("nx", c.nx);
  get("tol", c.tol);
  get("max_iter", c.max_iter);
  get("threads", c.threads);
  if (j.contains("coupling_mode")) {
    const std::string m = j.at("coupling_mode").get<std::string>();
    if (m == "ode-consistent") c.mode = CouplingMode::ode_consistent;
    else if (m == "as-printed") c.mode = CouplingMode::as_printed;
    else bad_input("coupling_mode must be 'ode-consistent' or 'as-printed'");
  }
  if (c.K < 1) bad_input("K must be >= 1");
  if (c.nt < 9) bad_input("nt must be >= 9");
  if (c.nx < 9 || c.nx % 2 == 0) bad_input("nx must be odd and >= 9 (keeps x = 1/2 on-grid)");
  if (!(c.tol > 0.0)) bad_input("tol must be positive");
  if (c.max_iter < 1) bad_input("max_iter must be >= 1");
  if (c.threads < 1) bad_input("threads must be >= 1");
  return c;
}

Config parse_config_file_inner(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open config '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    bad_input("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config_json(j);
}

Func1D make_func1d(const std::string& text, char var, const std::string& base_dir) {
  if (!text.empty() && text[0] == '@') return read_func1d(base_dir + "/" + text.substr(1));
  Expr e = parse_expression(text);
  const char other = var == 'x' ? 't' : 'x';
  if (e.depends_on(other))
    bad_input(std::string("expression '") + text + "' may only use variable '" + var + "'");
  return Func1D::from_expr(e, var);
}

Func2D make_func2d(const std::string& text, const std::string& base_dir) {
  if (!text.empty() && text[0] == '@') return read_func2d(base_dir + "/" + text.substr(1));
  return Func2D::from_expr(parse_expression(text));
}

}  // namespace

Config parse_config_file(const std::string& path) { return parse_config_file_inner(path); }

LoadedProblem load_problem(const Config& config, const std::string& base_dir) {
  LoadedProblem lp;
  lp.config = config;
  if (config.preset) {
    ManufacturedSpec spec = make_preset(*config.preset, config.nx, config.nt);
    // an explicit T in the config overrides the preset's bisected choice
    if (config.T) spec.T = *config.T;
    Manufactured built = build(spec);
    lp.config.beta = spec.beta;
    lp.config.delta1 = spec.delta1;
    lp.config.delta2 = spec.delta2;
    lp.config.T = spec.T;
    lp.a_known = Func1D::from_expr(spec.a_star, 't');
    lp.problem = built.problem;
    lp.manufactured = std::move(built);
    return lp;
  }
  const std::string* f = find_function(config, "f");
  const std::string* phi = find_function(config, "phi");
  const std::string* psi = find_function(config, "psi");
  const std::string* h = find_function(config, "h");
  const std::string* a = find_function(config, "a");
  if (!f || !phi || !psi) bad_input("functions must define at least f, phi and psi");
  if (!config.T) bad_input("T is required when functions are given explicitly");
  ProblemData prob{make_basis_params(config.beta),
                   make_nonlocal_params(config.delta1, config.delta2, *config.T),
                   make_func2d(*f, base_dir), make_func1d(*phi, 'x', base_dir),
                   make_func1d(*psi, 'x', base_dir), std::nullopt};
  if (h) prob.h = make_func1d(*h, 't', base_dir);
  if (a) lp.a_known = make_func1d(*a, 't', base_dir);
  lp.problem = std::move(prob);
  return lp;
}

namespace {

// ---------------------------------------------------------------------------
// reports

ordered_json compliance_json(const ComplianceReport& rep) {
  ordered_json items = ordered_json::array();
  for (const CheckItem& it : rep.items)
    items.push_back({{"name", it.name}, {"defect", it.defect}, {"tol", it.tol}, {"pass", it.pass}});
  return {{"items", items}, {"all_pass", rep.all_pass}};
}

ordered_json constants_json(const ConstantsReport& r) {
  ordered_json j;
  j["rho"] = r.rho;
  j["rho1"] = r.rho1;
  j["rho2"] = r.rho2;
  for (int i = 0; i < 5; ++i) {
    j["A" + std::to_string(i + 1)] = r.A[i];
    j["B" + std::to_string(i + 1)] = r.B[i];
  }
  j["A_T"] = r.A_total;
  j["B_T"] = r.B_total;
  j["R"] = r.R;
  j["series_constant"] = r.series_constant;
  j["contraction_lhs"] = r.contraction_lhs;
  j["contraction_holds"] = r.contraction_holds;
  j["solvability_lhs"] = r.solvability_lhs;
  j["solvability_holds"] = r.solvability_holds;
  j["equivalence_factor"] = r.equivalence_factor;
  j["data_norms"] = {{"phi_l2", r.norms.phi_l2},
                     {"phi3_l2", r.norms.phi3_l2},
                     {"psi_l2", r.norms.psi_l2},
                     {"psi2_l2", r.norms.psi2_l2},
                     {"f_l2", r.norms.f_l2},
                     {"fxx_l2", r.norms.fxx_l2},
                     {"phi3_weighted", r.norms.phi3_weighted},
                     {"psi2_weighted", r.norms.psi2_weighted},
                     {"fxx_weighted", r.norms.fxx_weighted},
                     {"sup_h2_minus_fmid", r.norms.sup_h2_minus_fmid},
                     {"sup_inv_h", r.norms.sup_inv_h}};
  return j;
}

ordered_json residuals_json(const Residuals& r) {
  return {{"pde", r.pde},           {"integral", r.integral}, {"overdet", r.overdet},
          {"ic_value", r.ic_value}, {"ic_deriv", r.ic_deriv}, {"bc_value", r.bc_value},
          {"bc_flux", r.bc_flux}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_input("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

void write_a_csv(const fs::path& path, const UniformGrid& g, std::span<const double> a,
                 const std::vector<double>* a_true) {
  std::string out = a_true ? "t,a,a_true,abs_err\n" : "t,a\n";
  for (int j = 0; j < g.n; ++j) {
    out += format_double(g.node(j)) + "," + format_double(a[j]);
    if (a_true) {
      out += "," + format_double((*a_true)[j]) + "," +
             format_double(std::fabs(a[j] - (*a_true)[j]));
    }
    out += "\n";
  }
  write_text(path, out);
}

void write_field_csv(const fs::path& path, const Field& field) {
  std::string out = "x,t,u\n";
  out.reserve(static_cast<std::size_t>(field.xgrid.n) * field.tgrid.n * 24);
  for (int ix = 0; ix < field.xgrid.n; ++ix)
    for (int jt = 0; jt < field.tgrid.n; ++jt)
      out += format_double(field.xgrid.node(ix)) + "," + format_double(field.tgrid.node(jt)) +
             "," + format_double(field.at(ix, jt)) + "\n";
  write_text(path, out);
}

// ---------------------------------------------------------------------------
// subcommands

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  bool force = false;
  bool max_T = false;
  int threads = 0;  // 0: take the config value
  std::string mode;
};

LoadedProblem load_from_path(const CommonArgs& args) {
  Config cfg = parse_config_file_inner(args.config_path);
  if (args.threads > 0) cfg.threads = args.threads;
  if (!args.mode.empty()) {
    if (args.mode == "ode-consistent") cfg.mode = CouplingMode::ode_consistent;
    else if (args.mode == "as-printed") cfg.mode = CouplingMode::as_printed;
    else bad_input("--mode must be ode-consistent or as-printed");
  }
  const std::string base = fs::path(args.config_path).parent_path().string();
  return load_problem(cfg, base.empty() ? "." : base);
}

int cmd_check(const CommonArgs& args) {
  LoadedProblem lp = load_from_path(args);
  if (!lp.problem.h) bad_input("check requires the observation h");
  const Config& cfg = lp.config;
  ComplianceReport compliance = check_conditions(lp.problem, cfg.nx, cfg.nt);
  ConstantsReport constants = compute_constants(lp.problem, cfg.nx, cfg.nt);

  ordered_json report;
  report["compliance"] = compliance_json(compliance);
  report["constants"] = constants_json(constants);
  if (args.max_T) {
    Config probe = cfg;
    const std::string base = fs::path(args.config_path).parent_path().string();
    const double t_max = max_feasible_T(
        [&](double T) {
          Config c = probe;
          c.T = T;
          return load_problem(c, base.empty() ? "." : base).problem;
        },
        cfg.nx, cfg.nt, std::max(cfg.T.value_or(1.0), 1.0));
    report["max_T"] = t_max;
    std::cout << "largest feasible T (contraction inequality): " << format_double(t_max) << "\n";
  }
  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "check_report.json", report);

  const bool ok = compliance.all_pass && constants.contraction_holds;
  std::cout << "compliance: " << (compliance.all_pass ? "pass" : "FAIL")
            << "; contraction inequality: " << (constants.contraction_holds ? "holds" : "FAILS")
            << " (lhs = " << format_double(constants.contraction_lhs) << ")\n";
  return ok ? exit_ok : exit_conditions;
}

int cmd_solve_inverse(const CommonArgs& args, std::optional<int> max_iter_override) {
  LoadedProblem lp = load_from_path(args);
  if (!lp.problem.h) bad_input("solve-inverse requires the observation h");
  const Config& cfg = lp.config;
  fs::create_directories(args.out_dir);

  ComplianceReport compliance = check_conditions(lp.problem, cfg.nx, cfg.nt);
  ConstantsReport constants = compute_constants(lp.problem, cfg.nx, cfg.nt);
  ordered_json report;
  report["compliance"] = compliance_json(compliance);
  report["constants"] = constants_json(constants);
  std::vector<std::string> warnings;
  if (!constants.contraction_holds)
    warnings.push_back("contraction inequality does not hold at this T; convergence and "
                       "uniqueness are not certified");
  if (!compliance.all_pass && !args.force) {
    report["warnings"] = warnings;
    write_json(fs::path(args.out_dir) / "run_report.json", report);
    std::cout << "conditions fail; rerun with --force to solve anyway\n";
    return exit_conditions;
  }
  if (!compliance.all_pass)
    warnings.push_back("conditions fail; solving under --force, expect inflated residuals");

  UniformGrid tgrid(0.0, lp.problem.nonlocal.T, cfg.nt);
  DataCoefficients data = extract_data(lp.problem, cfg.K, cfg.nx, tgrid);
  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = max_iter_override.value_or(cfg.max_iter);
  opts.mode = cfg.mode;
  opts.threads = cfg.threads;
  opts.ball_radius = constants.R;

  try {
    SolveResult result = fixed_point_solve(data, lp.problem.nonlocal, lp.problem.basis, opts);
    result.residuals = residual_report(result.solution, lp.problem, cfg.nx);
    for (const std::string& w : warnings) result.warnings.push_back(w);

    std::optional<Iterate> truth;
    if (lp.manufactured) truth = lp.manufactured->truth(tgrid, cfg.K);
    write_a_csv(fs::path(args.out_dir) / "a.csv", tgrid, result.solution.a.values,
                truth ? &truth->a.values : nullptr);
    write_field_csv(fs::path(args.out_dir) / "field.csv",
                    synthesize_field(result.solution.state, lp.problem.basis,
                                     UniformGrid(0.0, 1.0, cfg.nx)));

    report["iterations"] = result.iterations;
    report["converged"] = result.converged;
    report["history"] = result.history;
    report["contraction_ratios"] = result.contraction_ratios;
    report["a_tail_ratio"] = result.a_tail_ratio;
    report["residuals"] = residuals_json(*result.residuals);
    report["warnings"] = result.warnings;
    if (truth) {
      ErrorReport err = error_report(result.solution, *truth);
      report["error_vs_truth"] = {
          {"a_sup", err.a_sup}, {"a_l2", err.a_l2}, {"e_norm", err.e_norm}};
    }
    write_json(fs::path(args.out_dir) / "run_report.json", report);
    std::cout << "converged in " << result.iterations << " iterations\n";
    return exit_ok;
  } catch (const NonConvergence& e) {
    report["iterations"] = e.iterations;
    report["converged"] = false;
    report["last_delta"] = e.last_delta;
    report["warnings"] = warnings;
    write_json(fs::path(args.out_dir) / "run_report.json", report);
    std::cout << "no convergence: " << e.what() << "\n";
    return exit_no_convergence;
  }
}

int cmd_solve_forward(const CommonArgs& args) {
  LoadedProblem lp = load_from_path(args);
  if (!lp.a_known) bad_input("solve-forward requires the coefficient a (or a preset)");
  const Config& cfg = lp.config;
  fs::create_directories(args.out_dir);

  UniformGrid tgrid(0.0, lp.problem.nonlocal.T, cfg.nt);
  DataCoefficients data = extract_data(lp.problem, cfg.K, cfg.nx, tgrid);
  std::vector<double> a(tgrid.n);
  for (int j = 0; j < tgrid.n; ++j) a[j] = (*lp.a_known)(tgrid.node(j));

  SolveOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.mode = cfg.mode;
  opts.threads = cfg.threads;
  try {
    ForwardResult result = forward_solve(data, a, lp.problem.nonlocal, lp.problem.basis, opts);
    write_field_csv(fs::path(args.out_dir) / "field.csv",
                    synthesize_field(result.state, lp.problem.basis,
                                     UniformGrid(0.0, 1.0, cfg.nx)));
    Iterate z{result.state, TimeGridFunction(tgrid, a)};
    ordered_json report;
    report["iterations"] = result.iterations;
    report["converged"] = result.converged;
    report["history"] = result.history;
    report["residuals"] = residuals_json(residual_report(z, lp.problem, cfg.nx));
    write_json(fs::path(args.out_dir) / "forward_report.json", report);
    std::cout << "forward solve converged in " << result.iterations << " iterations\n";
    return exit_ok;
  } catch (const NonConvergence& e) {
    std::cout << "no convergence: " << e.what() << "\n";
    return exit_no_convergence;
  }
}

int cmd_manufacture(const std::string& preset, const std::string& out_dir, int K, int nt,
                    int nx) {
  ManufacturedSpec spec = make_preset(preset, nx, nt);
  Manufactured built = build(spec);
  fs::create_directories(out_dir);

  ordered_json cfg;
  cfg["beta"] = spec.beta;
  cfg["delta1"] = spec.delta1;
  cfg["delta2"] = spec.delta2;
  cfg["T"] = spec.T;
  cfg["K"] = K;
  cfg["nt"] = nt;
  cfg["nx"] = nx;
  cfg["tol"] = 1e-10;
  cfg["max_iter"] = 100;
  cfg["coupling_mode"] = "ode-consistent";
  cfg["functions"] = {{"f", built.f_expr.str()},
                      {"phi", built.phi_expr.str()},
                      {"psi", built.psi_expr.str()},
                      {"h", built.h_expr.str()},
                      {"a", spec.a_star.valid() ? spec.a_star.str() : "0"}};
  write_json(fs::path(out_dir) / "problem.json", cfg);

  UniformGrid tgrid(0.0, spec.T, nt);
  Iterate truth = built.truth(tgrid, K);
  write_a_csv(fs::path(out_dir) / "truth_a.csv", tgrid, truth.a.values, nullptr);
  write_field_csv(fs::path(out_dir) / "truth_field.csv",
                  synthesize_field(truth.state, built.problem.basis, UniformGrid(0.0, 1.0, nx)));
  std::cout << "wrote problem.json, truth_a.csv, truth_field.csv (T = " << format_double(spec.T)
            << ")\n";
  return exit_ok;
}

int cmd_residual(const CommonArgs& args, const std::string& field_path,
                 const std::string& a_path) {
  LoadedProblem lp = load_from_path(args);
  const Config& cfg = lp.config;

  // reconstruct the state from the field samples: one extraction per time node
  Func2D field = read_func2d(field_path);
  auto a_rows = read_csv(a_path, 2);
  std::vector<double> ts, as;
  for (auto& r : a_rows) {
    ts.push_back(r[0]);
    as.push_back(r[1]);
  }
  UniformGrid tgrid = grid_from_column(ts, a_path);
  UniformGrid xgrid(0.0, 1.0, cfg.nx);
  SpectralState state = SpectralState::zeros(tgrid, cfg.K);
  std::vector<double> column(xgrid.n);
  for (int j = 0; j < tgrid.n; ++j) {
    for (int i = 0; i < xgrid.n; ++i) column[i] = field(xgrid.node(i), tgrid.node(j));
    std::vector<double> coeff = coefficients(column, xgrid, cfg.K, lp.problem.basis);
    for (int flat = 0; flat <= 2 * cfg.K; ++flat) state.modes[flat][j] = coeff[flat];
  }
  Iterate z{std::move(state), TimeGridFunction(tgrid, std::move(as))};
  Residuals res = residual_report(z, lp.problem, cfg.nx);
  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "residual_report.json", residuals_json(res));
  std::cout << "pde residual " << format_double(res.pde) << ", overdetermination "
            << format_double(res.overdet) << "\n";
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"spectral solver for a coefficient inverse problem with nonlocal conditions"};
  app.require_subcommand(1);

  CommonArgs common;
  std::optional<int> max_iter_override;
  std::string preset, field_path, a_path;
  int man_K = 16, man_nt = 257, man_nx = 513;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config_path, "problem configuration (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--threads", common.threads, "parallel per-mode solves");
    sub->add_option("--mode", common.mode, "ode-consistent | as-printed");
  };

  CLI::App* check = app.add_subcommand("check", "audit conditions and contraction constants");
  add_common(check, true);
  check->add_flag("--max-T", common.max_T, "bisect for the largest feasible T");

  CLI::App* solve = app.add_subcommand("solve-inverse", "recover a(t) and u(x,t)");
  add_common(solve, true);
  solve->add_flag("--force", common.force, "solve even when conditions fail");
  solve->add_option("--max-iter", max_iter_override, "override the iteration cap");

  CLI::App* forward = app.add_subcommand("solve-forward", "solve with a(t) known");
  add_common(forward, true);

  CLI::App* manufacture = app.add_subcommand("manufacture", "emit a preset problem + truth");
  manufacture->add_option("--preset", preset, "preset name")->required();
  manufacture->add_option("--out", common.out_dir, "output directory");
  manufacture->add_option("--K", man_K, "truncation");
  manufacture->add_option("--nt", man_nt, "time nodes");
  manufacture->add_option("--nx", man_nx, "space nodes");

  CLI::App* residual = app.add_subcommand("residual", "audit an externally supplied solution");
  add_common(residual, true);
  residual->add_option("--field", field_path, "field CSV (x,t,u)")->required();
  residual->add_option("--a", a_path, "coefficient CSV (t,a)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return exit_invalid_input;
  }

  try {
    if (check->parsed()) return cmd_check(common);
    if (solve->parsed()) return cmd_solve_inverse(common, max_iter_override);
    if (forward->parsed()) return cmd_solve_forward(common);
    if (manufacture->parsed()) return cmd_manufacture(preset, common.out_dir, man_K, man_nt, man_nx);
    if (residual->parsed()) return cmd_residual(common, field_path, a_path);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_no_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid_input;
  }
  return exit_invalid_input;
}

}  // namespace nlwave::cli

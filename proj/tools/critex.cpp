// critex: radial solver, energy-criterion evaluator, and nonexistence
// certifier for -Delta u = K(|x|) u^{(n+2)/(n-2)} + mu u on the unit ball.
//
// Every subcommand prints one self-describing JSON document to stdout (or to
// --json FILE). The document is byte-stable across runs except for the final
// "timing_ms" field. CSV sinks (--csv) carry curves: solution profiles,
// sweep tables, multiplier samples.
//
// Exit codes: 0 success or inconclusive verdict, 1 computation failure,
// 2 config or argument error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critex/json_io.hpp"

namespace {

using critex::io::json;
using Clock = std::chrono::steady_clock;

struct Sink {
  std::string json_path;      // empty: stdout
  std::string csv_path;       // empty: stdout (when csv_requested)
  bool csv_requested = false;
  Clock::time_point start = Clock::now();

  int finish(json doc) const {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        Clock::now() - start)
                        .count();
    doc["timing_ms"] = ms;
    const std::string text = doc.dump(2);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) throw std::runtime_error("cannot write report: " + json_path);
      out << text << '\n';
    } else if (!(csv_requested && csv_path.empty())) {
      // a bare --csv claims stdout for the curve; the report then needs an
      // explicit --json FILE
      std::cout << text << '\n';
    }
    return 0;
  }

  template <class Writer>
  void csv(Writer&& write) const {
    if (!csv_requested) return;
    if (csv_path.empty()) {
      write(std::cout);
      return;
    }
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write csv: " + csv_path);
    write(out);
  }
};

json envelope(const char* command) {
  return {{"tool",
           {{"name", "critex"}, {"version", critex::version_string}}},
          {"command", command}};
}

std::vector<double> padded_y0(std::vector<double> y0, int n) {
  if (n >= 1 && y0.size() > static_cast<std::size_t>(n))
    throw critex::io::config_error("y0",
                                   "has more components than the dimension");
  if (n >= 1) y0.resize(static_cast<std::size_t>(n), 0.0);
  return y0;
}

int run_constants(int n, const Sink& sink) {
  const auto dc = critex::dimension_constants(n);
  json doc = envelope("constants");
  doc["config"] = {{"n", n}, {"quad_tol", 1e-10}};
  doc["report"] = critex::io::constants_json(dc);
  return sink.finish(std::move(doc));
}

int run_geometry(int n, const std::string& y0_list, double mu,
                 const Sink& sink) {
  const auto y0 = padded_y0(critex::io::parse_list(y0_list, "y0"), n);
  const auto dc = critex::dimension_constants(n, 1e-10, false);
  const auto geom = critex::ball_geometry(n, y0);
  const double tol = 1e-9;
  const auto gc = critex::geometry_constants(geom, mu, dc, tol);
  json doc = envelope("geometry");
  doc["config"] = {{"n", n}, {"y0", y0}, {"mu", mu}, {"quad_tol", tol}};
  doc["constants"] = critex::io::constants_json(dc);
  doc["report"] = {{"ball", critex::io::ball_json(geom)},
                   {"constants", critex::io::geometry_constants_json(gc)}};
  return sink.finish(std::move(doc));
}

int run_criterion(const std::string& config_path, const std::string& lambdas,
                  const Sink& sink) {
  const auto spec =
      critex::io::parse_problem(critex::io::load_config(config_path));
  const auto grid = critex::io::parse_list(lambdas, "lambdas");
  const auto rep = critex::evaluate_criteria(spec, grid);
  json doc = envelope("criterion");
  doc["config"] = critex::io::config_json(spec);
  doc["config"]["lambdas"] = grid;
  doc["constants"] = critex::io::constants_json(spec.consts);
  doc["report"] = critex::io::criterion_json(rep);
  return sink.finish(std::move(doc));
}

int run_certify(const std::string& config_path, int truncation,
                std::size_t grid, const Sink& sink) {
  const auto spec =
      critex::io::parse_problem(critex::io::load_config(config_path));
  const auto cert = critex::certify_nonexistence(spec, truncation, grid);
  json doc = envelope("certify");
  doc["config"] = critex::io::config_json(spec);
  doc["config"]["truncation"] = truncation;
  doc["config"]["grid"] = grid;
  doc["constants"] = critex::io::constants_json(spec.consts);
  doc["report"] = critex::io::certificate_json(cert);
  return sink.finish(std::move(doc));
}

int run_shoot(const std::string& config_path, double alpha_min,
              double alpha_max, double eps, bool check_intermediate,
              const Sink& sink) {
  const auto spec =
      critex::io::parse_problem(critex::io::load_config(config_path));
  const auto search =
      critex::find_ground_state(spec, alpha_min, alpha_max, eps);
  json doc = envelope("shoot");
  doc["config"] = critex::io::config_json(spec);
  doc["config"]["alpha_min"] = alpha_min;
  doc["config"]["alpha_max"] = alpha_max;
  doc["config"]["eps"] = eps;
  doc["constants"] = critex::io::constants_json(spec.consts);
  doc["report"] = critex::io::search_json(search);
  doc["report"]["verdict"] = search.found ? "found" : "not_found";
  if (search.found) {
    const auto jet = critex::identity_multiplier(spec.mu);
    doc["report"]["pohozaev_identity"] = critex::io::pohozaev_json(
        critex::pohozaev_sides(search.solution, jet, spec));
    if (check_intermediate)
      doc["report"]["intermediate"] = critex::io::intermediate_json(
          critex::intermediate_checks(search.solution, jet, spec));
  }
  sink.csv([&](std::ostream& os) {
    if (search.found)
      critex::io::write_profile_csv(os, search.solution);
    else
      critex::io::write_sweep_csv(os, search.sweep);
  });
  return sink.finish(std::move(doc));
}

int run_psibar(int n, double mu, int truncation, std::size_t grid,
               const Sink& sink) {
  const auto bar = critex::build_psibar(n, mu, truncation, grid);
  json doc = envelope("psibar");
  doc["config"] = {
      {"n", n}, {"mu", mu}, {"truncation", truncation}, {"grid", grid}};
  doc["report"] = critex::io::psibar_json(bar);
  sink.csv([&](std::ostream& os) { critex::io::write_psibar_csv(os, bar); });
  return sink.finish(std::move(doc));
}

int run_example11(bool have_a, double a, double b, double mu, double f0,
                  const Sink& sink) {
  const auto dc = critex::dimension_constants(5, 1e-10, false);
  // default quadratic coefficient: the exact equality-branch value
  if (!have_a) a = -mu * dc.c3 * f0 / (9.0 * dc.c2);
  const auto res = critex::example_11_check(a, b, mu, f0);
  json doc = envelope("example11");
  doc["config"] = {{"a", a},
                   {"a_from_equality_branch", !have_a},
                   {"b", b},
                   {"mu", mu},
                   {"f0", f0}};
  doc["constants"] = critex::io::constants_json(dc);
  doc["report"] = critex::io::example11_json(res);
  return sink.finish(std::move(doc));
}

int run_dichotomy(const std::string& config_path, const std::string& mus_list,
                  const std::string& lambdas, double alpha_min,
                  double alpha_max, const Sink& sink) {
  const auto base =
      critex::io::parse_problem(critex::io::load_config(config_path));
  const auto mus = critex::io::parse_list(mus_list, "mus");
  const auto grid = critex::io::parse_list(lambdas, "lambdas");

  json rows = json::array();
  bool conflict = false;
  for (const double mu : mus) {
    json row = {{"mu", mu}};
    // the theorem lives on 0 < mu < mu1; out-of-range rows are reported,
    // never clipped
    if (!(mu > 0.0) || !(mu < base.mu1)) {
      row["status"] = "out of admissible range";
      rows.push_back(std::move(row));
      continue;
    }
    row["status"] = "computed";
    auto spec = critex::make_problem(base.geom.n, base.geom.y0, base.k, mu);
    spec.quad_tol = base.quad_tol;
    spec.ode_tol = base.ode_tol;

    const auto crit = critex::evaluate_criteria(spec, grid);
    const auto cert = critex::certify_nonexistence(spec);
    const auto shot = critex::find_ground_state(spec, alpha_min, alpha_max);

    row["criterion_i"] = critex::to_string(crit.verdict_i);
    row["criterion_margin"] = crit.margin;
    row["certificate"] = critex::to_string(cert.verdict);
    if (!cert.failing_stage.empty())
      row["certificate_stage"] = cert.failing_stage;
    row["solution_found"] = shot.found;
    if (shot.found) {
      row["alpha"] = shot.solution.alpha;
      row["boundary_defect"] = shot.solution.boundary_defect;
    }

    const bool certified = cert.verdict ==
                           critex::CertificateVerdict::nonexistence_certified;
    std::string verdict;
    if (certified && shot.found) {
      verdict = "conflict: certificate contradicts a computed solution";
      conflict = true;
    } else if (certified) {
      verdict = "nonexistence certified";
    } else if (shot.found) {
      verdict = "solution found";
    } else {
      verdict = "open: no certificate, no boundary zero in the scanned range";
    }
    row["verdict"] = std::move(verdict);
    rows.push_back(std::move(row));
  }

  json doc = envelope("dichotomy");
  doc["config"] = critex::io::config_json(base);
  doc["config"]["mus"] = mus;
  doc["config"]["lambdas"] = grid;
  doc["config"]["alpha_min"] = alpha_min;
  doc["config"]["alpha_max"] = alpha_max;
  doc["constants"] = critex::io::constants_json(base.consts);
  doc["report"] = {{"mu1", base.mu1}, {"rows", std::move(rows)}};
  const int rc = sink.finish(std::move(doc));
  if (conflict) {
    std::cerr << "dichotomy: certificate and shooting disagree on at least "
                 "one row\n";
    return 1;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "radial solver, energy criterion, and nonexistence certificates for\n"
      "-Delta u = K(|x|) u^{(n+2)/(n-2)} + mu u on the unit ball"};
  app.require_subcommand(1);
  app.set_version_flag("--version", critex::version_string);

  Sink sink;
  auto add_json = [&](CLI::App* cmd) {
    cmd->add_option("--json", sink.json_path,
                    "write the JSON report to FILE (default: stdout)")
        ->expected(0, 1);
  };
  auto add_csv = [&](CLI::App* cmd, const char* what) {
    cmd->add_option("--csv", sink.csv_path, what)->expected(0, 1);
  };

  int n = 5;
  std::string y0_list = "0";
  double mu = 1.0;
  std::string config_path;
  std::string lambdas = "10,20,40,80";
  std::string mus_list;
  double alpha_min = 0.1;
  double alpha_max = 1e4;
  double eps = 0.0;
  int truncation = 80;
  std::size_t cert_grid = 4096;
  bool check_intermediate = false;
  double ex_a = 0.0;
  double ex_b = -1.0;
  double ex_mu = 1.0;
  double ex_f0 = 1.0;

  auto* c_const = app.add_subcommand(
      "constants", "dimension constants with quadrature cross-checks");
  c_const->add_option("--n", n, "odd dimension >= 5")->capture_default_str();
  add_json(c_const);

  auto* c_geom = app.add_subcommand(
      "geometry", "Green-function regular part and boundary-interaction "
                  "constants for a concentration point");
  c_geom->add_option("--n", n, "odd dimension >= 5")->capture_default_str();
  c_geom->add_option("--y0", y0_list,
                     "concentration point, comma-separated (short lists are "
                     "zero-padded)")
      ->capture_default_str();
  c_geom->add_option("--mu", mu, "linear coupling")->capture_default_str();
  add_json(c_geom);

  auto* c_crit = app.add_subcommand(
      "criterion", "existence criterion: condition (i), the equality-branch "
                   "condition (ii), and the raw energy inequality per lambda");
  c_crit->add_option("--config", config_path, "problem config (JSON)")
      ->required();
  c_crit->add_option("--lambdas", lambdas, "concentration grid")
      ->capture_default_str();
  add_json(c_crit);

  auto* c_cert = app.add_subcommand(
      "certify", "staged nonexistence certificate for the radial problem");
  c_cert->add_option("--config", config_path, "problem config (JSON)")
      ->required();
  c_cert->add_option("--truncation", truncation, "multiplier series order")
      ->capture_default_str();
  c_cert->add_option("--grid", cert_grid, "sign-certificate grid")
      ->capture_default_str();
  add_json(c_cert);

  auto* c_shoot = app.add_subcommand(
      "shoot", "amplitude sweep and bisection for a positive radial profile "
               "vanishing on the boundary");
  c_shoot->add_option("--config", config_path, "problem config (JSON)")
      ->required();
  c_shoot->add_option("--alpha-min", alpha_min, "lowest center amplitude")
      ->capture_default_str();
  c_shoot->add_option("--alpha-max", alpha_max, "highest center amplitude")
      ->capture_default_str();
  c_shoot->add_option("--eps", eps,
                      "series matching point (0: curvature-scaled)")
      ->capture_default_str();
  c_shoot->add_flag("--check-intermediate", check_intermediate,
                    "also evaluate the flux and weight identities");
  add_csv(c_shoot, "profile samples t,u,du (sweep table when nothing found)");
  add_json(c_shoot);

  auto* c_psibar = app.add_subcommand(
      "psibar", "sign-certified multiplier combination for the nonexistence "
                "argument");
  c_psibar->add_option("--n", n, "odd dimension, 5 or > 19")
      ->capture_default_str();
  c_psibar->add_option("--mu", mu, "linear coupling")->required();
  c_psibar->add_option("--truncation", truncation, "multiplier series order")
      ->capture_default_str();
  c_psibar->add_option("--grid", cert_grid, "sign-certificate grid")
      ->capture_default_str();
  add_csv(c_psibar, "samples t,psi1,psi2,psibar,kernel_residual");
  add_json(c_psibar);

  auto* c_ex = app.add_subcommand(
      "example11", "closed-form check of the quadratic-cubic profile "
                   "K = f0 + a t^2 + b t^3 at n = 5");
  auto* ex_a_opt = c_ex->add_option(
      "--a", ex_a, "quadratic coefficient (default: equality-branch value)");
  c_ex->add_option("--b", ex_b, "cubic coefficient")->capture_default_str();
  c_ex->add_option("--mu", ex_mu, "linear coupling")->capture_default_str();
  c_ex->add_option("--f0", ex_f0, "K at the center")->capture_default_str();
  add_json(c_ex);

  // profiles concentrate as mu approaches the nonexistence threshold from
  // above, so the composed table sweeps far higher amplitudes than a single
  // shoot run
  double dich_alpha_max = 1e9;
  auto* c_dich = app.add_subcommand(
      "dichotomy", "criterion + certificate + shooting composed into one "
                   "verdict table over a mu grid");
  c_dich->add_option("--config", config_path, "problem config (JSON)")
      ->required();
  c_dich->add_option("--mus", mus_list, "mu grid, comma-separated")
      ->required();
  c_dich->add_option("--lambdas", lambdas, "concentration grid")
      ->capture_default_str();
  c_dich->add_option("--alpha-min", alpha_min, "lowest center amplitude")
      ->capture_default_str();
  c_dich->add_option("--alpha-max", dich_alpha_max, "highest center amplitude")
      ->capture_default_str();
  add_json(c_dich);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  sink.csv_requested = c_shoot->count("--csv") + c_psibar->count("--csv") > 0;

  try {
    if (app.got_subcommand(c_const)) return run_constants(n, sink);
    if (app.got_subcommand(c_geom)) return run_geometry(n, y0_list, mu, sink);
    if (app.got_subcommand(c_crit))
      return run_criterion(config_path, lambdas, sink);
    if (app.got_subcommand(c_cert))
      return run_certify(config_path, truncation, cert_grid, sink);
    if (app.got_subcommand(c_shoot))
      return run_shoot(config_path, alpha_min, alpha_max, eps,
                       check_intermediate, sink);
    if (app.got_subcommand(c_psibar))
      return run_psibar(n, mu, truncation, cert_grid, sink);
    if (app.got_subcommand(c_ex))
      return run_example11(ex_a_opt->count() > 0, ex_a, ex_b, ex_mu, ex_f0,
                           sink);
    if (app.got_subcommand(c_dich))
      return run_dichotomy(config_path, mus_list, lambdas, alpha_min,
                           dich_alpha_max, sink);
  } catch (const critex::io::config_error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

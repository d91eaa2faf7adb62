// Acceptance gate: eight checks, one pass/fail line each, exit 0 only when
// every check passes inside its runtime budget. Tolerances are pinned here,
// not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "critex/bubble.hpp"
#include "critex/pohozaev.hpp"
#include "critex/shoot.hpp"

namespace {

using namespace critex;

struct Outcome {
  bool pass = false;
  std::string note;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double rel(double value, double reference) {
  return std::fabs(value - reference) / std::fabs(reference);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> center(int n) { return std::vector<double>(n, 0.0); }

// 1. quadrature c2/c3 equals n(n-4)/(4(n-1)(n-2)) across the odd dimensions
Outcome check_ratio_identity() {
  double worst = 0.0;
  for (int n : {5, 7, 9, 21, 23}) {
    const auto dc = dimension_constants(n);
    const double ratio = dc.c2_check.quadrature / dc.c3_check.quadrature;
    const double target =
        n * (n - 4.0) / (4.0 * (n - 1.0) * (n - 2.0));
    worst = std::max(worst, rel(ratio, target));
  }
  return {worst <= 1e-8, "max rel residual " + sci(worst)};
}

// 2. n=5 closed forms against their quadrature cross-checks
Outcome check_closed_forms() {
  const auto dc = dimension_constants(5);
  const double pi = std::acos(-1.0);
  const double worst = std::max(
      {rel(dc.s_n_check.quadrature, pi * pi * pi / 32.0),
       rel(dc.c1_check.quadrature, 8.0 * pi * pi / 15.0),
       rel(dc.c3_check.quadrature, pi * pi * pi / 2.0)});
  return {worst <= 1e-9, "max rel residual " + sci(worst)};
}

// 3. direct energy ratio vs its expansion: the residual decays at least
// like lambda^{-(n-2)} over the standard grid
Outcome check_expansion_order() {
  auto spec = make_problem(5, center(5), KSpec::constant(1.0), 1.0);
  const auto gc = geometry_constants(spec.geom, spec.mu, spec.consts, 1e-9);
  std::vector<double> xs, ys;
  for (double lambda : {10.0, 20.0, 40.0, 80.0}) {
    const double direct = energy_ratio_direct(spec, lambda).ratio_pow;
    const double expansion = energy_ratio_expansion(spec, gc, lambda);
    xs.push_back(std::log(lambda));
    ys.push_back(std::log(std::fabs(direct - expansion)));
  }
  const double slope = fit_slope(xs, ys);
  return {slope <= -3.0 + 0.3, "fitted slope " + fixed3(slope)};
}

// 4. the multiplier kernel vanishes along the series ladders and their
// certified combination; psi(t) = t reproduces the bare coupling
Outcome check_kernel_kill() {
  double worst = 0.0;
  double worst_control = 0.0;
  for (double mu : {0.01, 0.05}) {
    const auto p1 = psi_series(5, mu, PsiKind::odd, 1.0, 80);
    const auto p2 = psi_series(5, mu, PsiKind::even, 1.0, 80);
    const auto bar = build_psibar(5, mu, 80);
    PsiSeries control;
    control.n = 5;
    control.mu = mu;
    control.kind = PsiKind::odd;
    control.seed = 1.0;
    control.coeffs = {0.0, 1.0};
    control.lead = 1;
    control.top = 1;
    for (int i = 0; i <= 990; ++i) {
      const double t = 0.01 + 0.99 * static_cast<double>(i) / 990.0;
      worst = std::max({worst, std::fabs(eval_psi_jet(p1, t).residual),
                        std::fabs(eval_psi_jet(p2, t).residual),
                        std::fabs(eval_psi_jet(bar.psi1, t).residual +
                                  eval_psi_jet(bar.psi2, t).residual)});
      worst_control =
          std::max(worst_control,
                   std::fabs(eval_psi_jet(control, t).residual - mu));
    }
  }
  return {worst <= 1e-8 && worst_control <= 1e-12,
          "max kernel residual " + sci(worst) + ", control deviation " +
              sci(worst_control)};
}

// 5. the computed ground state satisfies the boundary-flux balance for
// psi = t and for the certified-combination multiplier
Outcome check_pohozaev_on_solution() {
  auto spec = make_problem(5, center(5), KSpec::constant(1.0), 10.0);
  const auto search = find_ground_state(spec);
  if (!search.found) return {false, search.message};
  const auto& u = search.solution;
  if (u.boundary_defect > 1e-8)
    return {false, "boundary defect " + sci(u.boundary_defect)};

  const auto ident = pohozaev_sides(u, identity_multiplier(spec.mu), spec);
  // psi = t makes the right side vanish identically; the meaningful scale
  // is the pair of balancing terms on the left
  const double flux = 0.5 * u.slope(1.0) * u.slope(1.0);
  const double mass = ident.lhs + flux;
  const bool ok_identity =
      std::fabs(ident.difference) <= 1e-5 * (flux + std::fabs(mass));

  const auto bar = make_psibar(5, spec.mu, 1.0, -1.0, 80);
  const auto combo = pohozaev_sides(u, psibar_multiplier(bar), spec);
  const double tails = bar.psi1.tail[0] + bar.psi1.tail[1] +
                       bar.psi2.tail[0] + bar.psi2.tail[1];
  const double scale =
      std::max(std::fabs(combo.lhs), std::fabs(combo.rhs));
  const bool ok_combo =
      std::fabs(combo.difference) <= 1e-5 * scale + 1e2 * tails;

  return {ok_identity && ok_combo,
          "defect " + sci(u.boundary_defect) + ", balances " +
              sci(std::fabs(ident.difference) / (flux + std::fabs(mass))) +
              " / " + sci(std::fabs(combo.difference) / scale)};
}

// 6. desk-scale dichotomy around the threshold 15 eta / 16: certificate
// with positive margins below it, empty sweep at the same coupling,
// strict criterion above it
Outcome check_dichotomy() {
  const auto k = KSpec::builtin(1.0, 0.05, "neg_t2");
  auto below = make_problem(5, center(5), k, 0.0375);

  const auto cert = certify_nonexistence(below);
  const bool ok_cert =
      cert.verdict == CertificateVerdict::nonexistence_certified &&
      cert.reversed_margin > 0.0 && cert.psi1_sign.margin > 0.0 &&
      cert.psi2_sign.margin > 0.0 && cert.positivity.positive &&
      cert.positivity.min_value > 0.0;
  if (!ok_cert)
    return {false, std::string("certificate: ") + to_string(cert.verdict) +
                       (cert.failing_stage.empty()
                            ? ""
                            : " at " + cert.failing_stage)};

  const auto search = find_ground_state(below, 0.1, 1e4);
  if (search.found)
    return {false, "sweep found a profile the certificate excludes"};

  auto above = make_problem(5, center(5), k, 0.09375);
  const auto rep = evaluate_criteria(above, {10.0, 20.0, 40.0, 80.0});
  if (rep.verdict_i != CriterionVerdict::strict)
    return {false, std::string("criterion above threshold: ") +
                       to_string(rep.verdict_i)};

  return {true, "certified margin " + sci(cert.positivity.min_value) +
                    ", empty sweep, strict margin " + sci(rep.margin)};
}

// 7. the closed-form quadratic-cubic check agrees with the criterion
// evaluator on the matching profile
Outcome check_profile_consistency() {
  const double mu = 0.1;
  const auto dc = dimension_constants(5, 1e-10, false);
  const double a = -mu * dc.c3 / (9.0 * dc.c2);
  const double b = -0.1;

  const auto ex = example_11_check(a, b, mu, 1.0);
  auto spec =
      make_problem(5, center(5), KSpec::polynomial(1.0, 1.0, {a, b}), mu);
  std::vector<double> grid;
  for (double lambda = 10.0; lambda <= 2560.0; lambda *= 2.0)
    grid.push_back(lambda);
  const auto rep = evaluate_criteria(spec, grid);

  const double worst_exact =
      std::max({rel(rep.lhs_i, ex.cond1_lhs), rel(rep.rhs_i, ex.cond1_rhs),
                rel(3.0 * rep.cond_ii_threshold, ex.cond2_rhs)});
  const bool ok_branch = rep.verdict_i == CriterionVerdict::equality &&
                         ex.cond1_holds &&
                         rep.cond_ii_satisfied == ex.cond2_holds;
  // the cubic-term quantity is a large-lambda limit; the last grid point
  // carries the O(lambda^{-2}) approach
  const double limit_err =
      rel(3.0 * rep.rows.back().cond_ii_quantity, ex.cond2_lhs);

  return {worst_exact <= 1e-9 && ok_branch && limit_err <= 1e-5,
          "exact " + sci(worst_exact) + ", limit " + sci(limit_err)};
}

// 8. dimension gates: the certifier's scope and the constants' parity
Outcome check_dimension_gate() {
  bool scope_named = false;
  try {
    certify_nonexistence(
        make_problem(9, center(9), KSpec::constant(1.0), 1.0));
  } catch (const std::invalid_argument& e) {
    scope_named = std::string(e.what()).find(
                      "dimension outside theorem scope") != std::string::npos;
  }
  bool parity_named = false;
  try {
    dimension_constants(6);
  } catch (const std::invalid_argument& e) {
    parity_named = std::string(e.what()).find("unsupported dimension") !=
                   std::string::npos;
  }
  return {scope_named && parity_named,
          scope_named && parity_named ? "both rejections named"
                                      : "a rejection is missing or renamed"};
}

}  // namespace

int main() {
  struct Row {
    const char* label;
    Outcome (*check)();
    double budget_s;
  };
  const Row rows[] = {
      {"constants ratio identity", check_ratio_identity, 2.0},
      {"closed forms vs quadrature", check_closed_forms, 1.0},
      {"energy expansion order", check_expansion_order, 30.0},
      {"multiplier kernel kill", check_kernel_kill, 1.0},
      {"boundary-flux balance on a computed solution",
       check_pohozaev_on_solution, 60.0},
      {"desk-scale dichotomy", check_dichotomy, 300.0},
      {"quadratic-cubic profile consistency", check_profile_consistency, 5.0},
      {"dimension gate", check_dimension_gate, 1.0},
  };

  int failed = 0;
  int id = 0;
  for (const Row& row : rows) {
    ++id;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = row.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    const bool in_budget = seconds <= row.budget_s;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failed;
    std::printf("[%s] %d. %s (%.2fs): %s%s\n", pass ? "PASS" : "FAIL", id,
                row.label, seconds, outcome.note.c_str(),
                in_budget ? "" : " [over budget]");
  }
  std::printf("%d/8 passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}

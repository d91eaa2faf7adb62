#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "critex/bubble.hpp"
#include "critex/constants.hpp"
#include "critex/green.hpp"
#include "critex/pohozaev.hpp"
#include "critex/problem.hpp"
#include "critex/shoot.hpp"
#include "critex/version.hpp"

namespace critex::io {

using json = nlohmann::ordered_json;

// Schema violations carry the offending config path so the driver can name
// it and exit with the documented status.
struct config_error : std::runtime_error {
  std::string path;
  config_error(std::string at, const std::string& what)
      : std::runtime_error("config error at " + at + ": " + what),
        path(std::move(at)) {}
};

namespace detail {

inline std::string join(const std::string& scope, const std::string& key) {
  return scope.empty() ? key : scope + "." + key;
}

inline const json& require(const json& obj, const std::string& scope,
                           const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error(join(scope, key), "missing required key");
  return *it;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw config_error(path, "expected a number");
  return v.get<double>();
}

inline int integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw config_error(path, "expected an integer");
  return v.get<int>();
}

inline std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw config_error(path, "expected a string");
  return v.get<std::string>();
}

inline std::vector<double> number_list_at(const json& v,
                                          const std::string& path) {
  if (!v.is_array()) throw config_error(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline void reject_unknown(const json& obj, const std::string& scope,
                           std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::none_of(known.begin(), known.end(),
                     [&](const char* k) { return it.key() == k; }))
      throw config_error(join(scope, it.key()), "unknown key");
  }
}

}  // namespace detail

inline KSpec parse_kspec(const json& k) {
  if (!k.is_object()) throw config_error("K", "expected an object");
  detail::reject_unknown(k, "K", {"f0", "eta", "f1"});
  const double f0 = detail::number_at(detail::require(k, "K", "f0"), "K.f0");
  const double eta = detail::number_at(detail::require(k, "K", "eta"), "K.eta");
  if (!k.contains("f1")) {
    if (eta != 0.0)
      throw config_error("K.f1", "missing required key (eta is nonzero)");
    return KSpec::constant(f0);
  }
  const json& f1 = k["f1"];
  if (!f1.is_object()) throw config_error("K.f1", "expected an object");
  const std::string kind =
      detail::string_at(detail::require(f1, "K.f1", "kind"), "K.f1.kind");
  if (kind == "poly") {
    detail::reject_unknown(f1, "K.f1", {"kind", "coeffs"});
    auto coeffs = detail::number_list_at(
        detail::require(f1, "K.f1", "coeffs"), "K.f1.coeffs");
    return KSpec::polynomial(f0, eta, std::move(coeffs));
  }
  if (kind == "builtin") {
    detail::reject_unknown(f1, "K.f1", {"kind", "name"});
    return KSpec::builtin(
        f0, eta, detail::string_at(detail::require(f1, "K.f1", "name"),
                                   "K.f1.name"));
  }
  throw config_error("K.f1.kind", "expected \"poly\" or \"builtin\"");
}

// Schema: {"n": int, "y0": [floats], "mu": float, "K": {...}} with optional
// quad_tol / ode_tol overrides. y0 may be shorter than n; it is zero-padded
// (the centered default is an empty or omitted list).
inline ProblemSpec parse_problem(const json& root) {
  if (!root.is_object()) throw config_error("config", "expected a JSON object");
  detail::reject_unknown(root, "",
                         {"n", "y0", "mu", "K", "quad_tol", "ode_tol"});
  const int n = detail::integer_at(detail::require(root, "", "n"), "n");
  const double mu = detail::number_at(detail::require(root, "", "mu"), "mu");
  const KSpec k = parse_kspec(detail::require(root, "", "K"));
  std::vector<double> y0;
  if (root.contains("y0")) y0 = detail::number_list_at(root["y0"], "y0");
  if (n >= 1 && y0.size() > static_cast<std::size_t>(n))
    throw config_error("y0", "has more components than the dimension");
  if (n >= 1) y0.resize(static_cast<std::size_t>(n), 0.0);
  ProblemSpec spec = make_problem(n, y0, k, mu);
  if (root.contains("quad_tol")) {
    spec.quad_tol = detail::number_at(root["quad_tol"], "quad_tol");
    if (!(spec.quad_tol > 0.0)) throw config_error("quad_tol", "must be positive");
  }
  if (root.contains("ode_tol")) {
    spec.ode_tol = detail::number_at(root["ode_tol"], "ode_tol");
    if (!(spec.ode_tol > 0.0)) throw config_error("ode_tol", "must be positive");
  }
  return spec;
}

inline json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  // an empty file walks the schema as an empty object so the first missing
  // key ("n") is the one named
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    return json::object();
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw config_error(path, "invalid JSON");
  return j;
}

// comma-separated numeric list from a flag value
inline std::vector<double> parse_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto a = tok.find_first_not_of(" \t");
    if (a == std::string::npos) throw config_error(flag, "empty list entry");
    const auto b = tok.find_last_not_of(" \t");
    tok = tok.substr(a, b - a + 1);
    try {
      std::size_t idx = 0;
      const double v = std::stod(tok, &idx);
      if (idx != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw config_error(flag, "not a number: \"" + tok + "\"");
    }
  }
  if (out.empty()) throw config_error(flag, "expected a comma-separated list");
  return out;
}

// ---- serialization --------------------------------------------------------

inline json kspec_json(const KSpec& k) {
  json f1;
  if (k.kind == KSpec::Kind::builtin_neg_t2)
    f1 = {{"kind", "builtin"}, {"name", "neg_t2"}};
  else
    f1 = {{"kind", "poly"}, {"coeffs", k.coeffs}};
  return {{"f0", k.f0}, {"eta", k.eta}, {"f1", std::move(f1)}};
}

inline json config_json(const ProblemSpec& spec) {
  return {{"n", spec.geom.n},     {"y0", spec.geom.y0},
          {"mu", spec.mu},        {"mu1", spec.mu1},
          {"K", kspec_json(spec.k)}, {"quad_tol", spec.quad_tol},
          {"ode_tol", spec.ode_tol}};
}

inline json cross_check_json(const CrossCheck& c) {
  return {{"quadrature", c.quadrature},
          {"relative_residual", c.relative_residual}};
}

inline json constants_json(const DimensionConstants& dc) {
  return {{"n", dc.n},
          {"c_n", dc.c_n},
          {"omega", dc.omega},
          {"s_n", dc.s_n},
          {"c1", dc.c1},
          {"c2", dc.c2},
          {"c3", dc.c3},
          {"sobolev", dc.sobolev},
          {"beta", dc.beta},
          {"a", dc.a},
          {"checks",
           {{"s_n", cross_check_json(dc.s_n_check)},
            {"c1", cross_check_json(dc.c1_check)},
            {"c2", cross_check_json(dc.c2_check)},
            {"c3", cross_check_json(dc.c3_check)}}}};
}

inline json ball_json(const BallGeometry& g) {
  return {{"n", g.n}, {"y0", g.y0}, {"center_distance", g.d}, {"d0", g.d0}};
}

inline json geometry_constants_json(const GeometryConstants& gc) {
  return {{"c5bb", gc.c5bb},           {"c5bb_error", gc.c5bb_error},
          {"c6b", gc.c6b},             {"c6b_error", gc.c6b_error},
          {"c4b", gc.c4b},             {"h_self", gc.h_self},
          {"evaluations", gc.evaluations}};
}

inline json criterion_json(const CriterionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = {{"lambda", row.lambda},
               {"value", row.value},
               {"holds", row.holds},
               {"negative_numerator", row.negative_numerator}};
    if (r.cond_ii_decided) jr["cond_ii_quantity"] = row.cond_ii_quantity;
    rows.push_back(std::move(jr));
  }
  return {{"condition_i",
           {{"lhs", r.lhs_i},
            {"rhs", r.rhs_i},
            {"margin", r.margin},
            {"verdict", to_string(r.verdict_i)},
            {"equality_rtol", r.equality_rtol}}},
          {"condition_ii",
           {{"decided", r.cond_ii_decided},
            {"threshold", r.cond_ii_threshold},
            {"min", r.cond_ii_min},
            {"satisfied", r.cond_ii_satisfied},
            {"grid_refinement_warning", r.grid_refinement_warning}}},
          {"energy",
           {{"path", r.energy_path},
            {"threshold", r.energy_threshold},
            {"rows", std::move(rows)}}},
          {"geometry", geometry_constants_json(r.geometry)}};
}

inline json example11_json(const Example11Result& r) {
  return {{"i3", r.i3},
          {"c4b", r.c4b},
          {"condition_1",
           {{"lhs", r.cond1_lhs},
            {"rhs", r.cond1_rhs},
            {"residual", r.cond1_residual},
            {"holds", r.cond1_holds}}},
          {"condition_2",
           {{"lhs", r.cond2_lhs},
            {"rhs", r.cond2_rhs},
            {"margin", r.cond2_margin},
            {"holds", r.cond2_holds}}},
          {"verdict", r.verdict}};
}

inline json sign_certificate_json(const SignCertificate& c) {
  return {{"passed", c.passed},
          {"margin", c.margin},
          {"violating_t", c.violating_t},
          {"grid_points", c.grid_points}};
}

inline json positivity_json(const PositivityScan& p) {
  return {{"positive", p.positive},
          {"min_value", p.min_value},
          {"argmin", p.argmin},
          {"limit_t0", p.limit_t0},
          {"samples", p.samples}};
}

inline json psibar_json(const PsiBar& bar) {
  return {{"a1", bar.a1()},
          {"an1", bar.an1()},
          {"truncation", bar.psi1.top},
          {"bar_min", bar.bar_min},
          {"bar_argmin", bar.bar_argmin},
          {"psi1_sign", sign_certificate_json(bar.psi1_sign)},
          {"psi2_sign", sign_certificate_json(bar.psi2_sign)},
          {"psi1_tail", bar.psi1.tail[0]},
          {"psi2_tail", bar.psi2.tail[0]}};
}

inline json certificate_json(const Certificate& c) {
  return {{"verdict", to_string(c.verdict)},
          {"failing_stage", c.failing_stage},
          {"detail", c.detail},
          {"reversed_criterion",
           {{"lhs", c.lhs_i}, {"rhs", c.rhs_i}, {"margin", c.reversed_margin}}},
          {"k3_ok", c.k3_ok},
          {"psibar",
           {{"built", c.psibar_built},
            {"a1", c.psibar_a1},
            {"an1", c.psibar_an1},
            {"min", c.psibar_min},
            {"psi1_sign", sign_certificate_json(c.psi1_sign)},
            {"psi2_sign", sign_certificate_json(c.psi2_sign)}}},
          {"positivity", positivity_json(c.positivity)}};
}

inline json solution_json(const RadialSolution& s) {
  return {{"alpha", s.alpha},
          {"eps", s.eps},
          {"curvature", s.curvature},
          {"boundary_defect", s.boundary_defect},
          {"residual", s.residual},
          {"boundary_slope", s.slope(1.0)},
          {"steps", s.samples.size()}};
}

inline json search_json(const GroundStateSearch& g) {
  json out = {{"found", g.found}, {"message", g.message}};
  if (g.found) out["solution"] = solution_json(g.solution);
  json br = json::array();
  for (const auto& b : g.brackets) br.push_back(json::array({b.first, b.second}));
  out["brackets"] = std::move(br);
  json sweep = json::array();
  for (const auto& p : g.sweep)
    sweep.push_back(
        {{"alpha", p.alpha}, {"score", p.score}, {"crossed", p.crossed}});
  out["sweep"] = std::move(sweep);
  return out;
}

inline json pohozaev_json(const PohozaevSides& s) {
  return {{"lhs", s.lhs},
          {"rhs", s.rhs},
          {"difference", s.difference},
          {"boundary_defect", s.boundary_defect},
          {"boundary_warning", s.boundary_warning},
          {"evaluations", s.evaluations}};
}

inline json intermediate_json(const IntermediateChecks& c) {
  return {{"flux",
           {{"lhs", c.flux_lhs},
            {"rhs", c.flux_rhs},
            {"residual", c.flux_residual}}},
          {"weight",
           {{"lhs", c.weight_lhs},
            {"rhs", c.weight_rhs},
            {"residual", c.weight_residual}}}};
}

// ---- CSV curves -----------------------------------------------------------

inline std::string csv_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_profile_csv(std::ostream& os, const RadialSolution& s) {
  os << "t,u,du\n";
  for (const auto& row : s.samples)
    os << csv_num(row[0]) << ',' << csv_num(row[1]) << ',' << csv_num(row[2])
       << '\n';
}

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<SweepPoint>& sweep) {
  os << "alpha,score,crossed\n";
  for (const auto& p : sweep)
    os << csv_num(p.alpha) << ',' << csv_num(p.score) << ','
       << (p.crossed ? 1 : 0) << '\n';
}

inline void write_psibar_csv(std::ostream& os, const PsiBar& bar,
                             int grid = 512) {
  os << "t,psi1,psi2,psibar,kernel_residual\n";
  for (int i = 0; i <= grid; ++i) {
    const double t = static_cast<double>(i) / grid;
    const PsiJet j1 = eval_psi_jet(bar.psi1, t);
    const PsiJet j2 = eval_psi_jet(bar.psi2, t);
    os << csv_num(t) << ',' << csv_num(j1.psi) << ',' << csv_num(j2.psi)
       << ',' << csv_num(j1.psi + j2.psi) << ','
       << csv_num(j1.residual + j2.residual) << '\n';
  }
}

}  // namespace critex::io

/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "levy_bdg/experiment.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "levy_bdg/convex.hpp"
#include "levy_bdg/discrete_checks.hpp"
#include "levy_bdg/filtration.hpp"
#include "levy_bdg/inequalities.hpp"
#include "levy_bdg/integrator.hpp"
#include "levy_bdg/prm.hpp"

namespace levy_bdg {
namespace {

using json = nlohmann::json;

struct Context {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool timing = false;
};

struct Outcome {
  json detail;
  std::vector<ReportRow> rows;
};

double read_norm(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return kInfNorm;
  return v.get<double>();
}

BanachModel model_from_json(const json& j, int default_dim) {
  BanachModel m;
  m.d = j.value("d", default_dim);
  m.s = read_norm(j, "s", 2.0);
  m.p = j.value("p", 2.0);
  if (j.contains("C_p")) m.type_constant = j.at("C_p").get<double>();
  m.validate();
  return m;
}

std::vector<double> number_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  return {j.get<double>()};
}

Verdict verdict_of(const DiscreteReport& r) {
  if (!r.applicable) return Verdict::not_applicable;
  return r.pass ? Verdict::pass : Verdict::fail;
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

ReportRow row_from(const InequalityReport& r, const std::string& experiment, const Context& ctx) {
  return {experiment, r.id,           r.variant,  r.p,
          r.order,    r.paths,        r.seed,     r.lhs.mean,
          r.lhs.se,   r.rhs.mean,     r.rhs.se,   r.constant,
          r.ratio,    std::string(to_string(r.verdict)),
          ctx.timing ? r.runtime_ms : 0.0, {}};
}

json report_json(InequalityReport r, const Context& ctx) {
  if (!ctx.timing) r.runtime_ms = 0.0;
  return to_json(r);
}

// ---------------------------------------------------------------------------

Outcome run_constants(const json& e, const std::string& name) {
  const BanachModel model = model_from_json(e.value("model", json::object()), 1);
  const double r = e.value("r", model.p);
  const int n = e.value("n", 1);
  const ConstantsTable t = constants(model, r, n);
  Outcome out{to_json(t), {}};
  auto info = [&](std::string variant, double value) {
    ReportRow row;
    row.experiment = name;
    row.id = "constants";
    row.variant = std::move(variant);
    row.p = t.p;
    row.order = t.r;
    row.constant = value;
    row.verdict = "-";
    out.rows.push_back(std::move(row));
  };
  info("m0", t.m0);
  info("const_i", t.const_i);
  info("const_ii", t.const_ii);
  for (std::size_t l = 0; l < t.barc_statement.size(); ++l) {
    info(fmt::format("barC_statement[{}]", l + 1), t.barc_statement[l]);
    info(fmt::format("barC_proof[{}]", l + 1), t.barc_proof[l]);
  }
  for (std::size_t i = 0; i < t.m_values.size(); ++i) info(fmt::format("m({})", i), t.m_values[i]);
  return out;
}

Outcome run_poisson_lemma(const json& e, const std::string& name) {
  Outcome out{json::array(), {}};
  for (double lambda : number_list(e.at("lambda"))) {
    for (double p : number_list(e.at("p"))) {
      const double moment = poisson_central_moment(lambda, p);
      const double c = std::pow(2.0, 2.0 - p);
      const bool pass = moment <= c * lambda + 1e-12;
      out.detail.push_back({{"lambda", lambda},
                            {"p", p},
                            {"moment", moment},
                            {"bound", c * lambda},
                            {"verdict", pass ? "pass" : "fail"}});
      ReportRow row;
      row.experiment = name;
      row.id = "poisson-lemma";
      row.variant = "pmf-sum";
      row.p = p;
      row.order = lambda;
      row.lhs = moment;
      row.rhs = lambda;
      row.constant = c;
      row.ratio = moment / lambda;
      row.verdict = pass ? "pass" : "fail";
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<Vec> thetas_from_json(const json& j, int dim) {
  std::vector<Vec> out;
  if (j.is_array()) {
    for (const auto& t : j) out.push_back(t.is_array() ? t.get<Vec>() : Vec{t.get<double>()});
    return out;
  }
  const int count = j.at("count").get<int>();
  const double lo = j.at("min").get<double>();
  const double hi = j.at("max").get<double>();
  Vec dir = j.contains("direction") ? j.at("direction").get<Vec>() : Vec(static_cast<std::size_t>(dim), 0.0);
  if (!j.contains("direction")) dir[0] = 1.0;
  for (int k = 0; k < count; ++k) {
    const double s = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    Vec th(dir.size());
    for (std::size_t c = 0; c < dir.size(); ++c) th[c] = s * dir[c];
    out.push_back(std::move(th));
  }
  return out;
}

LevyTriplet triplet_from_json(const json& levy) {
  MarkMeasure nu = measure_from_json(levy.at("measure"));
  Vec drift = levy.contains("drift") ? levy.at("drift").get<Vec>()
                                     : Vec(static_cast<std::size_t>(nu.dim()), 0.0);
  return {std::move(drift), std::move(nu)};
}

Outcome run_cf_check(const json& e, const std::string& name, const Context& ctx) {
  const LevyTriplet triplet = triplet_from_json(e.at("levy"));
  const double t = e.value("t", 1.0);
  const auto paths = e.value("paths", std::size_t{100000});
  const auto thetas = thetas_from_json(e.at("thetas"), triplet.measure.dim());
  const CfReport r = cf_check(triplet, t, thetas, paths, ctx.seed, ctx.threads);
  json points = json::array();
  for (const auto& pt : r.points) {
    points.push_back({{"theta", pt.theta},
                      {"empirical", {pt.empirical.real(), pt.empirical.imag()}},
                      {"analytic", {pt.analytic.real(), pt.analytic.imag()}},
                      {"error", pt.error},
                      {"se", pt.se}});
  }
  Outcome out{{{"points", points},
               {"max_error", r.max_error},
               {"threshold", r.threshold},
               {"paths", paths},
               {"note", "uncompensated compound-Poisson form with the drift in m"}},
              {}};
  ReportRow row;
  row.experiment = name;
  row.id = "cf-check";
  row.variant = "sup-theta";
  row.order = t;
  row.paths = paths;
  row.seed = ctx.seed;
  row.lhs = r.max_error;
  row.rhs = r.threshold;
  row.constant = 1.0;
  row.ratio = safe_ratio(r.max_error, r.threshold);
  row.verdict = r.pass ? "pass" : "fail";
  out.rows.push_back(std::move(row));
  return out;
}

Outcome run_continuous(const json& e, const std::string& name, const Context& ctx) {
  const std::string which = e.at("inequality").get<std::string>();
  const double horizon = e.value("T", 1.0);
  if (!(horizon > 0.0)) throw std::invalid_argument("T must be positive");
  McSettings mc;
  mc.paths = e.value("paths", std::size_t{100000});
  mc.seed = ctx.seed;
  mc.threads = ctx.threads;
  MarkMeasure nu = measure_from_json(e.at("measure"));
  StepIntegrand xi = integrand_from_json(e.at("integrand"), nu.dim(), horizon);
  const BanachModel model = model_from_json(e.value("model", json::object()), xi.out_dim());

  std::vector<InequalityReport> reports;
  if (which == "i") {
    reports.push_back(mc_verify_i(model, {nu, xi, horizon}, e.at("q").get<double>(), mc));
  } else if (which == "ii") {
    reports.push_back(mc_verify_ii(model, {nu, xi, horizon}, e.at("r").get<double>(), mc));
  } else if (which == "iii") {
    reports = mc_verify_iii(model, {nu, xi, horizon}, e.at("n").get<int>(), mc);
  } else {
    Vec drift = e.contains("drift") ? e.at("drift").get<Vec>()
                                    : Vec(static_cast<std::size_t>(nu.dim()), 0.0);
    const LevyTriplet triplet{std::move(drift), nu};
    reports.push_back(mc_verify_corollary(model, xi, triplet, horizon, e.at("r").get<double>(), mc));
  }
  Outcome out{json::array(), {}};
  for (const auto& r : reports) {
    out.detail.push_back(report_json(r, ctx));
    out.rows.push_back(row_from(r, name, ctx));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct DiscreteRow {
  json detail;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  double ratio = 0.0;
  Verdict verdict = Verdict::fail;
};

DiscreteRow from_report(const DiscreteReport& r) {
  json detail{{"lhs", number_json(r.lhs)},
              {"rhs", number_json(r.rhs)},
              {"constant", number_json(r.constant)},
              {"min_constant", number_json(r.min_constant)},
              {"applicable", r.applicable},
              {"verdict", std::string(to_string(verdict_of(r)))}};
  if (!r.note.empty()) detail["note"] = r.note;
  return {detail, r.lhs, r.base, r.constant, r.min_constant, verdict_of(r)};
}

DiscreteRow discrete_once(const json& e, const AdaptedProcess& m, const ConjugatePair& pair,
                          double p) {
  const std::string check = e.at("check").get<std::string>();
  const ConvexFunction& f = pair.primal;
  if (check == "doob") return from_report(doob_phi_check(norm_process(m), pair));
  if (check == "garsia") {
    const GarsiaReport g = garsia_gap(norm_process(m), f);
    const Verdict v = g.pass ? Verdict::pass : Verdict::fail;
    return {{{"lhs", g.lhs}, {"rhs", g.rhs}, {"gap", g.gap}, {"verdict", std::string(to_string(v))},
             {"note", "identity measured as lhs <= rhs"}},
            g.lhs, g.rhs, 1.0, safe_ratio(g.lhs, g.rhs), v};
  }
  if (check == "davis") {
    const DavisCheck c = check_davis(m, davis_decompose(m));
    const Verdict v = c.worst() <= 1e-10 ? Verdict::pass : Verdict::fail;
    json detail{{"sum_error", c.sum_error},
                {"good_martingale", c.good_martingale},
                {"bad_martingale", c.bad_martingale},
                {"increment_bound", c.increment_bound},
                {"jump_sum_bound", c.jump_sum_bound},
                {"verdict", std::string(to_string(v))}};
    if (m.dim() == 1 || m.norm_exponent() == 2.0) detail["type2_gap"] = type2_identity_gap(m);
    return {detail, c.worst(), 0.0, 1.0, 0.0, v};
  }
  if (check == "good-lambda") {
    const MartingaleStats st = stats(m, p);
    const auto joint = joint_from_leaves(m.tree(), st.p_variation, st.max_value);
    std::optional<double> eps;
    if (e.contains("epsilon")) eps = e.at("epsilon").get<double>();
    const GoodLambdaReport g =
        good_lambda_check(joint, f, e.value("beta", 2.0), e.value("delta", 0.5), eps);
    const Verdict v = !g.applicable ? Verdict::not_applicable
                      : g.pass      ? Verdict::pass
                                    : Verdict::fail;
    return {{{"gamma", g.gamma},
             {"eta", g.eta},
             {"epsilon", g.epsilon},
             {"min_epsilon", g.min_epsilon},
             {"hypothesis_holds", g.hypothesis_holds},
             {"applicable", g.applicable},
             {"lhs", g.lhs},
             {"rhs", number_json(g.rhs)},
             {"constant", number_json(g.constant)},
             {"delta_regime", g.delta_regime},
             {"verdict", std::string(to_string(v))}},
            g.lhs, g.base, g.constant, safe_ratio(g.lhs, g.base), v};
  }
  if (check == "conditional-sum") {
    const MartingaleStats st = stats(m, p);
    std::vector<double> z(st.diff_norm.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::pow(st.diff_norm[i], p);
    return from_report(conditional_sum_check(AdaptedProcess(m.tree_ptr(), 1, std::move(z)), pair));
  }
  if (check == "bdg") return from_report(bdg_phi_check(m, f, p, e.at("constant").get<double>()));
  // previsible
  std::optional<double> constant;
  if (e.contains("constant")) constant = e.at("constant").get<double>();
  const json control = e.value("control", json("davis"));
  if (control == "davis") {
    const DavisDecomposition dec = davis_decompose(m);
    return from_report(previsible_control_check(dec.good, davis_control(m, 4.0), f, p, constant));
  }
  const double c = control.get<double>();
  AdaptedProcess w(m.tree_ptr(), 1, std::vector<double>(m.tree().size(), c));
  return from_report(previsible_control_check(m, w, f, p, constant));
}

Outcome run_discrete(const json& e, const std::string& name) {
  const json& spec = e.at("tree");
  const auto trees = e.value("trees", 1);
  const double p = e.value("p", 2.0);
  const ConvexFunction f =
      e.contains("phi") ? convex_from_json(e.at("phi")) : power_phi(2.0);
  const ConjugatePair pair = conjugate(f);
  const std::string check = e.at("check").get<std::string>();
  const bool seeded = spec.value("generator", std::string()) == "random_tree";
  const std::uint64_t base_seed = spec.value("seed", std::uint64_t{1});
  Outcome out{json::array(), {}};
  for (int k = 0; k < trees; ++k) {
    json tree_spec = spec;
    if (seeded) tree_spec["seed"] = base_seed + static_cast<std::uint64_t>(k);
    const AdaptedProcess m = tree_from_json(tree_spec);
    DiscreteRow r = discrete_once(e, m, pair, p);
    r.detail["tree"] = k;
    out.detail.push_back(r.detail);
    ReportRow row;
    row.experiment = name;
    row.id = "discrete/" + check;
    row.variant = fmt::format("tree {}", k);
    row.p = p;
    row.order = m.tree().depth();
    row.paths = m.tree().leaves().size();
    row.seed = seeded ? base_seed + static_cast<std::uint64_t>(k) : 0;
    row.lhs = r.lhs;
    row.rhs = r.rhs;
    row.constant = r.constant;
    row.ratio = r.ratio;
    row.verdict = std::string(to_string(r.verdict));
    out.rows.push_back(std::move(row));
  }
  return out;
}

Outcome run_experiment(const json& e, const std::string& name, const Context& ctx) {
  const std::string kind = e.at("kind").get<std::string>();
  if (kind == "constants") return run_constants(e, name);
  if (kind == "poisson-lemma") return run_poisson_lemma(e, name);
  if (kind == "cf-check") return run_cf_check(e, name, ctx);
  if (kind == "verify-continuous") return run_continuous(e, name, ctx);
  return run_discrete(e, name);
}

int exit_code_of(const std::vector<ReportRow>& rows) {
  for (const auto& r : rows) {
    if (r.verdict == "fail") return 2;
  }
  return 0;
}

void require_finite(const std::vector<ReportRow>& rows) {
  for (const auto& r : rows) {
    for (double x : {r.lhs, r.se_lhs, r.rhs, r.se_rhs}) {
      if (std::isnan(x)) {
        throw std::runtime_error(fmt::format("{} ({} {}): NaN in an estimate", r.experiment,
                                             r.id, r.variant));
      }
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Direction of a sequence: +1 nondecreasing, -1 nonincreasing, 0 neither.
std::string monotonicity(const std::vector<double>& v) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] >= v[i - 1];
    down = down && v[i] <= v[i - 1];
  }
  if (up && down) return "constant";
  return up ? "nondecreasing" : down ? "nonincreasing" : "mixed";
}

}  // namespace

RunResult run_config(json config, const RunOptions& options) {
  validate_config(config, false);
  if (options.seed) config["seed"] = *options.seed;
  Context ctx;
  ctx.seed = config.value("seed", std::uint64_t{1});
  ctx.threads = options.threads == 0 ? 1 : options.threads;
  ctx.timing = options.timing;

  RunResult result;
  result.config_hash = config_hash(config);
  json experiments = json::array();
  const json& exps = config.at("experiments");
  for (std::size_t k = 0; k < exps.size(); ++k) {
    const json& e = exps[k];
    const std::string path = fmt::format("experiments[{}]", k);
    const std::string name = e.value("name", fmt::format("{}#{}", e.at("kind").get<std::string>(), k));
    Outcome o;
    try {
      o = run_experiment(e, name, ctx);
    } catch (const json::exception& ex) {
      throw ConfigError(path + ": " + ex.what());
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(path + ": " + ex.what());
    }
    experiments.push_back({{"name", name}, {"kind", e.at("kind")}, {"results", o.detail}});
    for (auto& row : o.rows) result.rows.push_back(std::move(row));
  }
  require_finite(result.rows);
  result.exit_code = exit_code_of(result.rows);
  std::size_t fails = 0;
  for (const auto& r : result.rows) fails += r.verdict == "fail" ? 1 : 0;
  result.report = {{"schema", kSchemaVersion},
                   {"config_hash", result.config_hash},
                   {"seed", ctx.seed},
                   {"experiments", experiments},
                   {"summary", {{"rows", result.rows.size()}, {"fail", fails}, {"exit_code", result.exit_code}}}};
  if (config.contains("description")) result.report["description"] = config.at("description");
  return result;
}

RunResult sweep_config(json config, const RunOptions& options) {
  validate_config(config, true);
  const auto ranges = find_ranges(config);
  if (ranges.size() != 1) {
    throw ConfigError(fmt::format("config: sweep needs exactly one ranged parameter, found {}",
                                  ranges.size()));
  }
  const auto& ptr = ranges.front();
  const json values = config.at(ptr).at("range");
  const bool is_paths = ptr.back() == "paths";

  RunResult result;
  json points = json::array();
  for (const auto& v : values) {
    json point = config;
    point[ptr] = v;
    RunResult r = run_config(point, options);
    const std::string label = v.dump();
    for (auto& row : r.rows) {
      row.sweep_value = label;
      result.rows.push_back(std::move(row));
    }
    points.push_back({{"value", v}, {"config_hash", r.config_hash}, {"report", r.report}});
    result.exit_code = std::max(result.exit_code, r.exit_code);
  }

  // Trend summary per (experiment, id, variant) series.
  json trends = json::array();
  std::vector<std::string> seen;
  for (const auto& head : result.rows) {
    const std::string key = head.experiment + "\x1f" + head.id + "\x1f" + head.variant;
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(key);
    std::vector<const ReportRow*> series;
    for (const auto& r : result.rows) {
      if (r.experiment == head.experiment && r.id == head.id && r.variant == head.variant) {
        series.push_back(&r);
      }
    }
    std::vector<double> ratios;
    bool cauchy = true;
    double worst_step = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      ratios.push_back(series[i]->ratio);
      if (i == 0) continue;
      const double diff = std::abs(series[i]->lhs - series[i - 1]->lhs);
      const double tol = 3.0 * (series[i]->se_lhs + series[i - 1]->se_lhs);
      cauchy = cauchy && diff <= tol;
      worst_step = std::max(worst_step, tol > 0.0 ? diff / tol : (diff > 0.0 ? INFINITY : 0.0));
    }
    json t{{"experiment", head.experiment},
           {"id", head.id},
           {"variant", head.variant},
           {"ratio_trend", monotonicity(ratios)},
           {"lhs_cauchy_3se", cauchy},
           {"worst_step_over_3se", number_json(worst_step)}};
    if (is_paths && series.size() > 1) {
      bool within = true;
      for (std::size_t i = 1; i < series.size(); ++i) {
        const double expected = std::sqrt(static_cast<double>(series[i - 1]->paths) /
                                          static_cast<double>(series[i]->paths));
        const double seen_ratio = safe_ratio(series[i]->se_lhs, series[i - 1]->se_lhs);
        within = within && std::abs(seen_ratio / expected - 1.0) <= 0.2;
      }
      t["se_scaling_within_20pct"] = within;
    }
    trends.push_back(std::move(t));
  }
  if (options.seed) config["seed"] = *options.seed;
  result.config_hash = config_hash(config);
  result.report = {{"schema", kSchemaVersion},
                   {"config_hash", result.config_hash},
                   {"sweep", {{"parameter", ptr.to_string()}, {"values", values}}},
                   {"points", points},
                   {"trends", trends},
                   {"exit_code", result.exit_code}};
  return result;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows, const std::string& hash,
                        bool with_sweep_column) {
  std::ostringstream out;
  if (with_sweep_column) out << "sweep_value,";
  out << "experiment,id,p,order,N,seed,lhs,se_lhs,rhs,se_rhs,constant,variant,ratio,verdict,"
         "runtime_ms,config_hash\n";
  for (const auto& r : rows) {
    if (with_sweep_column) out << csv_field(r.sweep_value) << ',';
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.experiment),
                       csv_field(r.id), r.p, r.order, r.paths, r.seed, r.lhs, r.se_lhs, r.rhs,
                       r.se_rhs, r.constant, csv_field(r.variant), r.ratio, r.verdict,
                       r.runtime_ms, hash);
  }
  return out.str();
}

void write_outputs(const RunResult& result, const RunOptions& options, const std::string& stem,
                   bool with_sweep_column) {
  std::filesystem::create_directories(options.out_dir);
  if (options.format != OutputFormat::csv) {
    std::ofstream(options.out_dir / (stem + ".json")) << result.report.dump(2) << '\n';
  }
  if (options.format != OutputFormat::json) {
    std::ofstream(options.out_dir / (stem + ".csv"))
        << rows_to_csv(result.rows, result.config_hash, with_sweep_column);
  }
}

}  // namespace levy_bdg

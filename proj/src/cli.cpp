#include "eyam/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "eyam/calculus.hpp"
#include "eyam/conformal.hpp"
#include "eyam/energy.hpp"
#include "eyam/prescribe.hpp"
#include "eyam/serialize.hpp"
#include "eyam/spectral.hpp"
#include "eyam/yamabe.hpp"

namespace eyam::cli {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kCommands = {"classify", "eigen", "yamabe", "prescribe",
                                         "mms",      "sweep", "probe"};

void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

double get_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

double opt_number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("params.") + key + ": expected a number");
  return j.at(key).get<double>();
}

int opt_int(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("params.") + key + ": expected an integer");
  return j.at(key).get<int>();
}

std::vector<double> opt_list(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array()) throw ConfigError(std::string("params.") + key + ": expected an array");
  std::vector<double> v;
  for (const auto& x : a) {
    if (!x.is_number()) throw ConfigError(std::string("params.") + key + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

struct WellSpec {
  double r_lo, r_hi, depth;
};

std::optional<WellSpec> parse_well(const std::string& s) {
  if (s.rfind("well:", 0) != 0) return std::nullopt;
  std::stringstream ss(s.substr(5));
  std::string tok;
  std::vector<double> v;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw ConfigError("metric: malformed well spec '" + s + "'");
    } catch (const std::logic_error&) {
      throw ConfigError("metric: malformed well spec '" + s + "'");
    }
  }
  if (v.size() != 3) throw ConfigError("metric: well spec needs r_lo,r_hi,depth");
  return WellSpec{v[0], v[1], v[2]};
}

struct Config {
  std::string command;
  GridPtr grid;
  Json metric_spec;
  Metric metric;
  std::optional<CurvatureTarget> target;
  RegionPair region;
  Json params = Json::object();
};

std::vector<double> parse_rp(const Json& j, const RadialGrid& g) {
  if (j.is_number()) return std::vector<double>(g.size(), j.get<double>());
  if (j.is_array()) {
    std::vector<double> v;
    for (const auto& x : j) {
      if (!x.is_number()) throw ConfigError("target.Rp: expected numbers");
      v.push_back(x.get<double>());
    }
    if (v.size() != g.size()) throw ConfigError("target.Rp: length differs from grid");
    return v;
  }
  if (j.is_object()) {
    allow_keys(j, {"bump"}, "target.Rp");
    if (!j.contains("bump")) throw ConfigError("target.Rp: missing 'bump'");
    const auto& b = j.at("bump");
    allow_keys(b, {"r_lo", "r_hi", "depth"}, "target.Rp.bump");
    const double depth = get_number(b, "depth", "target.Rp.bump");
    auto v = bump_profile(g, get_number(b, "r_lo", "target.Rp.bump"), get_number(b, "r_hi", "target.Rp.bump"));
    for (double& x : v) x *= -depth;
    return v;
  }
  throw ConfigError("target.Rp: expected a number, an array or {\"bump\": ...}");
}

Config load_config(const std::string& command, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(j, {"command", "grid", "metric", "target", "region", "params"}, "config");
  Config c;
  c.command = command;
  if (j.contains("command")) {
    if (!j.at("command").is_string() || j.at("command").get<std::string>() != command)
      throw ConfigError("config: 'command' does not match the requested command");
  }
  if (!j.contains("grid")) throw ConfigError("config: missing 'grid'");
  const auto& gj = j.at("grid");
  allow_keys(gj, {"n", "R_max", "N", "spacing"}, "grid");
  if (!gj.contains("n") || !gj.at("n").is_number_integer()) throw ConfigError("grid: missing integer 'n'");
  const int n = gj.at("n").get<int>();
  const double r_max = gj.contains("R_max") ? get_number(gj, "R_max", "grid") : 1000.0;
  int N = 512;
  if (gj.contains("N")) {
    if (!gj.at("N").is_number_integer()) throw ConfigError("grid.N: expected an integer");
    N = gj.at("N").get<int>();
  }
  Spacing sp = Spacing::kLog;
  if (gj.contains("spacing")) {
    if (!gj.at("spacing").is_string()) throw ConfigError("grid.spacing: expected a string");
    try {
      sp = parse_spacing(gj.at("spacing").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    c.grid = build_grid(n, r_max, N, sp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  c.metric_spec = j.contains("metric") ? j.at("metric") : Json("flat");
  try {
    if (c.metric_spec.is_string()) {
      const auto s = c.metric_spec.get<std::string>();
      if (s == "flat") c.metric = flat_metric(c.grid);
      else if (auto w = parse_well(s)) c.metric = well_metric(c.grid, w->r_lo, w->r_hi, w->depth);
      else throw ConfigError("metric: expected \"flat\", \"well:r_lo,r_hi,depth\" or an object");
    } else {
      c.metric = metric_from_json(c.metric_spec, c.grid);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (j.contains("target")) {
    const auto& t = j.at("target");
    allow_keys(t, {"Rp", "Hp"}, "target");
    if (!t.contains("Rp")) throw ConfigError("target: missing 'Rp'");
    c.target = make_target(parse_rp(t.at("Rp"), *c.grid), get_number(t, "Hp", "target"));
  }

  c.region = full_region(*c.grid);
  if (j.contains("region")) {
    const auto& r = j.at("region");
    allow_keys(r, {"intervals", "include_boundary"}, "region");
    std::vector<std::pair<double, double>> iv;
    if (!r.contains("intervals") || !r.at("intervals").is_array()) throw ConfigError("region: missing 'intervals'");
    for (const auto& p : r.at("intervals")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ConfigError("region.intervals: expected [r_lo, r_hi] pairs");
      iv.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    bool inc = false;
    if (r.contains("include_boundary")) {
      if (!r.at("include_boundary").is_boolean()) throw ConfigError("region.include_boundary: expected a boolean");
      inc = r.at("include_boundary").get<bool>();
    }
    try {
      c.region = region_from_intervals(*c.grid, iv, inc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (j.contains("params")) {
    c.params = j.at("params");
    if (!c.params.is_object()) throw ConfigError("params: expected an object");
  }
  return c;
}

Json grid_json(const RadialGrid& g) {
  Json j;
  j["n"] = g.dim();
  j["R_max"] = number(g.r_max());
  j["N"] = static_cast<int>(g.size()) - 1;
  j["spacing"] = to_string(g.spacing);
  return j;
}

std::string fmt(double x) { return format_double(x); }

struct Output {
  fs::path dir;
  Json result = Json::object();
  std::vector<std::pair<std::string, CsvTable>> tables;
};

using Handler = std::function<int(const Config&, Output&, int jobs, std::optional<std::uint64_t> seed)>;

SolverOptions solver_options(const Json& p) {
  SolverOptions o;
  o.tol = opt_number(p, "tol", o.tol);
  o.max_iters = opt_int(p, "max_iters", o.max_iters);
  o.continuation_steps = opt_int(p, "continuation_steps", o.continuation_steps);
  o.r_cut = opt_number(p, "r_cut", o.r_cut);
  o.r_base = opt_number(p, "r_base", o.r_base);
  o.delta_list = opt_list(p, "delta_list", o.delta_list);
  o.reduce_max_iters = opt_int(p, "reduce_max_iters", o.reduce_max_iters);
  o.readback_factor = opt_number(p, "readback_factor", o.readback_factor);
  if (o.delta_list.empty()) throw ConfigError("params.delta_list: empty");
  return o;
}

YamabeOptions yamabe_options(const Json& p, std::optional<std::uint64_t> seed) {
  YamabeOptions o;
  o.max_iters = opt_int(p, "max_iters", o.max_iters);
  o.tol_grad = opt_number(p, "tol_grad", o.tol_grad);
  o.restarts = opt_int(p, "restarts", o.restarts);
  o.seed = static_cast<std::uint64_t>(opt_int(p, "seed", 0));
  if (seed) o.seed = *seed;
  return o;
}

int cmd_classify(const Config& c, Output& out, int, std::optional<std::uint64_t>) {
  allow_keys(c.params, {"delta_list"}, "params");
  const auto deltas = opt_list(c.params, "delta_list", {0.0});
  if (deltas.empty()) throw ConfigError("params.delta_list: empty");
  const auto cls = classify_sign_detailed(c.metric, c.region, deltas);
  CsvTable t{{"delta", "lambda", "sign", "scale"}, {}};
  Json per = Json::array();
  for (std::size_t k = 0; k < cls.reports.size(); ++k) {
    const auto& r = cls.reports[k];
    t.add({fmt(cls.deltas[k]), fmt(r.value), to_string(r.sign), fmt(r.scale)});
    Json e = to_json(r);
    e["delta"] = number(cls.deltas[k]);
    per.push_back(e);
  }
  out.result["sign"] = to_string(cls.sign);
  out.result["lambda"] = per;
  out.tables.emplace_back("classify.csv", t);
  return kOk;
}

int cmd_eigen(const Config& c, Output& out, int, std::optional<std::uint64_t>) {
  allow_keys(c.params, {"delta"}, "params");
  const double delta = opt_number(c.params, "delta", 0.0);
  const auto r = lambda_delta(c.metric, c.region, delta);
  out.result["delta"] = number(delta);
  out.result["lambda"] = to_json(r);
  CsvTable t{{"r", "u"}, {}};
  if (r.minimizer)
    for (std::size_t i = 0; i < c.grid->size(); ++i) t.add({fmt(c.grid->nodes[i]), fmt(r.minimizer->values[i])});
  out.tables.emplace_back("eigen.csv", t);
  return kOk;
}

int cmd_yamabe(const Config& c, Output& out, int jobs, std::optional<std::uint64_t> seed) {
  allow_keys(c.params, {"q", "r", "b", "b_list", "r_list", "max_iters", "tol_grad", "restarts", "seed"},
             "params");
  const auto& d = c.grid->dims;
  const ExponentTriple tri{opt_number(c.params, "q", d.two_qbar), opt_number(c.params, "r", d.qbar_plus_1),
                           opt_number(c.params, "b", 1.0)};
  const auto opts = yamabe_options(c.params, seed);
  const auto rep = yamabe_infimum(c.metric, c.region, tri, opts);
  out.result["q"] = number(tri.q);
  out.result["r"] = number(tri.r);
  out.result["b"] = number(tri.b);
  out.result["value_upper_bound"] = number(rep.value);
  out.result["sign"] = to_string(rep.sign);
  out.result["iterations"] = rep.iterations;
  if (c.params.contains("b_list") || c.params.contains("r_list")) {
    const auto bl = opt_list(c.params, "b_list", {-1.0, 0.0, 1.0, 5.0});
    const auto rl = opt_list(c.params, "r_list", {2.0, 3.0, d.qbar_plus_1});
    const auto tab = sign_independence_suite(c.metric, c.region, bl, rl, opts, jobs);
    CsvTable t{{"b", "r", "value_upper_bound", "sign"}, {}};
    for (const auto& cell : tab.cells)
      t.add({fmt(cell.b), fmt(cell.r), fmt(cell.value_upper_bound), to_string(cell.sign)});
    out.result["sign_suite_all_equal"] = tab.all_equal;
    out.tables.emplace_back("sign_suite.csv", t);
  }
  return kOk;
}

int solve_outcome(const SolveReport& rep) {
  if (rep.gate == Gate::kFailed) return kGateFailed;
  if (!rep.converged || !rep.readback || !rep.readback->ok) return kNotConverged;
  return kOk;
}

CsvTable solution_table(const Metric& m, const SolveReport& rep, const std::vector<double>* exact) {
  CsvTable t{{"r", "u"}, {}};
  if (exact) t.header.push_back("u_exact");
  t.header.push_back("R_readback");
  const auto& g = *m.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<std::string> row{fmt(g.nodes[i]), fmt(rep.solution.values[i])};
    if (exact) row.push_back(fmt((*exact)[i]));
    row.push_back(rep.readback ? fmt(rep.readback->R[i]) : "");
    t.add(std::move(row));
  }
  return t;
}

const std::initializer_list<const char*> kSolverKeys = {
    "tol", "max_iters", "continuation_steps", "r_cut", "r_base", "delta_list", "reduce_max_iters",
    "readback_factor"};

int cmd_prescribe(const Config& c, Output& out, int, std::optional<std::uint64_t>) {
  allow_keys(c.params, kSolverKeys, "params");
  if (!c.target) throw ConfigError("prescribe: missing 'target'");
  const auto opts = solver_options(c.params);
  SolveReport rep;
  try {
    rep = prescribe_pipeline(c.metric, *c.target, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.result = to_json(rep);
  out.tables.emplace_back("prescribe.csv", solution_table(c.metric, rep, nullptr));
  return solve_outcome(rep);
}

int cmd_mms(const Config& c, Output& out, int, std::optional<std::uint64_t>) {
  std::initializer_list<const char*> keys = {"a", "tol", "max_iters", "continuation_steps", "r_cut",
                                             "r_base", "delta_list", "reduce_max_iters", "readback_factor"};
  allow_keys(c.params, keys, "params");
  if (!(c.metric_spec.is_string() && c.metric_spec.get<std::string>() == "flat"))
    throw ConfigError("mms: metric must be \"flat\"");
  if (c.target) throw ConfigError("mms: the target is manufactured; remove 'target'");
  const double a = opt_number(c.params, "a", -0.5);
  MmsCase mc;
  try {
    mc = mms_case(c.grid, a);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Json p = c.params;
  p.erase("a");
  const auto rep = prescribe_pipeline(c.metric, mc.target, solver_options(p));
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < c.grid->size(); ++i) {
    err = std::max(err, std::abs(rep.solution.values[i] - mc.u_exact.values[i]));
    ref = std::max(ref, std::abs(mc.u_exact.values[i]));
  }
  out.result = to_json(rep);
  out.result["a"] = number(a);
  out.result["Hp"] = number(mc.target.Hp);
  out.result["error_inf"] = number(err);
  out.result["relative_error_inf"] = number(ref > 0.0 ? err / ref : err);
  out.tables.emplace_back("mms.csv", solution_table(c.metric, rep, &mc.u_exact.values));
  return solve_outcome(rep);
}

int cmd_sweep(const Config& c, Output& out, int jobs, std::optional<std::uint64_t>) {
  allow_keys(c.params, {"axis", "values", "delta"}, "params");
  std::optional<WellSpec> w;
  if (c.metric_spec.is_string()) w = parse_well(c.metric_spec.get<std::string>());
  if (!w) throw ConfigError("sweep: metric must be a \"well:r_lo,r_hi,depth\" template");
  if (c.params.contains("axis") &&
      !(c.params.at("axis").is_string() && c.params.at("axis").get<std::string>() == "depth"))
    throw ConfigError("sweep: only the 'depth' axis is supported");
  const auto values = opt_list(c.params, "values", {});
  if (values.empty()) throw ConfigError("sweep: empty parameter axis");
  const double delta = opt_number(c.params, "delta", 0.0);
  const auto grid = c.grid;
  const WellSpec ws = *w;
  const MetricFamily family = [grid, ws](double s) { return well_metric(grid, ws.r_lo, ws.r_hi, s); };
  const auto curve = lambda_curve(family, c.region, delta, values, jobs);
  CsvTable t{{"value", "lambda", "sign", "s_star"}, {}};
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const auto& p = curve.points[k];
    t.add({fmt(p.s), fmt(p.lambda), to_string(p.sign),
           curve.crossing && k == curve.crossing_after ? fmt(curve.crossing->s) : ""});
  }
  out.result["axis"] = "depth";
  out.result["delta"] = number(delta);
  if (curve.crossing) {
    Json x;
    x["s_star"] = number(curve.crossing->s);
    x["lambda"] = number(curve.crossing->lambda);
    x["scale"] = number(curve.crossing->scale);
    x["after_row"] = static_cast<int>(curve.crossing_after);
    out.result["crossing"] = x;
  } else {
    out.result["crossing"] = nullptr;
  }
  out.tables.emplace_back("sweep.csv", t);
  return kOk;
}

int cmd_probe(const Config& c, Output& out, int, std::optional<std::uint64_t> seed) {
  allow_keys(c.params, {"samples", "seed", "B_list", "q0", "r0"}, "params");
  const int samples = opt_int(c.params, "samples", 200);
  if (samples < 1) throw ConfigError("params.samples: must be positive");
  std::uint64_t s = static_cast<std::uint64_t>(opt_int(c.params, "seed", 0));
  if (seed) s = *seed;
  const auto pr = probe_inequalities(c.grid, samples, s);
  CsvTable t{{"family", "parameter", "poincare", "sobolev"}, {}};
  for (const auto& x : pr.samples) t.add({x.family, fmt(x.parameter), fmt(x.poincare), fmt(x.sobolev)});
  out.result["C1_hat"] = number(pr.C1_hat);
  out.result["C2_hat"] = number(pr.C2_hat);
  out.tables.emplace_back("probe.csv", t);
  if (c.target) {
    const auto& d = c.grid->dims;
    const auto rows = probe_coercivity(c.metric, *c.target, opt_number(c.params, "q0", std::min(3.0, 1.0 + d.qbar)),
                                       opt_number(c.params, "r0", std::min(2.5, (3.0 + d.qbar) / 2.0)),
                                       opt_list(c.params, "B_list", {1.0, 10.0, 100.0}), samples, s);
    CsvTable ct{{"B", "K_hat", "below"}, {}};
    for (const auto& r : rows) ct.add({fmt(r.B), fmt(r.K_hat), std::to_string(r.below)});
    out.tables.emplace_back("coercivity.csv", ct);
  }
  return kOk;
}

Handler handler_for(const std::string& cmd) {
  if (cmd == "classify") return cmd_classify;
  if (cmd == "eigen") return cmd_eigen;
  if (cmd == "yamabe") return cmd_yamabe;
  if (cmd == "prescribe") return cmd_prescribe;
  if (cmd == "mms") return cmd_mms;
  if (cmd == "sweep") return cmd_sweep;
  return cmd_probe;
}

}  // namespace

int run_command(const std::string& command, const std::string& config_path, const std::string& out_dir,
                int jobs, std::optional<std::uint64_t> seed) {
  Output out;
  out.dir = out_dir;
  Json report;
  report["command"] = command;
  int code = kOk;
  std::string error;
  try {
    if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    const auto cfg = load_config(command, config_path);
    report["grid"] = grid_json(*cfg.grid);
    code = handler_for(command)(cfg, out, jobs, seed);
  } catch (const ConfigError& e) {
    code = kConfigError;
    error = e.what();
  } catch (const std::invalid_argument& e) {
    code = kConfigError;
    error = e.what();
  } catch (const std::exception& e) {
    code = kNotConverged;
    error = e.what();
  }
  report["status"] = code == kOk ? "ok" : code == kGateFailed ? "not-attainable" : "error";
  report["exit_code"] = code;
  if (!error.empty()) report["error"] = error;
  report["result"] = out.result;

  std::error_code ec;
  fs::create_directories(out.dir, ec);
  try {
    write_text((out.dir / "report.json").string(), dump_json(report));
    for (const auto& [name, t] : out.tables) write_text((out.dir / name).string(), t.str());
  } catch (const std::exception&) {
    return kConfigError;
  }
  return code;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Exterior Yamabe problem: classification and curvature prescription"};
  std::string command, config, out_dir;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "classify | eigen | yamabe | prescribe | mms | sweep | probe")->required();
  app.add_option("--config", config, "JSON experiment config")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--jobs", jobs, "concurrent rows for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed override");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  return run_command(command, config, out_dir, jobs, seed);
}

}  // namespace eyam::cli

#include "tjdrag/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tjdrag/compat.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/fixedpoint.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

namespace tjdrag {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      bad("unknown field \"" + key + "\" in " + where);
    }
  }
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(std::string("\"") + key + "\" must be finite");
  return d;
}

std::size_t get_size(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned()) bad(std::string("\"") + key + "\" must be a non-negative integer");
  return obj[key].get<std::size_t>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) bad(std::string("\"") + key + "\" must be true or false");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) bad(std::string("\"") + key + "\" must be a string");
  return obj[key].get<std::string>();
}

std::vector<double> get_doubles(const json& obj, const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_array() || v.empty()) bad(std::string("\"") + key + "\" must be a non-empty array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) bad(std::string("\"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ScenarioKind parse_kind(const std::string& s) {
  if (s == "stationary") return ScenarioKind::Stationary;
  if (s == "perturbed_stationary") return ScenarioKind::PerturbedStationary;
  if (s == "random") return ScenarioKind::Random;
  if (s == "intersection") return ScenarioKind::Intersection;
  if (s == "circle") return ScenarioKind::Circle;
  if (s == "custom") return ScenarioKind::Custom;
  if (s == "compatible") return ScenarioKind::Compatible;
  bad("unknown scenario kind \"" + s + "\"");
}

std::string kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Stationary: return "stationary";
    case ScenarioKind::PerturbedStationary: return "perturbed_stationary";
    case ScenarioKind::Random: return "random";
    case ScenarioKind::Intersection: return "intersection";
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::Custom: return "custom";
    case ScenarioKind::Compatible: return "compatible";
  }
  return "unknown";
}

TensionModel parse_model(const json& t) {
  check_keys(t, "tension", {"kind", "value", "c", "A", "B", "theta_min"});
  const std::string kind = get_string(t, "kind", "constant");
  try {
    if (kind == "constant") {
      check_keys(t, "constant tension", {"kind", "value"});
      return TensionModel::constant(get_double(t, "value", 1.0));
    }
    if (kind == "quadratic") {
      check_keys(t, "quadratic tension", {"kind", "c"});
      return TensionModel::quadratic(get_double(t, "c", 1.0));
    }
    if (kind == "read_shockley") {
      check_keys(t, "read_shockley tension", {"kind", "A", "B", "theta_min"});
      return TensionModel::read_shockley(get_double(t, "A", 1.0), get_double(t, "B", 1.0 + std::log(kPi)),
                                         get_double(t, "theta_min", kDefaultReadShockleyClamp));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    bad(e.what());
  }
  bad("unknown tension kind \"" + kind + "\"");
}

FlowParams parse_flow(const json& f) {
  check_keys(f, "flow",
             {"mu", "nu", "n", "dt", "t_end", "delta_min", "tau_junction", "scheme", "snapshot_every",
              "explicit_safety", "kink_tol", "detect_intersections", "halt_on_intersection",
              "freeze_curves"});
  FlowParams p;
  p.mu = get_double(f, "mu", p.mu);
  p.nu = get_double(f, "nu", p.nu);
  p.n = get_size(f, "n", p.n);
  p.dt = get_double(f, "dt", p.dt);
  p.t_end = get_double(f, "t_end", p.t_end);
  p.delta_min = get_double(f, "delta_min", p.delta_min);
  p.tau_junction = get_double(f, "tau_junction", p.tau_junction);
  const std::string scheme = get_string(f, "scheme", "semi_implicit");
  if (scheme == "semi_implicit") {
    p.scheme = Scheme::SemiImplicit;
  } else if (scheme == "explicit") {
    p.scheme = Scheme::Explicit;
  } else {
    bad("unknown scheme \"" + scheme + "\"");
  }
  p.snapshot_every = get_size(f, "snapshot_every", p.snapshot_every);
  p.explicit_safety = get_double(f, "explicit_safety", p.explicit_safety);
  p.kink_tol = get_double(f, "kink_tol", p.kink_tol);
  p.detect_intersections = get_bool(f, "detect_intersections", p.detect_intersections);
  p.halt_on_intersection = get_bool(f, "halt_on_intersection", p.halt_on_intersection);
  p.freeze_curves = get_bool(f, "freeze_curves", p.freeze_curves);
  try {
    validate(p);
  } catch (const Error& e) {
    bad(e.what());
  }
  return p;
}

OrientationState default_theta() { return {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0}; }

std::string csv_name(const char* stem, std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05zu.csv", stem, k);
  return buf;
}

// Runs `prepare` and maps any library error to the config exit code, so
// nothing is written for an invalid configuration.
template <class F>
bool prepared(std::ostream& log, F&& prepare) {
  try {
    prepare();
    return true;
  } catch (const Error& e) {
    log << "config error: " << e.what() << '\n';
    return false;
  }
}

json manifest(const ScenarioConfig& cfg, const std::string& command) {
  return {{"version", kVersion},
          {"command", command},
          {"config", cfg.source},
          {"scenario", kind_name(cfg.scenario.kind)},
          {"seed", cfg.seed},
          {"model", to_json(cfg.model)},
          {"thresholds",
           {{"kink_tol", cfg.flow.kink_tol},
            {"delta_min", cfg.flow.delta_min},
            {"tau_junction", cfg.flow.tau_junction},
            {"read_shockley_clamp", cfg.model.theta_min()}}}};
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  check_keys(doc, "config",
             {"scenario", "tension", "theta", "flow", "seed", "stationary", "compat", "contract",
              "intersect"});
  ScenarioConfig cfg;
  cfg.source = doc;

  if (doc.contains("scenario")) {
    const json& s = doc["scenario"];
    check_keys(s, "scenario", {"kind", "eps", "r0", "path", "parametric"});
    cfg.scenario.kind = parse_kind(get_string(s, "kind", "stationary"));
    cfg.scenario.eps = get_double(s, "eps", cfg.scenario.eps);
    cfg.scenario.r0 = get_double(s, "r0", cfg.scenario.r0);
    cfg.scenario.path = get_string(s, "path", "");
    cfg.scenario.parametric = get_bool(s, "parametric", cfg.scenario.parametric);
    if (cfg.scenario.kind == ScenarioKind::Custom && cfg.scenario.path.empty()) {
      bad("custom scenario needs \"path\"");
    }
    if (!(cfg.scenario.eps >= 0.0 && cfg.scenario.eps < 0.25)) bad("\"eps\" must lie in [0, 0.25)");
    if (!(cfg.scenario.r0 > 0.0)) bad("\"r0\" must be > 0");
  }
  if (doc.contains("tension")) cfg.model = parse_model(doc["tension"]);
  if (doc.contains("theta")) {
    const std::vector<double> th = get_doubles(doc, "theta", {});
    if (th.size() != 3) bad("\"theta\" must hold three angles");
    for (double v : th) {
      if (!std::isfinite(v)) bad("\"theta\" must be finite");
    }
    cfg.theta = OrientationState{th[0], th[1], th[2]};
  }
  if (doc.contains("flow")) cfg.flow = parse_flow(doc["flow"]);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) bad("\"seed\" must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("stationary")) {
    const json& s = doc["stationary"];
    check_keys(s, "stationary", {"c_values"});
    cfg.stationary.c_values = get_doubles(s, "c_values", {});
  }
  if (cfg.stationary.c_values.empty()) {
    for (int i = 1; i <= 100; ++i) cfg.stationary.c_values.push_back(0.1 * i);
  }
  if (doc.contains("compat")) {
    const json& s = doc["compat"];
    check_keys(s, "compat", {"tol", "reparametrize"});
    cfg.compat.tol = get_double(s, "tol", cfg.compat.tol);
    cfg.compat.reparametrize = get_bool(s, "reparametrize", cfg.compat.reparametrize);
    if (!(cfg.compat.tol > 0.0)) bad("compat \"tol\" must be > 0");
  }
  if (doc.contains("contract")) {
    const json& s = doc["contract"];
    check_keys(s, "contract", {"horizons", "dt", "alpha", "max_iter", "tol"});
    auto& c = cfg.contract;
    c.horizons = get_doubles(s, "horizons", c.horizons);
    c.dt = get_double(s, "dt", c.dt);
    c.alpha = get_double(s, "alpha", c.alpha);
    c.max_iter = get_size(s, "max_iter", c.max_iter);
    c.tol = get_double(s, "tol", c.tol);
    if (!(c.dt > 0.0)) bad("contract \"dt\" must be > 0");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad("contract \"alpha\" must lie in (0, 1)");
    if (c.max_iter == 0) bad("contract \"max_iter\" must be >= 1");
    if (!(c.tol > 0.0)) bad("contract \"tol\" must be > 0");
    for (double t : c.horizons) {
      if (!(t > 0.0)) bad("contract horizons must be > 0");
    }
  }
  if (doc.contains("intersect")) {
    const json& s = doc["intersect"];
    check_keys(s, "intersect", {"mu_values", "horizon_factor"});
    cfg.intersect.mu_values = get_doubles(s, "mu_values", cfg.intersect.mu_values);
    cfg.intersect.horizon_factor = get_double(s, "horizon_factor", cfg.intersect.horizon_factor);
    if (!(cfg.intersect.horizon_factor > 0.0)) bad("\"horizon_factor\" must be > 0");
  }
  return cfg;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

SimState build_initial_state(const ScenarioConfig& cfg) {
  const std::size_t n = cfg.flow.n;
  const OrientationState theta = cfg.theta.value_or(default_theta());
  switch (cfg.scenario.kind) {
    case ScenarioKind::Stationary: {
      auto [net, th] = stationary_configuration(n);
      return {net, cfg.theta.value_or(th), 0.0};
    }
    case ScenarioKind::PerturbedStationary: {
      SimState s = perturbed_stationary(n, cfg.scenario.eps, cfg.seed);
      if (cfg.theta) s.theta = *cfg.theta;
      return s;
    }
    case ScenarioKind::Random: {
      SimState s = random_network(n, cfg.seed);
      if (cfg.theta) s.theta = *cfg.theta;
      return s;
    }
    case ScenarioKind::Intersection: {
      SimState s = build_intersection_scenario(cfg.flow.mu, n).state;
      if (cfg.theta) s.theta = *cfg.theta;
      return s;
    }
    case ScenarioKind::Custom:
      return {read_network_file(cfg.scenario.path), theta, 0.0};
    case ScenarioKind::Compatible:
      return compatible_network(n, cfg.seed, cfg.model, theta,
                                {cfg.flow.mu, cfg.scenario.parametric});
    case ScenarioKind::Circle:
      break;
  }
  bad("scenario kind \"" + kind_name(cfg.scenario.kind) + "\" has no network");
}

int cmd_simulate(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  if (cfg.scenario.kind == ScenarioKind::Circle) {
    if (!prepared(log, [&] {
          if (!(cfg.scenario.r0 * cfg.scenario.r0 > 2.0 * cfg.flow.t_end)) {
            bad("circle vanishes before t_end");
          }
        })) {
      return kExitConfig;
    }
    const CircleTrace tr = run_closed_circle(cfg.scenario.r0, cfg.flow);
    fs::create_directories(out);
    std::ostringstream csv;
    csv << "t,radius\n";
    json samples = json::array();
    for (const CircleSample& s : tr.samples) {
      csv << format_double(s.t) << ',' << format_double(s.radius) << '\n';
      samples.push_back({{"t", s.t}, {"radius", s.radius}});
    }
    write_text_file(out / "circle.csv", csv.str());
    write_json(out / "circle.json", {{"r0", cfg.scenario.r0}, {"halted", tr.halted}, {"samples", samples}});
    json man = manifest(cfg, "simulate");
    man["files"] = {"circle.csv", "circle.json"};
    man["halted"] = tr.halted;
    const int code = tr.halted ? kExitHalted : kExitOk;
    man["exit_code"] = code;
    write_json(out / "manifest.json", man);
    log << "circle: final radius " << format_double(tr.samples.back().radius) << " at t = "
        << format_double(tr.samples.back().t) << (tr.halted ? " (halted)" : "") << '\n';
    return code;
  }

  std::optional<SimState> init;
  if (!prepared(log, [&] {
        init = build_initial_state(cfg);
        for (const Curve& c : init->network.curves()) require_regular(c, cfg.flow.delta_min);
        for (double s : curve_tensions(cfg.model, init->theta)) {
          if (!(s > 0.0)) bad("initial tensions must be positive");
        }
      })) {
    return kExitConfig;
  }

  const SimRecord rec = run(*init, cfg.flow, cfg.model);

  fs::create_directories(out / "snapshots");
  json files = json::array({"record.json", "trace.csv"});
  json snaps = json::array();
  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    std::ostringstream csv;
    write_snapshot_csv(csv, rec.snapshots[k].network);
    const std::string name = "snapshots/" + csv_name("snapshot", k);
    write_text_file(out / name, csv.str());
    files.push_back(name);
    snaps.push_back({{"file", name}, {"t", rec.snapshots[k].time}});
  }
  std::ostringstream trace;
  write_trace_csv(trace, rec.trace);
  write_text_file(out / "trace.csv", trace.str());
  write_json(out / "record.json", to_json(rec));

  json man = manifest(cfg, "simulate");
  man["files"] = files;
  man["snapshots"] = snaps;
  man["halted"] = rec.halted;
  json events = json::array();
  for (const SimEvent& e : rec.events) events.push_back(to_json(e));
  man["events"] = events;
  if (cfg.scenario.kind == ScenarioKind::Stationary) {
    man["reference_energy"] = 3.0 * cfg.model.sigma(2.0 * kPi / 3.0);
  }
  if (cfg.scenario.kind == ScenarioKind::Intersection) {
    man["intersection_scenario"] = to_json(build_intersection_scenario(cfg.flow.mu, cfg.flow.n));
  }
  const int code = rec.halted ? kExitHalted : kExitOk;
  man["exit_code"] = code;
  write_json(out / "manifest.json", man);

  log << "simulate: " << rec.steps << " steps, " << rec.snapshots.size() << " snapshots";
  for (const SimEvent& e : rec.events) log << "; " << to_string(e.kind) << " at t = " << format_double(e.time);
  log << '\n';
  return code;
}

int cmd_stationary(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  StationaryReport rep;
  std::optional<ReducedJacobian> jac;
  if (!prepared(log, [&] {
        rep = classify_stability(cfg.model);
        jac = reduced_ode_jacobian(cfg.model, cfg.flow.mu, cfg.flow.nu);
      })) {
    return kExitConfig;
  }
  fs::create_directories(out);
  json j = to_json(rep);
  json eig = json::array();
  for (int i = 0; i < 4; ++i) {
    eig.push_back({jac->quotient_eigenvalues(i).real(), jac->quotient_eigenvalues(i).imag()});
  }
  j["reduced_ode"] = {{"mu", cfg.flow.mu},
                      {"nu", cfg.flow.nu},
                      {"quotient_eigenvalues", eig},
                      {"max_real_part", jac->max_real_part}};
  write_json(out / "stationary.json", j);

  std::ostringstream csv;
  write_eigen_sweep_csv(csv, cfg.stationary.c_values);
  write_text_file(out / "eigen_sweep.csv", csv.str());

  json man = manifest(cfg, "stationary");
  man["files"] = {"stationary.json", "eigen_sweep.csv"};
  man["reference_energy"] = 3.0 * cfg.model.sigma(2.0 * kPi / 3.0);
  man["exit_code"] = kExitOk;
  write_json(out / "manifest.json", man);

  log << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_check_compat(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  std::optional<SimState> init;
  if (!prepared(log, [&] { init = build_initial_state(cfg); })) return kExitConfig;

  const double tol = cfg.compat.tol;
  const Network& net = init->network;
  const CompatReport par = check_parametric(net, init->theta, cfg.model, cfg.flow.mu, tol);
  const CompatReport geo = check_geometric(net, init->theta, cfg.model, cfg.flow.mu, tol);
  json j{{"parametric", to_json(par)}, {"geometric", to_json(geo)}};

  bool pass = par.parametric->ok && geo.geometric->ok;
  std::optional<CompatReport> after;
  if (cfg.compat.reparametrize && !par.parametric->ok) {
    try {
      const Network re = reparametrize_to_compatible(net, init->theta, cfg.model, cfg.flow.mu, tol);
      after = check_parametric(re, init->theta, cfg.model, cfg.flow.mu, tol);
      j["reparametrized"] = to_json(*after);
      pass = geo.geometric->ok && after->parametric->ok;
    } catch (const Error& e) {
      j["reparametrize_error"] = e.what();
      pass = false;
    }
  }

  fs::create_directories(out);
  write_json(out / "compat.json", j);
  const int code = pass ? kExitOk : kExitCheckFailed;
  json man = manifest(cfg, "check-compat");
  man["files"] = {"compat.json"};
  man["exit_code"] = code;
  write_json(out / "manifest.json", man);

  auto row = [&](const char* name, double value, bool ok) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-26s %-12.3e %s\n", name, value, ok ? "PASS" : "FAIL");
    log << buf;
  };
  log << "check (tol " << format_double(tol) << ")\n";
  row("parametric", par.max_parametric(), par.parametric->ok);
  row("geometric", geo.max_geometric(), geo.geometric->ok);
  if (after) row("parametric (reparametrized)", after->max_parametric(), after->parametric->ok);
  return code;
}

int cmd_contract_test(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  std::vector<LinearizedProblem> probs;
  if (!prepared(log, [&] {
        const SimState init = build_initial_state(cfg);
        for (double T : cfg.contract.horizons) {
          probs.push_back(make_linearized_problem(init.network, init.theta, cfg.model, cfg.flow.mu,
                                                  cfg.flow.nu, T, cfg.contract.dt, cfg.contract.alpha));
        }
      })) {
    return kExitConfig;
  }

  fs::create_directories(out);
  json reports = json::array();
  json files = json::array({"contraction.json", "contraction_sweep.csv"});
  std::ostringstream sweep;
  sweep << "T,max_factor,iterations,converged\n";
  bool all_converged = true;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const ContractionReport rep =
        iterate_to_fixed_point(probs[k], cfg.contract.max_iter, cfg.contract.tol);
    all_converged = all_converged && rep.converged;
    reports.push_back(to_json(rep));
    std::ostringstream csv;
    write_contraction_csv(csv, rep);
    const std::string name = csv_name("contraction", k);
    write_text_file(out / name, csv.str());
    files.push_back(name);
    sweep << format_double(rep.horizon) << ',' << format_double(rep.max_factor) << ','
          << rep.distances.size() << ',' << (rep.converged ? 1 : 0) << '\n';
    log << "T = " << format_double(rep.horizon) << ": " << rep.distances.size() << " iterations, max factor "
        << format_double(rep.max_factor) << (rep.converged ? "" : " (not converged)") << '\n';
  }
  write_json(out / "contraction.json", reports);
  write_text_file(out / "contraction_sweep.csv", sweep.str());

  const int code = all_converged ? kExitOk : kExitCheckFailed;
  json man = manifest(cfg, "contract-test");
  man["files"] = files;
  man["exit_code"] = code;
  write_json(out / "manifest.json", man);
  return code;
}

int cmd_intersect_demo(const ScenarioConfig& cfg, const fs::path& out, std::ostream& log) {
  std::vector<IntersectionScenario> scenarios;
  if (!prepared(log, [&] {
        for (double mu : cfg.intersect.mu_values) {
          scenarios.push_back(build_intersection_scenario(mu, cfg.flow.n));
        }
      })) {
    return kExitConfig;
  }

  fs::create_directories(out);
  json runs = json::array();
  json files = json::array({"intersect.json"});
  bool degenerate = false;
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const IntersectionScenario& sc = scenarios[k];
    FlowParams p = cfg.flow;
    p.mu = sc.mu;
    p.t_end = cfg.intersect.horizon_factor / sc.mu;
    p.detect_intersections = true;
    p.halt_on_intersection = true;
    const SimRecord rec = run(sc.state, p, cfg.model);

    json c2 = json::array();
    for (const Curve& c : sc.state.network.curves()) c2.push_back(discrete_c2_norm(c));
    json events = json::array();
    std::optional<double> first;
    for (const SimEvent& e : rec.events) {
      events.push_back(to_json(e));
      if (e.kind == EventKind::SelfIntersection && !first) first = e.time;
      if (e.kind != EventKind::SelfIntersection) degenerate = true;
    }
    const std::string frame = csv_name("intersect_frame", k);
    std::ostringstream csv;
    write_snapshot_csv(csv, rec.snapshots.back().network);
    write_text_file(out / frame, csv.str());
    files.push_back(frame);
    runs.push_back({{"mu", sc.mu},
                    {"horizon", p.t_end},
                    {"first_event_time", first ? json(*first) : json(nullptr)},
                    {"frame", frame},
                    {"c2_norms", c2},
                    {"scenario", to_json(sc)},
                    {"events", events}});
    log << "mu = " << format_double(sc.mu) << ": ";
    if (first) {
      log << "first intersection at t = " << format_double(*first) << '\n';
    } else {
      log << "none within horizon\n";
    }
  }
  write_json(out / "intersect.json", runs);
  const int code = degenerate ? kExitHalted : kExitOk;
  json man = manifest(cfg, "intersect-demo");
  man["files"] = files;
  man["exit_code"] = code;
  write_json(out / "manifest.json", man);
  return code;
}

}  // namespace tjdrag

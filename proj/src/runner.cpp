#include "superint/runner.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace superint::runner {

namespace {

namespace fs = std::filesystem;

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double get_param(const json& system, const std::string& name, double fallback) {
  if (!system.contains("parameters")) return fallback;
  const auto& p = system.at("parameters");
  if (!p.contains(name)) return fallback;
  return p.at(name).get<double>();
}

std::vector<models::RadialTerm> radial_terms(const json& system) {
  std::vector<models::RadialTerm> out;
  if (!system.contains("radial_terms")) return out;
  for (const auto& t : system.at("radial_terms")) {
    require_keys(t, {"c", "power"}, "radial term");
    out.push_back({t.at("c").get<double>(), t.at("power").get<int>()});
  }
  return out;
}

std::vector<models::AxialTerm> axial_terms(const json& system) {
  std::vector<models::AxialTerm> out;
  if (!system.contains("axial_terms")) return out;
  for (const auto& t : system.at("axial_terms")) {
    require_keys(t, {"c", "power"}, "axial term");
    out.push_back({t.at("c").get<double>(), t.at("power").get<int>()});
  }
  return out;
}

std::vector<models::PolarTerm> polar_terms(const json& system) {
  std::vector<models::PolarTerm> out;
  if (!system.contains("polar_terms")) return out;
  for (const auto& t : system.at("polar_terms")) {
    require_keys(t, {"c", "kind"}, "polar term");
    const std::string kind = t.at("kind").get<std::string>();
    models::PolarKind k;
    if (kind == "inv_cos2")
      k = models::PolarKind::inv_cos2;
    else if (kind == "inv_sin2")
      k = models::PolarKind::inv_sin2;
    else if (kind == "cos_over_sin2")
      k = models::PolarKind::cos_over_sin2;
    else if (kind == "constant")
      k = models::PolarKind::constant;
    else
      throw ConfigError("unknown polar term kind '" + kind + "'");
    out.push_back({t.at("c").get<double>(), k});
  }
  return out;
}

json suite_to_entry(const verify::VerificationReport& rep) { return rep.to_json(); }

void print_cases(std::ostream* log, const verify::VerificationReport& rep) {
  if (!log) return;
  for (const auto& c : rep.cases) {
    const char* tag = c.ok() ? "PASS" : "FAIL";
    (*log) << tag << " [" << rep.suite << "] " << c.label << " residual=" << c.residual
           << " tol=" << c.tolerance << (c.negative_control ? " (negative control)" : "") << "\n";
  }
}

double tolerance_of(const RunConfig& cfg, const std::string& name, double fallback) {
  if (cfg.tolerances.contains(name)) return cfg.tolerances.at(name).get<double>();
  return fallback;
}

std::string output_name(const RunConfig& cfg, const std::string& key, const std::string& fallback) {
  if (cfg.output.contains(key)) return cfg.output.at(key).get<std::string>();
  return fallback;
}

void write_file(const fs::path& p, const std::string& text, std::vector<std::string>& artifacts) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
  artifacts.push_back(p.string());
}

}  // namespace

json RunConfig::echo() const {
  json j;
  j["command"] = command;
  j["system"] = system;
  j["integral_set"] = integral_set;
  j["samples"] = samples;
  j["seed"] = seed;
  j["tolerances"] = tolerances;
  j["integrator"] = integrator;
  j["output"] = output;
  return j;
}

RunConfig parse_config(const json& j) {
  require_keys(j, {"command", "system", "integral_set", "samples", "seed", "tolerances",
                   "integrator", "output"},
               "config");
  RunConfig cfg;
  if (!j.contains("command")) throw ConfigError("config: missing 'command'");
  cfg.command = j.at("command").get<std::string>();
  if (cfg.command != "verify" && cfg.command != "simulate" && cfg.command != "audit" &&
      cfg.command != "charts")
    throw ConfigError("config: unknown command '" + cfg.command + "'");

  if (j.contains("system")) {
    cfg.system = j.at("system");
    require_keys(cfg.system,
                 {"family", "parameters", "profile", "radial_terms", "polar_terms", "axial_terms"},
                 "system");
    if (cfg.system.contains("profile"))
      require_keys(cfg.system.at("profile"), {"inverse_square", "fourier", "constant"}, "profile");
    if (cfg.system.contains("parameters"))
      require_keys(cfg.system.at("parameters"),
                   {"omega", "g1", "g2", "g3", "alpha", "beta", "kappa", "c1", "c2", "c3", "a"},
                   "parameters");
  } else if (cfg.command != "charts" && cfg.command != "audit") {
    throw ConfigError("config: command '" + cfg.command + "' needs a system");
  }

  if (j.contains("integral_set")) cfg.integral_set = j.at("integral_set").get<std::string>();
  if (cfg.integral_set != "default")
    throw ConfigError("config: unknown integral_set '" + cfg.integral_set + "'");
  if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
  if (cfg.samples < 1) throw ConfigError("config: samples must be positive");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("tolerances")) {
    cfg.tolerances = j.at("tolerances");
    require_keys(cfg.tolerances, {"conservation", "involution", "rank", "linear_connection"},
                 "tolerances");
  } else {
    cfg.tolerances = json::object();
  }
  if (j.contains("integrator")) {
    cfg.integrator = j.at("integrator");
    require_keys(cfg.integrator, {"method", "dt", "duration", "initial_q", "initial_p"},
                 "integrator");
  } else {
    cfg.integrator = json::object();
  }
  if (j.contains("output")) {
    cfg.output = j.at("output");
    require_keys(cfg.output, {"report", "trajectory", "drift"}, "output");
  } else {
    cfg.output = json::object();
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

std::vector<std::string> preset_names() {
  return {"calogero", "calogero-2d", "hartmann", "v1", "v2", "v3", "layered-oscillator"};
}

json preset(const std::string& name) {
  json j;
  j["command"] = "verify";
  j["seed"] = 0x5EED;
  j["samples"] = 100;
  if (name == "calogero") {
    j["system"] = {{"family", "rotational-family"},
                   {"parameters", {{"g1", 1.0}, {"g2", 1.0}, {"g3", 1.0}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.6, 0.4}},
                       {"initial_p", {0.3, -0.2, 0.5}}};
  } else if (name == "calogero-2d") {
    j["system"] = {{"family", "calogero-reduced-2d"},
                   {"parameters", {{"omega", 1.0}, {"g1", 1.0}, {"g2", 1.0}, {"g3", 1.0}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.4}},
                       {"initial_p", {0.2, -0.3}}};
  } else if (name == "hartmann") {
    j["system"] = {{"family", "minimal-v2"},
                   {"parameters", {{"alpha", -1.0}, {"beta", 0.0}}},
                   {"profile", {{"constant", 0.5}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.5, 0.8}},
                       {"initial_p", {0.2, 0.4, -0.1}}};
  } else if (name == "v1") {
    j["system"] = {{"family", "minimal-v1"},
                   {"parameters", {{"alpha", 0.7}, {"beta", 0.4}, {"a", 1.3}}},
                   {"profile",
                    {{"constant", 0.25},
                     {"inverse_square", {{{"c", 0.6}, {"alpha", 1.0}, {"beta", 0.4}}}},
                     {"fourier", {{{"m", 2}, {"a", 0.15}, {"b", -0.1}}}}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.4, 0.7}},
                       {"initial_p", {0.2, 0.3, -0.1}}};
  } else if (name == "v2") {
    j["system"] = {{"family", "minimal-v2"},
                   {"parameters", {{"alpha", 0.8}, {"beta", 0.5}}},
                   {"profile",
                    {{"constant", 0.3},
                     {"inverse_square", {{{"c", 0.5}, {"alpha", 0.7}, {"beta", 1.0}}}}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.5, 0.8}},
                       {"initial_p", {0.2, 0.4, -0.1}}};
  } else if (name == "v3") {
    j["system"] = {{"family", "minimal-v3"},
                   {"parameters", {{"alpha", 0.6}}},
                   {"profile",
                    {{"constant", 0.2},
                     {"fourier", {{{"m", 1}, {"a", 0.1}, {"b", 0.2}}}}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.3, 0.5}},
                       {"initial_p", {0.2, -0.3, 0.4}}};
  } else if (name == "layered-oscillator") {
    j["system"] = {{"family", "layered-xy"},
                   {"parameters", {{"a", 1.1}}},
                   {"axial_terms", {{{"c", 0.5}, {"power", 2}}}}};
    j["integrator"] = {{"method", "yoshida-4"},
                       {"dt", 1e-3},
                       {"duration", 20.0},
                       {"initial_q", {1.0, 0.0, 0.5}},
                       {"initial_p", {0.3, 1.0, 0.2}}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return j;
}

models::AngularProfile profile_from_json(const json& j) {
  models::AngularProfile k;
  if (j.is_null()) return k;
  if (j.contains("constant")) k.add_constant(j.at("constant").get<double>());
  if (j.contains("inverse_square"))
    for (const auto& t : j.at("inverse_square")) {
      require_keys(t, {"c", "alpha", "beta"}, "inverse_square term");
      k.add_inverse_square(t.at("c").get<double>(), t.at("alpha").get<double>(),
                           t.at("beta").get<double>());
    }
  if (j.contains("fourier"))
    for (const auto& t : j.at("fourier")) {
      require_keys(t, {"m", "a", "b"}, "fourier term");
      k.add_fourier(t.at("m").get<int>(), t.at("a").get<double>(), t.at("b").get<double>());
    }
  return k;
}

namespace {

models::AngularProfile system_profile(const json& system) {
  if (system.contains("profile")) return profile_from_json(system.at("profile"));
  if (system.contains("parameters")) {
    const double g1 = get_param(system, "g1", 0.0);
    const double g2 = get_param(system, "g2", 0.0);
    const double g3 = get_param(system, "g3", 0.0);
    if (g1 != 0.0 || g2 != 0.0 || g3 != 0.0) return models::calogero_profile(g1, g2, g3);
  }
  return {};
}

}  // namespace

phase::HamiltonianSystem build_system(const json& system) {
  if (!system.contains("family")) throw ConfigError("system: missing 'family'");
  const std::string family = system.at("family").get<std::string>();
  if (family == "calogero-1d")
    return models::calogero_three_body(get_param(system, "omega", 0.0), get_param(system, "g1", 0.0),
                                       get_param(system, "g2", 0.0), get_param(system, "g3", 0.0));
  if (family == "calogero-reduced-2d")
    return models::calogero_reduced_2d(get_param(system, "omega", 0.0), get_param(system, "g1", 0.0),
                                       get_param(system, "g2", 0.0), get_param(system, "g3", 0.0));
  if (family == "rotational-family") return models::rotational_family(system_profile(system));
  if (family == "minimal-v1" || family == "minimal-v2" || family == "minimal-v3") {
    const auto variant = family == "minimal-v1"   ? models::MinimalVariant::v1
                         : family == "minimal-v2" ? models::MinimalVariant::v2
                                                  : models::MinimalVariant::v3;
    const double alpha =
        family == "minimal-v3" && system.contains("parameters") &&
                system.at("parameters").contains("kappa")
            ? get_param(system, "kappa", 0.0)
            : get_param(system, "alpha", 0.0);
    return models::minimal_potential(variant, alpha, get_param(system, "beta", 0.0),
                                     system_profile(system));
  }
  if (family == "spherical-separable")
    return models::spherical_separable(radial_terms(system), polar_terms(system),
                                       system_profile(system));
  if (family == "layered-xy")
    return models::layered_xy(models::zero_potential(), axial_terms(system));
  if (family == "layered-rtheta")
    return models::layered_rtheta(models::zero_potential(), system_profile(system));
  throw ConfigError("unknown system family '" + family + "'");
}

integrals::IntegralSet build_catalog(const json& system) {
  const std::string family = system.at("family").get<std::string>();
  if (family == "rotational-family") {
    auto set = integrals::catalog_rotational(system_profile(system));
    for (double a : {0.5, 1.3}) integrals::add_spheroidal_members(set, a);
    return set;
  }
  if (family == "calogero-reduced-2d")
    return integrals::catalog_reduced_2d(get_param(system, "omega", 0.0),
                                         get_param(system, "g1", 0.0), get_param(system, "g2", 0.0),
                                         get_param(system, "g3", 0.0));
  if (family == "minimal-v1" || family == "minimal-v2" || family == "minimal-v3") {
    const auto variant = family == "minimal-v1"   ? models::MinimalVariant::v1
                         : family == "minimal-v2" ? models::MinimalVariant::v2
                                                  : models::MinimalVariant::v3;
    const double alpha = family == "minimal-v3" && system.contains("parameters") &&
                                 system.at("parameters").contains("kappa")
                             ? get_param(system, "kappa", 0.0)
                             : get_param(system, "alpha", 0.0);
    return integrals::catalog_minimal(variant, alpha, get_param(system, "beta", 0.0),
                                      system_profile(system), get_param(system, "a", 1.3));
  }
  if (family == "layered-xy") {
    std::vector<models::AxialTerm> f;
    if (system.contains("axial_terms"))
      for (const auto& t : system.at("axial_terms"))
        f.push_back({t.at("c").get<double>(), t.at("power").get<int>()});
    return integrals::catalog_layered(f, get_param(system, "a", 1.1));
  }
  throw ConfigError("family '" + family + "' has no integral catalog");
}

RunOutcome run(const RunConfig& cfg, const std::string& out_dir, std::ostream* log) {
  RunOutcome out;
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);

  json report;
  report["version"] = "1.0";
  report["config"] = cfg.echo();
  report["suites"] = json::array();
  report["discrepancies"] = json::array();

  verify::SampleOptions opt;
  opt.n_samples = cfg.samples;
  opt.seed = cfg.seed;

  bool all_ok = true;
  auto absorb = [&](const verify::VerificationReport& rep) {
    report["suites"].push_back(suite_to_entry(rep));
    for (const auto& d : rep.discrepancies) {
      json e;
      e["equation"] = d.equation;
      e["term"] = d.term;
      e["measured"] = d.measured;
      e["printed"] = d.printed;
      e["ratio"] = d.ratio;
      if (!d.note.empty()) e["note"] = d.note;
      report["discrepancies"].push_back(e);
    }
    print_cases(log, rep);
    all_ok = all_ok && rep.all_ok();
  };

  if (cfg.command == "verify") {
    const auto set = build_catalog(cfg.system);
    absorb(verify::conservation_suite(set, opt, tolerance_of(cfg, "conservation", 1e-9), true));
    if (!set.involutive_pairs().empty())
      absorb(verify::involution_suite(set, opt, tolerance_of(cfg, "involution", 1e-9)));
    {
      verify::SampleOptions ropt = opt;
      ropt.n_samples = std::min(cfg.samples, 20);
      absorb(verify::independence_suite(set, ropt, tolerance_of(cfg, "rank", 1e-8), true));
    }
    if (cfg.system.at("family").get<std::string>() == "rotational-family") {
      verify::SampleOptions lopt = opt;
      lopt.n_samples = std::max(cfg.samples, 1000);
      absorb(verify::linear_connection_suite(system_profile(cfg.system), lopt,
                                             tolerance_of(cfg, "linear_connection", 1e-12)));
      absorb(verify::killing_suite(system_profile(cfg.system), opt));
    }
  } else if (cfg.command == "audit") {
    double g1 = 1.0, g2 = 1.0, g3 = 1.0;
    if (!cfg.system.is_null() && cfg.system.contains("parameters")) {
      g1 = get_param(cfg.system, "g1", 1.0);
      g2 = get_param(cfg.system, "g2", 1.0);
      g3 = get_param(cfg.system, "g3", 1.0);
    }
    absorb(verify::equivalence_suite(g1, g2, g3, opt));
  } else if (cfg.command == "charts") {
    absorb(verify::charts_suite(opt));
  } else if (cfg.command == "simulate") {
    const auto sys = build_system(cfg.system);
    if (!cfg.integrator.contains("initial_q") || !cfg.integrator.contains("initial_p"))
      throw ConfigError("simulate needs integrator.initial_q and initial_p");
    phase::PhaseState z0;
    const auto q = cfg.integrator.at("initial_q").get<std::vector<double>>();
    const auto p = cfg.integrator.at("initial_p").get<std::vector<double>>();
    if (static_cast<int>(q.size()) != sys.dim() || q.size() != p.size())
      throw ConfigError("initial state dimension mismatch");
    z0.n = sys.dim();
    for (size_t i = 0; i < q.size(); ++i) {
      z0.q[i] = q[i];
      z0.p[i] = p[i];
    }
    const double dt = cfg.integrator.value("dt", 1e-3);
    const double T = cfg.integrator.value("duration", 10.0);
    const auto method =
        dynamics::integrator_from_name(cfg.integrator.value("method", std::string("yoshida-4")));
    const auto tr = dynamics::integrate(sys, z0, dt, T, method);

    std::ostringstream csv;
    dynamics::write_csv(tr, csv);
    write_file(dir / output_name(cfg, "trajectory", "trajectory.csv"), csv.str(), out.artifacts);

    json drift;
    drift["system"] = sys.label();
    drift["method"] = dynamics::integrator_name(method);
    drift["dt"] = dt;
    drift["duration"] = T;
    drift["status"] = tr.status == dynamics::RunStatus::completed ? "completed"
                      : tr.status == dynamics::RunStatus::truncated_singularity
                          ? "truncated-singularity"
                          : "escaping";
    drift["steps"] = tr.states.size() - 1;
    drift["drift"] = json::array();
    try {
      const auto set = build_catalog(cfg.system);
      for (const auto& e : dynamics::drift_report(tr, set)) {
        json d;
        d["label"] = e.label;
        d["max_relative_drift"] = e.max_relative_drift;
        drift["drift"].push_back(d);
      }
    } catch (const ConfigError&) {
      // families without a catalog still produce the trajectory
    }
    write_file(dir / output_name(cfg, "drift", "drift.json"), drift.dump(2) + "\n", out.artifacts);
    report["simulate"] = drift;
    if (log) (*log) << "simulate: " << drift["status"].get<std::string>() << ", "
                    << tr.states.size() - 1 << " steps\n";
  }

  report["ok"] = all_ok;
  write_file(dir / output_name(cfg, "report", "report.json"), report.dump(2) + "\n", out.artifacts);
  out.report = report;
  out.exit_code = all_ok ? 0 : 1;
  if (log) (*log) << (all_ok ? "OK" : "FAILED") << "\n";
  return out;
}

}  // namespace superint::runner

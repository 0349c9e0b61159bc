#pragma once

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "massey/config.hpp"
#include "massey/decomposition.hpp"
#include "massey/errors.hpp"
#include "massey/massey.hpp"
#include "massey/quasimorphism.hpp"
#include "massey/report.hpp"

namespace massey {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitResource = 3 };

inline constexpr const char* kEnumerationCapEnv = "MASSEY_ENUMERATION_CAP";

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> radius;
  std::optional<int> jobs;
  std::optional<std::uint64_t> enumeration_cap;

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    if (seed) j["seed"] = *seed;
    if (radius) j["radius"] = *radius;
    if (enumeration_cap) j["enumeration_cap"] = *enumeration_cap;
    return j;
  }
};

namespace detail {

inline int config_rank(const nlohmann::json& cfg) {
  const int rank = config::get_or<int>(cfg, "rank", 2, "config");
  validate_rank(rank);
  return rank;
}

inline void check_top_level(const nlohmann::json& cfg) {
  config::only_keys(cfg,
                    {"description", "rank", "spec", "specs", "quasimorphisms", "phi", "omega1", "omega2", "k1", "k2",
                     "plan", "mutation", "axioms", "defect"},
                    "config");
}

inline ExperimentPlan resolve_plan(const nlohmann::json& cfg, const Overrides& o) {
  ExperimentPlan p = config::plan(cfg.value("plan", nlohmann::json::object()), config_rank(cfg));
  if (o.seed) p.seed = *o.seed;
  if (o.radius) p.exhaustive_radius = *o.radius;
  if (o.jobs) p.jobs = *o.jobs;
  if (o.enumeration_cap) p.enumeration_cap = *o.enumeration_cap;
  p.validate();
  return p;
}

inline std::uint64_t resolve_cap(const nlohmann::json& cfg, const Overrides& o) {
  if (o.enumeration_cap) return *o.enumeration_cap;
  if (cfg.contains("plan") && cfg["plan"].contains("enumeration_cap"))
    return config::get<std::uint64_t>(cfg["plan"], "enumeration_cap", "plan");
  return kDefaultEnumerationCap;
}

inline std::uint64_t resolve_seed(const nlohmann::json& cfg, const Overrides& o) {
  if (o.seed) return *o.seed;
  if (cfg.contains("plan") && cfg["plan"].contains("seed")) return config::get<std::uint64_t>(cfg["plan"], "seed", "plan");
  return 1;
}

inline std::vector<DecompositionSpec> resolve_specs(const nlohmann::json& cfg) {
  const int rank = config_rank(cfg);
  std::vector<DecompositionSpec> specs;
  if (cfg.contains("specs")) {
    if (!cfg["specs"].is_array() || cfg["specs"].empty()) throw ConfigError("config: 'specs' must be a non-empty array");
    for (const auto& s : cfg["specs"]) specs.push_back(config::spec(s, rank));
  }
  if (cfg.contains("spec")) specs.push_back(config::spec(cfg["spec"], rank));
  if (specs.empty()) throw ConfigError("config: axioms needs 'spec' or 'specs'");
  return specs;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace detail

inline VerificationReport run_axioms(const nlohmann::json& cfg, const Overrides& o) {
  detail::check_top_level(cfg);
  const std::vector<DecompositionSpec> specs = detail::resolve_specs(cfg);
  const nlohmann::json section = cfg.value("axioms", nlohmann::json::object());
  config::only_keys(section, {"radius", "pair_radius", "stability_radius"}, "axioms");
  const int radius = o.radius.value_or(config::get_or<int>(section, "radius", 8, "axioms"));
  const int pair_radius = config::get_or<int>(section, "pair_radius", 6, "axioms");
  const int stability_radius = config::get_or<int>(section, "stability_radius", pair_radius - 1, "axioms");
  if (radius < 0 || pair_radius < 0 || stability_radius < 0) throw ConfigError("axioms: radii must be >= 0");
  const std::uint64_t cap = detail::resolve_cap(cfg, o);

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport report;
  report.command = "axioms";
  for (const DecompositionSpec& s : specs) {
    const AxiomReport ar = check_axioms(s, radius, pair_radius, cap);
    for (const AxiomResult& a : ar.axioms) {
      StageRecord rec;
      rec.name = s.describe() + " " + a.name;
      rec.passed = a.passed;
      rec.checked = a.checked;
      rec.violations = a.passed ? 0 : 1;
      if (a.counterexample) rec.counterexample = *a.counterexample;
      report.stages.push_back(std::move(rec));
    }
    std::optional<std::pair<Word, Word>> low_witness;
    const std::size_t low = measure_thick_constant(s, stability_radius, cap, &low_witness);
    StageRecord stable;
    stable.name = s.describe() + " r-hat stable";
    stable.passed = low == ar.r_hat;
    stable.checked = 2;
    stable.violations = stable.passed ? 0 : 1;
    stable.stats = {{"r_hat", ar.r_hat}, {"pair_radius", pair_radius}, {"r_hat_lower", low},
                    {"stability_radius", stability_radius}};
    if (!stable.passed)
      stable.counterexample = nlohmann::json{{"r_hat", ar.r_hat}, {"r_hat_lower", low}};
    report.stages.push_back(std::move(stable));
    nlohmann::json m{{"r_hat", ar.r_hat}, {"r_hat_lower", low}};
    if (ar.r_hat_witness) m["r_hat_witness"] = {ar.r_hat_witness->first.to_string(), ar.r_hat_witness->second.to_string()};
    report.measured[s.describe()] = m;
  }
  report.config = {{"input", cfg},
                   {"radius", radius},
                   {"pair_radius", pair_radius},
                   {"stability_radius", stability_radius},
                   {"enumeration_cap", cap}};
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline VerificationReport run_defect(const nlohmann::json& cfg, const Overrides& o) {
  detail::check_top_level(cfg);
  const config::Scope scope(cfg, detail::config_rank(cfg));
  const QuasiMorphism phi = scope.qm(config::get<nlohmann::json>(cfg, "phi", "config"));
  const nlohmann::json section = cfg.value("defect", nlohmann::json::object());
  config::only_keys(section, {"exhaustive_radius", "random_pairs", "max_len", "pair_radius"}, "defect");
  DefectPlan dp;
  dp.exhaustive_radius = o.radius.value_or(config::get_or<int>(section, "exhaustive_radius", 4, "defect"));
  dp.random_pairs = config::get_or<std::size_t>(section, "random_pairs", 10000, "defect");
  dp.max_len = config::get_or<std::size_t>(section, "max_len", 50, "defect");
  dp.seed = detail::resolve_seed(cfg, o);
  dp.cap = detail::resolve_cap(cfg, o);
  const int pair_radius = config::get_or<int>(section, "pair_radius", 6, "defect");

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport report;
  report.command = "defect";
  const DecompositionSpec& spec = phi.spec();
  const Rational lambda_norm = phi.lambda().sup_norm();
  StageRecord identity{"defect-thick-identity"}, bound{"defect-bound"};
  DefectStats stats;
  std::size_t max_thick = 0;
  for_each_defect_pair(phi.rank(), dp, [&](const Word& g, const Word& h) {
    const Rational d = defect(phi, g, h);
    const TriangleDecomposition t = triangle_split(spec, g, h);
    max_thick = std::max(max_thick, t.thick_total());
    ++stats.count;
    if (!stats.argmax || abs(d) > stats.max_abs) {
      stats.max_abs = abs(d);
      stats.argmax = std::make_pair(g, h);
    }
    // phi(g) + phi(h) - phi(gh) telescopes to the thick parts
    const Rational thick = phi(t.r1) + phi(t.r2) + phi(t.r3);
    ++identity.checked;
    if (d != thick) {
      ++identity.violations;
      if (!identity.counterexample)
        identity.counterexample = nlohmann::json{
            {"g", g.to_string()}, {"h", h.to_string()}, {"lhs", d.to_string()}, {"rhs", thick.to_string()}};
    }
    ++bound.checked;
    const Rational limit = Rational{static_cast<std::int64_t>(t.thick_total())} * lambda_norm;
    if (abs(d) > limit) {
      ++bound.violations;
      if (!bound.counterexample)
        bound.counterexample = nlohmann::json{
            {"g", g.to_string()}, {"h", h.to_string()}, {"value", d.to_string()}, {"limit", limit.to_string()}};
    }
  });
  identity.passed = identity.violations == 0;
  bound.passed = bound.violations == 0;
  report.stages.push_back(std::move(identity));
  report.stages.push_back(std::move(bound));

  const std::size_t r_hat = measure_thick_constant(spec, pair_radius, dp.cap);
  report.measured = {{"defect_max", stats.max_abs.to_string()},
                     {"pairs", stats.count},
                     {"lambda_sup", lambda_norm.to_string()},
                     {"max_thick_total", max_thick},
                     {"r_hat", r_hat},
                     {"pair_radius", pair_radius},
                     {"defect_bound", (Rational{static_cast<std::int64_t>(3 * r_hat)} * lambda_norm).to_string()}};
  if (stats.argmax) report.measured["defect_argmax"] = {stats.argmax->first.to_string(), stats.argmax->second.to_string()};
  report.config = {{"input", cfg},
                   {"exhaustive_radius", dp.exhaustive_radius},
                   {"random_pairs", dp.random_pairs},
                   {"max_len", dp.max_len},
                   {"seed", dp.seed},
                   {"enumeration_cap", dp.cap}};
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline VerificationReport run_massey_command(const nlohmann::json& cfg, const Overrides& o, VerifyScope scope) {
  detail::check_top_level(cfg);
  const int rank = detail::config_rank(cfg);
  const config::Scope names(cfg, rank);
  const MasseyInstance m = config::instance(cfg, names);
  const ExperimentPlan plan = detail::resolve_plan(cfg, o);
  const Mutation mutation = parse_mutation(config::get_or<std::string>(cfg, "mutation", "none", "config"));
  VerificationReport report = verify_massey_triviality(m, plan, mutation, scope);
  nlohmann::json echo{{"input", cfg}, {"plan", config::plan_json(plan)}};
  echo.update(report.config);
  report.config = echo;
  return report;
}

// Runs one subcommand end to end. The report is written only when the run
// got far enough to produce one; config and resource errors leave no file.
inline int run_command(const std::string& command, const std::string& config_path, const Overrides& o,
                       const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    if (command == "report") {
      const nlohmann::json j = config::load_file(config_path);
      if (!j.contains("schema_version") || !j.contains("stages")) throw ConfigError("'" + config_path + "' is not a report");
      out << render_table(j);
      return kExitPass;
    }
    const nlohmann::json cfg = config::load_file(config_path);
    const std::string started = detail::utc_timestamp();
    VerificationReport report;
    if (command == "axioms")
      report = run_axioms(cfg, o);
    else if (command == "defect")
      report = run_defect(cfg, o);
    else if (command == "verify-primitive")
      report = run_massey_command(cfg, o, VerifyScope::PrimitivesOnly);
    else if (command == "massey")
      report = run_massey_command(cfg, o, VerifyScope::Full);
    else
      throw UsageError("unknown subcommand '" + command + "'");
    report.started_at = started;
    report.config["overrides"] = o.to_json();
    const nlohmann::json j = report.to_json();
    const std::string path = out_path.empty() ? command + "-report.json" : out_path;
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write report to '" + path + "'");
    file << j.dump(2) << "\n";
    out << render_table(j);
    out << "report written to " << path << "\n";
    return report.passed() ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  }
}

}  // namespace massey

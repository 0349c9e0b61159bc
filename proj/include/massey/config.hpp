#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "massey/cochain.hpp"
#include "massey/decomposition.hpp"
#include "massey/errors.hpp"
#include "massey/massey.hpp"
#include "massey/plan.hpp"
#include "massey/quasimorphism.hpp"

namespace massey::config {

using nlohmann::json;

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

inline Rational rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational{v.get<std::int64_t>()};
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": rationals are integers or \"p/q\" strings");
}

inline Word word(const json& v, int rank, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": words are strings");
  try {
    return Word::parse(v.get<std::string>(), rank);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// {"family": "letter" | "rolli" | "brooks", "word": "ab"}
inline DecompositionSpec spec(const json& j, int rank) {
  const std::string where = "spec";
  only_keys(j, {"family", "word", "rank"}, where);
  rank = get_or<int>(j, "rank", rank, where);
  validate_rank(rank);
  const auto family = get<std::string>(j, "family", where);
  if (family == "letter") return DecompositionSpec::letter(rank);
  if (family == "rolli") return DecompositionSpec::rolli(rank);
  if (family == "brooks") return DecompositionSpec::brooks(word(j.value("word", json{}), rank, where + ".word"));
  throw ConfigError(where + ": unknown family '" + family + "'");
}

// {"spec": {...}, "lambda": {"ab": 1, "aB": "1/2"}}
inline QuasiMorphism quasimorphism(const json& j, int rank) {
  only_keys(j, {"spec", "lambda"}, "quasimorphism");
  const DecompositionSpec s = spec(get<json>(j, "spec", "quasimorphism"), rank);
  std::vector<std::pair<Word, Rational>> entries;
  const json lambda = get_or<json>(j, "lambda", json::object(), "quasimorphism");
  if (!lambda.is_object()) throw ConfigError("quasimorphism.lambda: expected an object");
  for (const auto& [key, value] : lambda.items())
    entries.emplace_back(word(json(key), s.rank(), "lambda key"), rational(value, "lambda['" + key + "']"));
  return QuasiMorphism(s, LambdaTable(entries));
}

// Named quasi-morphisms available to expressions.
class Scope {
 public:
  Scope(const json& top, int rank) : rank_(rank) {
    if (top.contains("quasimorphisms")) {
      const json& qms = top.at("quasimorphisms");
      if (!qms.is_object()) throw ConfigError("quasimorphisms: expected an object");
      for (const auto& [name, body] : qms.items()) named_.emplace(name, quasimorphism(body, rank));
    }
  }

  int rank() const { return rank_; }

  QuasiMorphism qm(const json& v) const {
    if (v.is_string()) {
      auto it = named_.find(v.get<std::string>());
      if (it == named_.end()) throw ConfigError("unknown quasimorphism '" + v.get<std::string>() + "'");
      return it->second;
    }
    return quasimorphism(v, rank_);
  }

 private:
  int rank_;
  std::map<std::string, QuasiMorphism> named_;
};

inline CochainExpr expr(const json& j, const Scope& scope) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.rfind("delta-qm:", 0) == 0) return restrict_aligned(coboundary(CochainExpr::qm(scope.qm(json(s.substr(9))))));
    if (s.rfind("qm:", 0) == 0) return CochainExpr::qm(scope.qm(json(s.substr(3))));
    throw ConfigError("expression preset '" + s + "' not understood (use delta-qm:<name> or qm:<name>)");
  }
  if (!j.is_object()) throw ConfigError("expression: expected an object or a preset string");
  const auto op = get<std::string>(j, "op", "expression");
  const std::string where = "expression '" + op + "'";
  auto arg = [&] { return expr(get<json>(j, "arg", where), scope); };
  if (op == "qm") {
    only_keys(j, {"op", "qm"}, where);
    return CochainExpr::qm(scope.qm(get<json>(j, "qm", where)));
  }
  if (op == "const") {
    only_keys(j, {"op", "value"}, where);
    return CochainExpr::constant(rational(get<json>(j, "value", where), where));
  }
  if (op == "table") {
    only_keys(j, {"op", "degree", "values"}, where);
    const int degree = get<int>(j, "degree", where);
    std::map<Tuple, Rational> values;
    for (const json& entry : get_or<json>(j, "values", json::array(), where)) {
      Tuple t;
      for (const json& w : get<json>(entry, "tuple", where)) t.push_back(word(w, scope.rank(), where));
      values[t] = rational(get<json>(entry, "value", where), where);
    }
    return CochainExpr::table(degree, std::move(values));
  }
  if (op == "delta" || op == "alt" || op == "restrict") {
    only_keys(j, {"op", "arg"}, where);
    const CochainExpr e = arg();
    if (op == "delta") return coboundary(e);
    if (op == "alt") return alternate(e);
    return restrict_aligned(e);
  }
  if (op == "cup") {
    only_keys(j, {"op", "args"}, where);
    const json args = get<json>(j, "args", where);
    if (!args.is_array() || args.size() < 2) throw ConfigError(where + ": needs at least two args");
    CochainExpr e = expr(args[0], scope);
    for (std::size_t i = 1; i < args.size(); ++i) e = cup(e, expr(args[i], scope));
    return e;
  }
  if (op == "lincomb") {
    only_keys(j, {"op", "terms"}, where);
    std::vector<std::pair<Rational, CochainExpr>> terms;
    for (const json& t : get<json>(j, "terms", where))
      terms.emplace_back(rational(get<json>(t, "coef", where), where), expr(get<json>(t, "expr", where), scope));
    try {
      return lincomb(terms);
    } catch (const UsageError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError("unknown expression op '" + op + "'");
}

inline ExperimentPlan plan(const json& j, int rank, ExperimentPlan p = default_massey_plan()) {
  const std::string where = "plan";
  only_keys(j,
            {"exhaustive_radius", "total_length_by_arity", "sample_counts", "default_samples", "random_max_len",
             "max_len_ladder", "ladder_samples", "pair_radius", "seed", "enumeration_cap", "jobs"},
            where);
  p.rank = rank;
  p.exhaustive_radius = get_or<int>(j, "exhaustive_radius", p.exhaustive_radius, where);
  if (j.contains("total_length_by_arity"))
    for (const auto& [k, v] : j.at("total_length_by_arity").items()) {
      try {
        p.total_length_by_arity[std::stoi(k)] = v.get<int>();
      } catch (const std::exception&) {
        throw ConfigError(where + ".total_length_by_arity: expected {\"arity\": int}");
      }
    }
  auto count = [&](const json& v, const std::string& what) -> std::size_t {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) throw ConfigError(where + ": " + what + " must be a positive integer");
    return v.get<std::size_t>();
  };
  if (j.contains("sample_counts"))
    for (const auto& [k, v] : j.at("sample_counts").items()) p.sample_counts[k] = count(v, "sample_counts." + k);
  if (j.contains("default_samples")) p.default_samples = count(j["default_samples"], "default_samples");
  if (j.contains("random_max_len")) p.random_max_len = count(j["random_max_len"], "random_max_len");
  if (j.contains("ladder_samples")) p.ladder_samples = count(j["ladder_samples"], "ladder_samples");
  if (j.contains("max_len_ladder")) {
    p.max_len_ladder.clear();
    for (const json& v : j["max_len_ladder"]) p.max_len_ladder.push_back(count(v, "max_len_ladder entries"));
  }
  p.pair_radius = get_or<int>(j, "pair_radius", p.pair_radius, where);
  p.seed = get_or<std::uint64_t>(j, "seed", p.seed, where);
  if (j.contains("enumeration_cap")) p.enumeration_cap = count(j["enumeration_cap"], "enumeration_cap");
  p.jobs = get_or<int>(j, "jobs", p.jobs, where);
  p.validate();
  return p;
}

inline json plan_json(const ExperimentPlan& p) {
  json counts = json::object();
  for (const auto& [k, v] : p.sample_counts) counts[k] = v;
  json totals = json::object();
  for (int arity = 1; arity <= 8; ++arity) totals[std::to_string(arity)] = p.total_length_for(arity);
  // jobs is left out on purpose: it must not influence the report
  return {{"rank", p.rank},
          {"exhaustive_radius", p.exhaustive_radius},
          {"total_length_by_arity", totals},
          {"sample_counts", counts},
          {"default_samples", p.default_samples},
          {"random_max_len", p.random_max_len},
          {"max_len_ladder", p.max_len_ladder},
          {"ladder_samples", p.ladder_samples},
          {"pair_radius", p.pair_radius},
          {"seed", p.seed},
          {"enumeration_cap", p.enumeration_cap}};
}

inline MasseyInstance instance(const json& top, const Scope& scope) {
  const CochainExpr w1 = expr(get<json>(top, "omega1", "config"), scope);
  const CochainExpr w2 = expr(get<json>(top, "omega2", "config"), scope);
  QuasiMorphism phi = scope.qm(get<json>(top, "phi", "config"));
  if (top.contains("k1") || top.contains("k2"))
    return MasseyInstance(std::move(phi), w1, w2, get<int>(top, "k1", "config"), get<int>(top, "k2", "config"));
  return MasseyInstance(std::move(phi), w1, w2);
}

}  // namespace massey::config

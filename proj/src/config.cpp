// Copyright 2026 The kirchfrac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kirchfrac/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "kirchfrac/io.hpp"
#include "kirchfrac/random_fields.hpp"

namespace kirchfrac {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(fmt::format("{} must be an object", where));
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(fmt::format("{} is missing '{}'", where, key));
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw ConfigError(fmt::format("{}.{} must be a number", where, key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(fmt::format("{}.{} must be finite", where, key));
  return x;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer_or(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(fmt::format("{}.{} must be an integer", where, key));
  return v.get<int>();
}

std::string string_of(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(fmt::format("{}.{} must be a string", where, key));
  return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array()) throw ConfigError(fmt::format("{}.{} must be an array", where, key));
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(fmt::format("{}.{} must hold numbers", where, key));
    out.push_back(x.get<double>());
  }
  return out;
}

Point point_of(const json& obj, const char* key, int dim, const std::string& where) {
  const auto v = numbers(obj, key, where);
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigError(fmt::format("{}.{} needs {} entries", where, key, dim));
  }
  Point p{0.0, 0.0};
  for (int a = 0; a < dim; ++a) p[a] = v[a];
  return p;
}

PairMap exponent_map(const json& spec, int dim, const std::string& where) {
  const std::string preset = string_of(spec, "preset", where);
  if (preset == "constant") {
    check_keys(spec, {"preset", "value"}, where);
    return constant_exponent(number(spec, "value", where));
  }
  if (preset == "sinusoidal") {
    check_keys(spec, {"preset", "base", "amplitude", "frequency"}, where);
    return sinusoidal_exponent(number(spec, "base", where), number(spec, "amplitude", where),
                               number(spec, "frequency", where), dim);
  }
  if (preset == "affine") {
    check_keys(spec, {"preset", "base", "sum_slope", "diff_slope"}, where);
    return affine_exponent(number(spec, "base", where), number_or(spec, "sum_slope", 0.0, where),
                           number_or(spec, "diff_slope", 0.0, where), dim);
  }
  throw ConfigError(fmt::format("{}: unknown exponent preset '{}'", where, preset));
}

std::string describe(const json& spec) {
  std::string out = spec.value("preset", "custom");
  for (const auto& [key, value] : spec.items()) {
    if (key != "preset" && value.is_number()) out += fmt::format(" {}={}", key, value.get<double>());
  }
  return out;
}

KirchhoffFunction kirchhoff_function(const json& spec, const std::string& where) {
  const std::string preset = string_of(spec, "preset", where);
  try {
    if (preset == "constant") {
      check_keys(spec, {"preset", "value"}, where);
      return KirchhoffFunction::constant(number(spec, "value", where));
    }
    if (preset == "power") {
      check_keys(spec, {"preset", "coefficient", "order"}, where);
      return KirchhoffFunction::power(number(spec, "coefficient", where), number(spec, "order", where));
    }
    if (preset == "power_plus") {
      check_keys(spec, {"preset", "base", "coefficient", "order"}, where);
      return KirchhoffFunction::power_plus(number(spec, "base", where), number(spec, "coefficient", where),
                                           number(spec, "order", where));
    }
    if (preset == "affine") {
      check_keys(spec, {"preset", "base", "slope"}, where);
      return KirchhoffFunction::affine(number(spec, "base", where), number(spec, "slope", where));
    }
    if (preset == "tabulated") {
      check_keys(spec, {"preset", "t", "values"}, where);
      return KirchhoffFunction::tabulated(numbers(spec, "t", where), numbers(spec, "values", where));
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
  throw ConfigError(fmt::format("{}: unknown Kirchhoff preset '{}'", where, preset));
}

ScalarMap source_map(const json& spec, const DomainPtr& dom, bool& is_zero, std::string& name,
                     const std::string& where) {
  const std::string preset = string_of(spec, "preset", where);
  is_zero = false;
  name = describe(spec);
  if (preset == "zero") {
    check_keys(spec, {"preset"}, where);
    is_zero = true;
    return zero_source();
  }
  if (preset == "constant") {
    check_keys(spec, {"preset", "value"}, where);
    const double v = number(spec, "value", where);
    is_zero = v == 0.0;
    return constant_source(v);
  }
  if (preset == "indicator") {
    check_keys(spec, {"preset", "lo", "hi", "value"}, where);
    const int dim = dom->dim();
    const double v = number(spec, "value", where);
    is_zero = v == 0.0;
    return indicator_source(dim, point_of(spec, "lo", dim, where), point_of(spec, "hi", dim, where), v);
  }
  if (preset == "nodal") {
    check_keys(spec, {"preset", "values"}, where);
    auto values = numbers(spec, "values", where);
    if (static_cast<int>(values.size()) != dom->num_nodes()) {
      throw ConfigError(fmt::format("{}: nodal source needs {} values (every node of B)", where, dom->num_nodes()));
    }
    is_zero = std::all_of(values.begin(), values.end(), [](double x) { return x == 0.0; });
    name = "nodal";
    return nodal_source(dom, std::move(values));
  }
  throw ConfigError(fmt::format("{}: unknown source preset '{}'", where, preset));
}

json constant_of(double v) { return {{"preset", "constant"}, {"value", v}}; }

json interval_domain(int cells) {
  return {{"dim", 1}, {"lo", {0.0}}, {"hi", {1.0}}, {"cells", {cells}}, {"dilation", 2.0}};
}

json default_validation() {
  return {{"exponent_samples", 9},     {"potential_grid", 400},   {"potential_samples", 1000},
          {"embedding_samples", 64},   {"embedding_safety", 1.25}, {"kirchhoff_samples", 200},
          {"kirchhoff_t_max", 1e4}};
}

json quadrature_of(const QuadratureOptions& q) {
  return {{"far_points", q.far_points},
          {"near_points", q.near_points},
          {"inner_points", q.inner_points},
          {"levels", q.levels},
          {"domain_points", q.domain_points}};
}

json make_problem(json domain, json p, json s, json kirchhoff, json potential, json a, json b) {
  const int dim = domain.at("dim").get<int>();
  return {{"domain", std::move(domain)},
          {"exponents", {{"p", std::move(p)}, {"s", std::move(s)}}},
          {"kirchhoff", std::move(kirchhoff)},
          {"potential", std::move(potential)},
          {"sources", {{"a", std::move(a)}, {"b", std::move(b)}}},
          {"quadrature", quadrature_of(QuadratureOptions::defaults_for(dim))},
          {"validation", default_validation()}};
}

json unit_kirchhoff() {
  return {{"m", 0.5}, {"gamma", 1.0}, {"M1", constant_of(1.0)}, {"M2", constant_of(1.0)}};
}

json zero_preset() { return {{"preset", "zero"}}; }

}  // namespace

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{"validate", "norms", "properties", "solve", "coercivity-scan"};
  return tasks;
}

const std::vector<std::string>& problem_presets() {
  static const std::vector<std::string> names{"convex", "constant", "variable", "singular",
                                              "kirchhoff", "planar", "loaded"};
  return names;
}

json preset_problem(const std::string& name) {
  if (name == "convex") {
    return make_problem(interval_domain(16), constant_of(2.0), constant_of(0.4), unit_kirchhoff(), zero_preset(),
                        zero_preset(), zero_preset());
  }
  if (name == "constant") {
    json k = {{"m", 0.5},
              {"gamma", 1.0},
              {"M1", {{"preset", "affine"}, {"base", 1.0}, {"slope", 1.0}}},
              {"M2", constant_of(1.0)}};
    return make_problem(interval_domain(64), constant_of(2.5), constant_of(0.3), k,
                        {{"preset", "sincos"}, {"alpha", 0.2}, {"period", 1.0}}, constant_of(0.2), zero_preset());
  }
  if (name == "variable") {
    json k = {{"m", 0.5},
              {"gamma", 1.0},
              {"M1", {{"preset", "affine"}, {"base", 1.0}, {"slope", 1.0}}},
              {"M2", {{"preset", "affine"}, {"base", 1.0}, {"slope", 0.5}}}};
    return make_problem(interval_domain(12),
                        {{"preset", "sinusoidal"}, {"base", 2.0}, {"amplitude", 0.3}, {"frequency", 1.7}},
                        {{"preset", "sinusoidal"}, {"base", 0.35}, {"amplitude", 0.05}, {"frequency", 2.3}}, k,
                        zero_preset(), constant_of(0.4), constant_of(-0.2));
  }
  if (name == "singular") {
    json m = {{"preset", "power_plus"}, {"base", 1.0}, {"coefficient", 1.0}, {"order", 0.8}};
    json k = {{"m", 1.0}, {"gamma", 0.8}, {"M1", m}, {"M2", m}};
    return make_problem(interval_domain(12), constant_of(2.0), constant_of(0.4), k, zero_preset(),
                        {{"preset", "indicator"}, {"lo", {0.2}}, {"hi", {0.6}}, {"value", 1.0}}, zero_preset());
  }
  if (name == "kirchhoff") {
    json m = {{"preset", "power_plus"}, {"base", 1.0}, {"coefficient", 1.0}, {"order", 0.8}};
    json k = {{"m", 1.0}, {"gamma", 0.8}, {"M1", m}, {"M2", m}};
    return make_problem(interval_domain(16), constant_of(2.2),
                        {{"preset", "sinusoidal"}, {"base", 0.4}, {"amplitude", 0.05}, {"frequency", 3.0}}, k,
                        {{"preset", "sincos"}, {"alpha", 0.5}, {"period", 1.0}}, constant_of(0.3), zero_preset());
  }
  if (name == "planar") {
    json domain = {{"dim", 2}, {"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}}, {"cells", {4, 4}}, {"dilation", 2.0}};
    json m = {{"preset", "affine"}, {"base", 1.0}, {"slope", 0.5}};
    json k = {{"m", 0.5}, {"gamma", 1.0}, {"M1", m}, {"M2", m}};
    return make_problem(domain, {{"preset", "sinusoidal"}, {"base", 2.0}, {"amplitude", 0.25}, {"frequency", 1.5}},
                        constant_of(0.45), k, {{"preset", "sincos"}, {"alpha", 0.3}, {"period", 2.0}},
                        constant_of(0.5), constant_of(0.25));
  }
  if (name == "loaded") {
    return make_problem(interval_domain(8), constant_of(2.0), constant_of(0.4), unit_kirchhoff(), zero_preset(),
                        {{"preset", "indicator"}, {"lo", {0.25}}, {"hi", {0.5}}, {"value", 1.0}}, zero_preset());
  }
  throw ConfigError(fmt::format("unknown problem preset '{}'", name));
}

DomainSpec build_domain(const json& d) {
  const std::string where = "problem.domain";
  check_keys(d, {"dim", "lo", "hi", "cells", "dilation", "margin"}, where);
  const int dim = integer_or(d, "dim", 0, where);
  if (dim != 1 && dim != 2) throw ConfigError("problem.domain.dim must be 1 or 2");
  const Point lo = point_of(d, "lo", dim, where);
  const Point hi = point_of(d, "hi", dim, where);
  const auto cells_v = numbers(d, "cells", where);
  if (static_cast<int>(cells_v.size()) != dim) throw ConfigError(fmt::format("{}.cells needs {} entries", where, dim));
  Index cells{0, 0};
  for (int a = 0; a < dim; ++a) {
    if (cells_v[a] != std::floor(cells_v[a]) || cells_v[a] < 1) throw ConfigError(where + ".cells must hold positive integers");
    cells[a] = static_cast<int>(cells_v[a]);
  }
  try {
    if (d.contains("margin")) {
      if (d.contains("dilation")) throw ConfigError("problem.domain takes either margin or dilation");
      const auto m = numbers(d, "margin", where);
      if (static_cast<int>(m.size()) != dim) throw ConfigError(fmt::format("{}.margin needs {} entries", where, dim));
      Index margin{0, 0};
      for (int a = 0; a < dim; ++a) margin[a] = static_cast<int>(m[a]);
      return DomainSpec::box(dim, lo, hi, cells, margin);
    }
    return DomainSpec::dilated_box(dim, lo, hi, cells, number_or(d, "dilation", 2.0, where));
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
}

ExponentField build_exponents(const json& e, int dim) {
  check_keys(e, {"p", "s"}, "problem.exponents");
  const json& p = require(e, "p", "problem.exponents");
  const json& s = require(e, "s", "problem.exponents");
  return ExponentField(exponent_map(p, dim, "problem.exponents.p"), exponent_map(s, dim, "problem.exponents.s"),
                       fmt::format("p: {}; s: {}", describe(p), describe(s)));
}

KirchhoffSpec build_kirchhoff(const json& k) {
  const std::string where = "problem.kirchhoff";
  check_keys(k, {"m", "gamma", "M1", "M2"}, where);
  return {kirchhoff_function(require(k, "M1", where), where + ".M1"),
          kirchhoff_function(require(k, "M2", where), where + ".M2"), number(k, "m", where),
          number(k, "gamma", where)};
}

PotentialSpec build_potential(const json& h) {
  const std::string where = "problem.potential";
  const std::string preset = string_of(h, "preset", where);
  if (preset == "zero") {
    check_keys(h, {"preset"}, where);
    return PotentialSpec::zero();
  }
  if (preset == "constant") {
    check_keys(h, {"preset", "value"}, where);
    return PotentialSpec::constant(number(h, "value", where));
  }
  if (preset == "sincos") {
    check_keys(h, {"preset", "alpha", "period"}, where);
    const double period = number(h, "period", where);
    if (!(period > 0.0)) throw ConfigError("problem.potential.period must be positive");
    return PotentialSpec::sincos(number(h, "alpha", where), period);
  }
  throw ConfigError(fmt::format("{}: unknown potential preset '{}'", where, preset));
}

SourceSpec build_sources(const json& s, const DomainPtr& dom) {
  check_keys(s, {"a", "b"}, "problem.sources");
  SourceSpec out;
  out.a = source_map(require(s, "a", "problem.sources"), dom, out.a_zero, out.a_name, "problem.sources.a");
  out.b = source_map(require(s, "b", "problem.sources"), dom, out.b_zero, out.b_name, "problem.sources.b");
  return out;
}

ProblemOptions build_options(const json& problem, int dim, std::uint64_t seed) {
  ProblemOptions o;
  o.seed = seed;
  o.quadrature = QuadratureOptions::defaults_for(dim);
  if (problem.contains("quadrature")) {
    const json& q = problem.at("quadrature");
    const std::string where = "problem.quadrature";
    check_keys(q, {"far_points", "near_points", "inner_points", "levels", "domain_points"}, where);
    auto& qo = o.quadrature;
    qo.far_points = integer_or(q, "far_points", qo.far_points, where);
    qo.near_points = integer_or(q, "near_points", qo.near_points, where);
    qo.inner_points = integer_or(q, "inner_points", qo.inner_points, where);
    qo.levels = integer_or(q, "levels", qo.levels, where);
    qo.domain_points = integer_or(q, "domain_points", qo.domain_points, where);
    for (int v : {qo.far_points, qo.near_points, qo.inner_points, qo.levels, qo.domain_points}) {
      if (v < 1 || v > 64) throw ConfigError("problem.quadrature entries must lie in [1, 64]");
    }
  }
  if (problem.contains("validation")) {
    const json& v = problem.at("validation");
    const std::string where = "problem.validation";
    check_keys(v, {"exponent_samples", "potential_grid", "potential_samples", "embedding_samples",
                   "embedding_safety", "embedding_constant", "kirchhoff_samples", "kirchhoff_t_max"},
               where);
    o.validation_samples = integer_or(v, "exponent_samples", o.validation_samples, where);
    o.potential_grid = integer_or(v, "potential_grid", o.potential_grid, where);
    o.potential_samples = integer_or(v, "potential_samples", o.potential_samples, where);
    o.embedding_samples = integer_or(v, "embedding_samples", o.embedding_samples, where);
    o.embedding_safety = number_or(v, "embedding_safety", o.embedding_safety, where);
    if (v.contains("embedding_constant") && !v.at("embedding_constant").is_null()) {
      o.embedding_constant = number(v, "embedding_constant", where);
    }
    o.kirchhoff_samples = integer_or(v, "kirchhoff_samples", o.kirchhoff_samples, where);
    o.kirchhoff_t_max = number_or(v, "kirchhoff_t_max", o.kirchhoff_t_max, where);
    if (o.validation_samples < 2 || o.potential_grid < 2 || o.potential_samples < 1 || o.embedding_samples < 1 ||
        o.kirchhoff_samples < 2 || !(o.kirchhoff_t_max > 0.0) || !(o.embedding_safety >= 1.0)) {
      throw ConfigError("problem.validation holds an out-of-range value");
    }
  }
  return o;
}

std::unique_ptr<EnergyProblem> build_problem(const json& problem, std::uint64_t seed) try {
  const std::string where = "problem";
  check_keys(problem, {"domain", "exponents", "kirchhoff", "potential", "sources", "quadrature", "validation"},
             where);
  auto dom = std::make_shared<const DomainSpec>(build_domain(require(problem, "domain", where)));
  const int dim = dom->dim();
  auto fields = build_exponents(require(problem, "exponents", where), dim);
  auto kirchhoff = build_kirchhoff(require(problem, "kirchhoff", where));
  auto potential = build_potential(require(problem, "potential", where));
  auto sources = build_sources(require(problem, "sources", where), dom);
  auto opts = build_options(problem, dim, seed);
  return std::make_unique<EnergyProblem>(*dom, std::move(fields), std::move(kirchhoff), std::move(potential),
                                         std::move(sources), opts);
} catch (const json::exception& e) {
  throw ConfigError(fmt::format("problem: {}", e.what()));
}

DiscreteField build_field(const json& spec, const DomainPtr& dom, std::uint64_t seed) {
  const std::string where = "field";
  const std::string preset = string_of(spec, "preset", where);
  if (preset == "zero") {
    check_keys(spec, {"preset"}, where);
    return DiscreteField::zero(dom);
  }
  if (preset == "sine") {
    check_keys(spec, {"preset", "mode", "amplitude"}, where);
    const int mode = integer_or(spec, "mode", 1, where);
    const double amp = number_or(spec, "amplitude", 1.0, where);
    if (mode < 1) throw ConfigError("field.mode must be positive");
    const Point lo = dom->omega_lo();
    const Point hi = dom->omega_hi();
    const int dim = dom->dim();
    return DiscreteField::interpolate(dom, [&](const Point& x) {
      double v = amp;
      for (int a = 0; a < dim; ++a) v *= std::sin(mode * std::numbers::pi * (x[a] - lo[a]) / (hi[a] - lo[a]));
      return v;
    });
  }
  if (preset == "random") {
    check_keys(spec, {"preset", "amplitude"}, where);
    return random_start(dom, seed, number_or(spec, "amplitude", 0.1, where));
  }
  if (preset == "nodal") {
    check_keys(spec, {"preset", "values"}, where);
    auto values = numbers(spec, "values", where);
    if (static_cast<int>(values.size()) != dom->num_nodes()) {
      throw ConfigError(fmt::format("field: nodal values need {} entries", dom->num_nodes()));
    }
    try {
      return DiscreteField(dom, std::move(values));
    } catch (const PreconditionError& e) {
      throw ConfigError(fmt::format("field: {}", e.what()));
    }
  }
  if (preset == "csv") {
    check_keys(spec, {"preset", "path"}, where);
    return read_field_csv(string_of(spec, "path", where), dom);
  }
  throw ConfigError(fmt::format("field: unknown preset '{}'", preset));
}

MinimizerConfig parse_minimizer_config(const json& m) {
  const std::string where = "minimizer";
  check_keys(m, {"max_iterations", "gradient_tolerance", "stall_tolerance", "initial_step", "backtrack", "armijo",
                 "max_backtracks", "origin_perturbation", "check_boundedness"},
             where);
  MinimizerConfig mc;
  mc.max_iterations = integer_or(m, "max_iterations", mc.max_iterations, where);
  mc.gradient_tolerance = number_or(m, "gradient_tolerance", mc.gradient_tolerance, where);
  mc.stall_tolerance = number_or(m, "stall_tolerance", mc.stall_tolerance, where);
  mc.initial_step = number_or(m, "initial_step", mc.initial_step, where);
  mc.backtrack = number_or(m, "backtrack", mc.backtrack, where);
  mc.armijo = number_or(m, "armijo", mc.armijo, where);
  mc.max_backtracks = integer_or(m, "max_backtracks", mc.max_backtracks, where);
  mc.origin_perturbation = number_or(m, "origin_perturbation", mc.origin_perturbation, where);
  if (m.contains("check_boundedness")) {
    if (!m.at("check_boundedness").is_boolean()) throw ConfigError("minimizer.check_boundedness must be a boolean");
    mc.check_boundedness = m.at("check_boundedness").get<bool>();
  }
  try {
    mc.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(fmt::format("minimizer: {}", e.what()));
  }
  return mc;
}

namespace {

RunConfig parse_document(const json& doc) {
  check_keys(doc, {"name", "task", "seed", "threads", "output", "problem", "minimizer", "initial", "properties",
                   "field", "scan"},
             "config");
  RunConfig cfg;
  if (doc.contains("name")) cfg.name = string_of(doc, "name", "config");
  if (doc.contains("task")) cfg.task = string_of(doc, "task", "config");
  if (doc.contains("output")) cfg.output = string_of(doc, "output", "config");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw ConfigError("config.seed must be a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  cfg.threads = integer_or(doc, "threads", cfg.threads, "config");
  if (cfg.threads < 1) throw ConfigError("config.threads must be positive");
  const auto& tasks = known_tasks();
  if (std::find(tasks.begin(), tasks.end(), cfg.task) == tasks.end()) {
    throw ConfigError(fmt::format("unknown task '{}'", cfg.task));
  }

  const json& problem = require(doc, "problem", "config");
  if (problem.contains("preset")) {
    check_keys(problem, {"preset", "cells"}, "problem");
    cfg.problem = preset_problem(string_of(problem, "preset", "problem"));
    if (problem.contains("cells")) cfg.problem["domain"]["cells"] = problem.at("cells");
  } else {
    cfg.problem = problem;
  }

  if (doc.contains("minimizer")) cfg.minimizer = parse_minimizer_config(doc.at("minimizer"));
  cfg.minimizer.seed = cfg.seed;
  if (doc.contains("initial")) {
    cfg.initial = doc.at("initial");
    if (!cfg.initial.is_object()) throw ConfigError("initial must be an object");
  }
  if (doc.contains("properties")) {
    check_keys(doc.at("properties"), {"trials"}, "properties");
    cfg.trials = integer_or(doc.at("properties"), "trials", cfg.trials, "properties");
  }
  if (doc.contains("field")) {
    cfg.field = doc.at("field");
    if (!cfg.field.is_object()) throw ConfigError("field must be an object");
  }
  if (doc.contains("scan")) {
    check_keys(doc.at("scan"), {"scales"}, "scan");
    cfg.scales = numbers(doc.at("scan"), "scales", "scan");
    for (std::size_t k = 0; k < cfg.scales.size(); ++k) {
      if (!(cfg.scales[k] > 0.0) || (k > 0 && !(cfg.scales[k] > cfg.scales[k - 1]))) {
        throw ConfigError("scan.scales must be positive and strictly increasing");
      }
    }
    if (cfg.scales.empty()) throw ConfigError("scan.scales must not be empty");
  }
  return cfg;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  return parse_run_config(doc);
}

}  // namespace kirchfrac

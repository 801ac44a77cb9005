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

// Experiment runner: validate, norms, properties, solve, coercivity-scan.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kirchfrac/config.hpp"
#include "kirchfrac/fractional_operator.hpp"
#include "kirchfrac/io.hpp"
#include "kirchfrac/minimizer.hpp"
#include "kirchfrac/parallel.hpp"
#include "kirchfrac/properties.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kirchfrac;

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kValidation = 3, kStall = 4 };

struct Failure {
  int code;
  std::string kind;
  std::string message;
  json detail;
};

struct Context {
  RunConfig cfg;
  fs::path out;
};

json constants_json(const CoercivityConstants& c) {
  return {{"embedding_constant", c.embedding_constant},
          {"c1", c.c1},
          {"norm_a", c.norm_a},
          {"norm_b", c.norm_b},
          {"p_min", c.p_min},
          {"p_max", c.p_max},
          {"omega_measure", c.omega_measure}};
}

std::unique_ptr<EnergyProblem> problem_of(const Context& ctx) {
  return build_problem(ctx.cfg.problem, ctx.cfg.seed);
}

json run_validate(const Context& ctx) {
  auto problem = problem_of(ctx);
  return {{"report", problem->report().to_json()},
          {"constants", constants_json(problem->constants())},
          {"num_dofs", problem->num_dofs()}};
}

json run_norms(const Context& ctx) {
  auto problem = problem_of(ctx);
  const Discretization& disc = problem->disc();
  const DiscreteField u = build_field(ctx.cfg.field, problem->domain_ptr(), ctx.cfg.seed);
  write_field_csv((ctx.out / "fields_u.csv").string(), u);
  if (u.is_zero()) throw ConfigError("the norms task needs a nonzero field");
  const double h = problem->domain().h(0);
  const ModularReport mr = fractional_modular_report(disc, u);
  const ScalarMap p = problem->exponents().p_bar_map();
  const double lp = luxemburg_norm(disc, u, p);
  json records = json::array();
  records.push_back(norm_record("fractional_modular", mr.modular, h, mr.quad_error_estimate));
  records.push_back(norm_record("gagliardo_norm", mr.norm, h, mr.quad_error_estimate));
  records.push_back(norm_record("weighted_modular_delta", weighted_modular_delta(disc, u), h, mr.quad_error_estimate));
  records.push_back(norm_record("lebesgue_modular", lebesgue_modular(disc, u, p), h, 0.0));
  records.push_back(norm_record("luxemburg_norm", lp, h, 0.0));
  records.push_back(norm_record("embedding_ratio", lp / mr.norm, h, 0.0));
  return {{"records", records},
          {"regime", to_string(mr.regime)},
          {"tail_bound", mr.tail_bound},
          {"accuracy_warning", mr.accuracy_warning}};
}

json run_properties(const Context& ctx, int& code) {
  auto problem = problem_of(ctx);
  json report = report_properties(*problem, ctx.cfg.seed, ctx.cfg.trials);
  write_json((ctx.out / "properties.json").string(), report);
  json summary = report;
  summary.erase("failures");
  if (!report["passed"].get<bool>()) code = kValidation;
  return summary;
}

json run_replay(const Context& ctx, const std::string& path, int& code) {
  auto problem = problem_of(ctx);
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open replay record '{}'", path));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  if (doc.contains("failures")) {
    if (doc["failures"].empty()) throw ConfigError("replay file records no failure");
    doc = doc["failures"][0];
  }
  json out = replay_properties(*problem, doc);
  write_json((ctx.out / "replay.json").string(), out);
  if (!out["failed"].empty()) code = kValidation;
  return out;
}

DiscreteField initial_component(const Context& ctx, const DomainPtr& dom, const char* which, std::uint64_t seed) {
  json spec = ctx.cfg.initial;
  if (spec.value("preset", "") == "csv") {
    if (!spec.contains(which)) throw ConfigError(fmt::format("initial.{} is required for csv starts", which));
    return read_field_csv(spec.at(which).get<std::string>(), dom);
  }
  return build_field(spec, dom, seed);
}

json run_solve(const Context& ctx) {
  auto problem = problem_of(ctx);
  const auto& dom = problem->domain_ptr();
  const DiscreteField u0 = initial_component(ctx, dom, "u", ctx.cfg.seed);
  const DiscreteField v0 = initial_component(ctx, dom, "v", ctx.cfg.seed + 1);
  const MinimizerResult r = minimize(*problem, u0, v0, ctx.cfg.minimizer);
  write_trace_csv((ctx.out / "trace.csv").string(), r.trace);
  write_plotdata((ctx.out / "plotdata.dat").string(), r.trace);
  write_field_csv((ctx.out / "fields_u.csv").string(), r.u);
  write_field_csv((ctx.out / "fields_v.csv").string(), r.v);
  write_residual_csv((ctx.out / "residual.csv").string(), assemble_weak_residual(*problem, r.u, r.v));

  json summary = r.to_json();
  summary["constants"] = constants_json(problem->constants());
  summary["minimizer"] = ctx.cfg.minimizer.to_json();
  // Finite-difference differentiability check at the returned pair.
  const Eigen::VectorXd ud = r.u.dofs();
  const Eigen::VectorXd vd = r.v.dofs();
  const Eigen::VectorXd dir = build_field({{"preset", "sine"}, {"mode", 1}, {"amplitude", 1.0}}, dom, 0).dofs();
  try {
    summary["differentiability"] = directional_check(*problem, ud, vd, dir, dir).to_json();
  } catch (const DomainError& e) {
    summary["differentiability"] = {{"passed", false}, {"error", e.what()}};
  }
  return summary;
}

json run_scan(const Context& ctx) {
  auto problem = problem_of(ctx);
  const DiscreteField dir = build_field(ctx.cfg.field, problem->domain_ptr(), ctx.cfg.seed);
  const DiscreteField zero = DiscreteField::zero(problem->domain_ptr());
  const auto rows = coercivity_ray_scan(*problem, dir, zero, ctx.cfg.scales);
  std::ofstream csv(ctx.out / "scan.csv");
  std::ofstream plot(ctx.out / "plotdata.dat");
  if (!csv || !plot) throw Error("cannot write scan artifacts");
  csv << "scale,energy,bound\n";
  plot << "# scale energy bound\n";
  json table = json::array();
  bool dominated = true;
  for (const auto& row : rows) {
    csv << fmt::format("{:.17g},{:.17g},{:.17g}\n", row.scale, row.energy, row.bound);
    plot << fmt::format("{:.17g} {:.17g} {:.17g}\n", row.scale, row.energy, row.bound);
    table.push_back({{"scale", row.scale}, {"energy", row.energy}, {"bound", row.bound}});
    dominated = dominated && row.energy >= row.bound;
  }
  return {{"rows", table},
          {"energy_dominates_bound", dominated},
          {"energy_increases", rows.back().energy > rows.front().energy},
          {"bound_increases", rows.back().bound > rows.front().bound}};
}

void emit_status(const fs::path& out, bool have_out, const json& status) {
  std::cout << status.dump() << std::endl;
  if (!have_out) return;
  try {
    write_json((out / "status.json").string(), status);
  } catch (const std::exception&) {
  }
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"kirchfrac experiment runner"};
  std::string config_path;
  std::optional<std::string> task;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> trials;
  std::optional<std::string> out_dir;
  std::optional<std::string> replay;
  app.add_option("--config", config_path, "problem and run configuration (JSON)")->required();
  app.add_option("--task", task, "validate | norms | properties | solve | coercivity-scan");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "trials for the properties task")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--replay", replay, "re-evaluate a serialized property failure");

  std::string task_name = "unknown";
  fs::path out;
  bool have_out = false;
  auto finish = [&](int code, const json& extra) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json status = {{"status", code == kOk ? "ok" : "error"}, {"task", task_name}, {"exit_code", code},
                   {"wall_time_s", wall}};
    if (extra.is_object()) status.update(extra);
    emit_status(out, have_out, status);
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return finish(kParse, {{"error", {{"kind", "parse"}, {"message", e.what()}}}});
  }

  if (out_dir) {
    std::error_code ec;
    out = *out_dir;
    fs::create_directories(out, ec);
    have_out = !ec && fs::is_directory(out);
  }
  if (task) task_name = *task;

  try {
    Context ctx;
    ctx.cfg = load_run_config(config_path);
    if (task) ctx.cfg.task = *task;
    if (seed) ctx.cfg.seed = *seed;
    if (threads) ctx.cfg.threads = *threads;
    if (trials) ctx.cfg.trials = *trials;
    if (out_dir) ctx.cfg.output = *out_dir;
    ctx.cfg.minimizer.seed = ctx.cfg.seed;
    task_name = replay ? "replay" : ctx.cfg.task;
    const auto& tasks = known_tasks();
    if (std::find(tasks.begin(), tasks.end(), ctx.cfg.task) == tasks.end()) {
      throw ConfigError(fmt::format("unknown task '{}'", ctx.cfg.task));
    }
    out = ctx.cfg.output;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw ConfigError(fmt::format("cannot create output directory '{}'", out.string()));
    have_out = true;
    ctx.out = out;
    set_thread_count(ctx.cfg.threads);

    int code = kOk;
    json summary;
    if (replay) {
      summary = run_replay(ctx, *replay, code);
    } else if (ctx.cfg.task == "validate") {
      summary = run_validate(ctx);
    } else if (ctx.cfg.task == "norms") {
      summary = run_norms(ctx);
    } else if (ctx.cfg.task == "properties") {
      summary = run_properties(ctx, code);
    } else if (ctx.cfg.task == "solve") {
      summary = run_solve(ctx);
    } else {
      summary = run_scan(ctx);
    }
    json doc = {{"name", ctx.cfg.name},
                {"task", task_name},
                {"seed", ctx.cfg.seed},
                {"threads", ctx.cfg.threads},
                {"status", code == kOk ? "ok" : "error"},
                {"result", summary}};
    write_json((out / "summary.json").string(), doc);
    return finish(code, {});
  } catch (const ConfigError& e) {
    return finish(kParse, {{"error", {{"kind", "config"}, {"message", e.what()}}}});
  } catch (const ValidationError& e) {
    if (have_out) {
      try {
        write_json((out / "summary.json").string(),
                   {{"task", task_name}, {"status", "error"}, {"result", {{"report", e.report()}}}});
      } catch (const std::exception&) {
      }
    }
    return finish(kValidation, {{"error", {{"kind", "validation"}, {"message", e.what()}, {"report", e.report()}}}});
  } catch (const LineSearchStall& e) {
    return finish(kStall, {{"error", {{"kind", "stall"}, {"message", e.what()}, {"state", e.state()}}}});
  } catch (const StallError& e) {
    return finish(kStall, {{"error", {{"kind", "stall"}, {"message", e.what()}}}});
  } catch (const std::exception& e) {
    return finish(kOther, {{"error", {{"kind", "error"}, {"message", e.what()}}}});
  }
}

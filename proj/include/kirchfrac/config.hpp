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

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kirchfrac/kirchhoff_energy.hpp"
#include "kirchfrac/minimizer.hpp"

namespace kirchfrac {

/// Everything a run needs besides the command line overrides.
struct RunConfig {
  std::string name = "unnamed";
  std::string task = "validate";
  std::string output = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  /// Problem section, with any "preset" already expanded.
  nlohmann::json problem;
  MinimizerConfig minimizer;
  /// Initial guess for solve: {"preset": "random" | "zero" | "csv", ...}.
  nlohmann::json initial = {{"preset", "random"}, {"amplitude", 0.1}};
  int trials = 100;
  /// Field for the norms task and direction for coercivity-scan.
  nlohmann::json field = {{"preset", "sine"}, {"mode", 1}, {"amplitude", 1.0}};
  std::vector<double> scales{1.0, 2.0, 4.0, 8.0, 16.0};
};

const std::vector<std::string>& known_tasks();

/// Names accepted by preset_problem.
const std::vector<std::string>& problem_presets();
/// Fully explicit problem section of a named preset. Throws ConfigError for
/// an unknown name.
nlohmann::json preset_problem(const std::string& name);

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
RunConfig parse_run_config(const nlohmann::json& doc);
/// The "minimizer" section on its own; missing keys keep their defaults.
MinimizerConfig parse_minimizer_config(const nlohmann::json& section);
/// Reads and parses a JSON file; syntax errors become ConfigError.
RunConfig load_run_config(const std::string& path);

DomainSpec build_domain(const nlohmann::json& section);
ExponentField build_exponents(const nlohmann::json& section, int dim);
KirchhoffSpec build_kirchhoff(const nlohmann::json& section);
PotentialSpec build_potential(const nlohmann::json& section);
SourceSpec build_sources(const nlohmann::json& section, const DomainPtr& dom);
ProblemOptions build_options(const nlohmann::json& section, int dim, std::uint64_t seed);

/// Validated problem; ValidationError propagates.
std::unique_ptr<EnergyProblem> build_problem(const nlohmann::json& problem, std::uint64_t seed = 1);

/// Field from {"preset": "zero" | "sine" | "random" | "nodal" | "csv", ...}.
DiscreteField build_field(const nlohmann::json& spec, const DomainPtr& dom, std::uint64_t seed);

}  // namespace kirchfrac

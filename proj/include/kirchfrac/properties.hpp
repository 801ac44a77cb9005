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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kirchfrac/kirchhoff_energy.hpp"

namespace kirchfrac {

/// Margin of one property at one (u, v); the property holds iff
/// margin >= threshold.
struct PropertyMargin {
  std::string name;
  double margin = 0.0;
  double threshold = 0.0;

  bool passed() const { return margin >= threshold; }
};

/// Central differences of I along (du, dv) at steps 1e-3, 1e-4, 1e-5 against
/// the Gateaux derivative.
struct DirectionalCheck {
  double exact = 0.0;
  /// |g_u| . |du| + |g_v| . |dv|, the scale of the directional derivative.
  double scale = 0.0;
  std::array<double, 3> errors{};
  /// log10(errors[0] / errors[1]).
  double order = 0.0;
  /// Smallest error over the three steps divided by scale.
  double relative_error = 0.0;

  bool passed() const { return relative_error <= 1e-5; }
  nlohmann::json to_json() const;
};

DirectionalCheck directional_check(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& du, const Eigen::VectorXd& dv);

/// Every invariant of the norm and energy layers evaluated at (u, v):
///   regime_equivalence  sign pattern of rho(u) - 1 and ||u|| - 1 agree
///   sandwich            ||u||^{p+} <= rho(u) <= ||u||^{p-} (or reversed above 1)
///   vanishing_sequence  rho(u / j) strictly decreasing for j = 1..20
///   homogeneity         ||u / j|| = ||u|| / j
///   holder              |int u v| <= 2 ||u||_p ||v||_q with q conjugate to p(x, x)
///   coercivity_chain    I(u, v) >= lower bound chain
///   potential_bound     |H(u(x), v(x))| <= c1 at every quadrature point
///   antiderivative_monotone   M~_i(delta) <= M~_i(2 delta)
///   gradient_consistency      -log10 of the relative error of central
///                             differences along v (at least 5)
std::vector<PropertyMargin> property_margins(const EnergyProblem& problem, const DiscreteField& u,
                                             const DiscreteField& v);

/// Runs property_margins on `trials` seeded random pairs scaled so that their
/// norms straddle 1. Failing pairs are serialized under "failures" for replay.
/// Throws PreconditionError when trials < 1.
nlohmann::json report_properties(const EnergyProblem& problem, std::uint64_t seed, int trials);

/// Re-evaluates the margins of a serialized failure record
/// {"u": [...], "v": [...], ...}.
nlohmann::json replay_properties(const EnergyProblem& problem, const nlohmann::json& record);

}  // namespace kirchfrac

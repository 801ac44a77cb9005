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
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/function_spaces.hpp"
#include "kirchfrac/kirchhoff_energy.hpp"

namespace kirchfrac {

struct MinimizerConfig {
  int max_iterations = 500;
  /// Stop once the gradient sup-norm is at or below this value.
  double gradient_tolerance = 1e-4;
  /// Stop after 5 consecutive accepted steps that lower the energy by less
  /// than stall_tolerance * max(1, |energy|).
  double stall_tolerance = 1e-18;
  double initial_step = 1.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;
  /// Amplitude of the random nodal values placed on a component whose
  /// Kirchhoff term is singular at zero and which starts at zero.
  double origin_perturbation = 1e-3;
  /// Track X0 norms of every iterate against the sublevel radius.
  bool check_boundedness = true;
  std::uint64_t seed = 1;

  /// Throws PreconditionError on a nonpositive tolerance or a factor outside (0, 1).
  void validate() const;
  nlohmann::json to_json() const;
};

struct TraceEntry {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  int backtracks = 0;
  /// Energy decrease of the step minus armijo * step * |g|^2; nonnegative.
  double armijo_margin = 0.0;
  double certificate = 0.0;
  double norm_u = 0.0;  ///< NaN when boundedness is not tracked
  double norm_v = 0.0;
};

enum class Termination { kConverged, kMaxIterations, kEnergyStall };
std::string to_string(Termination t);

struct MinimizerResult {
  MinimizerResult(DiscreteField u0, DiscreteField v0) : u(std::move(u0)), v(std::move(v0)) {}

  DiscreteField u;
  DiscreteField v;
  double energy = 0.0;
  double grad_norm = 0.0;
  /// max(energy - lower_estimate, grad_norm).
  double certificate = 0.0;
  double lower_estimate = 0.0;
  /// Sup-norm of the weak residual at (u, v), assembled independently of the descent.
  double residual_norm = 0.0;
  int iterations = 0;
  Termination termination = Termination::kMaxIterations;
  bool perturbed_origin = false;
  /// Every iterate stayed inside the norm ball where the lower bound chain
  /// falls below the initial energy.
  bool bounded = true;
  double radius_u = 0.0;
  double radius_v = 0.0;
  double max_norm_u = 0.0;
  double max_norm_v = 0.0;
  std::vector<TraceEntry> trace;

  bool converged() const { return termination == Termination::kConverged; }
  nlohmann::json to_json() const;
};

/// Raised when the line search cannot decrease the energy.
class LineSearchStall : public StallError {
 public:
  LineSearchStall(const std::string& what, nlohmann::json state)
      : StallError(what), state_(std::move(state)) {}
  const nlohmann::json& state() const { return state_; }

 private:
  nlohmann::json state_;
};

/// max(energy - lower, grad_norm), with the gap clipped at zero.
double ekeland_certificate(double energy, double grad_norm, double lower);

/// Steepest descent with Barzilai-Borwein trial steps and Armijo backtracking.
MinimizerResult minimize(const EnergyProblem& problem, const DiscreteField& u0, const DiscreteField& v0,
                         const MinimizerConfig& cfg = {});
/// Starts from seeded random nodal values in [-0.1, 0.1].
MinimizerResult minimize(const EnergyProblem& problem, const MinimizerConfig& cfg = {});

/// Seeded uniform nodal values in [-amplitude, amplitude] on interior nodes.
DiscreteField random_start(const DomainPtr& dom, std::uint64_t seed, double amplitude = 0.1);

struct RayPoint {
  double scale = 0.0;
  double energy = 0.0;
  double bound = 0.0;
};

/// Energy and lower bound chain along t (u_hat, v_hat). Throws
/// PreconditionError for a zero direction or scales that are not positive
/// and strictly increasing.
std::vector<RayPoint> coercivity_ray_scan(const EnergyProblem& problem, const DiscreteField& u_hat,
                                          const DiscreteField& v_hat, const std::vector<double>& scales);

}  // namespace kirchfrac

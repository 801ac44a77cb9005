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

#include "kirchfrac/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kirchfrac/fractional_operator.hpp"
#include "kirchfrac/random_fields.hpp"

namespace kirchfrac {

namespace {

constexpr int kStallWindow = 5;
constexpr double kMinStep = 1e-14;
constexpr double kMaxStep = 1e14;

struct Evaluation {
  double energy = 0.0;
  Gradient grad;
};

bool try_energy(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                double& out) {
  try {
    out = energy(problem, u, v);
  } catch (const DomainError&) {
    return false;
  } catch (const EvaluationError&) {
    return false;
  }
  return std::isfinite(out);
}

Eigen::VectorXd perturbation(int n, std::uint64_t seed, double amplitude) {
  Rng rng(seed);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = amplitude * (2.0 * std::generate_canonical<double, 53>(rng) - 1.0);
  }
  return out;
}

nlohmann::json stall_state(int iteration, double energy, double grad_norm, double step, int backtracks) {
  return {{"iteration", iteration},
          {"energy", energy},
          {"grad_norm", grad_norm},
          {"last_step", step},
          {"backtracks", backtracks}};
}

}  // namespace

void MinimizerConfig::validate() const {
  if (max_iterations < 0) throw PreconditionError("max_iterations must be nonnegative");
  if (!(gradient_tolerance > 0.0)) throw PreconditionError("gradient tolerance must be positive");
  if (!(stall_tolerance > 0.0)) throw PreconditionError("stall tolerance must be positive");
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw PreconditionError("initial step must be positive");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw PreconditionError("backtracking factor must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw PreconditionError("Armijo constant must lie in (0, 1)");
  if (max_backtracks < 1) throw PreconditionError("max_backtracks must be positive");
  if (!(origin_perturbation > 0.0)) throw PreconditionError("origin perturbation must be positive");
}

nlohmann::json MinimizerConfig::to_json() const {
  return {{"max_iterations", max_iterations},
          {"gradient_tolerance", gradient_tolerance},
          {"stall_tolerance", stall_tolerance},
          {"initial_step", initial_step},
          {"backtrack", backtrack},
          {"armijo", armijo},
          {"max_backtracks", max_backtracks},
          {"origin_perturbation", origin_perturbation},
          {"check_boundedness", check_boundedness},
          {"seed", seed}};
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxIterations:
      return "max_iterations";
    case Termination::kEnergyStall:
      return "energy_stall";
  }
  return "unknown";
}

nlohmann::json MinimizerResult::to_json() const {
  return {{"energy", energy},
          {"grad_norm", grad_norm},
          {"certificate", certificate},
          {"lower_estimate", lower_estimate},
          {"residual_norm", residual_norm},
          {"iterations", iterations},
          {"termination", to_string(termination)},
          {"converged", converged()},
          {"perturbed_origin", perturbed_origin},
          {"bounded", bounded},
          {"radius_u", radius_u},
          {"radius_v", radius_v},
          {"max_norm_u", max_norm_u},
          {"max_norm_v", max_norm_v},
          {"sup_u", u.sup_norm()},
          {"sup_v", v.sup_norm()}};
}

double ekeland_certificate(double energy, double grad_norm, double lower) {
  return std::max(std::max(energy - lower, 0.0), grad_norm);
}

DiscreteField random_start(const DomainPtr& dom, std::uint64_t seed, double amplitude) {
  Rng rng(seed);
  return random_nodal_field(dom, rng, amplitude);
}

MinimizerResult minimize(const EnergyProblem& problem, const MinimizerConfig& cfg) {
  const auto& dom = problem.domain_ptr();
  return minimize(problem, random_start(dom, cfg.seed), random_start(dom, cfg.seed + 1), cfg);
}

MinimizerResult minimize(const EnergyProblem& problem, const DiscreteField& u0, const DiscreteField& v0,
                         const MinimizerConfig& cfg) {
  cfg.validate();
  if (!u0.domain().same_grid(problem.domain()) || !v0.domain().same_grid(problem.domain())) {
    throw PreconditionError("initial fields live on a different grid");
  }
  const int n = problem.num_dofs();
  Eigen::VectorXd u = u0.dofs();
  Eigen::VectorXd v = v0.dofs();

  const auto zero = DiscreteField::zero(problem.domain_ptr());
  MinimizerResult res(zero, zero);
  const auto& k = problem.kirchhoff();
  if (k.m1.singular_at_zero() && u.isZero(0.0)) {
    u = perturbation(n, cfg.seed * 2 + 101, cfg.origin_perturbation);
    res.perturbed_origin = true;
  }
  if (k.m2.singular_at_zero() && v.isZero(0.0)) {
    v = perturbation(n, cfg.seed * 2 + 102, cfg.origin_perturbation);
    res.perturbed_origin = true;
  }

  const auto& c = problem.constants();
  res.lower_estimate = coercivity_infimum(problem, c.embedding_constant, c.c1);

  double e = energy(problem, u, v);
  Gradient g = gateaux_gradient(problem, u, v);
  double gnorm = g.sup_norm();

  if (cfg.check_boundedness) {
    const double c3 = 2.0 * c.embedding_constant * c.norm_a;
    const double c4 = 2.0 * c.embedding_constant * c.norm_b;
    const double c2 = c.c1 * c.omega_measure;
    res.radius_u = coercivity_profile_radius(problem, c3, e + c2 - coercivity_profile_min(problem, c4));
    res.radius_v = coercivity_profile_radius(problem, c4, e + c2 - coercivity_profile_min(problem, c3));
  } else {
    res.radius_u = res.radius_v = std::numeric_limits<double>::quiet_NaN();
  }

  double step = cfg.initial_step;
  double accepted = 0.0;
  int backtracks = 0;
  int stall_count = 0;
  double margin = 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int it = 0;; ++it) {
    TraceEntry entry{it,     e,      gnorm,
                     accepted, backtracks, margin,
                     ekeland_certificate(e, gnorm, res.lower_estimate), nan, nan};
    if (cfg.check_boundedness) {
      entry.norm_u = gagliardo_norm(problem.disc(), u);
      entry.norm_v = gagliardo_norm(problem.disc(), v);
      res.max_norm_u = std::max(res.max_norm_u, entry.norm_u);
      res.max_norm_v = std::max(res.max_norm_v, entry.norm_v);
      const double slack = 1e-9;
      if (entry.norm_u > res.radius_u * (1.0 + slack) + slack ||
          entry.norm_v > res.radius_v * (1.0 + slack) + slack) {
        res.bounded = false;
      }
    }
    res.trace.push_back(entry);
    res.iterations = it;

    if (gnorm <= cfg.gradient_tolerance) {
      res.termination = Termination::kConverged;
      break;
    }
    if (stall_count >= kStallWindow) {
      res.termination = Termination::kEnergyStall;
      break;
    }
    if (it >= cfg.max_iterations) {
      res.termination = Termination::kMaxIterations;
      break;
    }

    const double g2 = g.g_u.squaredNorm() + g.g_v.squaredNorm();
    double alpha = step;
    double trial_e = 0.0;
    Eigen::VectorXd un;
    Eigen::VectorXd vn;
    backtracks = 0;
    for (;;) {
      un = u - alpha * g.g_u;
      vn = v - alpha * g.g_v;
      if (try_energy(problem, un, vn, trial_e) && trial_e <= e - cfg.armijo * alpha * g2 && trial_e < e) break;
      if (backtracks == cfg.max_backtracks) {
        throw LineSearchStall(
            fmt::format("line search failed to decrease the energy after {} backtracks at iteration {}",
                        cfg.max_backtracks, it),
            stall_state(it, e, gnorm, alpha, backtracks));
      }
      alpha *= cfg.backtrack;
      ++backtracks;
    }

    Gradient gn;
    try {
      gn = gateaux_gradient(problem, un, vn);
    } catch (const DomainError& err) {
      throw LineSearchStall(fmt::format("iterate {} reached a singular Kirchhoff origin: {}", it + 1, err.what()),
                            stall_state(it, e, gnorm, alpha, backtracks));
    }

    // Barzilai-Borwein step from the latest displacement.
    const double ss = (un - u).squaredNorm() + (vn - v).squaredNorm();
    const double sy = (un - u).dot(gn.g_u - g.g_u) + (vn - v).dot(gn.g_v - g.g_v);
    step = sy > 0.0 ? std::clamp(ss / sy, kMinStep, kMaxStep) : std::min(2.0 * alpha, kMaxStep);

    margin = (e - trial_e) - cfg.armijo * alpha * g2;
    stall_count = (e - trial_e) < cfg.stall_tolerance * std::max(1.0, std::abs(e)) ? stall_count + 1 : 0;
    u = std::move(un);
    v = std::move(vn);
    e = trial_e;
    g = std::move(gn);
    gnorm = g.sup_norm();
    accepted = alpha;
  }

  res.u = DiscreteField::from_dofs(problem.domain_ptr(), u);
  res.v = DiscreteField::from_dofs(problem.domain_ptr(), v);
  res.energy = e;
  res.grad_norm = gnorm;
  res.certificate = ekeland_certificate(e, gnorm, res.lower_estimate);
  res.residual_norm = assemble_weak_residual(problem, res.u, res.v).sup_norm();
  return res;
}

std::vector<RayPoint> coercivity_ray_scan(const EnergyProblem& problem, const DiscreteField& u_hat,
                                          const DiscreteField& v_hat, const std::vector<double>& scales) {
  if (u_hat.is_zero() && v_hat.is_zero()) throw PreconditionError("ray direction must be nonzero");
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(scales[k] > 0.0) || !std::isfinite(scales[k]) || (k > 0 && !(scales[k] > scales[k - 1]))) {
      throw PreconditionError("ray scales must be positive and strictly increasing");
    }
  }
  const auto& c = problem.constants();
  std::vector<RayPoint> out;
  out.reserve(scales.size());
  for (double t : scales) {
    const auto b = coercivity_lower_bound(problem, u_hat.scaled(t), v_hat.scaled(t), c.embedding_constant, c.c1);
    out.push_back({t, b.energy, b.bound});
  }
  return out;
}

}  // namespace kirchfrac

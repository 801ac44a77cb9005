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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/exponent_fields.hpp"
#include "kirchfrac/function_spaces.hpp"
#include "kirchfrac/quadrature.hpp"

namespace kirchfrac {

/// Kirchhoff coefficient M : (0, inf) -> (0, inf), possibly singular at 0.
class KirchhoffFunction {
 public:
  using Scalar = std::function<double(double)>;

  static KirchhoffFunction constant(double value);
  /// coefficient * t^(order - 1); singular at 0 when order < 1.
  static KirchhoffFunction power(double coefficient, double order);
  /// base + coefficient * t^(order - 1).
  static KirchhoffFunction power_plus(double base, double coefficient, double order);
  static KirchhoffFunction affine(double base, double slope);
  /// Piecewise-linear interpolation of (t, value) pairs, constant beyond the
  /// table. Antiderivatives go through quadrature.
  static KirchhoffFunction tabulated(std::vector<double> t, std::vector<double> values);
  static KirchhoffFunction custom(Scalar value, Scalar antiderivative, bool singular_at_zero,
                                  std::string name);

  double operator()(double t) const { return value_(t); }
  bool singular_at_zero() const { return singular_; }
  bool has_closed_antiderivative() const { return static_cast<bool>(antiderivative_); }
  /// Closed-form integral of M over [0, t]; requires has_closed_antiderivative().
  double closed_antiderivative(double t) const { return antiderivative_(t); }
  const std::string& name() const { return name_; }

 private:
  KirchhoffFunction(Scalar value, Scalar antiderivative, bool singular, std::string name);

  Scalar value_;
  Scalar antiderivative_;
  bool singular_ = false;
  std::string name_;
};

/// M_1, M_2 and the lower-bound parameters of the growth condition
/// M_i(t) > m t^(gamma - 1).
struct KirchhoffSpec {
  KirchhoffFunction m1;
  KirchhoffFunction m2;
  double m = 1.0;
  double gamma = 1.0;

  const KirchhoffFunction& get(int which) const;
};

/// Integral of M over [0, t] by geometrically graded Gauss quadrature toward
/// 0. Throws DomainError when the improper integral diverges.
double integrate_kirchhoff(const KirchhoffFunction& fn, double t);

/// M~(t): the closed form when available, otherwise integrate_kirchhoff.
double kirchhoff_antiderivative(const KirchhoffFunction& fn, double t);
double kirchhoff_antiderivative(const KirchhoffSpec& spec, int which, double t);

struct MConditionReport {
  bool passed = true;
  /// min over samples and both functions of M_i(t) / (m t^(gamma - 1)).
  double min_ratio = 0.0;
  double worst_t = 0.0;
  int worst_which = 1;

  nlohmann::json to_json() const;
};

MConditionReport check_M_condition(const KirchhoffSpec& spec, std::span<const double> t_samples);

/// Geometric sample of (0, t_max].
std::vector<double> geometric_samples(double t_min, double t_max, int count);

/// Potential H with its partial derivatives f = dH/du, g = dH/dv and period K
/// along the diagonal direction: H(u, v) = H(u + K, v + K).
class PotentialSpec {
 public:
  using Map2 = std::function<double(double, double)>;

  PotentialSpec(Map2 h, Map2 f, Map2 g, double period, std::string name);

  static PotentialSpec zero();
  static PotentialSpec constant(double value);
  /// alpha sin(2 pi u / K) cos(2 pi v / K).
  static PotentialSpec sincos(double alpha, double period);

  double H(double u, double v) const { return h_(u, v); }
  double f(double u, double v) const { return f_(u, v); }
  double g(double u, double v) const { return g_(u, v); }
  double period() const { return period_; }
  const std::string& name() const { return name_; }
  bool is_zero() const { return zero_; }

  /// max |H| over a (grid + 1)^2 lattice of the period cell [0, K]^2.
  double sup_bound(int grid = 400) const;

 private:
  Map2 h_;
  Map2 f_;
  Map2 g_;
  double period_;
  std::string name_;
  bool zero_ = false;
};

struct PotentialReport {
  bool passed = true;
  double derivative_error = 0.0;   ///< worst central-difference mismatch for f, g
  double periodicity_error = 0.0;  ///< worst |H(u + K, v + K) - H(u, v)|
  double sup_bound = 0.0;          ///< c_1

  nlohmann::json to_json() const;
};

/// Finite-difference and periodicity checks on `samples` random points.
PotentialReport check_potential(const PotentialSpec& pot, int samples, std::uint64_t seed);

/// Right-hand sides a, b of the system.
struct SourceSpec {
  ScalarMap a;
  ScalarMap b;
  std::string a_name = "zero";
  std::string b_name = "zero";
  bool a_zero = true;
  bool b_zero = true;

  static SourceSpec zero();
};

ScalarMap zero_source();
ScalarMap constant_source(double value);
/// value on the box [lo, hi], zero elsewhere.
ScalarMap indicator_source(int dim, const Point& lo, const Point& hi, double value);
/// Multilinear interpolation of values at every node of the grid of B.
ScalarMap nodal_source(DomainPtr dom, std::vector<double> nodal);

struct ProblemOptions {
  QuadratureOptions quadrature = QuadratureOptions::defaults_for(1);
  int validation_samples = 9;
  int potential_grid = 400;
  int potential_samples = 1000;
  /// Embedding constant of X_0 into L^{p(x,x)}; estimated from a random
  /// ensemble when unset and some source is nonzero.
  std::optional<double> embedding_constant;
  int embedding_samples = 64;
  /// Factor applied to the sampled embedding constant.
  double embedding_safety = 1.25;
  /// Samples of (0, kirchhoff_t_max] for the growth condition on M.
  int kirchhoff_samples = 200;
  double kirchhoff_t_max = 1e4;
  std::uint64_t seed = 1;
};

/// The constants entering the coercivity chain.
struct CoercivityConstants {
  double embedding_constant = 0.0;  ///< C-hat
  double c1 = 0.0;                  ///< sup |H|
  double norm_a = 0.0;              ///< ||a||_{q(.)}
  double norm_b = 0.0;              ///< ||b||_{q(.)}
  double p_min = 0.0;
  double p_max = 0.0;
  double omega_measure = 0.0;
};

/// Full validation of a problem definition.
struct ProblemReport {
  ValidationReport exponents;
  MConditionReport kirchhoff;
  /// m > 0 and gamma > 1/p-; margin min(m, gamma - 1/p-).
  bool kirchhoff_parameters = true;
  double kirchhoff_parameter_margin = 0.0;
  PotentialReport potential;
  /// q = conjugate of p(x,x); 1 < q < p*_s at every quadrature point.
  bool sources_subcritical = true;
  double sources_min_margin = 0.0;
  bool sources_finite = true;

  /// Exponent, Kirchhoff and potential checks plus finiteness of the source
  /// norms. Subcriticality of q is reported but does not fail the problem.
  bool passed() const;
  nlohmann::json to_json() const;
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, nlohmann::json report)
      : Error(what), report_(std::move(report)) {}
  const nlohmann::json& report() const { return report_; }

 private:
  nlohmann::json report_;
};

/// Everything that defines the energy functional on a discretized domain.
class EnergyProblem {
 public:
  /// Validates every component and throws ValidationError on failure.
  EnergyProblem(DomainSpec dom, ExponentField fields, KirchhoffSpec kirchhoff,
                PotentialSpec potential, SourceSpec sources, ProblemOptions opts = {});

  const Discretization& disc() const { return *disc_; }
  std::shared_ptr<const Discretization> disc_ptr() const { return disc_; }
  const DomainSpec& domain() const { return disc_->domain(); }
  const DomainPtr& domain_ptr() const { return disc_->domain_ptr(); }
  const ExponentField& exponents() const { return disc_->exponents(); }
  const KirchhoffSpec& kirchhoff() const { return kirchhoff_; }
  const PotentialSpec& potential() const { return potential_; }
  const SourceSpec& sources() const { return sources_; }
  const ProblemOptions& options() const { return opts_; }
  const ProblemReport& report() const { return report_; }
  const CoercivityConstants& constants() const { return constants_; }
  int num_dofs() const { return disc_->num_dofs(); }

  /// a, b at the points of the domain rule.
  const std::vector<double>& a_values() const { return a_values_; }
  const std::vector<double>& b_values() const { return b_values_; }
  /// Conjugate of p(x, x).
  ScalarMap conjugate_map() const;

  /// Runs every check without constructing a problem.
  static ProblemReport validate(const Discretization& disc, const KirchhoffSpec& kirchhoff,
                                const PotentialSpec& potential, const SourceSpec& sources,
                                const ProblemOptions& opts);

 private:
  std::shared_ptr<const Discretization> disc_;
  KirchhoffSpec kirchhoff_;
  PotentialSpec potential_;
  SourceSpec sources_;
  ProblemOptions opts_;
  ProblemReport report_;
  CoercivityConstants constants_;
  std::vector<double> a_values_;
  std::vector<double> b_values_;
};

struct EnergyTerms {
  double delta_u = 0.0;
  double delta_v = 0.0;
  double kirchhoff_u = 0.0;  ///< M~_1(delta(u))
  double kirchhoff_v = 0.0;  ///< M~_2(delta(v))
  double potential = 0.0;    ///< integral of H(u, v)
  double source_u = 0.0;     ///< integral of a u
  double source_v = 0.0;     ///< integral of b v
  double total = 0.0;
};

/// I(u, v) = M~_1(delta(u)) + M~_2(delta(v)) - int H(u, v) - int a u - int b v.
EnergyTerms energy_terms(const EnergyProblem& problem, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v);
double energy(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double energy(const EnergyProblem& problem, const DiscreteField& u, const DiscreteField& v);

struct Gradient {
  Eigen::VectorXd g_u;
  Eigen::VectorXd g_v;

  double sup_norm() const;
};

/// Nodal Gateaux derivative of I. Throws DomainError at a singular Kirchhoff
/// origin (delta = 0 with M singular at 0).
Gradient gateaux_gradient(const EnergyProblem& problem, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v);
Gradient gateaux_gradient(const EnergyProblem& problem, const DiscreteField& u,
                          const DiscreteField& v);

/// phi(r) = A min(r^{gamma p-}, r^{gamma p+}) - c r with A = m / (gamma (p+)^gamma).
double coercivity_profile(const EnergyProblem& problem, double r, double c);
/// Global minimum of coercivity_profile over r >= 0.
double coercivity_profile_min(const EnergyProblem& problem, double c);
/// sup{r >= 0 : coercivity_profile(r, c) <= level}; 0 when the set is empty.
double coercivity_profile_radius(const EnergyProblem& problem, double c, double level);

struct CoercivityBound {
  double energy = 0.0;
  double bound = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
};

/// The lower-bound chain for I at (u, v): phi(||u||, c3) + phi(||v||, c4) - c2
/// with c3 = 2 C ||a||, c4 = 2 C ||b||, c2 = c1 |Omega|.
CoercivityBound coercivity_lower_bound(const EnergyProblem& problem, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v, double embedding_constant,
                                       double c1);
CoercivityBound coercivity_lower_bound(const EnergyProblem& problem, const DiscreteField& u,
                                       const DiscreteField& v, double embedding_constant,
                                       double c1);

/// Same chain evaluated at given norms.
double coercivity_bound_at(const EnergyProblem& problem, double norm_u, double norm_v,
                           double embedding_constant, double c1);

/// Global minimum of the chain over all norms, a lower bound for inf I.
double coercivity_infimum(const EnergyProblem& problem, double embedding_constant, double c1);

}  // namespace kirchfrac

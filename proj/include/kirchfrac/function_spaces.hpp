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

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "kirchfrac/domain.hpp"
#include "kirchfrac/quadrature.hpp"

namespace kirchfrac {

/// Nodal values of a continuous piecewise (multi)linear function on the grid
/// of B that vanishes at every node that is not interior to Omega, i.e. an
/// element of the discrete X_0.
class DiscreteField {
 public:
  /// Throws PreconditionError if a value is not finite or a node outside the
  /// interior of Omega carries a nonzero value.
  DiscreteField(DomainPtr dom, std::vector<double> nodal);

  static DiscreteField zero(DomainPtr dom);
  static DiscreteField from_dofs(DomainPtr dom, const Eigen::VectorXd& dofs);
  /// Nodal interpolant of f, with non-interior nodes set to zero.
  static DiscreteField interpolate(DomainPtr dom, const ScalarMap& f);

  const DomainSpec& domain() const { return *dom_; }
  const DomainPtr& domain_ptr() const { return dom_; }
  const std::vector<double>& nodal() const { return values_; }
  Eigen::VectorXd dofs() const;

  /// Point evaluation; zero outside B.
  double operator()(const Point& x) const;

  bool is_zero() const;
  double sup_norm() const;

  DiscreteField scaled(double factor) const;
  friend DiscreteField operator+(const DiscreteField& a, const DiscreteField& b);
  friend DiscreteField operator-(const DiscreteField& a, const DiscreteField& b);

 private:
  DomainPtr dom_;
  std::vector<double> values_;
};

enum class Regime { kBelow, kAt, kAbove };

/// Position of a value relative to 1, with |value - 1| <= tol counted as "at".
Regime regime_of(double value, double tol = 1e-9);
std::string to_string(Regime r);

/// Smallest lambda > 0 with samples.evaluate(lambda) <= 1; zero for empty
/// samples. Brackets by doubling/halving from 1 and refines with TOMS 748 on
/// log(lambda) to 1e-13 relative.
double luxemburg_root(const ModularSamples& samples);

/// Domain-rule samples of |values|^{p} for the Lebesgue modular.
ModularSamples lebesgue_samples(const Discretization& disc, const std::vector<double>& values,
                                const ScalarMap& p);

/// Quadrature of the integral of |u|^{p(x)} over Omega.
double lebesgue_modular(const Discretization& disc, const DiscreteField& u, const ScalarMap& p);
double lebesgue_modular(const Discretization& disc, const ScalarMap& f, const ScalarMap& p);

/// Luxemburg norm inf{lambda > 0 : integral |u / lambda|^{p(x)} <= 1}.
double luxemburg_norm(const Discretization& disc, const DiscreteField& u, const ScalarMap& p);
double luxemburg_norm(const Discretization& disc, const ScalarMap& f, const ScalarMap& p);

struct HolderPairing {
  double lhs = 0.0;        ///< |integral u v|
  double rhs = 0.0;        ///< 2 ||u||_p ||v||_q
  double rhs_sharp = 0.0;  ///< (1/p- + 1/q-) ||u||_p ||v||_q
};

/// Both sides of the variable-exponent Hoelder inequality. Throws
/// PreconditionError when p and q are not conjugate within 1e-9 at some
/// quadrature point.
HolderPairing holder_pairing(const Discretization& disc, const DiscreteField& u,
                             const DiscreteField& v, const ScalarMap& p, const ScalarMap& q);
HolderPairing holder_pairing(const Discretization& disc, const std::vector<double>& u_values,
                             const std::vector<double>& v_values, const ScalarMap& p,
                             const ScalarMap& q);

/// rho(u): the double integral of |u(x) - u(y)|^{p(x,y)} / |x - y|^{N + p s}
/// over B x B.
double fractional_modular(const Discretization& disc, const DiscreteField& u);

/// delta(u): the same integral weighted by 1 / p(x, y).
double weighted_modular_delta(const Discretization& disc, const DiscreteField& u);

/// Norm of X_0: inf{lambda > 0 : rho(u / lambda) < 1}.
double gagliardo_norm(const Discretization& disc, const DiscreteField& u);
double gagliardo_norm(const Discretization& disc, const Eigen::VectorXd& dofs);

/// ||u||_{q(.)} / ||u||_{X_0}. Requires q < p*_s at every quadrature point of
/// Omega and a nonzero u.
double embedding_ratio(const Discretization& disc, const DiscreteField& u, const ScalarMap& q);

/// Upper bound for the part of rho(u) coming from pairs outside B x B (one
/// point in Omega, the other beyond the truncation box).
double truncation_tail_bound(const Discretization& disc, const DiscreteField& u);

struct ModularReport {
  double modular = 0.0;
  double norm = 0.0;
  Regime regime = Regime::kBelow;
  /// |rho - rho_coarse| against a rule one order lower everywhere.
  double quad_error_estimate = 0.0;
  double tail_bound = 0.0;
  bool accuracy_warning = false;
};

ModularReport fractional_modular_report(const Discretization& disc, const DiscreteField& u,
                                        double tolerance = 1e-3);

/// JSON record {quantity, value, grid_h, quad_error_estimate}.
nlohmann::json norm_record(const std::string& quantity, double value, double grid_h,
                           double quad_error_estimate);

}  // namespace kirchfrac

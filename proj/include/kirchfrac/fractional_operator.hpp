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

#include <cstddef>

#include <Eigen/Core>

#include "kirchfrac/function_spaces.hpp"
#include "kirchfrac/kirchhoff_energy.hpp"
#include "kirchfrac/quadrature.hpp"

namespace kirchfrac {

/// A(u)_i = double integral of |du|^{p-2} du (phi_i(x) - phi_i(y)) |x-y|^{-N-ps}
/// for every interior basis function, with the modulars of the same sweep.
struct WeakFormAssembly {
  Eigen::VectorXd pairing;
  double modular = 0.0;
  double weighted = 0.0;
  std::size_t quadrature_points = 0;
};

WeakFormAssembly assemble_operator(const Discretization& disc, const Eigen::VectorXd& u);
WeakFormAssembly assemble_operator(const Discretization& disc, const DiscreteField& u);

/// The weak-form pairing of u against phi. weak_pairing(u, u) is the
/// fractional modular of u.
double weak_pairing(const Discretization& disc, const DiscreteField& u, const DiscreteField& phi);

struct WeakResidual {
  Eigen::VectorXd r_u;
  Eigen::VectorXd r_v;
  double delta_u = 0.0;
  double delta_v = 0.0;
  /// Set when delta = 0 and the Kirchhoff function is singular at 0; the
  /// Kirchhoff part of that row is then its limit, 0.
  bool singular_u = false;
  bool singular_v = false;

  double sup_norm() const;
};

/// r_u = M_1(delta(u)) A(u) - load(f(u, v) + a), r_v likewise with M_2, g, b.
WeakResidual assemble_weak_residual(const EnergyProblem& problem, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v);
WeakResidual assemble_weak_residual(const EnergyProblem& problem, const DiscreteField& u,
                                    const DiscreteField& v);

struct PointwiseOptions {
  /// Directions on the unit circle (N = 2).
  int angular_panels = 64;
  int angular_points = 4;
  /// Gauss points per ray segment between grid lines.
  int radial_points = 6;
};

/// Principal-value evaluation of the operator at the grid node x, truncated
/// to B. The ball of radius pv_radius around x is excluded and replaced by the
/// contribution of the local linear part of u with p and s frozen at (x, x);
/// that correction is dropped when p (1 - s) <= 1, where it diverges for a
/// kinked u. Throws PreconditionError if x is not a node of the closure of
/// Omega or pv_radius is not in [h, truncation gap).
double apply_pointwise(const Discretization& disc, const DiscreteField& u, const Point& x,
                       double pv_radius, const PointwiseOptions& opts = {});

}  // namespace kirchfrac

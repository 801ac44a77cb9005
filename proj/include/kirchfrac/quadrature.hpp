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
#include <vector>

#include <Eigen/Core>

#include "kirchfrac/domain.hpp"
#include "kirchfrac/exponent_fields.hpp"

namespace kirchfrac {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

struct QuadratureOptions {
  /// Gauss points per axis and cell for well-separated cell pairs.
  int far_points = 4;
  /// Gauss points per graded sub-interval (and per axis on touching pairs).
  int near_points = 4;
  /// Gauss points per axis for the overlap integral of touching pairs.
  int inner_points = 4;
  /// Levels of geometric subdivision toward the diagonal.
  int levels = 4;
  /// Gauss points per axis and cell for integrals over Omega.
  int domain_points = 4;

  static QuadratureOptions defaults_for(int dim);
  QuadratureOptions coarsened() const;
};

/// Flattened quadrature of the double integral over B x B.
///
/// Point q carries the weight c_q = w_q |x_q - y_q|^{-N - p_q s_q} (with the
/// factor 2 of the unordered cell pair folded in), the exponent p_q, and a
/// stencil giving u(x_q) - u(y_q) = sum_e coef[q, e] * U[dof[q, e]] for the
/// vector U of interior nodal values. Unused stencil slots hold dof 0 and
/// coefficient 0.
struct PairRule {
  int stride = 0;
  std::vector<double> weight;
  std::vector<double> exponent;
  std::vector<int> dof;
  std::vector<double> coef;

  std::size_t size() const { return weight.size(); }
};

/// Tensor Gauss quadrature over the cells of Omega with Q1 stencils.
struct DomainRule {
  int stride = 0;
  std::vector<Point> points;
  std::vector<double> weight;
  std::vector<int> dof;
  std::vector<double> coef;

  std::size_t size() const { return weight.size(); }
};

/// Separable modular samples: modular(lambda) = sum_q weight_q (magnitude_q /
/// lambda)^{exponent_q}. Zero magnitudes are dropped.
struct ModularSamples {
  std::vector<double> weight;
  std::vector<double> magnitude;
  std::vector<double> exponent;

  bool empty() const { return weight.empty(); }
  double evaluate(double lambda) const;
};

/// Discretization of X_0 on a DomainSpec: continuous piecewise (multi)linear
/// fields that vanish outside Omega, plus the quadrature rules for every
/// integral the solver needs.
///
/// Cell pairs that are neither identical nor touching use tensor Gauss rules.
/// Identical and touching pairs are integrated in the relative coordinate
/// z = x - y, split so that z = 0 sits at a corner of every piece; pieces with
/// the singular corner get a Duffy split (N = 2) and a geometrically graded
/// rule whose innermost interval uses a power substitution.
class Discretization {
 public:
  Discretization(DomainSpec dom, ExponentField fields, QuadratureOptions opts = {});

  const DomainSpec& domain() const { return *dom_; }
  const DomainPtr& domain_ptr() const { return dom_; }
  const ExponentField& exponents() const { return fields_; }
  const QuadratureOptions& options() const { return opts_; }
  const PairRule& pair_rule() const { return pairs_; }
  const DomainRule& domain_rule() const { return cells_; }
  int num_dofs() const { return dom_->num_dofs(); }
  int dim() const { return dom_->dim(); }
  /// Extremes of the exponents actually used by the rules (and a node sample).
  const ExponentBounds& bounds() const { return bounds_; }
  int grading_power() const { return grading_power_; }

  struct Sweep {
    double modular = 0.0;   ///< rho(u) = sum c |du|^p
    double weighted = 0.0;  ///< delta(u) = sum c |du|^p / p
  };

  /// One pass over the pair rule. When `pairing` is non-null it receives
  /// A(u)_i = sum_q c_q |du_q|^{p_q - 2} du_q dphi_i(q).
  Sweep sweep(const Eigen::VectorXd& u, Eigen::VectorXd* pairing = nullptr) const;

  /// sum_q c_q |du_q|^{p_q - 2} du_q dphi_q.
  double pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& phi) const;

  /// Pair-rule samples of u for Luxemburg root finding.
  ModularSamples pair_samples(const Eigen::VectorXd& u) const;

  /// u(x_q) at every point of the domain rule.
  std::vector<double> domain_values(const Eigen::VectorXd& u) const;
  /// Load vector L_i = sum_q w_q values_q phi_i(x_q).
  Eigen::VectorXd domain_load(const std::vector<double>& values) const;
  /// sum_q w_q values_q.
  double domain_integral(const std::vector<double>& values) const;

 private:
  void build_pair_rule();
  void build_domain_rule();
  int block_count() const;

  DomainPtr dom_;
  ExponentField fields_;
  QuadratureOptions opts_;
  PairRule pairs_;
  DomainRule cells_;
  ExponentBounds bounds_;
  int grading_power_ = 1;
};

}  // namespace kirchfrac

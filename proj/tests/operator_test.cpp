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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/fractional_operator.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/problems.hpp"

using namespace kirchfrac;

namespace {

double psi(double d, double p) { return d == 0.0 ? 0.0 : std::pow(std::abs(d), p - 2.0) * d; }

// Truncated operator at x over {y in [L, R] : |y - x| > r}, by composite
// Gauss on a fine uniform partition refined at the kinks of u. With r = 0
// the principal value is taken through a graded rule in the radius.
double pv_oracle(const oracle::Hat1d& u, double L, double R, double x, double r, double p, double s) {
  const oracle::Gauss g(8);
  const double ux = u(x);
  auto side = [&](double t) {
    double total = 0.0;
    if (x + t <= R) total += psi(ux - u(x + t), p);
    if (x - t >= L) total += psi(ux - u(x - t), p);
    return total * std::pow(t, -1.0 - p * s);
  };
  const double reach = std::max(x - L, R - x);
  const double start = r > 0.0 ? r : u.h;
  std::vector<double> br{start, reach, x - L, R - x};
  const int fine = 4000;
  for (int k = 1; k < fine; ++k) br.push_back(start + (reach - start) * k / fine);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const double node = u.lo + k * u.h;
    if (std::abs(node - x) > start) br.push_back(std::abs(node - x));
  }
  br.erase(std::remove_if(br.begin(), br.end(), [&](double t) { return t < start || t > reach; }), br.end());
  double total = oracle::piecewise_integral(side, br, g);
  if (r == 0.0) total += oracle::graded_integral(side, u.h, oracle::Gauss(12));
  return total;
}

}  // namespace

TEST(WeakForm, ZeroFieldGivesZeroVector) {
  auto pr = problems::variable();
  const auto asm0 = assemble_operator(pr->disc(), DiscreteField::zero(pr->domain_ptr()));
  EXPECT_EQ(asm0.pairing.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(asm0.modular, 0.0);
  EXPECT_GT(asm0.quadrature_points, 0u);
}

TEST(WeakForm, PairingWithSelfIsModular) {
  auto pr = problems::variable();
  gen::Source src(4);
  for (int t = 0; t < 20; ++t) {
    const auto u = gen::field(pr->domain_ptr(), src);
    const auto a = assemble_operator(pr->disc(), u);
    const double rho = fractional_modular(pr->disc(), u);
    EXPECT_NEAR(a.pairing.dot(u.dofs()), rho, 1e-12 * rho);
    EXPECT_NEAR(weak_pairing(pr->disc(), u, u), rho, 1e-12 * rho);
    EXPECT_GE(a.pairing.dot(u.dofs()), 0.0);
    EXPECT_EQ(weak_pairing(pr->disc(), DiscreteField::zero(pr->domain_ptr()), u), 0.0);
  }
}

TEST(WeakForm, OperatorIsOdd) {
  auto pr = problems::variable();
  gen::Source src(5);
  for (int t = 0; t < 10; ++t) {
    const auto u = gen::field(pr->domain_ptr(), src);
    const auto plus = assemble_operator(pr->disc(), u).pairing;
    const auto minus = assemble_operator(pr->disc(), u.scaled(-1.0)).pairing;
    EXPECT_LE((plus + minus).lpNorm<Eigen::Infinity>(), 1e-12 * plus.lpNorm<Eigen::Infinity>());
  }
}

TEST(WeakForm, QuadraticKernelIsSymmetric) {
  auto pr = problems::convex(12);
  gen::Source src(6);
  for (int t = 0; t < 10; ++t) {
    const auto u = gen::field(pr->domain_ptr(), src);
    const auto phi = gen::field(pr->domain_ptr(), src);
    const double a = weak_pairing(pr->disc(), u, phi);
    const double b = weak_pairing(pr->disc(), phi, u);
    EXPECT_NEAR(a, b, 1e-12 * std::max(std::abs(a), 1e-3));
  }
}

TEST(WeakForm, PairingIsLinearInTestField) {
  auto pr = problems::variable();
  gen::Source src(8);
  const auto u = gen::field(pr->domain_ptr(), src);
  const auto phi = gen::field(pr->domain_ptr(), src);
  const auto chi = gen::field(pr->domain_ptr(), src);
  const double lhs = weak_pairing(pr->disc(), u, phi.scaled(2.0) + chi);
  const double rhs = 2.0 * weak_pairing(pr->disc(), u, phi) + weak_pairing(pr->disc(), u, chi);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
}

TEST(WeakResidual, HomogeneousProblemAtOrigin) {
  auto pr = problems::convex();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  const auto res = assemble_weak_residual(*pr, z, z);
  EXPECT_EQ(res.sup_norm(), 0.0);
  EXPECT_FALSE(res.singular_u);
}

TEST(WeakResidual, SingularKirchhoffIsFlaggedAtOrigin) {
  auto pr = problems::singular();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  const auto res = assemble_weak_residual(*pr, z, z);
  EXPECT_TRUE(res.singular_u);
  EXPECT_TRUE(res.singular_v);
  // The Kirchhoff part vanishes in the limit; what is left is the load.
  const auto load = pr->disc().domain_load(pr->a_values());
  EXPECT_LE((res.r_u + load).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(WeakResidual, MonotoneAlongScaling) {
  auto pr = problems::variable();
  gen::Source src(12);
  for (int t = 0; t < 5; ++t) {
    const auto u = gen::field(pr->domain_ptr(), src, -0.5, 0.5);
    const auto zero = DiscreteField::zero(pr->domain_ptr());
    double prev = -1e300;
    for (double c : {0.5, 1.0, 2.0, 4.0}) {
      const auto res = assemble_weak_residual(*pr, u.scaled(c), zero);
      const double pairing = res.r_u.dot(u.dofs());
      EXPECT_GT(pairing, prev) << "c=" << c;
      prev = pairing;
    }
  }
}

// The operator is nonlocal: a nonnegative field pulls down every entry whose
// basis function lies outside its support.
TEST(WeakResidual, NonlocalEntriesOutsideSupport) {
  auto pr = problems::convex(16);
  const auto& dom = pr->domain();
  std::vector<double> nodal(dom.num_nodes(), 0.0);
  nodal[dom.dof_to_node(2)] = 1.0;
  const DiscreteField u(pr->domain_ptr(), nodal);
  const auto a = assemble_operator(pr->disc(), u).pairing;
  EXPECT_GT(a[2], 0.0);
  double prev = -1e300;
  for (int i = 4; i < pr->num_dofs(); ++i) {
    EXPECT_LT(a[i], 0.0) << i;
    // Weaker further away.
    EXPECT_GT(a[i], prev) << i;
    prev = a[i];
  }
}

TEST(Pointwise, ZeroField) {
  auto pr = problems::convex(16);
  const auto z = DiscreteField::zero(pr->domain_ptr());
  EXPECT_EQ(apply_pointwise(pr->disc(), z, {0.5, 0.0}, 1.0 / 16), 0.0);
}

TEST(Pointwise, Preconditions) {
  auto pr = problems::convex(16);
  const auto z = DiscreteField::zero(pr->domain_ptr());
  EXPECT_THROW(apply_pointwise(pr->disc(), z, {0.5, 0.0}, 0.5 / 16), PreconditionError);
  EXPECT_THROW(apply_pointwise(pr->disc(), z, {0.51, 0.0}, 1.0 / 16), PreconditionError);
  EXPECT_THROW(apply_pointwise(pr->disc(), z, {-0.25, 0.0}, 1.0 / 16), PreconditionError);
  EXPECT_THROW(apply_pointwise(pr->disc(), z, {0.5, 0.0}, 0.6), PreconditionError);
  EXPECT_NO_THROW(apply_pointwise(pr->disc(), z, {0.0, 0.0}, 1.0 / 16));
}

TEST(Pointwise, OddFieldCancels) {
  Discretization disc(problems::interval(16), ExponentField::constant(2.5, 0.3));
  const auto u = DiscreteField::interpolate(disc.domain_ptr(),
                                            [](const Point& x) { return std::sin(2.0 * std::numbers::pi * (x[0] - 0.5)); });
  const auto even = DiscreteField::interpolate(disc.domain_ptr(),
                                               [](const Point& x) { return std::cos(std::numbers::pi * (x[0] - 0.5)); });
  const double scale = std::abs(apply_pointwise(disc, even, {0.5, 0.0}, 1.0 / 16));
  EXPECT_GT(scale, 1.0);
  EXPECT_LT(std::abs(apply_pointwise(disc, u, {0.5, 0.0}, 1.0 / 16)), 1e-12 * scale);
}

TEST(Pointwise, HatAtPeakMatchesFineOracle) {
  const double p = 2.0;
  const double s = 0.5;
  Discretization disc(problems::interval(16), ExponentField::constant(p, s));
  const auto u = DiscreteField::interpolate(disc.domain_ptr(),
                                            [](const Point& x) { return std::max(0.0, 1.0 - 4.0 * std::abs(x[0] - 0.5)); });
  const auto& dom = disc.domain();
  oracle::Hat1d hat{dom.box_lo()[0], dom.h(0), u.nodal()};
  const double r = dom.h(0);
  // p (1 - s) = 1: the kink makes the principal value diverge, so both sides
  // exclude the same ball.
  const double ref = pv_oracle(hat, dom.box_lo()[0], dom.box_hi()[0], 0.5, r, p, s);
  EXPECT_NEAR(apply_pointwise(disc, u, {0.5, 0.0}, r), ref, 0.05 * std::abs(ref));
}

TEST(Pointwise, CorrectionRecoversPrincipalValue) {
  const double p = 3.0;
  const double s = 0.3;
  Discretization disc(problems::interval(16), ExponentField::constant(p, s));
  const auto u = DiscreteField::interpolate(disc.domain_ptr(), [](const Point& x) { return std::sin(3.0 * x[0]) * (1.0 - x[0]); });
  const auto& dom = disc.domain();
  oracle::Hat1d hat{dom.box_lo()[0], dom.h(0), u.nodal()};
  for (double x : {0.25, 0.5, 0.8125}) {
    const double ref = pv_oracle(hat, dom.box_lo()[0], dom.box_hi()[0], x, 0.0, p, s);
    // Exact local structure inside one cell; only approximately linear beyond.
    EXPECT_NEAR(apply_pointwise(disc, u, {x, 0.0}, dom.h(0)), ref, 1e-4 * std::abs(ref)) << x;
    EXPECT_NEAR(apply_pointwise(disc, u, {x, 0.0}, 2.0 * dom.h(0)), ref, 5e-2 * std::abs(ref)) << x;
  }
}

TEST(Pointwise, PlanarEvenFieldIsPositiveAtPeak) {
  Discretization disc(problems::square(4), ExponentField::constant(2.0, 0.4), QuadratureOptions::defaults_for(2));
  const auto u = DiscreteField::interpolate(disc.domain_ptr(), [](const Point& x) {
    return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  });
  const double v = apply_pointwise(disc, u, {0.5, 0.5}, 0.25);
  EXPECT_GT(v, 0.0);
  EXPECT_TRUE(std::isfinite(v));
}

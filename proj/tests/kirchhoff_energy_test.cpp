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
#include "kirchfrac/kirchhoff_energy.hpp"
#include "support/fd_oracle.hpp"
#include "support/generators.hpp"
#include "support/problems.hpp"

using namespace kirchfrac;

TEST(Antiderivative, PowerRule) {
  const double m = 0.7;
  const double gamma = 0.6;
  const auto fn = KirchhoffFunction::power(m, gamma);
  EXPECT_TRUE(fn.singular_at_zero());
  for (double t : {1e-6, 0.3, 1.0, 17.0}) {
    const double exact = m / gamma * std::pow(t, gamma);
    EXPECT_NEAR(kirchhoff_antiderivative(fn, t), exact, 1e-14 * exact);
    EXPECT_NEAR(integrate_kirchhoff(fn, t), exact, 1e-10 * exact);
  }
  EXPECT_EQ(kirchhoff_antiderivative(fn, 0.0), 0.0);
}

TEST(Antiderivative, ConstantIsIdentity) {
  const auto fn = KirchhoffFunction::constant(1.0);
  for (double t : {0.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(kirchhoff_antiderivative(fn, t), t);
}

TEST(Antiderivative, QuadratureMatchesClosedForm) {
  const auto fn = KirchhoffFunction::custom([](double t) { return 1.0 + t; }, nullptr, false, "1+t");
  EXPECT_FALSE(fn.has_closed_antiderivative());
  for (double t : {1e-3, 0.5, 2.0, 40.0}) {
    EXPECT_NEAR(kirchhoff_antiderivative(fn, t), t + 0.5 * t * t, 1e-10 * (t + 0.5 * t * t));
  }
}

TEST(Antiderivative, SingularButIntegrable) {
  const auto fn = KirchhoffFunction::custom([](double t) { return 3.0 + 1.0 / std::sqrt(t); }, nullptr, true, "");
  for (double t : {1e-4, 1.0, 9.0}) {
    EXPECT_NEAR(integrate_kirchhoff(fn, t), 3.0 * t + 2.0 * std::sqrt(t), 1e-10 * (3.0 * t + 2.0 * std::sqrt(t)));
  }
}

TEST(Antiderivative, DivergentIntegralRaises) {
  const auto fn = KirchhoffFunction::custom([](double t) { return 1.0 / t; }, nullptr, true, "1/t");
  EXPECT_THROW(integrate_kirchhoff(fn, 1.0), DomainError);
  EXPECT_THROW(kirchhoff_antiderivative(KirchhoffFunction::power(1.0, -0.5), 1.0), DomainError);
  EXPECT_THROW(kirchhoff_antiderivative(fn, -1.0), PreconditionError);
}

TEST(Antiderivative, TabulatedIsPiecewiseLinear) {
  const auto fn = KirchhoffFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(fn(0.5), 2.0);
  EXPECT_DOUBLE_EQ(fn(5.0), 2.0);
  EXPECT_NEAR(kirchhoff_antiderivative(fn, 2.0), 2.0 + 2.5, 1e-12);
  EXPECT_NEAR(kirchhoff_antiderivative(fn, 3.0), 4.5 + 2.0, 1e-12);
  EXPECT_THROW(KirchhoffFunction::tabulated({0.0, 0.0}, {1.0, 1.0}), PreconditionError);
}

TEST(Antiderivative, Monotone) {
  gen::Source src(3);
  const KirchhoffFunction fns[] = {KirchhoffFunction::power_plus(1.0, 1.0, 0.7), KirchhoffFunction::affine(0.5, 2.0),
                                   KirchhoffFunction::tabulated({0.0, 1.0, 4.0}, {0.2, 5.0, 0.1})};
  for (const auto& fn : fns) {
    for (int k = 0; k < 200; ++k) {
      double a = src.log_uniform(-6.0, 2.0);
      double b = src.log_uniform(-6.0, 2.0);
      if (a > b) std::swap(a, b);
      EXPECT_LE(kirchhoff_antiderivative(fn, a), kirchhoff_antiderivative(fn, b));
    }
  }
}

TEST(MCondition, Examples) {
  const double m = 0.8;
  const double gamma = 0.7;
  const auto t = geometric_samples(1e-6, 1e3, 100);
  KirchhoffSpec twice{KirchhoffFunction::power(2.0 * m, gamma), KirchhoffFunction::power(2.0 * m, gamma), m, gamma};
  const auto ok = check_M_condition(twice, t);
  EXPECT_TRUE(ok.passed);
  EXPECT_NEAR(ok.min_ratio, 2.0, 1e-14);

  KirchhoffSpec equal{KirchhoffFunction::power(m, gamma), KirchhoffFunction::power(2.0 * m, gamma), m, gamma};
  const auto bad = check_M_condition(equal, t);
  EXPECT_FALSE(bad.passed);
  EXPECT_EQ(bad.worst_which, 1);
  EXPECT_DOUBLE_EQ(bad.min_ratio, 1.0);

  auto bumped = KirchhoffFunction::custom(
      [m, gamma](double x) { return m * std::pow(x, gamma - 1.0) + std::exp(-x); }, nullptr, true, "");
  KirchhoffSpec plus{bumped, bumped, m, gamma};
  for (double T : {1.0, 10.0, 30.0}) {
    const auto rep = check_M_condition(plus, geometric_samples(1e-6, T, 200));
    EXPECT_TRUE(rep.passed) << T;
    EXPECT_GT(rep.min_ratio, 1.0);
  }
}

TEST(Potential, SincosPassesChecks) {
  const auto pot = PotentialSpec::sincos(0.7, 1.5);
  const auto rep = check_potential(pot, 500, 1);
  EXPECT_TRUE(rep.passed) << rep.to_json().dump();
  EXPECT_NEAR(rep.sup_bound, 0.7, 1e-12);
  gen::Source src(2);
  const double c1 = pot.sup_bound(400);
  for (int k = 0; k < 10000; ++k) {
    const double u = src.uniform(-50.0, 50.0);
    const double v = src.uniform(-50.0, 50.0);
    ASSERT_LE(std::abs(pot.H(u, v)), c1 + 1e-12);
    ASSERT_NEAR(pot.H(u + 1.5, v + 1.5), pot.H(u, v), 1e-10);
  }
}

TEST(Potential, WrongDerivativeFails) {
  PotentialSpec bad([](double u, double v) { return std::sin(u) * std::cos(v); },
                    [](double u, double v) { return std::cos(u) * std::cos(v) * 1.01; },
                    [](double u, double v) { return -std::sin(u) * std::sin(v); }, 2.0 * std::numbers::pi, "bad");
  EXPECT_FALSE(check_potential(bad, 200, 1).passed);
  PotentialSpec aperiodic([](double u, double) { return std::sin(u); }, [](double u, double) { return std::cos(u); },
                          [](double, double) { return 0.0; }, 1.0, "aperiodic");
  const auto rep = check_potential(aperiodic, 200, 1);
  EXPECT_FALSE(rep.passed);
  EXPECT_GT(rep.periodicity_error, 1e-3);
}

TEST(EnergyProblem, InvalidKirchhoffIsRejected) {
  KirchhoffSpec k{KirchhoffFunction::constant(0.5), KirchhoffFunction::constant(1.0), 0.5, 1.0};
  try {
    EnergyProblem pr(problems::interval(8), ExponentField::constant(2.0, 0.4), k, PotentialSpec::zero(),
                     SourceSpec::zero(), problems::options(1));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_FALSE(e.report()["kirchhoff"]["passed"].get<bool>());
    EXPECT_TRUE(e.report()["exponents"]["passed"].get<bool>());
  }
}

TEST(EnergyProblem, GammaBelowInverseExponentIsRejected) {
  KirchhoffSpec k{KirchhoffFunction::power(2.0, 0.4), KirchhoffFunction::power(2.0, 0.4), 1.0, 0.4};
  EXPECT_THROW(EnergyProblem(problems::interval(8), ExponentField::constant(2.0, 0.4), k, PotentialSpec::zero(),
                             SourceSpec::zero(), problems::options(1)),
               ValidationError);
}

TEST(EnergyProblem, SupercriticalExponentsAreRejected) {
  EXPECT_THROW(EnergyProblem(problems::interval(8), ExponentField::constant(2.0, 0.5), problems::unit_kirchhoff(),
                             PotentialSpec::zero(), SourceSpec::zero(), problems::options(1)),
               ValidationError);
}

TEST(EnergyProblem, ConstantsAreCollected) {
  auto pr = problems::periodic();
  const auto& c = pr->constants();
  EXPECT_NEAR(c.c1, 0.5, 1e-12);
  EXPECT_GT(c.norm_a, 0.0);
  EXPECT_EQ(c.norm_b, 0.0);
  EXPECT_GT(c.embedding_constant, 0.0);
  EXPECT_DOUBLE_EQ(c.omega_measure, 1.0);
  // ||0.3||_q over a unit interval is 0.3 for any q.
  EXPECT_NEAR(c.norm_a, 0.3, 1e-12);
}

TEST(Energy, VanishesAtOriginOfHomogeneousProblem) {
  auto pr = problems::convex();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  EXPECT_EQ(energy(*pr, z, z), 0.0);
}

TEST(Energy, ConstantPotential) {
  EnergyProblem pr(problems::interval(8), ExponentField::constant(2.0, 0.4), problems::unit_kirchhoff(),
                   PotentialSpec::constant(1.7), SourceSpec::zero(), problems::options(1));
  const auto z = DiscreteField::zero(pr.domain_ptr());
  EXPECT_NEAR(energy(pr, z, z), -1.7, 1e-14);
}

TEST(Energy, QuadraticCaseIsHalfModular) {
  EnergyProblem pr(problems::square(4), ExponentField::constant(2.0, 0.5), problems::unit_kirchhoff(),
                   PotentialSpec::zero(), SourceSpec::zero(), problems::options(2));
  gen::Source src(9);
  for (int k = 0; k < 5; ++k) {
    const auto u = gen::field(pr.domain_ptr(), src);
    const double rho = fractional_modular(pr.disc(), u);
    EXPECT_NEAR(energy(pr, u, DiscreteField::zero(pr.domain_ptr())), rho / 2.0, 1e-10 * rho);
  }
}

TEST(Energy, TermsAddUp) {
  auto pr = problems::planar();
  gen::Source src(10);
  const auto u = gen::field(pr->domain_ptr(), src);
  const auto v = gen::field(pr->domain_ptr(), src);
  const auto t = energy_terms(*pr, u.dofs(), v.dofs());
  EXPECT_NEAR(t.kirchhoff_u, t.delta_u + 0.25 * t.delta_u * t.delta_u, 1e-12 * t.kirchhoff_u);
  EXPECT_NEAR(t.total, t.kirchhoff_u + t.kirchhoff_v - t.potential - t.source_u - t.source_v, 1e-12);
  EXPECT_NEAR(t.source_u, 0.5 * pr->disc().domain_integral(pr->disc().domain_values(u.dofs())), 1e-12);
}

TEST(Gradient, ZeroAtOriginOfHomogeneousProblem) {
  auto pr = problems::convex();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  EXPECT_EQ(gateaux_gradient(*pr, z, z).sup_norm(), 0.0);
}

TEST(Gradient, LinearInQuadraticCase) {
  auto pr = problems::convex();
  gen::Source src(11);
  const auto u = gen::field(pr->domain_ptr(), src);
  const auto z = DiscreteField::zero(pr->domain_ptr());
  const auto g1 = gateaux_gradient(*pr, u, z).g_u;
  const auto g2 = gateaux_gradient(*pr, u.scaled(2.0), z).g_u;
  EXPECT_LE((g2 - 2.0 * g1).lpNorm<Eigen::Infinity>(), 1e-9 * g1.lpNorm<Eigen::Infinity>());
}

TEST(Gradient, SingularOriginRaises) {
  auto pr = problems::singular();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  gen::Source src(12);
  const auto u = gen::field(pr->domain_ptr(), src);
  EXPECT_THROW(gateaux_gradient(*pr, z, z), DomainError);
  EXPECT_THROW(gateaux_gradient(*pr, u, z), DomainError);
  EXPECT_NO_THROW(gateaux_gradient(*pr, u, u));
}

TEST(Gradient, EqualsWeakResidual) {
  auto pr = problems::periodic();
  gen::Source src(13);
  const auto u = gen::field(pr->domain_ptr(), src);
  const auto v = gen::field(pr->domain_ptr(), src);
  const auto g = gateaux_gradient(*pr, u, v);
  const auto r = assemble_weak_residual(*pr, u, v);
  EXPECT_TRUE(g.g_u == r.r_u);
  EXPECT_TRUE(g.g_v == r.r_v);
}

// Central differences converge at second order toward every component.
class GradientFd : public ::testing::TestWithParam<int> {};

TEST_P(GradientFd, SecondOrderAgreement) {
  std::unique_ptr<EnergyProblem> pr;
  switch (GetParam()) {
    case 0:
      pr = problems::variable(8);
      break;
    case 1:
      pr = problems::singular(8);
      break;
    case 2:
      pr = problems::periodic(8);
      break;
    default:
      // Below p = 2 the pair terms lose their second derivative wherever a
      // directional slope vanishes, which spoils the fit at eps = 1e-3.
      pr = problems::planar(4, 2.35);
  }
  gen::Source src(20 + GetParam());
  const auto u = gen::nodal(pr->domain_ptr(), src, 0.8).dofs();
  const auto v = gen::nodal(pr->domain_ptr(), src, 0.8).dofs();
  const auto g = gateaux_gradient(*pr, u, v);
  oracle::EnergyDifference fd(*pr, u, v);
  const std::vector<double> eps{1e-3, 1e-4, 1e-5};
  for (int row = 0; row < 2; ++row) {
    const Eigen::VectorXd& gr = row == 0 ? g.g_u : g.g_v;
    for (int i = 0; i < pr->num_dofs(); ++i) {
      std::vector<double> err;
      for (double e : eps) err.push_back(static_cast<double>(std::abs(fd.derivative(row, i, e) - gr[i])));
      EXPECT_LT(err.back(), 1e-8 * std::max(1.0, std::abs(gr[i])));
      const double slope = oracle::loglog_slope(eps, err);
      EXPECT_NEAR(slope, 2.0, 0.2) << "row " << row << " dof " << i << " errors " << err[0] << " " << err[1]
                                   << " " << err[2];
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, GradientFd, ::testing::Range(0, 4));

TEST(Coercivity, OriginCollapsesTheChain) {
  auto pr = problems::periodic();
  const auto z = DiscreteField::zero(pr->domain_ptr());
  const auto& c = pr->constants();
  const auto b = coercivity_lower_bound(*pr, z, z, c.embedding_constant, c.c1);
  EXPECT_NEAR(b.bound, -c.c1 * c.omega_measure, 1e-14);
  EXPECT_GE(b.energy, b.bound);
}

TEST(Coercivity, EnergyDominatesBoundOnRandomFields) {
  for (int which = 0; which < 3; ++which) {
    auto pr = which == 0 ? problems::periodic() : which == 1 ? problems::variable() : problems::singular();
    const auto& c = pr->constants();
    gen::Source src(30 + which);
    for (int k = 0; k < 40; ++k) {
      const auto u = gen::field(pr->domain_ptr(), src, -2.0, 1.5);
      const auto v = gen::field(pr->domain_ptr(), src, -2.0, 1.5);
      const auto b = coercivity_lower_bound(*pr, u, v, c.embedding_constant, c.c1);
      EXPECT_GE(b.energy, b.bound) << "preset " << which;
    }
    EXPECT_LE(coercivity_infimum(*pr, c.embedding_constant, c.c1),
              coercivity_bound_at(*pr, 0.0, 0.0, c.embedding_constant, c.c1));
  }
}

TEST(Coercivity, RayBoundDiverges) {
  auto pr = problems::periodic();
  const auto& c = pr->constants();
  gen::Source src(40);
  const auto u = gen::field(pr->domain_ptr(), src);
  const auto dir = u.scaled(1.0 / gagliardo_norm(pr->disc(), u));
  const auto z = DiscreteField::zero(pr->domain_ptr());
  double prev_bound = -1e300;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto b = coercivity_lower_bound(*pr, dir.scaled(t), z, c.embedding_constant, c.c1);
    EXPECT_GE(b.energy, b.bound);
    EXPECT_GT(b.bound, prev_bound);
    prev_bound = b.bound;
  }
  EXPECT_GT(prev_bound, 10.0);
}

TEST(Coercivity, MiddleLineOfChain) {
  // a = b = 0, H = 0: energy >= m / (gamma (p+)^gamma) (rho(u)^gamma + rho(v)^gamma).
  KirchhoffSpec k{KirchhoffFunction::power_plus(1.0, 1.0, 0.8), KirchhoffFunction::power_plus(0.5, 2.0, 0.8), 1.0, 0.8};
  ExponentField f(sinusoidal_exponent(2.0, 0.3, 1.7, 1), constant_exponent(0.35));
  EnergyProblem pr(problems::interval(12), f, k, PotentialSpec::zero(), SourceSpec::zero(), problems::options(1));
  const double pmax = pr.constants().p_max;
  const double scale = 1.0 / (0.8 * std::pow(pmax, 0.8));
  gen::Source src(41);
  for (int t = 0; t < 30; ++t) {
    const auto u = gen::field(pr.domain_ptr(), src);
    const auto v = gen::field(pr.domain_ptr(), src);
    const double rhs = scale * (std::pow(fractional_modular(pr.disc(), u), 0.8) + std::pow(fractional_modular(pr.disc(), v), 0.8));
    EXPECT_GE(energy(pr, u, v), rhs);
  }
}

TEST(Coercivity, ProfileRadiusBoundsSublevelSet) {
  auto pr = problems::periodic();
  const double c = 0.7;
  for (double level : {-0.01, 0.0, 0.5, 3.0, 50.0}) {
    const double r = coercivity_profile_radius(*pr, c, level);
    for (double x = r * 1.001 + 1e-9; x < r * 10 + 10; x *= 1.3) EXPECT_GT(coercivity_profile(*pr, x, c), level);
  }
  EXPECT_NEAR(coercivity_profile_min(*pr, 0.0), 0.0, 0.0);
  EXPECT_LT(coercivity_profile_min(*pr, c), 0.0);
}

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

#include "kirchfrac/kirchhoff_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/fractional_operator.hpp"
#include "kirchfrac/random_fields.hpp"

namespace kirchfrac {

KirchhoffFunction::KirchhoffFunction(Scalar value, Scalar antiderivative, bool singular,
                                     std::string name)
    : value_(std::move(value)),
      antiderivative_(std::move(antiderivative)),
      singular_(singular),
      name_(std::move(name)) {}

KirchhoffFunction KirchhoffFunction::constant(double value) {
  if (!std::isfinite(value)) throw PreconditionError("Kirchhoff constant is not finite");
  return KirchhoffFunction([value](double) { return value; },
                           [value](double t) { return value * t; }, false,
                           fmt::format("constant({})", value));
}

KirchhoffFunction KirchhoffFunction::power(double coefficient, double order) {
  if (!std::isfinite(coefficient) || !std::isfinite(order)) {
    throw PreconditionError("Kirchhoff power parameters are not finite");
  }
  Scalar anti;
  if (order > 0.0) anti = [coefficient, order](double t) { return coefficient * std::pow(t, order) / order; };
  return KirchhoffFunction(
      [coefficient, order](double t) { return coefficient * std::pow(t, order - 1.0); }, anti,
      order < 1.0, fmt::format("power({}, {})", coefficient, order));
}

KirchhoffFunction KirchhoffFunction::power_plus(double base, double coefficient, double order) {
  if (!std::isfinite(base) || !std::isfinite(coefficient) || !std::isfinite(order)) {
    throw PreconditionError("Kirchhoff power parameters are not finite");
  }
  Scalar anti;
  if (order > 0.0) {
    anti = [base, coefficient, order](double t) {
      return base * t + coefficient * std::pow(t, order) / order;
    };
  }
  return KirchhoffFunction(
      [base, coefficient, order](double t) { return base + coefficient * std::pow(t, order - 1.0); },
      anti, order < 1.0 && coefficient != 0.0,
      fmt::format("power_plus({}, {}, {})", base, coefficient, order));
}

KirchhoffFunction KirchhoffFunction::affine(double base, double slope) {
  if (!std::isfinite(base) || !std::isfinite(slope)) {
    throw PreconditionError("Kirchhoff affine parameters are not finite");
  }
  return KirchhoffFunction([base, slope](double t) { return base + slope * t; },
                           [base, slope](double t) { return base * t + 0.5 * slope * t * t; }, false,
                           fmt::format("affine({}, {})", base, slope));
}

KirchhoffFunction KirchhoffFunction::tabulated(std::vector<double> t, std::vector<double> values) {
  if (t.size() < 2 || t.size() != values.size()) {
    throw PreconditionError("tabulated Kirchhoff function needs at least two (t, M) pairs");
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(values[k])) {
      throw PreconditionError("tabulated Kirchhoff function has a non-finite entry");
    }
    if (k > 0 && !(t[k] > t[k - 1])) {
      throw PreconditionError("tabulated Kirchhoff abscissae must increase strictly");
    }
  }
  const std::size_t n = t.size();
  auto fn = [t, values](double x) {
    if (x <= t.front()) return values.front();
    if (x >= t.back()) return values.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - w) * values[k - 1] + w * values[k];
  };
  // Trapezoid sums are exact for the piecewise linear interpolant.
  std::vector<double> cumulative(n, 0.0);
  cumulative[0] = std::max(t[0], 0.0) * values[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double lo = std::max(t[k - 1], 0.0);
    const double hi = std::max(t[k], 0.0);
    if (hi <= lo) continue;
    const double w = t[k] - t[k - 1];
    const double mlo = values[k - 1] + (values[k] - values[k - 1]) * (lo - t[k - 1]) / w;
    cumulative[k] = cumulative[k - 1] + 0.5 * (hi - lo) * (mlo + values[k]);
  }
  auto anti = [fn, t = std::move(t), cumulative = std::move(cumulative)](double x) {
    if (x <= t.front()) return x * fn(0.0);
    if (x >= t.back()) return cumulative.back() + (x - t.back()) * fn(x);
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double lo = std::max(t[k - 1], 0.0);
    return cumulative[k - 1] + 0.5 * (x - lo) * (fn(lo) + fn(x));
  };
  return KirchhoffFunction(std::move(fn), std::move(anti), false, fmt::format("tabulated({} points)", n));
}

KirchhoffFunction KirchhoffFunction::custom(Scalar value, Scalar antiderivative,
                                            bool singular_at_zero, std::string name) {
  if (!value) throw PreconditionError("custom Kirchhoff function needs a value map");
  return KirchhoffFunction(std::move(value), std::move(antiderivative), singular_at_zero,
                           std::move(name));
}

const KirchhoffFunction& KirchhoffSpec::get(int which) const {
  if (which == 1) return m1;
  if (which == 2) return m2;
  throw PreconditionError("Kirchhoff index must be 1 or 2");
}

double integrate_kirchhoff(const KirchhoffFunction& fn, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("antiderivative needs t >= 0");
  if (t == 0.0) return 0.0;
  static const GaussRule rule = gauss_legendre(16);
  constexpr int kMaxLevels = 64;
  double total = 0.0;
  double prev = 0.0;
  double ratio = 0.0;
  for (int j = 0; j < kMaxLevels; ++j) {
    const double b = std::ldexp(t, -j);
    const double a = 0.5 * b;
    double piece = 0.0;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double x = a + (b - a) * rule.nodes[g];
      const double m = fn(x);
      if (!std::isfinite(m)) {
        throw EvaluationError(fmt::format("Kirchhoff function {} is not finite at t = {}", fn.name(), x));
      }
      piece += rule.weights[g] * m;
    }
    piece *= b - a;
    total += piece;
    if (j > 0 && prev != 0.0) ratio = piece / prev;
    if (j >= 4 && std::abs(piece) <= 1e-17 * std::abs(total)) return total;
    prev = piece;
  }
  // The last levels decay geometrically for an integrable power singularity.
  if (!(std::abs(ratio) < 1.0 - 1e-3)) {
    throw DomainError(fmt::format("integral of {} diverges at t = 0", fn.name()));
  }
  return total + prev * ratio / (1.0 - ratio);
}

double kirchhoff_antiderivative(const KirchhoffFunction& fn, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("antiderivative needs t >= 0");
  if (t == 0.0) return 0.0;
  if (fn.has_closed_antiderivative()) return fn.closed_antiderivative(t);
  return integrate_kirchhoff(fn, t);
}

double kirchhoff_antiderivative(const KirchhoffSpec& spec, int which, double t) {
  return kirchhoff_antiderivative(spec.get(which), t);
}

nlohmann::json MConditionReport::to_json() const {
  return {{"passed", passed}, {"min_ratio", min_ratio}, {"worst_t", worst_t}, {"worst_which", worst_which}};
}

MConditionReport check_M_condition(const KirchhoffSpec& spec, std::span<const double> t_samples) {
  MConditionReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int which = 1; which <= 2; ++which) {
    const auto& fn = spec.get(which);
    for (double t : t_samples) {
      if (!(t > 0.0)) throw PreconditionError("growth condition samples must be positive");
      const double ratio = fn(t) / (spec.m * std::pow(t, spec.gamma - 1.0));
      // NaN counts as a violation.
      if (!(ratio >= rep.min_ratio)) {
        rep.min_ratio = ratio;
        rep.worst_t = t;
        rep.worst_which = which;
      }
    }
  }
  rep.passed = rep.min_ratio > 1.0;
  return rep;
}

std::vector<double> geometric_samples(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || count < 1) {
    throw PreconditionError("geometric samples need 0 < t_min <= t_max and count >= 1");
  }
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    const double w = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
    out[k] = t_min * std::pow(t_max / t_min, w);
  }
  return out;
}

PotentialSpec::PotentialSpec(Map2 h, Map2 f, Map2 g, double period, std::string name)
    : h_(std::move(h)), f_(std::move(f)), g_(std::move(g)), period_(period), name_(std::move(name)) {
  if (!h_ || !f_ || !g_) throw PreconditionError("potential needs H, f and g");
  if (!(period_ > 0.0) || !std::isfinite(period_)) throw PreconditionError("potential period must be positive");
}

PotentialSpec PotentialSpec::zero() {
  auto z = [](double, double) { return 0.0; };
  PotentialSpec pot(z, z, z, 1.0, "zero");
  pot.zero_ = true;
  return pot;
}

PotentialSpec PotentialSpec::constant(double value) {
  auto z = [](double, double) { return 0.0; };
  return PotentialSpec([value](double, double) { return value; }, z, z, 1.0,
                       fmt::format("constant({})", value));
}

PotentialSpec PotentialSpec::sincos(double alpha, double period) {
  const double w = 2.0 * std::numbers::pi / period;
  return PotentialSpec(
      [alpha, w](double u, double v) { return alpha * std::sin(w * u) * std::cos(w * v); },
      [alpha, w](double u, double v) { return alpha * w * std::cos(w * u) * std::cos(w * v); },
      [alpha, w](double u, double v) { return -alpha * w * std::sin(w * u) * std::sin(w * v); },
      period, fmt::format("sincos({}, {})", alpha, period));
}

double PotentialSpec::sup_bound(int grid) const {
  if (zero_) return 0.0;
  if (grid < 1) throw PreconditionError("potential grid needs at least one interval");
  double best = 0.0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double value = h_(period_ * i / grid, period_ * j / grid);
      if (!std::isfinite(value)) throw EvaluationError("potential H is not finite");
      best = std::max(best, std::abs(value));
    }
  }
  return best;
}

nlohmann::json PotentialReport::to_json() const {
  return {{"passed", passed},
          {"derivative_error", derivative_error},
          {"periodicity_error", periodicity_error},
          {"sup_bound", sup_bound}};
}

PotentialReport check_potential(const PotentialSpec& pot, int samples, std::uint64_t seed) {
  PotentialReport rep;
  rep.sup_bound = pot.sup_bound(400);
  if (pot.is_zero()) return rep;
  std::mt19937_64 rng(seed);
  const double k = pot.period();
  const double eps = 1e-5 * std::max(1.0, k);
  bool ok = true;
  for (int n = 0; n < samples; ++n) {
    const double u = -2.0 * k + 4.0 * k * std::generate_canonical<double, 53>(rng);
    const double v = -2.0 * k + 4.0 * k * std::generate_canonical<double, 53>(rng);
    const double h = pot.H(u, v);
    const double f = pot.f(u, v);
    const double g = pot.g(u, v);
    const double fd_f = (pot.H(u + eps, v) - pot.H(u - eps, v)) / (2.0 * eps);
    const double fd_g = (pot.H(u, v + eps) - pot.H(u, v - eps)) / (2.0 * eps);
    const double ef = std::abs(fd_f - f) / std::max({1.0, std::abs(f), std::abs(h)});
    const double eg = std::abs(fd_g - g) / std::max({1.0, std::abs(g), std::abs(h)});
    const double ep = std::abs(pot.H(u + k, v + k) - h) / std::max(1.0, std::abs(h));
    if (!std::isfinite(ef) || !std::isfinite(eg) || !std::isfinite(ep)) ok = false;
    rep.derivative_error = std::max({rep.derivative_error, ef, eg});
    rep.periodicity_error = std::max(rep.periodicity_error, ep);
  }
  rep.passed = ok && rep.derivative_error <= 1e-5 && rep.periodicity_error <= 1e-10;
  return rep;
}

SourceSpec SourceSpec::zero() {
  SourceSpec s;
  s.a = zero_source();
  s.b = zero_source();
  return s;
}

ScalarMap zero_source() {
  return [](const Point&) { return 0.0; };
}

ScalarMap constant_source(double value) {
  return [value](const Point&) { return value; };
}

ScalarMap indicator_source(int dim, const Point& lo, const Point& hi, double value) {
  return [dim, lo, hi, value](const Point& x) {
    for (int a = 0; a < dim; ++a) {
      if (x[a] < lo[a] || x[a] > hi[a]) return 0.0;
    }
    return value;
  };
}

ScalarMap nodal_source(DomainPtr dom, std::vector<double> nodal) {
  if (static_cast<int>(nodal.size()) != dom->num_nodes()) {
    throw PreconditionError("nodal source needs one value per node of B");
  }
  for (double v : nodal) {
    if (!std::isfinite(v)) throw PreconditionError("nodal source has a non-finite value");
  }
  return [dom, nodal = std::move(nodal)](const Point& x) {
    Point local{};
    const int cell = dom->locate(x, local);
    const auto corners = dom->cell_nodes(cell);
    double total = 0.0;
    for (std::size_t c = 0; c < corners.size(); ++c) {
      double w = 1.0;
      for (int a = 0; a < dom->dim(); ++a) w *= ((c >> a) & 1) ? local[a] : 1.0 - local[a];
      total += w * nodal[corners[c]];
    }
    return total;
  };
}

bool ProblemReport::passed() const {
  return exponents.passed() && kirchhoff.passed && kirchhoff_parameters && potential.passed &&
         sources_finite;
}

nlohmann::json ProblemReport::to_json() const {
  return {{"passed", passed()},
          {"exponents", exponents.to_json()},
          {"kirchhoff", kirchhoff.to_json()},
          {"kirchhoff_parameters", {{"passed", kirchhoff_parameters}, {"margin", kirchhoff_parameter_margin}}},
          {"potential", potential.to_json()},
          {"sources",
           {{"finite", sources_finite},
            {"subcritical", sources_subcritical},
            {"min_margin", sources_min_margin}}}};
}

namespace {

std::vector<double> sample_at(const Discretization& disc, const ScalarMap& f, const char* what) {
  const auto& pts = disc.domain_rule().points;
  std::vector<double> out(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) {
    out[q] = f(pts[q]);
    if (!std::isfinite(out[q])) throw EvaluationError(fmt::format("source {} is not finite", what));
  }
  return out;
}

}  // namespace

ProblemReport EnergyProblem::validate(const Discretization& disc, const KirchhoffSpec& kirchhoff,
                                      const PotentialSpec& potential, const SourceSpec& sources,
                                      const ProblemOptions& opts) {
  ProblemReport rep;
  rep.exponents = validate_exponents(disc.exponents(), disc.domain(), opts.validation_samples);
  const auto t = geometric_samples(1e-8, opts.kirchhoff_t_max, opts.kirchhoff_samples);
  rep.kirchhoff = check_M_condition(kirchhoff, t);
  const double p_min = disc.bounds().p_min;
  rep.kirchhoff_parameter_margin = std::min(kirchhoff.m, kirchhoff.gamma - 1.0 / p_min);
  rep.kirchhoff_parameters = rep.kirchhoff_parameter_margin > 0.0;
  rep.potential = check_potential(potential, opts.potential_samples, opts.seed);

  const int dim = disc.dim();
  const auto& fields = disc.exponents();
  rep.sources_min_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : disc.domain_rule().points) {
    const double p = fields.p_bar(x);
    const double sp = fields.s_bar(x) * p;
    const double q = p / (p - 1.0);
    const double crit = dim > sp ? dim * p / (dim - sp) : std::numeric_limits<double>::infinity();
    rep.sources_min_margin = std::min({rep.sources_min_margin, q - 1.0, crit - q});
  }
  rep.sources_subcritical = rep.sources_min_margin > 0.0;

  const ScalarMap q = conjugate_exponent(fields.p_bar_map());
  const double na = luxemburg_norm(disc, sources.a, q);
  const double nb = luxemburg_norm(disc, sources.b, q);
  rep.sources_finite = std::isfinite(na) && std::isfinite(nb);
  return rep;
}

EnergyProblem::EnergyProblem(DomainSpec dom, ExponentField fields, KirchhoffSpec kirchhoff,
                             PotentialSpec potential, SourceSpec sources, ProblemOptions opts)
    : disc_(std::make_shared<const Discretization>(std::move(dom), std::move(fields), opts.quadrature)),
      kirchhoff_(std::move(kirchhoff)),
      potential_(std::move(potential)),
      sources_(std::move(sources)),
      opts_(std::move(opts)) {
  if (!sources_.a || !sources_.b) throw PreconditionError("sources a and b must be set");
  report_ = validate(*disc_, kirchhoff_, potential_, sources_, opts_);
  if (!report_.passed()) throw ValidationError("problem validation failed", report_.to_json());

  a_values_ = sample_at(*disc_, sources_.a, "a");
  b_values_ = sample_at(*disc_, sources_.b, "b");

  const ScalarMap q = conjugate_map();
  constants_.norm_a = sources_.a_zero ? 0.0 : luxemburg_norm(*disc_, sources_.a, q);
  constants_.norm_b = sources_.b_zero ? 0.0 : luxemburg_norm(*disc_, sources_.b, q);
  constants_.c1 = potential_.sup_bound(opts_.potential_grid);
  constants_.p_min = disc_->bounds().p_min;
  constants_.p_max = disc_->bounds().p_max;
  constants_.omega_measure = disc_->domain().omega_measure();
  if (opts_.embedding_constant) {
    constants_.embedding_constant = *opts_.embedding_constant;
  } else if (!sources_.a_zero || !sources_.b_zero) {
    constants_.embedding_constant =
        opts_.embedding_safety * sample_embedding_constant(*disc_, disc_->exponents().p_bar_map(),
                                                           opts_.embedding_samples, opts_.seed);
  }
}

ScalarMap EnergyProblem::conjugate_map() const {
  return conjugate_exponent(disc_->exponents().p_bar_map());
}

EnergyTerms energy_terms(const EnergyProblem& problem, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v) {
  const auto& disc = problem.disc();
  EnergyTerms out;
  out.delta_u = disc.sweep(u).weighted;
  out.delta_v = disc.sweep(v).weighted;
  out.kirchhoff_u = kirchhoff_antiderivative(problem.kirchhoff(), 1, out.delta_u);
  out.kirchhoff_v = kirchhoff_antiderivative(problem.kirchhoff(), 2, out.delta_v);

  const auto uq = disc.domain_values(u);
  const auto vq = disc.domain_values(v);
  const auto& pot = problem.potential();
  if (!pot.is_zero()) {
    std::vector<double> h(uq.size());
    for (std::size_t q = 0; q < uq.size(); ++q) h[q] = pot.H(uq[q], vq[q]);
    out.potential = disc.domain_integral(h);
  }
  std::vector<double> au(uq.size());
  std::vector<double> bv(uq.size());
  for (std::size_t q = 0; q < uq.size(); ++q) {
    au[q] = problem.a_values()[q] * uq[q];
    bv[q] = problem.b_values()[q] * vq[q];
  }
  out.source_u = disc.domain_integral(au);
  out.source_v = disc.domain_integral(bv);
  out.total = out.kirchhoff_u + out.kirchhoff_v - out.potential - out.source_u - out.source_v;
  return out;
}

double energy(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return energy_terms(problem, u, v).total;
}

double energy(const EnergyProblem& problem, const DiscreteField& u, const DiscreteField& v) {
  return energy(problem, u.dofs(), v.dofs());
}

double Gradient::sup_norm() const {
  double m = 0.0;
  if (g_u.size() > 0) m = std::max(m, g_u.lpNorm<Eigen::Infinity>());
  if (g_v.size() > 0) m = std::max(m, g_v.lpNorm<Eigen::Infinity>());
  return m;
}

Gradient gateaux_gradient(const EnergyProblem& problem, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v) {
  auto res = assemble_weak_residual(problem, u, v);
  if (res.singular_u || res.singular_v) {
    throw DomainError(
        "gradient requested at delta = 0 with a Kirchhoff function singular at 0; "
        "perturb the start away from the origin");
  }
  return Gradient{std::move(res.r_u), std::move(res.r_v)};
}

Gradient gateaux_gradient(const EnergyProblem& problem, const DiscreteField& u,
                          const DiscreteField& v) {
  return gateaux_gradient(problem, u.dofs(), v.dofs());
}

namespace {

struct Profile {
  double scale;  // m / (gamma (p+)^gamma)
  double lo;     // gamma p-
  double hi;     // gamma p+
  double c;

  double operator()(double r) const {
    const double g = r <= 1.0 ? std::pow(r, hi) : std::pow(r, lo);
    return scale * g - c * r;
  }
};

Profile make_profile(const EnergyProblem& problem, double c) {
  const auto& k = problem.kirchhoff();
  const auto& cs = problem.constants();
  return Profile{k.m / (k.gamma * std::pow(cs.p_max, k.gamma)), k.gamma * cs.p_min, k.gamma * cs.p_max, c};
}

// Stationary point of scale r^e - c r, for e > 1 and c > 0.
double stationary(const Profile& f, double e) { return std::pow(f.c / (f.scale * e), 1.0 / (e - 1.0)); }

}  // namespace

double coercivity_profile(const EnergyProblem& problem, double r, double c) {
  return make_profile(problem, c)(r);
}

double coercivity_profile_min(const EnergyProblem& problem, double c) {
  const Profile f = make_profile(problem, c);
  if (c <= 0.0) return 0.0;
  double best = std::min(f(0.0), f(1.0));
  best = std::min(best, f(std::clamp(stationary(f, f.hi), 0.0, 1.0)));
  best = std::min(best, f(std::max(1.0, stationary(f, f.lo))));
  return best;
}

double coercivity_profile_radius(const EnergyProblem& problem, double c, double level) {
  const Profile f = make_profile(problem, c);
  // f is convex on [0, 1] and on [1, inf) and increasing beyond `tail`.
  const double tail = c > 0.0 ? std::max(1.0, stationary(f, f.lo)) : 1.0;
  auto crossing = [&](double a, double b) {
    // f(a) <= level < f(b) with f increasing on [a, b].
    for (int k = 0; k < 200 && b - a > 1e-14 * b; ++k) {
      const double mid = 0.5 * (a + b);
      (f(mid) <= level ? a : b) = mid;
    }
    return b;
  };
  if (f(tail) <= level) {
    double b = 2.0 * tail;
    while (f(b) <= level) b *= 2.0;
    return crossing(tail, b);
  }
  // Only [0, 1] can hold the sublevel set; f increases on [r1, 1].
  const double r1 = c > 0.0 ? std::clamp(stationary(f, f.hi), 0.0, 1.0) : 0.0;
  if (f(r1) > level) return 0.0;
  if (f(1.0) <= level) return 1.0;
  return crossing(r1, 1.0);
}

double coercivity_bound_at(const EnergyProblem& problem, double norm_u, double norm_v,
                           double embedding_constant, double c1) {
  const auto& cs = problem.constants();
  const double c3 = 2.0 * embedding_constant * cs.norm_a;
  const double c4 = 2.0 * embedding_constant * cs.norm_b;
  const double c2 = c1 * cs.omega_measure;
  return coercivity_profile(problem, norm_u, c3) + coercivity_profile(problem, norm_v, c4) - c2;
}

CoercivityBound coercivity_lower_bound(const EnergyProblem& problem, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v, double embedding_constant,
                                       double c1) {
  CoercivityBound out;
  out.energy = energy(problem, u, v);
  out.norm_u = gagliardo_norm(problem.disc(), u);
  out.norm_v = gagliardo_norm(problem.disc(), v);
  out.bound = coercivity_bound_at(problem, out.norm_u, out.norm_v, embedding_constant, c1);
  return out;
}

CoercivityBound coercivity_lower_bound(const EnergyProblem& problem, const DiscreteField& u,
                                       const DiscreteField& v, double embedding_constant,
                                       double c1) {
  return coercivity_lower_bound(problem, u.dofs(), v.dofs(), embedding_constant, c1);
}

double coercivity_infimum(const EnergyProblem& problem, double embedding_constant, double c1) {
  const auto& cs = problem.constants();
  return coercivity_profile_min(problem, 2.0 * embedding_constant * cs.norm_a) +
         coercivity_profile_min(problem, 2.0 * embedding_constant * cs.norm_b) -
         c1 * cs.omega_measure;
}

}  // namespace kirchfrac

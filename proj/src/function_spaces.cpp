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

#include "kirchfrac/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/exponent_fields.hpp"
#include "kirchfrac/parallel.hpp"

namespace kirchfrac {

DiscreteField::DiscreteField(DomainPtr dom, std::vector<double> nodal)
    : dom_(std::move(dom)), values_(std::move(nodal)) {
  if (!dom_) throw PreconditionError("field needs a domain");
  if (static_cast<int>(values_.size()) != dom_->num_nodes()) {
    throw PreconditionError(
        fmt::format("field has {} nodal values, grid has {}", values_.size(), dom_->num_nodes()));
  }
  for (int n = 0; n < dom_->num_nodes(); ++n) {
    if (!std::isfinite(values_[n])) {
      throw PreconditionError(fmt::format("non-finite nodal value at node {}", n));
    }
    if (!dom_->node_is_interior(n) && values_[n] != 0.0) {
      throw PreconditionError(fmt::format(
          "field must vanish outside Omega; node {} carries {}", n, values_[n]));
    }
  }
}

DiscreteField DiscreteField::zero(DomainPtr dom) {
  const int n = dom->num_nodes();
  return DiscreteField(std::move(dom), std::vector<double>(n, 0.0));
}

DiscreteField DiscreteField::from_dofs(DomainPtr dom, const Eigen::VectorXd& dofs) {
  if (dofs.size() != dom->num_dofs()) throw PreconditionError("dof vector has the wrong size");
  std::vector<double> nodal(dom->num_nodes(), 0.0);
  for (int d = 0; d < dom->num_dofs(); ++d) nodal[dom->dof_to_node(d)] = dofs[d];
  return DiscreteField(std::move(dom), std::move(nodal));
}

DiscreteField DiscreteField::interpolate(DomainPtr dom, const ScalarMap& f) {
  std::vector<double> nodal(dom->num_nodes(), 0.0);
  for (int d = 0; d < dom->num_dofs(); ++d) {
    const int node = dom->dof_to_node(d);
    nodal[node] = f(dom->node_coord(node));
  }
  return DiscreteField(std::move(dom), std::move(nodal));
}

Eigen::VectorXd DiscreteField::dofs() const {
  Eigen::VectorXd out(dom_->num_dofs());
  for (int d = 0; d < dom_->num_dofs(); ++d) out[d] = values_[dom_->dof_to_node(d)];
  return out;
}

double DiscreteField::operator()(const Point& x) const {
  if (!dom_->contains_box(x)) return 0.0;
  Point local{};
  const int cell = dom_->locate(x, local);
  const auto corners = dom_->cell_nodes(cell);
  double v = 0.0;
  for (std::size_t corner = 0; corner < corners.size(); ++corner) {
    double basis = 1.0;
    for (int i = 0; i < dom_->dim(); ++i) {
      basis *= ((corner >> i) & 1) ? local[i] : 1.0 - local[i];
    }
    v += basis * values_[corners[corner]];
  }
  return v;
}

bool DiscreteField::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double DiscreteField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

DiscreteField DiscreteField::scaled(double factor) const {
  std::vector<double> out = values_;
  for (double& v : out) v *= factor;
  return DiscreteField(dom_, std::move(out));
}

DiscreteField operator+(const DiscreteField& a, const DiscreteField& b) {
  if (!a.domain().same_grid(b.domain())) throw PreconditionError("fields live on different grids");
  std::vector<double> out = a.values_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.values_[i];
  return DiscreteField(a.dom_, std::move(out));
}

DiscreteField operator-(const DiscreteField& a, const DiscreteField& b) {
  return a + b.scaled(-1.0);
}

Regime regime_of(double value, double tol) {
  if (std::abs(value - 1.0) <= tol) return Regime::kAt;
  return value < 1.0 ? Regime::kBelow : Regime::kAbove;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kBelow:
      return "below";
    case Regime::kAt:
      return "at";
    case Regime::kAbove:
      return "above";
  }
  return "unknown";
}

namespace {

// log of sum_q w_q (m_q / e^mu)^{p_q}, evaluated as a log-sum-exp.
class LogModular {
 public:
  explicit LogModular(const ModularSamples& s) : exponent_(s.exponent) {
    offset_.reserve(s.weight.size());
    for (std::size_t q = 0; q < s.weight.size(); ++q) {
      offset_.push_back(std::log(s.weight[q]) + s.exponent[q] * std::log(s.magnitude[q]));
    }
  }

  double operator()(double mu) const {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < offset_.size(); ++q) top = std::max(top, offset_[q] - exponent_[q] * mu);
    double acc = 0.0;
    for (std::size_t q = 0; q < offset_.size(); ++q) acc += std::exp(offset_[q] - exponent_[q] * mu - top);
    return top + std::log(acc);
  }

 private:
  std::vector<double> exponent_;
  std::vector<double> offset_;
};

std::vector<double> evaluate_at(const Discretization& disc, const ScalarMap& f) {
  const auto& pts = disc.domain_rule().points;
  std::vector<double> out(pts.size());
  for (std::size_t q = 0; q < pts.size(); ++q) {
    out[q] = f(pts[q]);
    if (!std::isfinite(out[q])) {
      throw EvaluationError(fmt::format("function is not finite at ({}, {})", pts[q][0], pts[q][1]));
    }
  }
  return out;
}

double sample_sum(const ModularSamples& s) {
  std::vector<double> parts;
  const std::size_t block = 4096;
  for (std::size_t start = 0; start < s.weight.size(); start += block) {
    const std::size_t end = std::min(s.weight.size(), start + block);
    double acc = 0.0;
    for (std::size_t q = start; q < end; ++q) acc += s.weight[q] * std::pow(s.magnitude[q], s.exponent[q]);
    parts.push_back(acc);
  }
  return pairwise_sum(std::move(parts));
}

}  // namespace

double luxemburg_root(const ModularSamples& samples) {
  if (samples.empty()) return 0.0;
  const LogModular f(samples);
  // f is strictly decreasing in mu = log(lambda); find its zero.
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = f(0.0);
  if (f_lo == 0.0) return 1.0;
  double f_hi = f_lo;
  double step = std::numbers::ln2;
  int guard = 0;
  if (f_lo > 0.0) {
    hi = step;
    f_hi = f(hi);
    while (f_hi > 0.0) {
      if (++guard > 200) throw StallError("Luxemburg root finder failed to bracket");
      lo = hi;
      f_lo = f_hi;
      step *= 2.0;
      hi += step;
      f_hi = f(hi);
    }
  } else {
    hi = 0.0;
    f_hi = f_lo;
    lo = -step;
    f_lo = f(lo);
    while (f_lo < 0.0) {
      if (++guard > 200) throw StallError("Luxemburg root finder failed to bracket");
      hi = lo;
      f_hi = f_lo;
      step *= 2.0;
      lo -= step;
      f_lo = f(lo);
    }
  }
  if (f_lo == 0.0) return std::exp(lo);
  if (f_hi == 0.0) return std::exp(hi);
  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  if (max_iter >= 200) throw StallError("Luxemburg root finder did not converge");
  return std::exp(0.5 * (a + b));
}

ModularSamples lebesgue_samples(const Discretization& disc, const std::vector<double>& values,
                                const ScalarMap& p) {
  const auto& rule = disc.domain_rule();
  if (values.size() != rule.size()) throw PreconditionError("value count mismatch");
  ModularSamples s;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    if (values[q] == 0.0) continue;
    const double pq = p(rule.points[q]);
    if (!std::isfinite(pq) || pq <= 0.0) {
      throw EvaluationError(fmt::format("exponent {} invalid at ({}, {})", pq, rule.points[q][0],
                                        rule.points[q][1]));
    }
    s.weight.push_back(rule.weight[q]);
    s.magnitude.push_back(std::abs(values[q]));
    s.exponent.push_back(pq);
  }
  return s;
}

double lebesgue_modular(const Discretization& disc, const DiscreteField& u, const ScalarMap& p) {
  return sample_sum(lebesgue_samples(disc, disc.domain_values(u.dofs()), p));
}

double lebesgue_modular(const Discretization& disc, const ScalarMap& f, const ScalarMap& p) {
  return sample_sum(lebesgue_samples(disc, evaluate_at(disc, f), p));
}

double luxemburg_norm(const Discretization& disc, const DiscreteField& u, const ScalarMap& p) {
  return luxemburg_root(lebesgue_samples(disc, disc.domain_values(u.dofs()), p));
}

double luxemburg_norm(const Discretization& disc, const ScalarMap& f, const ScalarMap& p) {
  return luxemburg_root(lebesgue_samples(disc, evaluate_at(disc, f), p));
}

HolderPairing holder_pairing(const Discretization& disc, const std::vector<double>& u_values,
                             const std::vector<double>& v_values, const ScalarMap& p,
                             const ScalarMap& q) {
  const auto& rule = disc.domain_rule();
  double p_min = std::numeric_limits<double>::infinity();
  double q_min = std::numeric_limits<double>::infinity();
  for (const auto& x : rule.points) {
    const double pv = p(x);
    const double qv = q(x);
    if (std::abs(1.0 / pv + 1.0 / qv - 1.0) > 1e-9) {
      throw PreconditionError(
          fmt::format("exponents {} and {} are not conjugate at ({}, {})", pv, qv, x[0], x[1]));
    }
    p_min = std::min(p_min, pv);
    q_min = std::min(q_min, qv);
  }
  std::vector<double> product(u_values.size());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] = u_values[i] * v_values[i];
  HolderPairing out;
  out.lhs = std::abs(disc.domain_integral(product));
  const double nu = luxemburg_root(lebesgue_samples(disc, u_values, p));
  const double nv = luxemburg_root(lebesgue_samples(disc, v_values, q));
  out.rhs = 2.0 * nu * nv;
  out.rhs_sharp = (1.0 / p_min + 1.0 / q_min) * nu * nv;
  return out;
}

HolderPairing holder_pairing(const Discretization& disc, const DiscreteField& u,
                             const DiscreteField& v, const ScalarMap& p, const ScalarMap& q) {
  return holder_pairing(disc, disc.domain_values(u.dofs()), disc.domain_values(v.dofs()), p, q);
}

double fractional_modular(const Discretization& disc, const DiscreteField& u) {
  if (u.is_zero()) return 0.0;
  return disc.sweep(u.dofs()).modular;
}

double weighted_modular_delta(const Discretization& disc, const DiscreteField& u) {
  if (u.is_zero()) return 0.0;
  return disc.sweep(u.dofs()).weighted;
}

double gagliardo_norm(const Discretization& disc, const Eigen::VectorXd& dofs) {
  if (dofs.isZero(0.0)) return 0.0;
  return luxemburg_root(disc.pair_samples(dofs));
}

double gagliardo_norm(const Discretization& disc, const DiscreteField& u) {
  return gagliardo_norm(disc, u.dofs());
}

double embedding_ratio(const Discretization& disc, const DiscreteField& u, const ScalarMap& q) {
  const int dim = disc.dim();
  for (const auto& x : disc.domain_rule().points) {
    const double qv = q(x);
    const double p = disc.exponents().p_bar(x);
    const double s = disc.exponents().s_bar(x);
    const double denom = dim - s * p;
    // N <= s p leaves every finite q subcritical
    if (!(qv > 1.0) || (denom > 0.0 && !(qv < dim * p / denom))) {
      throw PreconditionError(
          fmt::format("q = {} is not subcritical at ({}, {})", qv, x[0], x[1]));
    }
  }
  const double xnorm = gagliardo_norm(disc, u);
  if (!(xnorm > 0.0)) throw PreconditionError("embedding ratio needs a nonzero field");
  return luxemburg_norm(disc, u, q) / xnorm;
}

double truncation_tail_bound(const Discretization& disc, const DiscreteField& u) {
  const ExponentBounds& b = disc.bounds();
  const double gap = disc.domain().truncation_gap();
  const double t_lo = b.p_min * b.s_min;
  const double t_hi = b.p_max * b.s_max;
  const double sphere = disc.dim() == 1 ? 2.0 : 2.0 * std::numbers::pi;
  const double kernel = sphere * (std::pow(gap, -t_lo) / t_lo + std::pow(gap, -t_hi) / t_hi);
  const auto values = disc.domain_values(u.dofs());
  std::vector<double> mass(values.size());
  for (std::size_t q = 0; q < values.size(); ++q) {
    const double a = std::abs(values[q]);
    mass[q] = std::max(std::pow(a, b.p_min), std::pow(a, b.p_max));
  }
  return 2.0 * kernel * disc.domain_integral(mass);
}

ModularReport fractional_modular_report(const Discretization& disc, const DiscreteField& u,
                                        double tolerance) {
  ModularReport r;
  r.modular = fractional_modular(disc, u);
  r.norm = gagliardo_norm(disc, u);
  r.regime = regime_of(r.modular);
  if (!u.is_zero()) {
    const Discretization coarse(disc.domain(), disc.exponents(), disc.options().coarsened());
    r.quad_error_estimate = std::abs(r.modular - coarse.sweep(u.dofs()).modular);
  }
  r.tail_bound = truncation_tail_bound(disc, u);
  r.accuracy_warning = r.quad_error_estimate > tolerance * std::max(1.0, r.modular);
  return r;
}

nlohmann::json norm_record(const std::string& quantity, double value, double grid_h,
                           double quad_error_estimate) {
  return {{"quantity", quantity},
          {"value", value},
          {"grid_h", grid_h},
          {"quad_error_estimate", quad_error_estimate}};
}

}  // namespace kirchfrac

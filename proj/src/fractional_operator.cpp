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

#include "kirchfrac/fractional_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "kirchfrac/errors.hpp"

namespace kirchfrac {

WeakFormAssembly assemble_operator(const Discretization& disc, const Eigen::VectorXd& u) {
  WeakFormAssembly out;
  const auto sw = disc.sweep(u, &out.pairing);
  out.modular = sw.modular;
  out.weighted = sw.weighted;
  out.quadrature_points = disc.pair_rule().size();
  return out;
}

WeakFormAssembly assemble_operator(const Discretization& disc, const DiscreteField& u) {
  return assemble_operator(disc, u.dofs());
}

double weak_pairing(const Discretization& disc, const DiscreteField& u, const DiscreteField& phi) {
  return disc.pairing(u.dofs(), phi.dofs());
}

double WeakResidual::sup_norm() const {
  double m = 0.0;
  if (r_u.size() > 0) m = std::max(m, r_u.lpNorm<Eigen::Infinity>());
  if (r_v.size() > 0) m = std::max(m, r_v.lpNorm<Eigen::Infinity>());
  return m;
}

namespace {

struct Row {
  Eigen::VectorXd kirchhoff;
  double delta = 0.0;
  bool singular = false;
};

Row kirchhoff_row(const Discretization& disc, const KirchhoffFunction& fn, const Eigen::VectorXd& u) {
  Row row;
  const auto asm_u = assemble_operator(disc, u);
  row.delta = asm_u.weighted;
  if (row.delta == 0.0) {
    row.singular = fn.singular_at_zero();
    const double m0 = row.singular ? 0.0 : fn(0.0);
    row.kirchhoff = m0 * asm_u.pairing;
    return row;
  }
  const double m = fn(row.delta);
  if (!std::isfinite(m)) {
    throw EvaluationError("Kirchhoff function is not finite at delta = " + std::to_string(row.delta));
  }
  row.kirchhoff = m * asm_u.pairing;
  return row;
}

}  // namespace

WeakResidual assemble_weak_residual(const EnergyProblem& problem, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v) {
  const auto& disc = problem.disc();
  auto ru = kirchhoff_row(disc, problem.kirchhoff().m1, u);
  auto rv = kirchhoff_row(disc, problem.kirchhoff().m2, v);

  const auto uq = disc.domain_values(u);
  const auto vq = disc.domain_values(v);
  const auto& a = problem.a_values();
  const auto& b = problem.b_values();
  const auto& pot = problem.potential();
  std::vector<double> fu(uq.size());
  std::vector<double> gv(uq.size());
  for (std::size_t q = 0; q < uq.size(); ++q) {
    fu[q] = a[q];
    gv[q] = b[q];
    if (!pot.is_zero()) {
      fu[q] += pot.f(uq[q], vq[q]);
      gv[q] += pot.g(uq[q], vq[q]);
    }
  }

  WeakResidual out;
  out.r_u = ru.kirchhoff - disc.domain_load(fu);
  out.r_v = rv.kirchhoff - disc.domain_load(gv);
  out.delta_u = ru.delta;
  out.delta_v = rv.delta;
  out.singular_u = ru.singular;
  out.singular_v = rv.singular;
  return out;
}

WeakResidual assemble_weak_residual(const EnergyProblem& problem, const DiscreteField& u,
                                    const DiscreteField& v) {
  return assemble_weak_residual(problem, u.dofs(), v.dofs());
}

namespace {

double psi(double d, double p) { return d == 0.0 ? 0.0 : std::pow(std::abs(d), p - 2.0) * d; }

// Node of the closure of Omega at x, or -1.
int closure_node(const DomainSpec& dom, const Point& x) {
  Index idx{0, 0};
  const Point lo = dom.box_lo();
  for (int a = 0; a < dom.dim(); ++a) {
    const double k = (x[a] - lo[a]) / dom.h(a);
    idx[a] = static_cast<int>(std::lround(k));
    if (std::abs(k - idx[a]) > 1e-9 || idx[a] < 0 || idx[a] >= dom.nodes(a)) return -1;
  }
  // Some cell touching the node must belong to Omega.
  const int corners = dom.dim() == 1 ? 2 : 4;
  for (int c = 0; c < corners; ++c) {
    Index cell{0, 0};
    bool ok = true;
    for (int a = 0; a < dom.dim(); ++a) {
      cell[a] = idx[a] - ((c >> a) & 1);
      ok = ok && cell[a] >= 0 && cell[a] < dom.cells(a);
    }
    if (ok && dom.cell_in_omega(dom.cell_flat(cell))) return dom.node_flat(idx);
  }
  return -1;
}

}  // namespace

double apply_pointwise(const Discretization& disc, const DiscreteField& u, const Point& x,
                       double pv_radius, const PointwiseOptions& opts) {
  const auto& dom = disc.domain();
  const int dim = dom.dim();
  if (closure_node(dom, x) < 0) throw PreconditionError("x is not a grid node of the closure of Omega");
  double h_max = 0.0;
  double h_min = dom.h(0);
  for (int a = 0; a < dim; ++a) {
    h_max = std::max(h_max, dom.h(a));
    h_min = std::min(h_min, dom.h(a));
  }
  if (!(pv_radius >= h_max * (1.0 - 1e-12))) {
    throw PreconditionError("pv_radius is smaller than the grid spacing");
  }
  if (pv_radius >= dom.truncation_gap()) {
    throw PreconditionError("pv_radius reaches the boundary of the truncation box");
  }

  const auto& fields = disc.exponents();
  const double ux = u(x);
  const Point lo = dom.box_lo();
  const Point hi = dom.box_hi();
  const GaussRule radial = gauss_legendre(opts.radial_points);

  std::vector<Point> dirs;
  std::vector<double> dir_weight;
  if (dim == 1) {
    dirs = {Point{1.0, 0.0}, Point{-1.0, 0.0}};
    dir_weight = {1.0, 1.0};
  } else {
    const GaussRule ang = gauss_legendre(opts.angular_points);
    const double width = 2.0 * std::numbers::pi / opts.angular_panels;
    for (int k = 0; k < opts.angular_panels; ++k) {
      for (std::size_t g = 0; g < ang.nodes.size(); ++g) {
        const double th = width * (k + ang.nodes[g]);
        dirs.push_back(Point{std::cos(th), std::sin(th)});
        dir_weight.push_back(width * ang.weights[g]);
      }
    }
  }

  double integral = 0.0;
  double local = 0.0;
  std::vector<double> breaks;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const Point& e = dirs[d];
    double rho_max = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim; ++a) {
      if (e[a] > 0.0) rho_max = std::min(rho_max, (hi[a] - x[a]) / e[a]);
      if (e[a] < 0.0) rho_max = std::min(rho_max, (lo[a] - x[a]) / e[a]);
    }
    breaks.assign({pv_radius, rho_max});
    for (int a = 0; a < dim; ++a) {
      if (e[a] == 0.0) continue;
      for (int k = 0; k < dom.nodes(a); ++k) {
        const double rho = (lo[a] + k * dom.h(a) - x[a]) / e[a];
        if (rho > pv_radius && rho < rho_max) breaks.push_back(rho);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    double ray = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
      const double r0 = breaks[k];
      const double len = breaks[k + 1] - r0;
      if (len <= 1e-14 * r0) continue;
      for (std::size_t g = 0; g < radial.nodes.size(); ++g) {
        const double rho = r0 + len * radial.nodes[g];
        Point y{x[0] + rho * e[0], x[1] + rho * e[1]};
        const double p = fields.p(x, y);
        const double s = fields.s(x, y);
        ray += len * radial.weights[g] * psi(ux - u(y), p) * std::pow(rho, -1.0 - p * s);
      }
    }
    integral += dir_weight[d] * ray;

    // Directional slope at x: D(rho) is affine in rho inside the first cell.
    const double r1 = 0.25 * h_min;
    const double r2 = 0.125 * h_min;
    const double d1 = (u(Point{x[0] + r1 * e[0], x[1] + r1 * e[1]}) - ux) / r1;
    const double d2 = (u(Point{x[0] + r2 * e[0], x[1] + r2 * e[1]}) - ux) / r2;
    const double slope = 2.0 * d2 - d1;
    local += dir_weight[d] * psi(-slope, fields.p_bar(x));
  }

  const double p0 = fields.p_bar(x);
  const double k = p0 * (1.0 - fields.s_bar(x)) - 1.0;
  if (k > 0.0) integral += local * std::pow(pv_radius, k) / k;
  return integral;
}

}  // namespace kirchfrac

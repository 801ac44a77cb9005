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

#include "kirchfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "kirchfrac/errors.hpp"
#include "kirchfrac/parallel.hpp"

namespace kirchfrac {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("Gauss rule needs at least one point");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // derivative at the converged abscissa
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureOptions QuadratureOptions::defaults_for(int dim) {
  QuadratureOptions o;
  if (dim == 2) {
    o.far_points = 3;
    o.near_points = 3;
    o.inner_points = 3;
    o.levels = 2;
    o.domain_points = 3;
  }
  return o;
}

QuadratureOptions QuadratureOptions::coarsened() const {
  QuadratureOptions o = *this;
  o.far_points = std::max(1, far_points - 1);
  o.near_points = std::max(1, near_points - 1);
  o.inner_points = std::max(1, inner_points - 1);
  o.levels = std::max(0, levels - 1);
  return o;
}

double ModularSamples::evaluate(double lambda) const {
  std::vector<double> parts;
  const std::size_t block = 4096;
  const double log_lambda = std::log(lambda);
  for (std::size_t start = 0; start < weight.size(); start += block) {
    const std::size_t end = std::min(weight.size(), start + block);
    double acc = 0.0;
    for (std::size_t q = start; q < end; ++q) {
      acc += weight[q] * std::exp(exponent[q] * (std::log(magnitude[q]) - log_lambda));
    }
    parts.push_back(acc);
  }
  return pairwise_sum(std::move(parts));
}

namespace {

struct AxisSegment {
  double start;   // value of w at t = 0
  double sign;    // w = start + sign * h * t
  bool singular;  // z = 0 at t = 0
};

std::vector<AxisSegment> near_segments(int offset, double h) {
  if (offset == 0) return {{0.0, -1.0, true}, {0.0, 1.0, true}};
  if (offset == 1) return {{-h, 1.0, true}, {0.0, 1.0, false}};
  return {{h, -1.0, true}, {0.0, -1.0, false}};
}

// Rule on [0, 1] for integrands behaving like t^beta, beta > -1, at t = 0.
GaussRule graded_rule(int levels, int n, int power) {
  const GaussRule g = gauss_legendre(n);
  GaussRule out;
  for (int j = 0; j < levels; ++j) {
    const double b = std::ldexp(1.0, -j);
    const double a = 0.5 * b;
    for (int i = 0; i < n; ++i) {
      out.nodes.push_back(a + (b - a) * g.nodes[i]);
      out.weights.push_back((b - a) * g.weights[i]);
    }
  }
  const double scale = std::ldexp(1.0, -levels);
  for (int i = 0; i < n; ++i) {
    const double tau = g.nodes[i];
    out.nodes.push_back(scale * std::pow(tau, power));
    out.weights.push_back(scale * power * std::pow(tau, power - 1) * g.weights[i]);
  }
  return out;
}

double hat(double t, double nu, double h) { return std::max(0.0, 1.0 - std::abs(t - nu) / h); }

// hat(x) - hat(y) with z = x - y supplied exactly, so the difference does not
// cancel when x and y are close.
double hat_diff(double x, double y, double z, double nu, double h) {
  if (x >= nu - h && x <= nu && y >= nu - h && y <= nu) return z / h;
  if (x >= nu && x <= nu + h && y >= nu && y <= nu + h) return -z / h;
  return hat(x, nu, h) - hat(y, nu, h);
}

struct StencilNode {
  int dof;
  Point pos;  // relative to the y-cell origin
};

class PairEmitter {
 public:
  PairEmitter(const DomainSpec& dom, const ExponentField& fields, PairRule& rule,
              ExponentBounds& bounds)
      : dom_(dom), fields_(fields), rule_(rule), bounds_(bounds), dim_(dom.dim()) {}

  void set_pair(int c1, int c2, const Index& offset) {
    origin_ = dom_.cell_origin(c2);
    factor_ = c1 == c2 ? 1.0 : 2.0;
    nodes_.clear();
    const auto add = [&](const std::vector<int>& corners, bool shifted) {
      for (std::size_t corner = 0; corner < corners.size(); ++corner) {
        const int dof = dom_.node_to_dof(corners[corner]);
        if (dof < 0) continue;
        if (std::any_of(nodes_.begin(), nodes_.end(),
                        [dof](const StencilNode& n) { return n.dof == dof; })) {
          continue;
        }
        StencilNode node{dof, {}};
        for (int i = 0; i < dim_; ++i) {
          const int bit = static_cast<int>((corner >> i) & 1);
          node.pos[i] = ((shifted ? offset[i] : 0) + bit) * dom_.h(i);
        }
        nodes_.push_back(node);
      }
    };
    add(dom_.cell_nodes(c1), true);
    add(dom_.cell_nodes(c2), false);
  }

  bool has_dofs() const { return !nodes_.empty(); }

  // x_loc, y_loc relative to the y-cell origin; z = x - y given exactly.
  void emit(const Point& xl, const Point& yl, const Point& z, double w) {
    double r2 = 0.0;
    for (int i = 0; i < dim_; ++i) r2 += z[i] * z[i];
    if (!(r2 > 0.0) || !(w > 0.0)) return;

    coef_.clear();
    bool any = false;
    for (const auto& node : nodes_) {
      double c = 0.0;
      if (dim_ == 1) {
        c = hat_diff(xl[0], yl[0], z[0], node.pos[0], dom_.h(0));
      } else {
        const double d0 = hat_diff(xl[0], yl[0], z[0], node.pos[0], dom_.h(0));
        const double d1 = hat_diff(xl[1], yl[1], z[1], node.pos[1], dom_.h(1));
        c = d0 * hat(xl[1], node.pos[1], dom_.h(1)) + hat(yl[0], node.pos[0], dom_.h(0)) * d1;
      }
      coef_.push_back(c);
      any = any || c != 0.0;
    }
    if (!any) return;

    Point x{};
    Point y{};
    for (int i = 0; i < dim_; ++i) {
      x[i] = origin_[i] + xl[i];
      y[i] = origin_[i] + yl[i];
    }
    const double p = fields_.p(x, y);
    const double s = fields_.s(x, y);
    bounds_.p_min = std::min(bounds_.p_min, p);
    bounds_.p_max = std::max(bounds_.p_max, p);
    bounds_.s_min = std::min(bounds_.s_min, s);
    bounds_.s_max = std::max(bounds_.s_max, s);

    const double r = std::sqrt(r2);
    rule_.weight.push_back(factor_ * w * std::pow(r, -(dim_ + p * s)));
    rule_.exponent.push_back(p);
    for (int e = 0; e < rule_.stride; ++e) {
      if (e < static_cast<int>(nodes_.size())) {
        rule_.dof.push_back(nodes_[e].dof);
        rule_.coef.push_back(coef_[e]);
      } else {
        rule_.dof.push_back(0);
        rule_.coef.push_back(0.0);
      }
    }
  }

 private:
  const DomainSpec& dom_;
  const ExponentField& fields_;
  PairRule& rule_;
  ExponentBounds& bounds_;
  int dim_;
  Point origin_{};
  double factor_ = 1.0;
  std::vector<StencilNode> nodes_;
  std::vector<double> coef_;
};

}  // namespace

Discretization::Discretization(DomainSpec dom, ExponentField fields, QuadratureOptions opts)
    : dom_(std::make_shared<const DomainSpec>(std::move(dom))),
      fields_(std::move(fields)),
      opts_(opts) {
  if (opts_.far_points < 1 || opts_.near_points < 1 || opts_.inner_points < 1 ||
      opts_.domain_points < 1 || opts_.levels < 0) {
    throw PreconditionError("quadrature orders must be positive and levels non-negative");
  }
  if (dom_->num_dofs() == 0) throw PreconditionError("the grid has no interior nodes in Omega");
  bounds_ = fields_.sample_bounds(*dom_, 9);
  if (!(bounds_.p_min > 1.0) || !(bounds_.s_min > 0.0) || !(bounds_.s_max < 1.0)) {
    throw DomainError(fmt::format(
        "the fractional modular needs p > 1 and 0 < s < 1 (sampled p in [{}, {}], s in [{}, {}])",
        bounds_.p_min, bounds_.p_max, bounds_.s_min, bounds_.s_max));
  }
  // Near the diagonal the integrand behaves like t^(p(1-s)-1); the power
  // substitution makes the innermost graded interval at least quadratic.
  const double beta = bounds_.p_min * (1.0 - bounds_.s_max);
  grading_power_ = std::clamp(static_cast<int>(std::ceil(3.0 / beta)), 1, 12);
  build_pair_rule();
  build_domain_rule();
}

void Discretization::build_pair_rule() {
  const DomainSpec& dom = *dom_;
  const int dim = dom.dim();
  const int ncell = dom.num_cells();
  pairs_ = PairRule{};
  pairs_.stride = 2 * (1 << dim);

  std::vector<char> active(ncell, 0);
  for (int c = 0; c < ncell; ++c) {
    for (int node : dom.cell_nodes(c)) {
      if (dom.node_is_interior(node)) active[c] = 1;
    }
  }

  // Far pairs lose one Gauss order per doubling of their separation beyond
  // three cells, down to two points.
  std::vector<GaussRule> far_rules;
  for (int k = 0; k <= opts_.far_points; ++k) far_rules.push_back(gauss_legendre(std::max(1, k)));
  const auto far_order = [&](int dist) {
    int n = opts_.far_points;
    for (int reach = 4; dist >= reach && n > 2; reach *= 2) --n;
    return n;
  };
  const GaussRule near = gauss_legendre(opts_.near_points);
  const GaussRule inner = gauss_legendre(opts_.inner_points);
  const GaussRule graded = graded_rule(opts_.levels, opts_.near_points, grading_power_);

  PairEmitter emitter(dom, fields_, pairs_, bounds_);
  Point h{};
  for (int i = 0; i < dim; ++i) h[i] = dom.h(i);

  // Overlap integral for a fixed w: y_loc ranges over the box where both
  // y_loc and y_loc + z stay inside their cells.
  const auto emit_inner = [&](const Point& w, const Point& z, double weight) {
    Point lo{};
    Point len{};
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::max(0.0, -w[i]);
      len[i] = std::min(h[i], h[i] - w[i]) - lo[i];
      if (!(len[i] > 0.0)) return;
    }
    const int n = opts_.inner_points;
    const int count = dim == 1 ? n : n * n;
    for (int q = 0; q < count; ++q) {
      const int qi[2] = {q % n, q / n};
      Point yl{};
      Point xl{};
      double wq = weight;
      for (int i = 0; i < dim; ++i) {
        yl[i] = lo[i] + len[i] * inner.nodes[qi[i]];
        xl[i] = yl[i] + z[i];
        wq *= len[i] * inner.weights[qi[i]];
      }
      emitter.emit(xl, yl, z, wq);
    }
  };

  for (int c2 = 0; c2 < ncell; ++c2) {
    const Index idx2 = dom.cell_index(c2);
    for (int c1 = c2; c1 < ncell; ++c1) {
      if (!active[c1] && !active[c2]) continue;
      const Index idx1 = dom.cell_index(c1);
      Index offset{0, 0};
      int dist = 0;
      for (int i = 0; i < dim; ++i) {
        offset[i] = idx1[i] - idx2[i];
        dist = std::max(dist, std::abs(offset[i]));
      }
      const bool is_near = dist <= 1;
      emitter.set_pair(c1, c2, offset);
      if (!emitter.has_dofs()) continue;

      if (!is_near) {
        const int n = far_order(dist);
        const GaussRule& far = far_rules[n];
        const int per_cell = dim == 1 ? n : n * n;
        for (int a = 0; a < per_cell; ++a) {
          for (int b = 0; b < per_cell; ++b) {
            const int ai[2] = {a % n, a / n};
            const int bi[2] = {b % n, b / n};
            Point xl{};
            Point yl{};
            Point z{};
            double w = 1.0;
            for (int i = 0; i < dim; ++i) {
              xl[i] = (offset[i] + far.nodes[ai[i]]) * h[i];
              yl[i] = far.nodes[bi[i]] * h[i];
              z[i] = (offset[i] + far.nodes[ai[i]] - far.nodes[bi[i]]) * h[i];
              w *= h[i] * far.weights[ai[i]] * h[i] * far.weights[bi[i]];
            }
            emitter.emit(xl, yl, z, w);
          }
        }
        continue;
      }

      std::vector<AxisSegment> segs[kMaxDim];
      for (int i = 0; i < dim; ++i) segs[i] = near_segments(offset[i], h[i]);
      const int combos = dim == 1 ? 2 : 4;
      for (int combo = 0; combo < combos; ++combo) {
        const AxisSegment* seg[kMaxDim] = {&segs[0][combo % 2],
                                           dim == 2 ? &segs[1][combo / 2] : nullptr};
        bool singular = true;
        double jac = 1.0;
        for (int i = 0; i < dim; ++i) {
          singular = singular && seg[i]->singular;
          jac *= h[i];
        }
        const auto emit_t = [&](const Point& t, double wt) {
          Point w{};
          Point z{};
          for (int i = 0; i < dim; ++i) {
            w[i] = seg[i]->start + seg[i]->sign * h[i] * t[i];
            z[i] = seg[i]->singular ? seg[i]->sign * h[i] * t[i] : offset[i] * h[i] + w[i];
          }
          emit_inner(w, z, wt * jac);
        };

        if (singular && dim == 1) {
          for (std::size_t g = 0; g < graded.nodes.size(); ++g) {
            emit_t(Point{graded.nodes[g], 0.0}, graded.weights[g]);
          }
        } else if (singular) {
          // Duffy split of [0,1]^2 into the triangles t1 >= t0 and t0 > t1.
          for (int tri = 0; tri < 2; ++tri) {
            for (std::size_t g = 0; g < graded.nodes.size(); ++g) {
              const double xi = graded.nodes[g];
              for (int e = 0; e < opts_.near_points; ++e) {
                const double eta = near.nodes[e];
                const Point t = tri == 0 ? Point{xi, xi * eta} : Point{xi * eta, xi};
                emit_t(t, graded.weights[g] * near.weights[e] * xi);
              }
            }
          }
        } else {
          const int n = opts_.near_points;
          const int count = dim == 1 ? n : n * n;
          for (int q = 0; q < count; ++q) {
            const int qi[2] = {q % n, q / n};
            Point t{};
            double wt = 1.0;
            for (int i = 0; i < dim; ++i) {
              t[i] = near.nodes[qi[i]];
              wt *= near.weights[qi[i]];
            }
            emit_t(t, wt);
          }
        }
      }
    }
  }
}

void Discretization::build_domain_rule() {
  const DomainSpec& dom = *dom_;
  const int dim = dom.dim();
  cells_ = DomainRule{};
  cells_.stride = 1 << dim;
  const GaussRule g = gauss_legendre(opts_.domain_points);
  const int n = opts_.domain_points;
  const int count = dim == 1 ? n : n * n;
  for (int c = 0; c < dom.num_cells(); ++c) {
    if (!dom.cell_in_omega(c)) continue;
    const Point origin = dom.cell_origin(c);
    const auto corners = dom.cell_nodes(c);
    for (int q = 0; q < count; ++q) {
      const int qi[2] = {q % n, q / n};
      Point x{};
      Point local{};
      double w = 1.0;
      for (int i = 0; i < dim; ++i) {
        local[i] = g.nodes[qi[i]];
        x[i] = origin[i] + local[i] * dom.h(i);
        w *= dom.h(i) * g.weights[qi[i]];
      }
      cells_.points.push_back(x);
      cells_.weight.push_back(w);
      for (std::size_t corner = 0; corner < corners.size(); ++corner) {
        const int dof = dom.node_to_dof(corners[corner]);
        double basis = 1.0;
        for (int i = 0; i < dim; ++i) {
          basis *= ((corner >> i) & 1) ? local[i] : 1.0 - local[i];
        }
        cells_.dof.push_back(dof >= 0 ? dof : 0);
        cells_.coef.push_back(dof >= 0 ? basis : 0.0);
      }
      const double pb = fields_.p_bar(x);
      const double sb = fields_.s_bar(x);
      bounds_.p_min = std::min(bounds_.p_min, pb);
      bounds_.p_max = std::max(bounds_.p_max, pb);
      bounds_.s_min = std::min(bounds_.s_min, sb);
      bounds_.s_max = std::max(bounds_.s_max, sb);
    }
  }
}

int Discretization::block_count() const {
  const std::size_t n = pairs_.size();
  return static_cast<int>(std::clamp<std::size_t>((n + 4095) / 4096, 1, 256));
}

Discretization::Sweep Discretization::sweep(const Eigen::VectorXd& u,
                                            Eigen::VectorXd* pairing) const {
  if (u.size() != num_dofs()) throw PreconditionError("dof vector has the wrong size");
  const int blocks = block_count();
  const std::size_t n = pairs_.size();
  const std::size_t per = (n + blocks - 1) / blocks;
  const int stride = pairs_.stride;
  std::vector<Sweep> parts(blocks);
  std::vector<Eigen::VectorXd> grads;
  if (pairing) grads.assign(blocks, Eigen::VectorXd::Zero(num_dofs()));

  parallel_for_blocks(blocks, [&](int b) {
    const std::size_t start = b * per;
    const std::size_t end = std::min(n, start + per);
    Sweep acc;
    for (std::size_t q = start; q < end; ++q) {
      const int* dof = &pairs_.dof[q * stride];
      const double* coef = &pairs_.coef[q * stride];
      double d = 0.0;
      for (int e = 0; e < stride; ++e) d += coef[e] * u[dof[e]];
      if (d == 0.0) continue;
      const double p = pairs_.exponent[q];
      const double t = pairs_.weight[q] * std::pow(std::abs(d), p);
      acc.modular += t;
      acc.weighted += t / p;
      if (pairing) {
        const double flux = t / d;
        for (int e = 0; e < stride; ++e) grads[b][dof[e]] += flux * coef[e];
      }
    }
    parts[b] = acc;
  });

  if (pairing) {
    *pairing = pairwise_reduce(std::move(grads),
                               [](Eigen::VectorXd& a, const Eigen::VectorXd& c) { a += c; });
  }
  return pairwise_reduce(std::move(parts), [](Sweep& a, const Sweep& c) {
    a.modular += c.modular;
    a.weighted += c.weighted;
  });
}

double Discretization::pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& phi) const {
  if (u.size() != num_dofs() || phi.size() != num_dofs()) {
    throw PreconditionError("dof vector has the wrong size");
  }
  const int blocks = block_count();
  const std::size_t n = pairs_.size();
  const std::size_t per = (n + blocks - 1) / blocks;
  const int stride = pairs_.stride;
  std::vector<double> parts(blocks, 0.0);
  parallel_for_blocks(blocks, [&](int b) {
    const std::size_t start = b * per;
    const std::size_t end = std::min(n, start + per);
    double acc = 0.0;
    for (std::size_t q = start; q < end; ++q) {
      const int* dof = &pairs_.dof[q * stride];
      const double* coef = &pairs_.coef[q * stride];
      double du = 0.0;
      double dphi = 0.0;
      for (int e = 0; e < stride; ++e) {
        du += coef[e] * u[dof[e]];
        dphi += coef[e] * phi[dof[e]];
      }
      if (du == 0.0 || dphi == 0.0) continue;
      const double t = pairs_.weight[q] * std::pow(std::abs(du), pairs_.exponent[q]);
      acc += t / du * dphi;
    }
    parts[b] = acc;
  });
  return pairwise_sum(std::move(parts));
}

ModularSamples Discretization::pair_samples(const Eigen::VectorXd& u) const {
  if (u.size() != num_dofs()) throw PreconditionError("dof vector has the wrong size");
  ModularSamples out;
  const int stride = pairs_.stride;
  for (std::size_t q = 0; q < pairs_.size(); ++q) {
    double d = 0.0;
    for (int e = 0; e < stride; ++e) d += pairs_.coef[q * stride + e] * u[pairs_.dof[q * stride + e]];
    if (d == 0.0) continue;
    out.weight.push_back(pairs_.weight[q]);
    out.magnitude.push_back(std::abs(d));
    out.exponent.push_back(pairs_.exponent[q]);
  }
  return out;
}

std::vector<double> Discretization::domain_values(const Eigen::VectorXd& u) const {
  if (u.size() != num_dofs()) throw PreconditionError("dof vector has the wrong size");
  std::vector<double> out(cells_.size());
  const int stride = cells_.stride;
  for (std::size_t q = 0; q < cells_.size(); ++q) {
    double v = 0.0;
    for (int e = 0; e < stride; ++e) v += cells_.coef[q * stride + e] * u[cells_.dof[q * stride + e]];
    out[q] = v;
  }
  return out;
}

Eigen::VectorXd Discretization::domain_load(const std::vector<double>& values) const {
  if (values.size() != cells_.size()) throw PreconditionError("value count mismatch");
  Eigen::VectorXd load = Eigen::VectorXd::Zero(num_dofs());
  const int stride = cells_.stride;
  for (std::size_t q = 0; q < cells_.size(); ++q) {
    const double wv = cells_.weight[q] * values[q];
    for (int e = 0; e < stride; ++e) load[cells_.dof[q * stride + e]] += wv * cells_.coef[q * stride + e];
  }
  return load;
}

double Discretization::domain_integral(const std::vector<double>& values) const {
  if (values.size() != cells_.size()) throw PreconditionError("value count mismatch");
  std::vector<double> parts;
  const std::size_t block = 4096;
  for (std::size_t start = 0; start < values.size(); start += block) {
    const std::size_t end = std::min(values.size(), start + block);
    double acc = 0.0;
    for (std::size_t q = start; q < end; ++q) acc += cells_.weight[q] * values[q];
    parts.push_back(acc);
  }
  return pairwise_sum(std::move(parts));
}

}  // namespace kirchfrac

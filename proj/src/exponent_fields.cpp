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

#include "kirchfrac/exponent_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "kirchfrac/errors.hpp"

namespace kirchfrac {

namespace {

double checked(double value, const char* what, const Point& x, const Point& y) {
  if (!std::isfinite(value)) {
    throw EvaluationError(fmt::format("{}(x, y) is not finite at x = ({}, {}), y = ({}, {})", what,
                                      x[0], x[1], y[0], y[1]));
  }
  return value;
}

}  // namespace

ExponentField::ExponentField(PairMap p, PairMap s, std::string description)
    : p_(std::move(p)), s_(std::move(s)), description_(std::move(description)) {
  if (!p_ || !s_) throw PreconditionError("exponent evaluators must be callable");
}

ExponentField ExponentField::constant(double p, double s) {
  return ExponentField(constant_exponent(p), constant_exponent(s),
                       fmt::format("constant p={} s={}", p, s));
}

double ExponentField::p(const Point& x, const Point& y) const { return checked(p_(x, y), "p", x, y); }

double ExponentField::s(const Point& x, const Point& y) const { return checked(s_(x, y), "s", x, y); }

ScalarMap ExponentField::p_bar_map() const {
  return [self = *this](const Point& x) { return self.p_bar(x); };
}

ExponentBounds ExponentField::sample_bounds(const DomainSpec& dom, int samples) const {
  const auto pts = sample_box(dom.dim(), dom.box_lo(), dom.box_hi(), samples);
  ExponentBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      const double pv = p(x, y);
      const double sv = s(x, y);
      b.p_min = std::min(b.p_min, pv);
      b.p_max = std::max(b.p_max, pv);
      b.s_min = std::min(b.s_min, sv);
      b.s_max = std::max(b.s_max, sv);
    }
  }
  return b;
}

PairMap constant_exponent(double value) {
  return [value](const Point&, const Point&) { return value; };
}

PairMap sinusoidal_exponent(double base, double amplitude, double frequency, int dim) {
  return [=](const Point& x, const Point& y) {
    return base + amplitude * std::sin(frequency * (coordinate_sum(x, dim) + coordinate_sum(y, dim)));
  };
}

PairMap affine_exponent(double base, double sum_slope, double diff_slope, int dim) {
  return [=](const Point& x, const Point& y) {
    const double sx = coordinate_sum(x, dim);
    const double sy = coordinate_sum(y, dim);
    return base + sum_slope * (sx + sy) + diff_slope * (sx - sy);
  };
}

std::vector<Point> sample_box(int dim, const Point& lo, const Point& hi, int samples) {
  if (samples < 1) throw PreconditionError("sample count must be positive");
  std::vector<Point> pts;
  const auto coord = [&](int axis, int k) {
    if (samples == 1) return 0.5 * (lo[axis] + hi[axis]);
    return lo[axis] + (hi[axis] - lo[axis]) * k / (samples - 1);
  };
  if (dim == 1) {
    for (int i = 0; i < samples; ++i) pts.push_back(Point{coord(0, i), 0.0});
  } else {
    for (int j = 0; j < samples; ++j) {
      for (int i = 0; i < samples; ++i) pts.push_back(Point{coord(0, i), coord(1, j)});
    }
  }
  return pts;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const InvariantCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed();
  j["samples_per_axis"] = samples;
  j["bounds"] = {{"p_min", bounds.p_min},
                 {"p_max", bounds.p_max},
                 {"s_min", bounds.s_min},
                 {"s_max", bounds.s_max}};
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"margin", c.margin},
                   {"worst_x", {c.worst_x[0], c.worst_x[1]}},
                   {"worst_y", {c.worst_y[0], c.worst_y[1]}}});
  }
  j["checks"] = std::move(arr);
  return j;
}

ValidationReport validate_exponents(const ExponentField& fields, const DomainSpec& dom,
                                    int samples) {
  ValidationReport report;
  report.samples = samples;
  const auto box_pts = sample_box(dom.dim(), dom.box_lo(), dom.box_hi(), samples);
  const auto dom_pts = sample_box(dom.dim(), dom.omega_lo(), dom.omega_hi(), samples);

  constexpr double inf = std::numeric_limits<double>::infinity();
  InvariantCheck sym_p{"symmetry_p", true, inf, {}, {}};
  InvariantCheck sym_s{"symmetry_s", true, inf, {}, {}};
  InvariantCheck s_low{"s_lower_positive", true, inf, {}, {}};
  InvariantCheck s_up{"s_upper_below_one", true, inf, {}, {}};
  InvariantCheck p_low{"p_lower_above_one", true, inf, {}, {}};
  InvariantCheck sub{"subcritical_n_gt_ps", true, inf, {}, {}};

  ExponentBounds& b = report.bounds;
  b = {inf, -inf, inf, -inf};
  const auto record = [](InvariantCheck& chk, double margin, const Point& x, const Point& y) {
    if (margin < chk.margin) {
      chk.margin = margin;
      chk.worst_x = x;
      chk.worst_y = y;
    }
  };

  for (const auto& x : box_pts) {
    for (const auto& y : box_pts) {
      const double pxy = fields.p(x, y);
      const double sxy = fields.s(x, y);
      const double pyx = fields.p(y, x);
      const double syx = fields.s(y, x);
      b.p_min = std::min(b.p_min, pxy);
      b.p_max = std::max(b.p_max, pxy);
      b.s_min = std::min(b.s_min, sxy);
      b.s_max = std::max(b.s_max, sxy);
      // Symmetry up to round-off of the evaluators.
      record(sym_p, 1e-12 * std::max(1.0, std::abs(pxy)) - std::abs(pxy - pyx), x, y);
      record(sym_s, 1e-12 * std::max(1.0, std::abs(sxy)) - std::abs(sxy - syx), x, y);
      record(s_low, sxy, x, y);
      record(s_up, 1.0 - sxy, x, y);
      record(p_low, pxy - 1.0, x, y);
    }
  }
  const double n = dom.dim();
  for (const auto& x : dom_pts) {
    for (const auto& y : dom_pts) {
      record(sub, n - fields.p(x, y) * fields.s(x, y), x, y);
    }
  }
  for (InvariantCheck* chk : {&sym_p, &sym_s, &s_low, &s_up, &p_low, &sub}) {
    chk->passed = chk->margin > 0.0;
    report.checks.push_back(*chk);
  }
  return report;
}

ScalarMap conjugate_exponent(ScalarMap p) {
  if (!p) throw PreconditionError("exponent evaluator must be callable");
  return [p = std::move(p)](const Point& x) {
    const double v = p(x);
    if (!std::isfinite(v) || v <= 1.0) {
      throw DomainError(
          fmt::format("conjugate exponent needs p(x) > 1, got {} at ({}, {})", v, x[0], x[1]));
    }
    return v / (v - 1.0);
  };
}

double critical_exponent(const ExponentField& fields, int dim, const Point& x) {
  const double p = fields.p_bar(x);
  const double s = fields.s_bar(x);
  const double denom = dim - s * p;
  if (!(denom > 0.0)) {
    throw DomainError(fmt::format(
        "supercritical configuration at ({}, {}): N - s p = {} <= 0", x[0], x[1], denom));
  }
  return dim * p / denom;
}

}  // namespace kirchfrac

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

#include <nlohmann/json.hpp>

#include "kirchfrac/domain.hpp"

namespace kirchfrac {

struct ExponentBounds {
  double p_min = 0.0;
  double p_max = 0.0;
  double s_min = 0.0;
  double s_max = 0.0;
};

/// Variable exponent p(x, y) and variable order s(x, y).
///
/// Both are pure evaluators of the coordinates and must be callable from
/// several threads at once. Evaluation throws EvaluationError, naming the
/// offending pair, when a value is not finite.
class ExponentField {
 public:
  ExponentField(PairMap p, PairMap s, std::string description = "custom");

  static ExponentField constant(double p, double s);

  double p(const Point& x, const Point& y) const;
  double s(const Point& x, const Point& y) const;
  /// Diagonal restrictions p(x, x) and s(x, x).
  double p_bar(const Point& x) const { return p(x, x); }
  double s_bar(const Point& x) const { return s(x, x); }

  /// The exponent p(x, x) as a function of one point.
  ScalarMap p_bar_map() const;

  const std::string& description() const { return description_; }

  /// Extremes of p and s over all pairs of a uniform sample of the truncation
  /// box with `samples` points per axis.
  ExponentBounds sample_bounds(const DomainSpec& dom, int samples) const;

 private:
  PairMap p_;
  PairMap s_;
  std::string description_;
};

PairMap constant_exponent(double value);
/// base + amplitude * sin(frequency * (sigma(x) + sigma(y))), symmetric.
PairMap sinusoidal_exponent(double base, double amplitude, double frequency, int dim);
/// base + sum_slope * (sigma(x) + sigma(y)) + diff_slope * (sigma(x) - sigma(y)).
/// Symmetric iff diff_slope == 0.
PairMap affine_exponent(double base, double sum_slope, double diff_slope, int dim);

/// One pass/fail line of a validation report. `margin` is positive when the
/// invariant holds with room to spare and negative at a violation.
struct InvariantCheck {
  std::string name;
  bool passed = true;
  double margin = 0.0;
  Point worst_x{};
  Point worst_y{};
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  ExponentBounds bounds;
  int samples = 0;

  bool passed() const;
  const InvariantCheck* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Checks symmetry, 0 < s- <= s+ < 1 < p- <= p+ < inf over pairs of the
/// truncation box sample, and N > p s over pairs of the closed domain sample.
ValidationReport validate_exponents(const ExponentField& fields, const DomainSpec& dom,
                                    int samples);

/// Pointwise conjugate q = p / (p - 1). The returned map throws DomainError
/// wherever p(x) <= 1.
ScalarMap conjugate_exponent(ScalarMap p);

/// Fractional critical exponent N p(x,x) / (N - s(x,x) p(x,x)).
double critical_exponent(const ExponentField& fields, int dim, const Point& x);

/// Uniform sample of a box with `samples` points per axis (endpoints included).
std::vector<Point> sample_box(int dim, const Point& lo, const Point& hi, int samples);

}  // namespace kirchfrac

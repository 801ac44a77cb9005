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

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kirchfrac {

inline constexpr int kMaxDim = 2;

/// A point of R^N, N <= 2. Unused trailing coordinates are zero.
using Point = std::array<double, kMaxDim>;

/// Scalar function of one point, e.g. a source a(x) or an exponent q(x).
using ScalarMap = std::function<double(const Point&)>;

/// Scalar function of a pair of points, e.g. p(x, y) or s(x, y).
using PairMap = std::function<double(const Point&, const Point&)>;

using Index = std::array<int, kMaxDim>;

/// Uniform grid over the truncation box B with the bounded domain Omega as a
/// union of its cells.
///
/// Omega is the box [lo, hi] resolved by `cells` cells per axis, optionally
/// restricted by a cell mask. B adds `margin` cells on each side of the box,
/// so B strictly contains Omega whenever every margin is positive. Nodes are
/// numbered lexicographically with axis 0 fastest; the same holds for cells.
class DomainSpec {
 public:
  /// Omega = [lo, hi] with `cells` cells per axis and `margin` extra cells on
  /// each side of every axis.
  static DomainSpec box(int dim, const Point& lo, const Point& hi, const Index& cells,
                        const Index& margin);

  /// Omega = [lo, hi]; B is Omega dilated about its center by `dilation`. The
  /// dilation must translate into a whole number of cells per side.
  static DomainSpec dilated_box(int dim, const Point& lo, const Point& hi, const Index& cells,
                                double dilation = 2.0);

  /// Restricts Omega to the cells of the [lo, hi] box flagged in `omega_cells`
  /// (lexicographic over the box cells, size prod(cells)).
  DomainSpec with_mask(std::vector<bool> omega_cells) const;

  int dim() const { return dim_; }
  double h(int axis) const { return h_[axis]; }
  /// Cell volume h_0 * ... * h_{N-1}.
  double cell_volume() const;
  /// Cells per axis of Omega's bounding box.
  int omega_cells(int axis) const { return cells_[axis]; }
  int margin(int axis) const { return margin_[axis]; }
  /// Cells per axis of B.
  int cells(int axis) const { return cells_[axis] + 2 * margin_[axis]; }
  int nodes(int axis) const { return cells(axis) + 1; }
  int num_cells() const;
  int num_nodes() const;

  const Point& omega_lo() const { return lo_; }
  const Point& omega_hi() const { return hi_; }
  Point box_lo() const;
  Point box_hi() const;

  Index node_index(int node) const;
  int node_flat(const Index& idx) const;
  Index cell_index(int cell) const;
  int cell_flat(const Index& idx) const;
  Point node_coord(int node) const;
  Point cell_origin(int cell) const;
  /// Corner nodes of a cell, lexicographic (2^N entries).
  std::vector<int> cell_nodes(int cell) const;

  bool cell_in_omega(int cell) const { return cell_in_omega_[cell]; }
  /// A node is a degree of freedom when every cell around it lies in Omega,
  /// so fields vanish on the boundary of Omega and beyond.
  bool node_is_interior(int node) const { return node_to_dof_[node] >= 0; }
  int node_to_dof(int node) const { return node_to_dof_[node]; }
  int dof_to_node(int dof) const { return dof_to_node_[dof]; }
  int num_dofs() const { return static_cast<int>(dof_to_node_.size()); }
  int num_omega_cells() const;

  /// Lebesgue measure of Omega.
  double omega_measure() const;
  /// Distance from Omega's bounding box to the boundary of B (smallest margin).
  double truncation_gap() const;
  /// Locates the cell of B containing x (clamped to B) and the local
  /// coordinates of x in [0, 1]^N.
  int locate(const Point& x, Point& local) const;
  bool contains_box(const Point& x) const;

  /// Geometric identity of two grids (dimension, spacing, cells, mask).
  bool same_grid(const DomainSpec& other) const;

 private:
  DomainSpec() = default;
  void finalize(std::optional<std::vector<bool>> mask);

  int dim_ = 1;
  Point lo_{};
  Point hi_{};
  Index cells_{1, 1};
  Index margin_{0, 0};
  Point h_{1.0, 1.0};
  std::vector<bool> mask_;
  std::vector<bool> cell_in_omega_;
  std::vector<int> node_to_dof_;
  std::vector<int> dof_to_node_;
};

using DomainPtr = std::shared_ptr<const DomainSpec>;

/// Sum of coordinates, sigma(x) = x_0 + ... + x_{N-1}.
inline double coordinate_sum(const Point& x, int dim) {
  double total = 0.0;
  for (int i = 0; i < dim; ++i) total += x[i];
  return total;
}

}  // namespace kirchfrac

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

#include "kirchfrac/domain.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include <fmt/format.h>

#include "kirchfrac/errors.hpp"

namespace kirchfrac {

DomainSpec DomainSpec::box(int dim, const Point& lo, const Point& hi, const Index& cells,
                           const Index& margin) {
  if (dim < 1 || dim > kMaxDim) {
    throw PreconditionError(fmt::format("dimension must be 1 or 2, got {}", dim));
  }
  DomainSpec spec;
  spec.dim_ = dim;
  for (int i = 0; i < dim; ++i) {
    if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw PreconditionError(fmt::format("empty or unbounded domain along axis {}", i));
    }
    if (cells[i] < 1) throw PreconditionError("at least one cell per axis is required");
    if (margin[i] < 1) {
      throw PreconditionError("the truncation box must strictly contain the domain (margin >= 1)");
    }
    spec.lo_[i] = lo[i];
    spec.hi_[i] = hi[i];
    spec.cells_[i] = cells[i];
    spec.margin_[i] = margin[i];
    spec.h_[i] = (hi[i] - lo[i]) / cells[i];
  }
  for (int i = dim; i < kMaxDim; ++i) {
    spec.cells_[i] = 0;
    spec.margin_[i] = 0;
    spec.h_[i] = 1.0;
  }
  spec.finalize(std::nullopt);
  return spec;
}

DomainSpec DomainSpec::dilated_box(int dim, const Point& lo, const Point& hi, const Index& cells,
                                   double dilation) {
  if (!(dilation > 1.0)) throw PreconditionError("dilation factor must exceed 1");
  Index margin{0, 0};
  for (int i = 0; i < dim && i < kMaxDim; ++i) {
    const double extra = 0.5 * (dilation - 1.0) * cells[i];
    const double rounded = std::round(extra);
    if (std::abs(extra - rounded) > 1e-9 || rounded < 1) {
      throw PreconditionError(fmt::format(
          "dilation {} does not give a whole number of margin cells along axis {}", dilation, i));
    }
    margin[i] = static_cast<int>(rounded);
  }
  return box(dim, lo, hi, cells, margin);
}

DomainSpec DomainSpec::with_mask(std::vector<bool> omega_cells) const {
  int expected = 1;
  for (int i = 0; i < dim_; ++i) expected *= cells_[i];
  if (static_cast<int>(omega_cells.size()) != expected) {
    throw PreconditionError(
        fmt::format("mask has {} entries, expected {}", omega_cells.size(), expected));
  }
  if (std::none_of(omega_cells.begin(), omega_cells.end(), [](bool b) { return b; })) {
    throw PreconditionError("mask selects an empty domain");
  }
  DomainSpec spec = *this;
  spec.finalize(std::move(omega_cells));
  return spec;
}

void DomainSpec::finalize(std::optional<std::vector<bool>> mask) {
  mask_ = mask ? std::move(*mask) : std::vector<bool>{};
  const int ncell = num_cells();
  cell_in_omega_.assign(ncell, false);
  for (int c = 0; c < ncell; ++c) {
    const Index idx = cell_index(c);
    bool inside = true;
    int box_flat = 0;
    int stride = 1;
    for (int i = 0; i < dim_; ++i) {
      const int local = idx[i] - margin_[i];
      if (local < 0 || local >= cells_[i]) inside = false;
      box_flat += local * stride;
      stride *= cells_[i];
    }
    if (inside && !mask_.empty()) inside = mask_[box_flat];
    cell_in_omega_[c] = inside;
  }

  const int nnode = num_nodes();
  node_to_dof_.assign(nnode, -1);
  dof_to_node_.clear();
  for (int n = 0; n < nnode; ++n) {
    const Index idx = node_index(n);
    bool interior = true;
    const int corners = 1 << dim_;
    for (int corner = 0; corner < corners && interior; ++corner) {
      Index cidx{0, 0};
      for (int i = 0; i < dim_; ++i) {
        cidx[i] = idx[i] - ((corner >> i) & 1);
        if (cidx[i] < 0 || cidx[i] >= cells(i)) interior = false;
      }
      if (interior && !cell_in_omega_[cell_flat(cidx)]) interior = false;
    }
    if (interior) {
      node_to_dof_[n] = static_cast<int>(dof_to_node_.size());
      dof_to_node_.push_back(n);
    }
  }
}

double DomainSpec::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) v *= h_[i];
  return v;
}

int DomainSpec::num_cells() const {
  int n = 1;
  for (int i = 0; i < dim_; ++i) n *= cells(i);
  return n;
}

int DomainSpec::num_nodes() const {
  int n = 1;
  for (int i = 0; i < dim_; ++i) n *= nodes(i);
  return n;
}

int DomainSpec::num_omega_cells() const {
  return static_cast<int>(std::count(cell_in_omega_.begin(), cell_in_omega_.end(), true));
}

Point DomainSpec::box_lo() const {
  Point p{};
  for (int i = 0; i < dim_; ++i) p[i] = lo_[i] - margin_[i] * h_[i];
  return p;
}

Point DomainSpec::box_hi() const {
  Point p{};
  for (int i = 0; i < dim_; ++i) p[i] = hi_[i] + margin_[i] * h_[i];
  return p;
}

Index DomainSpec::node_index(int node) const {
  Index idx{0, 0};
  for (int i = 0; i < dim_; ++i) {
    idx[i] = node % nodes(i);
    node /= nodes(i);
  }
  return idx;
}

int DomainSpec::node_flat(const Index& idx) const {
  int flat = 0;
  int stride = 1;
  for (int i = 0; i < dim_; ++i) {
    flat += idx[i] * stride;
    stride *= nodes(i);
  }
  return flat;
}

Index DomainSpec::cell_index(int cell) const {
  Index idx{0, 0};
  for (int i = 0; i < dim_; ++i) {
    idx[i] = cell % cells(i);
    cell /= cells(i);
  }
  return idx;
}

int DomainSpec::cell_flat(const Index& idx) const {
  int flat = 0;
  int stride = 1;
  for (int i = 0; i < dim_; ++i) {
    flat += idx[i] * stride;
    stride *= cells(i);
  }
  return flat;
}

Point DomainSpec::node_coord(int node) const {
  const Index idx = node_index(node);
  const Point origin = box_lo();
  Point p{};
  for (int i = 0; i < dim_; ++i) p[i] = origin[i] + idx[i] * h_[i];
  return p;
}

Point DomainSpec::cell_origin(int cell) const {
  const Index idx = cell_index(cell);
  const Point origin = box_lo();
  Point p{};
  for (int i = 0; i < dim_; ++i) p[i] = origin[i] + idx[i] * h_[i];
  return p;
}

std::vector<int> DomainSpec::cell_nodes(int cell) const {
  const Index idx = cell_index(cell);
  const int corners = 1 << dim_;
  std::vector<int> out(corners);
  for (int corner = 0; corner < corners; ++corner) {
    Index nidx{0, 0};
    for (int i = 0; i < dim_; ++i) nidx[i] = idx[i] + ((corner >> i) & 1);
    out[corner] = node_flat(nidx);
  }
  return out;
}

double DomainSpec::omega_measure() const { return num_omega_cells() * cell_volume(); }

double DomainSpec::truncation_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim_; ++i) gap = std::min(gap, margin_[i] * h_[i]);
  return gap;
}

int DomainSpec::locate(const Point& x, Point& local) const {
  const Point origin = box_lo();
  Index idx{0, 0};
  local = Point{};
  for (int i = 0; i < dim_; ++i) {
    const double t = (x[i] - origin[i]) / h_[i];
    int k = static_cast<int>(std::floor(t));
    k = std::clamp(k, 0, cells(i) - 1);
    idx[i] = k;
    local[i] = std::clamp(t - k, 0.0, 1.0);
  }
  return cell_flat(idx);
}

bool DomainSpec::contains_box(const Point& x) const {
  const Point a = box_lo();
  const Point b = box_hi();
  for (int i = 0; i < dim_; ++i) {
    if (x[i] < a[i] || x[i] > b[i]) return false;
  }
  return true;
}

bool DomainSpec::same_grid(const DomainSpec& other) const {
  if (dim_ != other.dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (cells_[i] != other.cells_[i] || margin_[i] != other.margin_[i]) return false;
    if (lo_[i] != other.lo_[i] || hi_[i] != other.hi_[i]) return false;
  }
  return mask_ == other.mask_;
}

}  // namespace kirchfrac

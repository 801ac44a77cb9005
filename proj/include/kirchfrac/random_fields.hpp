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

#include <cstdint>
#include <random>

#include "kirchfrac/function_spaces.hpp"
#include "kirchfrac/quadrature.hpp"

namespace kirchfrac {

using Rng = std::mt19937_64;

/// Sum of 1 to 4 basis functions at random interior nodes with weights in
/// [-1, 1].
DiscreteField random_hat_field(const DomainPtr& dom, Rng& rng);
/// Independent uniform values in [-amplitude, amplitude] at interior nodes.
DiscreteField random_nodal_field(const DomainPtr& dom, Rng& rng, double amplitude = 1.0);
/// Interpolant of a random combination of the lowest sine modes of the
/// bounding box of Omega.
DiscreteField random_smooth_field(const DomainPtr& dom, Rng& rng, int modes = 3);
/// One of the three generators above, chosen uniformly.
DiscreteField random_field(const DomainPtr& dom, Rng& rng);

/// Largest ratio ||u||_{L^{p}} / ||u||_{X_0} over a random ensemble that also
/// contains the positive first sine mode. An estimate from below of the
/// embedding constant, not a bound.
double sample_embedding_constant(const Discretization& disc, const ScalarMap& p, int samples,
                                 std::uint64_t seed);

}  // namespace kirchfrac

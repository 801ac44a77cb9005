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

#include "kirchfrac/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kirchfrac/errors.hpp"

namespace kirchfrac {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

int uniform_int(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

DiscreteField sine_field(const DomainPtr& dom, const std::vector<std::array<int, 2>>& modes,
                         const std::vector<double>& amps) {
  const Point lo = dom->omega_lo();
  const Point hi = dom->omega_hi();
  const int dim = dom->dim();
  return DiscreteField::interpolate(dom, [&](const Point& x) {
    double total = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      double term = amps[k];
      for (int a = 0; a < dim; ++a) {
        term *= std::sin(modes[k][a] * std::numbers::pi * (x[a] - lo[a]) / (hi[a] - lo[a]));
      }
      total += term;
    }
    return total;
  });
}

}  // namespace

DiscreteField random_hat_field(const DomainPtr& dom, Rng& rng) {
  if (dom->num_dofs() == 0) throw PreconditionError("domain has no interior nodes");
  std::vector<double> nodal(dom->num_nodes(), 0.0);
  const int count = 1 + uniform_int(rng, 4);
  for (int k = 0; k < count; ++k) {
    const int dof = uniform_int(rng, dom->num_dofs());
    nodal[dom->dof_to_node(dof)] += uniform(rng, -1.0, 1.0);
  }
  return DiscreteField(dom, std::move(nodal));
}

DiscreteField random_nodal_field(const DomainPtr& dom, Rng& rng, double amplitude) {
  std::vector<double> nodal(dom->num_nodes(), 0.0);
  for (int dof = 0; dof < dom->num_dofs(); ++dof) {
    nodal[dom->dof_to_node(dof)] = uniform(rng, -amplitude, amplitude);
  }
  return DiscreteField(dom, std::move(nodal));
}

DiscreteField random_smooth_field(const DomainPtr& dom, Rng& rng, int modes) {
  std::vector<std::array<int, 2>> idx;
  std::vector<double> amps;
  for (int k = 0; k < modes; ++k) {
    idx.push_back({1 + uniform_int(rng, 4), 1 + uniform_int(rng, 4)});
    amps.push_back(uniform(rng, -1.0, 1.0));
  }
  return sine_field(dom, idx, amps);
}

DiscreteField random_field(const DomainPtr& dom, Rng& rng) {
  switch (uniform_int(rng, 3)) {
    case 0:
      return random_hat_field(dom, rng);
    case 1:
      return random_nodal_field(dom, rng);
    default:
      return random_smooth_field(dom, rng);
  }
}

double sample_embedding_constant(const Discretization& disc, const ScalarMap& p, int samples,
                                 std::uint64_t seed) {
  const auto& dom = disc.domain_ptr();
  Rng rng(seed);
  double best = 0.0;
  auto consider = [&](const DiscreteField& u) {
    const double x0 = gagliardo_norm(disc, u);
    if (x0 <= 0.0) return;
    best = std::max(best, luxemburg_norm(disc, u, p) / x0);
  };
  consider(sine_field(dom, {{1, 1}}, {1.0}));
  for (int k = 0; k < samples; ++k) {
    auto u = random_field(dom, rng);
    // The scale matters for variable exponents; spread it over decades.
    consider(u.scaled(std::pow(10.0, uniform(rng, -2.0, 2.0))));
  }
  return best;
}

}  // namespace kirchfrac

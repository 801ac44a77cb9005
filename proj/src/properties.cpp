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

#include "kirchfrac/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kirchfrac/random_fields.hpp"

namespace kirchfrac {

using nlohmann::json;

namespace {

constexpr int kVanishingSteps = 20;
constexpr int kMaxRecorded = 10;

double sandwich_margin(double rho, double norm, double p_lo, double p_hi) {
  if (norm < 1.0) return std::min(rho - std::pow(norm, p_hi), std::pow(norm, p_lo) - rho);
  if (norm > 1.0) return std::min(rho - std::pow(norm, p_lo), std::pow(norm, p_hi) - rho);
  return -std::abs(rho - 1.0);
}

json field_json(const DiscreteField& u) { return u.nodal(); }

DiscreteField straddling_field(const EnergyProblem& problem, Rng& rng) {
  DiscreteField u = random_field(problem.domain_ptr(), rng);
  while (u.is_zero()) u = random_field(problem.domain_ptr(), rng);
  const double target = std::pow(10.0, -0.5 + std::generate_canonical<double, 53>(rng));
  return u.scaled(target / gagliardo_norm(problem.disc(), u));
}

}  // namespace

nlohmann::json DirectionalCheck::to_json() const {
  return {{"exact", exact},     {"scale", scale}, {"errors", errors}, {"order", order},
          {"relative_error", relative_error}, {"passed", passed()}};
}

DirectionalCheck directional_check(const EnergyProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& du, const Eigen::VectorXd& dv) {
  const Gradient g = gateaux_gradient(problem, u, v);
  DirectionalCheck out;
  out.exact = g.g_u.dot(du) + g.g_v.dot(dv);
  out.scale = g.g_u.cwiseAbs().dot(du.cwiseAbs()) + g.g_v.cwiseAbs().dot(dv.cwiseAbs());
  double eps = 1e-3;
  double best = std::numeric_limits<double>::infinity();
  for (double& e : out.errors) {
    const double fd = (energy(problem, u + eps * du, v + eps * dv) - energy(problem, u - eps * du, v - eps * dv)) /
                      (2.0 * eps);
    e = std::abs(fd - out.exact);
    best = std::min(best, e);
    eps /= 10.0;
  }
  out.order = std::log10(out.errors[0] / out.errors[1]);
  out.relative_error = out.scale > 0.0 ? best / out.scale : best;
  return out;
}

std::vector<PropertyMargin> property_margins(const EnergyProblem& problem, const DiscreteField& u,
                                             const DiscreteField& v) {
  const Discretization& disc = problem.disc();
  if (!u.domain().same_grid(problem.domain()) || !v.domain().same_grid(problem.domain())) {
    throw PreconditionError("fields live on a different grid");
  }
  if (u.is_zero() || v.is_zero()) throw PreconditionError("property checks need nonzero fields");
  std::vector<PropertyMargin> out;

  const Eigen::VectorXd ud = u.dofs();
  const Eigen::VectorXd vd = v.dofs();
  const ModularSamples samples = disc.pair_samples(ud);
  double p_lo = disc.bounds().p_min;
  double p_hi = disc.bounds().p_max;
  for (double p : samples.exponent) {
    p_lo = std::min(p_lo, p);
    p_hi = std::max(p_hi, p);
  }
  const double rho = samples.evaluate(1.0);
  const double norm = luxemburg_root(samples);

  const Regime rr = regime_of(rho);
  const Regime rn = regime_of(norm);
  const double distance = std::min(std::abs(rho - 1.0), std::abs(norm - 1.0));
  out.push_back({"regime_equivalence", rr == rn ? distance : -distance, 0.0});
  out.push_back({"sandwich", sandwich_margin(rho, norm, p_lo, p_hi), -1e-6});

  double worst_drop = std::numeric_limits<double>::infinity();
  double worst_scale = 0.0;
  double prev = rho;
  for (int j = 2; j <= kVanishingSteps; ++j) {
    const double rj = samples.evaluate(j);
    worst_drop = std::min(worst_drop, (prev - rj) / rho);
    prev = rj;
    const double nj = gagliardo_norm(disc, u.scaled(1.0 / j));
    worst_scale = std::max(worst_scale, std::abs(nj * j - norm) / norm);
  }
  out.push_back({"vanishing_sequence", worst_drop, std::numeric_limits<double>::min()});
  out.push_back({"homogeneity", 1e-10 - worst_scale, 0.0});

  const ScalarMap p = problem.exponents().p_bar_map();
  const HolderPairing h = holder_pairing(disc, u, v, p, conjugate_exponent(p));
  out.push_back({"holder", h.rhs > 0.0 ? (h.rhs - h.lhs) / h.rhs : -h.lhs, 0.0});

  const auto& c = problem.constants();
  const CoercivityBound b = coercivity_lower_bound(problem, ud, vd, c.embedding_constant, c.c1);
  out.push_back({"coercivity_chain", b.energy - b.bound, -1e-12 * std::max(1.0, std::abs(b.energy))});

  const auto uq = disc.domain_values(ud);
  const auto vq = disc.domain_values(vd);
  double hmax = 0.0;
  for (std::size_t q = 0; q < uq.size(); ++q) hmax = std::max(hmax, std::abs(problem.potential().H(uq[q], vq[q])));
  out.push_back({"potential_bound", c.c1 - hmax, -1e-12 * std::max(1.0, c.c1)});

  const EnergyTerms terms = energy_terms(problem, ud, vd);
  double mono = std::numeric_limits<double>::infinity();
  for (int which = 1; which <= 2; ++which) {
    const auto& fn = problem.kirchhoff().get(which);
    for (double t : {terms.delta_u, terms.delta_v}) {
      mono = std::min(mono, kirchhoff_antiderivative(fn, 2.0 * t) - kirchhoff_antiderivative(fn, t));
    }
  }
  out.push_back({"antiderivative_monotone", mono, 0.0});

  const Eigen::VectorXd dir = vd / vd.lpNorm<Eigen::Infinity>();
  const auto check = directional_check(problem, ud, vd, dir, Eigen::VectorXd::Zero(vd.size()));
  out.push_back({"gradient_consistency", -std::log10(std::max(check.relative_error, 1e-300)), 5.0});
  return out;
}

json report_properties(const EnergyProblem& problem, std::uint64_t seed, int trials) {
  if (trials < 1) throw PreconditionError("property report needs at least one trial");
  Rng rng(seed);
  std::vector<json> rows;
  std::vector<json> failures;
  std::vector<std::string> names;
  std::vector<int> failed;
  std::vector<double> worst;
  std::vector<int> worst_trial;
  std::vector<double> thresholds;

  for (int trial = 0; trial < trials; ++trial) {
    const DiscreteField u = straddling_field(problem, rng);
    const DiscreteField v = straddling_field(problem, rng);
    const auto margins = property_margins(problem, u, v);
    if (names.empty()) {
      for (const auto& m : margins) {
        names.push_back(m.name);
        thresholds.push_back(m.threshold);
      }
      failed.assign(names.size(), 0);
      worst.assign(names.size(), std::numeric_limits<double>::infinity());
      worst_trial.assign(names.size(), -1);
    }
    json margin_record = json::object();
    bool any = false;
    for (std::size_t k = 0; k < margins.size(); ++k) {
      margin_record[margins[k].name] = margins[k].margin;
      if (margins[k].margin < worst[k]) {
        worst[k] = margins[k].margin;
        worst_trial[k] = trial;
      }
      if (!margins[k].passed()) {
        ++failed[k];
        any = true;
      }
    }
    if (any && static_cast<int>(failures.size()) < kMaxRecorded) {
      json rec = {{"trial", trial}, {"margins", margin_record}, {"u", field_json(u)}, {"v", field_json(v)}};
      json which = json::array();
      for (const auto& m : margins) {
        if (!m.passed()) which.push_back(m.name);
      }
      rec["failed"] = which;
      failures.push_back(std::move(rec));
    }
  }

  json props = json::array();
  int total = 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    props.push_back({{"name", names[k]},
                     {"trials", trials},
                     {"failures", failed[k]},
                     {"threshold", thresholds[k]},
                     {"worst_margin", worst[k]},
                     {"worst_trial", worst_trial[k]}});
    total += failed[k];
  }
  return {{"seed", seed},
          {"trials", trials},
          {"properties", props},
          {"total_failures", total},
          {"passed", total == 0},
          {"failures", failures}};
}

json replay_properties(const EnergyProblem& problem, const json& record) {
  if (!record.contains("u") || !record.contains("v")) {
    throw ConfigError("replay record needs serialized fields 'u' and 'v'");
  }
  std::vector<double> un;
  std::vector<double> vn;
  try {
    un = record.at("u").get<std::vector<double>>();
    vn = record.at("v").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("replay record: {}", e.what()));
  }
  const int nodes = problem.domain().num_nodes();
  if (static_cast<int>(un.size()) != nodes || static_cast<int>(vn.size()) != nodes) {
    throw ConfigError(fmt::format("replay record fields need {} nodal values", nodes));
  }
  const DiscreteField u(problem.domain_ptr(), std::move(un));
  const DiscreteField v(problem.domain_ptr(), std::move(vn));
  json margins = json::object();
  json failed = json::array();
  for (const auto& m : property_margins(problem, u, v)) {
    margins[m.name] = m.margin;
    if (!m.passed()) failed.push_back(m.name);
  }
  json out = {{"margins", margins}, {"failed", failed}};
  if (record.contains("margins")) out["identical"] = record.at("margins") == margins;
  return out;
}

}  // namespace kirchfrac

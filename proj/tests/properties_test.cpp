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

#include <gtest/gtest.h>

#include "kirchfrac/config.hpp"
#include "kirchfrac/properties.hpp"
#include "support/generators.hpp"
#include "support/problems.hpp"

using namespace kirchfrac;
using nlohmann::json;

TEST(Properties, RequiresTrials) {
  auto pr = problems::convex();
  EXPECT_THROW(report_properties(*pr, 1, 0), PreconditionError);
}

TEST(Properties, SuitePassesOnPresets) {
  for (const char* name : {"convex", "variable", "singular", "kirchhoff"}) {
    auto pr = build_problem(preset_problem(name));
    const json rep = report_properties(*pr, 3, 25);
    EXPECT_TRUE(rep["passed"].get<bool>()) << name << rep.dump(1);
    EXPECT_EQ(rep["properties"].size(), 9u);
    for (const auto& p : rep["properties"]) {
      EXPECT_EQ(p["trials"].get<int>(), 25);
      EXPECT_GE(p["worst_margin"].get<double>(), p["threshold"].get<double>()) << name << p.dump();
    }
  }
}

TEST(Properties, DeterministicForSeed) {
  auto pr = problems::variable();
  EXPECT_EQ(report_properties(*pr, 42, 5).dump(), report_properties(*pr, 42, 5).dump());
  EXPECT_NE(report_properties(*pr, 42, 5).dump(), report_properties(*pr, 43, 5).dump());
}

TEST(Properties, FailuresAreRecordedAndReplay) {
  // An embedding constant far below the true one drops the load term from
  // the lower bound, so the chain breaks for fields aligned with the load.
  json p = preset_problem("variable");
  p["sources"]["a"] = {{"preset", "constant"}, {"value", 5.0}};
  p["validation"]["embedding_constant"] = 1e-9;
  auto pr = build_problem(p);
  const json rep = report_properties(*pr, 7, 30);
  ASSERT_FALSE(rep["passed"].get<bool>());
  ASSERT_FALSE(rep["failures"].empty());
  const json& rec = rep["failures"][0];
  EXPECT_NE(std::find(rec["failed"].begin(), rec["failed"].end(), "coercivity_chain"), rec["failed"].end());
  const json round = json::parse(rep.dump());
  const json again = replay_properties(*pr, round["failures"][0]);
  EXPECT_TRUE(again["identical"].get<bool>());
  EXPECT_EQ(again["failed"], rec["failed"]);
}

TEST(Properties, ReplayRejectsBadRecords) {
  auto pr = problems::convex();
  EXPECT_THROW(replay_properties(*pr, json{{"u", {1.0}}}), ConfigError);
  EXPECT_THROW(replay_properties(*pr, json{{"u", {1.0}}, {"v", {1.0}}}), ConfigError);
}

TEST(Properties, MarginsOnKnownField) {
  auto pr = problems::convex();
  const auto u = DiscreteField::interpolate(pr->domain_ptr(), [](const Point& x) { return std::sin(3.0 * x[0]); });
  const auto margins = property_margins(*pr, u, u.scaled(0.5));
  for (const auto& m : margins) EXPECT_TRUE(m.passed()) << m.name << " " << m.margin;
  EXPECT_THROW(property_margins(*pr, u, DiscreteField::zero(pr->domain_ptr())), PreconditionError);
}

TEST(DirectionalCheck, QuadraticEnergyIsExactAtEveryStep) {
  auto pr = problems::convex();
  gen::Source src(3);
  const auto u = gen::field(pr->domain_ptr(), src).dofs();
  const auto d = gen::field(pr->domain_ptr(), src).dofs();
  const auto z = Eigen::VectorXd::Zero(u.size());
  const auto c = directional_check(*pr, u, z, d, z);
  EXPECT_TRUE(c.passed());
  EXPECT_LT(c.relative_error, 1e-9);
}

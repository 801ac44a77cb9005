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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "kirchfrac/config.hpp"
#include "kirchfrac/io.hpp"
#include "support/generators.hpp"
#include "support/problems.hpp"

using namespace kirchfrac;
using nlohmann::json;

namespace {

json minimal(const std::string& preset = "convex") {
  return {{"task", "validate"}, {"problem", {{"preset", preset}}}};
}

}  // namespace

TEST(Config, ShippedFilesMatchPresets) {
  for (const auto& name : problem_presets()) {
    const auto cfg = load_run_config(std::string(KIRCHFRAC_SOURCE_DIR) + "/configs/" + name + ".json");
    EXPECT_EQ(cfg.problem, preset_problem(name)) << name;
    EXPECT_EQ(cfg.name, name);
  }
}

TEST(Config, EveryPresetValidates) {
  for (const auto& name : problem_presets()) {
    auto pr = build_problem(preset_problem(name));
    EXPECT_TRUE(pr->report().passed()) << name;
  }
}

TEST(Config, PresetCellsOverride) {
  json doc = minimal();
  doc["problem"]["cells"] = {24};
  const auto cfg = parse_run_config(doc);
  EXPECT_EQ(build_problem(cfg.problem)->domain().omega_cells(0), 24);
}

TEST(Config, Defaults) {
  const auto cfg = parse_run_config(minimal());
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.threads, 1);
  EXPECT_EQ(cfg.trials, 100);
  EXPECT_EQ(cfg.minimizer.max_iterations, 500);
  EXPECT_EQ(cfg.minimizer.gradient_tolerance, 1e-4);
  EXPECT_EQ(cfg.scales, (std::vector<double>{1, 2, 4, 8, 16}));
}

TEST(Config, RejectsMalformedDocuments) {
  auto bad = [](json doc) { EXPECT_THROW(parse_run_config(doc), ConfigError) << doc.dump(); };
  json d = minimal();
  d["colour"] = 1;
  bad(d);
  d = minimal();
  d["task"] = "dance";
  bad(d);
  bad({{"task", "validate"}});
  d = minimal();
  d["seed"] = -3;
  bad(d);
  d = minimal();
  d["threads"] = 0;
  bad(d);
  d = minimal();
  d["minimizer"] = {{"backtrack", 1.5}};
  bad(d);
  d = minimal();
  d["scan"] = {{"scales", {2.0, 1.0}}};
  bad(d);
  d = minimal();
  d["minimizer"] = {{"max_iterations", "many"}};
  bad(d);
  d = minimal("nonesuch");
  bad(d);
}

TEST(Config, RejectsMalformedProblems) {
  auto bad = [](const std::function<void(json&)>& edit) {
    json p = preset_problem("variable");
    edit(p);
    EXPECT_THROW(build_problem(p), ConfigError) << p.dump();
  };
  bad([](json& p) { p["domain"]["dim"] = 3; });
  bad([](json& p) { p["domain"]["cells"] = {0}; });
  bad([](json& p) { p["domain"]["cells"] = {2.5}; });
  bad([](json& p) { p["domain"]["lo"] = {0.0, 0.0}; });
  bad([](json& p) { p["exponents"]["p"] = {{"preset", "cubic"}}; });
  bad([](json& p) { p["exponents"]["p"]["extra"] = 1; });
  bad([](json& p) { p["kirchhoff"]["M1"] = {{"preset", "tabulated"}, {"t", {0.0, 0.0}}, {"values", {1.0, 1.0}}}; });
  bad([](json& p) { p["potential"] = {{"preset", "sincos"}, {"alpha", 1.0}, {"period", -1.0}}; });
  bad([](json& p) { p["sources"]["a"] = {{"preset", "nodal"}, {"values", {1.0}}}; });
  bad([](json& p) { p["quadrature"]["levels"] = 0; });
  bad([](json& p) { p["validation"]["embedding_safety"] = 0.5; });
  bad([](json& p) { p["kirchhoff"]["m"] = "half"; });
}

TEST(Config, InvalidProblemRaisesValidationError) {
  json p = preset_problem("convex");
  p["kirchhoff"]["M1"] = {{"preset", "constant"}, {"value", 0.5}};
  EXPECT_THROW(build_problem(p), ValidationError);
  p = preset_problem("convex");
  p["exponents"]["s"]["value"] = 0.6;
  EXPECT_THROW(build_problem(p), ValidationError);
}

TEST(Config, TabulatedAndNodalSources) {
  json p = preset_problem("convex");
  p["kirchhoff"]["M1"] = {{"preset", "tabulated"}, {"t", {0.0, 1.0, 10.0}}, {"values", {1.0, 2.0, 3.0}}};
  auto dom = std::make_shared<const DomainSpec>(build_domain(p["domain"]));
  std::vector<double> values(dom->num_nodes(), 0.25);
  p["sources"]["a"] = {{"preset", "nodal"}, {"values", values}};
  auto pr = build_problem(p);
  EXPECT_DOUBLE_EQ(pr->kirchhoff().m1(0.5), 1.5);
  EXPECT_NEAR(pr->constants().norm_a, 0.25, 1e-12);
}

TEST(Config, ParseErrorsBecomeConfigErrors) {
  const std::string path = ::testing::TempDir() + "broken.json";
  std::ofstream(path) << "{\"task\": \"validate\", ";
  EXPECT_THROW(load_run_config(path), ConfigError);
  EXPECT_THROW(load_run_config(::testing::TempDir() + "missing.json"), ConfigError);
}

TEST(Config, Fields) {
  auto dom = std::make_shared<const DomainSpec>(problems::interval(8));
  EXPECT_TRUE(build_field({{"preset", "zero"}}, dom, 1).is_zero());
  const auto s = build_field({{"preset", "sine"}, {"mode", 1}, {"amplitude", 2.0}}, dom, 1);
  EXPECT_NEAR(s.sup_norm(), 2.0, 1e-12);
  const auto r1 = build_field({{"preset", "random"}, {"amplitude", 0.1}}, dom, 5);
  const auto r2 = build_field({{"preset", "random"}, {"amplitude", 0.1}}, dom, 5);
  EXPECT_EQ(r1.nodal(), r2.nodal());
  EXPECT_LE(r1.sup_norm(), 0.1);
  std::vector<double> values(dom->num_nodes(), 0.0);
  values[dom->dof_to_node(3)] = 1.5;
  EXPECT_EQ(build_field({{"preset", "nodal"}, {"values", values}}, dom, 1).nodal(), values);
  values[0] = 1.0;
  EXPECT_THROW(build_field({{"preset", "nodal"}, {"values", values}}, dom, 1), ConfigError);
  EXPECT_THROW(build_field({{"preset", "sine"}, {"mode", 0}}, dom, 1), ConfigError);
}

TEST(FieldCsv, RoundTrip) {
  gen::Source src(1);
  std::vector<DomainSpec> doms{problems::interval(8), problems::square(4),
                               DomainSpec::box(2, {0.0, 0.0}, {2.0, 1.0}, {4, 2}, {2, 3})};
  std::vector<bool> mask(16, true);
  mask[5] = mask[6] = false;
  doms.push_back(problems::square(4).with_mask(mask));
  for (const auto& d : doms) {
    auto dom = std::make_shared<const DomainSpec>(d);
    const auto u = gen::field(dom, src);
    std::stringstream ss;
    write_field_csv(ss, u);
    const auto back = read_field_csv(ss);
    EXPECT_TRUE(back.domain().same_grid(d));
    EXPECT_EQ(back.nodal(), u.nodal());
    std::stringstream again(ss.str());
    EXPECT_EQ(read_field_csv(again, dom).nodal(), u.nodal());
  }
}

TEST(FieldCsv, RejectsMismatchAndGarbage) {
  auto dom = std::make_shared<const DomainSpec>(problems::interval(8));
  auto other = std::make_shared<const DomainSpec>(problems::interval(16));
  std::stringstream ss;
  write_field_csv(ss, DiscreteField::zero(dom));
  EXPECT_THROW(read_field_csv(ss, other), ConfigError);

  std::stringstream no_header("node,x,y,value\n0,0,0,0\n");
  EXPECT_THROW(read_field_csv(no_header), ConfigError);

  std::stringstream full;
  write_field_csv(full, DiscreteField::zero(dom));
  std::string text = full.str();
  text.resize(text.size() - 12);
  std::stringstream truncated(text + "\n");
  EXPECT_THROW(read_field_csv(truncated), ConfigError);

  std::stringstream bad_number(std::string("# kirchfrac-field dim=1 lo=0,0 hi=x,0 cells=8,0 margin=4,0\n"));
  EXPECT_THROW(read_field_csv(bad_number), ConfigError);
}

TEST(Artifacts, TraceResidualPlot) {
  std::vector<TraceEntry> trace(3);
  for (int k = 0; k < 3; ++k) {
    trace[k].iteration = k;
    trace[k].energy = 1.0 / (k + 1);
  }
  std::stringstream t;
  write_trace_csv(t, trace);
  std::string line;
  std::getline(t, line);
  EXPECT_EQ(line, "iter,energy,grad_norm,step,backtracks,certificate,norm_u,norm_v");
  int rows = 0;
  while (std::getline(t, line)) ++rows;
  EXPECT_EQ(rows, 3);

  std::stringstream p;
  write_plotdata(p, trace);
  std::getline(p, line);
  EXPECT_EQ(line[0], '#');
  std::getline(p, line);
  EXPECT_EQ(line, "0 1 0 0");

  WeakResidual r;
  r.r_u = Eigen::VectorXd::Ones(2);
  r.r_v = Eigen::VectorXd::Zero(2);
  std::stringstream rc;
  write_residual_csv(rc, r);
  EXPECT_EQ(rc.str(), "index,r_u,r_v\n0,1,0\n1,1,0\n");
}

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

#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kirchfrac/config.hpp"
#include "kirchfrac/minimizer.hpp"
#include "kirchfrac/properties.hpp"

namespace py = pybind11;
using namespace kirchfrac;
using nlohmann::json;

namespace {

class Problem {
 public:
  explicit Problem(const std::string& problem_json, std::uint64_t seed)
      : spec_(json::parse(problem_json)), problem_(build_problem(spec_, seed)) {}

  const EnergyProblem& get() const { return *problem_; }
  std::string spec() const { return spec_.dump(); }

  DiscreteField field(const Eigen::VectorXd& dofs) const {
    if (dofs.size() != problem_->num_dofs()) {
      throw PreconditionError("expected " + std::to_string(problem_->num_dofs()) + " degrees of freedom");
    }
    return DiscreteField::from_dofs(problem_->domain_ptr(), dofs);
  }

  Eigen::MatrixXd coordinates() const {
    const auto& dom = problem_->domain();
    Eigen::MatrixXd out(dom.num_dofs(), dom.dim());
    for (int d = 0; d < dom.num_dofs(); ++d) {
      const auto x = dom.node_coord(dom.dof_to_node(d));
      for (int k = 0; k < dom.dim(); ++k) out(d, k) = x[k];
    }
    return out;
  }

 private:
  json spec_;
  std::unique_ptr<EnergyProblem> problem_;
};

std::string constants_json(const CoercivityConstants& c) {
  return json{{"embedding_constant", c.embedding_constant}, {"c1", c.c1},         {"norm_a", c.norm_a},
              {"norm_b", c.norm_b},                         {"p_min", c.p_min},   {"p_max", c.p_max},
              {"omega_measure", c.omega_measure}}
      .dump();
}

py::dict result_dict(const MinimizerResult& r) {
  py::dict d;
  d["u"] = r.u.dofs();
  d["v"] = r.v.dofs();
  d["summary"] = r.to_json().dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of kirchfrac";

  // Translators run newest first, so the base class goes in before its subclasses.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<StallError>(m, "StallError", base.ptr());

  m.def("problem_presets", &problem_presets);
  m.def("preset_problem", [](const std::string& name) { return preset_problem(name).dump(); });

  py::class_<Problem>(m, "Problem")
      .def(py::init<const std::string&, std::uint64_t>(), py::arg("problem_json"), py::arg("seed") = 1)
      .def_property_readonly("spec", &Problem::spec)
      .def_property_readonly("num_dofs", [](const Problem& p) { return p.get().num_dofs(); })
      .def_property_readonly("dim", [](const Problem& p) { return p.get().domain().dim(); })
      .def_property_readonly("report", [](const Problem& p) { return p.get().report().to_json().dump(); })
      .def_property_readonly("constants", [](const Problem& p) { return constants_json(p.get().constants()); })
      .def("coordinates", &Problem::coordinates)
      .def("energy",
           [](const Problem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
             p.field(u);
             p.field(v);
             return energy(p.get(), u, v);
           })
      .def("gradient",
           [](const Problem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
             p.field(u);
             p.field(v);
             const auto g = gateaux_gradient(p.get(), u, v);
             return py::make_tuple(g.g_u, g.g_v);
           })
      .def("fractional_modular",
           [](const Problem& p, const Eigen::VectorXd& u) { return fractional_modular(p.get().disc(), p.field(u)); })
      .def("weighted_modular",
           [](const Problem& p, const Eigen::VectorXd& u) {
             return weighted_modular_delta(p.get().disc(), p.field(u));
           })
      .def("gagliardo_norm",
           [](const Problem& p, const Eigen::VectorXd& u) { return gagliardo_norm(p.get().disc(), p.field(u)); })
      .def("luxemburg_norm",
           [](const Problem& p, const Eigen::VectorXd& u, double exponent) {
             return luxemburg_norm(p.get().disc(), p.field(u), [exponent](const Point&) { return exponent; });
           })
      .def(
          "minimize",
          [](const Problem& p, std::optional<Eigen::VectorXd> u0, std::optional<Eigen::VectorXd> v0,
             const std::string& config_json, std::uint64_t seed) {
            auto cfg = parse_minimizer_config(json::parse(config_json));
            cfg.seed = seed;
            std::optional<MinimizerResult> r;
            {
              py::gil_scoped_release release;
              if (u0 && v0) {
                r.emplace(minimize(p.get(), p.field(*u0), p.field(*v0), cfg));
              } else if (!u0 && !v0) {
                r.emplace(minimize(p.get(), cfg));
              } else {
                throw PreconditionError("give both u0 and v0 or neither");
              }
            }
            return result_dict(*r);
          },
          py::arg("u0") = py::none(), py::arg("v0") = py::none(), py::arg("config_json") = "{}",
          py::arg("seed") = 1)
      .def(
          "properties",
          [](const Problem& p, std::uint64_t seed, int trials) {
            json rep;
            {
              py::gil_scoped_release release;
              rep = report_properties(p.get(), seed, trials);
            }
            return rep.dump();
          },
          py::arg("seed") = 1, py::arg("trials") = 100)
      .def("ray_scan", [](const Problem& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                          const std::vector<double>& scales) {
        const auto rows = coercivity_ray_scan(p.get(), p.field(u), p.field(v), scales);
        Eigen::MatrixXd out(rows.size(), 3);
        for (std::size_t k = 0; k < rows.size(); ++k) out.row(k) << rows[k].scale, rows[k].energy, rows[k].bound;
        return out;
      });
}

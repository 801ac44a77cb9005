# Copyright 2026 The kirchfrac Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import kirchfrac


def test_presets_roundtrip():
    names = kirchfrac.presets()
    assert "convex" in names and "planar" in names
    spec = kirchfrac.preset("variable")
    assert kirchfrac.Problem(spec).spec == spec


def test_quadratic_modular_and_norm():
    pr = kirchfrac.Problem("convex")
    u = pr.interpolate(lambda x: np.sin(np.pi * x[0]))
    rho = pr.fractional_modular(u)
    assert pr.gagliardo_norm(u) == pytest.approx(np.sqrt(rho), rel=1e-10)
    assert pr.weighted_modular(u) == pytest.approx(rho / 2, rel=1e-12)
    assert pr.energy(u, u) == pytest.approx(rho, rel=1e-12)
    assert pr.luxemburg_norm(2 * u, 2.0) == pytest.approx(2 * pr.luxemburg_norm(u, 2.0), rel=1e-10)


def test_gradient_matches_difference_quotient():
    pr = kirchfrac.Problem("variable", cells=[8])
    rng = np.random.default_rng(3)
    u, v = rng.uniform(-0.5, 0.5, (2, pr.num_dofs))
    gu, gv = pr.gradient(u, v)
    d = rng.standard_normal(pr.num_dofs)
    eps = 1e-5
    fd = (pr.energy(u + eps * d, v) - pr.energy(u - eps * d, v)) / (2 * eps)
    assert fd == pytest.approx(gu @ d, rel=1e-6, abs=1e-9)
    assert gv.shape == (pr.num_dofs,)


def test_minimize_convex():
    pr = kirchfrac.Problem("convex")
    r = pr.minimize(gradient_tolerance=1e-6, seed=4)
    assert r["termination"] == "converged"
    assert r["energy"] <= 1e-8
    assert np.max(np.abs(r["u"])) <= 1e-4
    sing = kirchfrac.Problem("singular")
    z = np.zeros(sing.num_dofs)
    assert sing.minimize(z, z, max_iterations=5)["perturbed_origin"]


def test_properties_and_scan():
    pr = kirchfrac.Problem("kirchhoff")
    rep = pr.properties(seed=2, trials=5)
    assert rep["passed"] and len(rep["properties"]) == 9
    u = pr.interpolate(lambda x: np.sin(np.pi * x[0]))
    rows = pr.ray_scan(u, 0 * u)
    assert rows.shape == (5, 3)
    assert np.all(rows[:, 1] >= rows[:, 2])


def test_errors():
    with pytest.raises(kirchfrac.ConfigError):
        kirchfrac.preset("nonesuch")
    spec = kirchfrac.preset("convex")
    spec["exponents"]["s"]["value"] = 0.7
    with pytest.raises(kirchfrac.ValidationError):
        kirchfrac.Problem(spec)
    pr = kirchfrac.Problem("convex")
    with pytest.raises(kirchfrac.PreconditionError):
        pr.energy(np.zeros(3), np.zeros(3))
    with pytest.raises(kirchfrac.ConfigError):
        pr.minimize(backtrack=2.0)
    assert issubclass(kirchfrac.ConfigError, kirchfrac.Error)
    assert json.loads(json.dumps(pr.constants))["p_min"] == 2.0

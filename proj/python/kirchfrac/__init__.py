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

"""Variable-order fractional Kirchhoff systems: energies, norms and a descent solver."""

from __future__ import annotations

import json
from typing import Any, Mapping, Sequence

import numpy as np

from . import _core
from ._core import ConfigError, Error, PreconditionError, StallError, ValidationError

__all__ = [
    "ConfigError",
    "Error",
    "PreconditionError",
    "Problem",
    "StallError",
    "ValidationError",
    "preset",
    "presets",
]


def presets() -> list[str]:
    return list(_core.problem_presets())


def preset(name: str) -> dict[str, Any]:
    """Explicit problem section of a named preset."""
    return json.loads(_core.preset_problem(name))


class Problem:
    """A validated energy problem built from a problem section (dict) or preset name."""

    def __init__(self, spec: Mapping[str, Any] | str, *, cells: Sequence[int] | None = None, seed: int = 1):
        section = preset(spec) if isinstance(spec, str) else dict(spec)
        if cells is not None:
            section = json.loads(json.dumps(section))
            section["domain"]["cells"] = list(cells)
        self._core = _core.Problem(json.dumps(section), seed)

    @property
    def spec(self) -> dict[str, Any]:
        return json.loads(self._core.spec)

    @property
    def num_dofs(self) -> int:
        return self._core.num_dofs

    @property
    def dim(self) -> int:
        return self._core.dim

    @property
    def report(self) -> dict[str, Any]:
        return json.loads(self._core.report)

    @property
    def constants(self) -> dict[str, float]:
        return json.loads(self._core.constants)

    def coordinates(self) -> np.ndarray:
        """Coordinates of the degrees of freedom, shape (num_dofs, dim)."""
        return self._core.coordinates()

    def interpolate(self, f) -> np.ndarray:
        """Degrees of freedom of the nodal interpolant of f(x) with x of shape (dim,)."""
        return np.array([f(x) for x in self.coordinates()], dtype=float)

    def energy(self, u, v) -> float:
        return self._core.energy(_vec(u), _vec(v))

    def gradient(self, u, v) -> tuple[np.ndarray, np.ndarray]:
        return self._core.gradient(_vec(u), _vec(v))

    def fractional_modular(self, u) -> float:
        return self._core.fractional_modular(_vec(u))

    def weighted_modular(self, u) -> float:
        return self._core.weighted_modular(_vec(u))

    def gagliardo_norm(self, u) -> float:
        return self._core.gagliardo_norm(_vec(u))

    def luxemburg_norm(self, u, exponent: float) -> float:
        return self._core.luxemburg_norm(_vec(u), float(exponent))

    def minimize(self, u0=None, v0=None, *, seed: int = 1, **config) -> dict[str, Any]:
        """Descent from (u0, v0), or from a seeded random start when both are omitted.

        Keyword arguments are minimizer settings such as gradient_tolerance or
        max_iterations. The result holds the summary fields plus arrays u and v.
        """
        out = self._core.minimize(
            None if u0 is None else _vec(u0),
            None if v0 is None else _vec(v0),
            json.dumps(config),
            seed,
        )
        result = json.loads(out["summary"])
        result["u"] = np.asarray(out["u"])
        result["v"] = np.asarray(out["v"])
        return result

    def properties(self, *, seed: int = 1, trials: int = 100) -> dict[str, Any]:
        return json.loads(self._core.properties(seed, trials))

    def ray_scan(self, u, v, scales: Sequence[float] = (1, 2, 4, 8, 16)) -> np.ndarray:
        """Rows (scale, energy, lower bound) along t (u, v)."""
        return self._core.ray_scan(_vec(u), _vec(v), [float(s) for s in scales])


def _vec(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=float).reshape(-1)

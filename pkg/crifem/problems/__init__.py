# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Built-in experiments on the square (-1, 1)^2. Each preset is a set of
configuration keys (see :mod:`crifem.config`) that is merged below user
supplied values.
"""

from dataclasses import dataclass
from typing import Callable, Optional

from ..curves import INTERFACES
from ..elements import MaterialParams
from ..levelset import LevelSet
from .manufactured import ManufacturedSolution
from .unknown import EllipseLoad, zero_displacement

EXAMPLES = {
    "1a": {"interface": "circle", "r0": 0.36, "mu_minus": 1.0, "mu_plus": 100.0, "lambda_ratio": 5.0},
    "1b": {"interface": "circle", "r0": 0.48, "mu_minus": 1.0, "mu_plus": 10.0, "lambda_ratio": 5.0},
    "2a": {"interface": "circle", "r0": 0.7, "mu_minus": 1.0, "mu_plus": 10.0, "lambda_ratio": 100.0},
    "2b": {"interface": "circle", "r0": 0.6, "mu_minus": 1.0, "mu_plus": 10.0, "lambda_ratio": 1000.0},
    "3a": {"interface": "ellipse", "r0": 0.4, "mu_minus": 1.0, "mu_plus": 10.0, "lambda_ratio": 5.0},
    "3b": {"interface": "ellipse", "r0": 0.3, "mu_minus": 1.0, "mu_plus": 100.0, "lambda_ratio": 5.0},
    "4": {"interface": "ellipse", "r0": 0.3, "mu_minus": 1.0, "mu_plus": 100.0,
        "nu_minus": 0.28, "nu_plus": 0.4, "body_force": "unknown"},
}

@dataclass(frozen=True, eq=False)
class Problem:
    """
    Attributes:
        level_set: True interface.
        material: Lame parameters per side.
        body_force: Load f mapping points (..., 2) to (..., 2), or None.
        boundary: Dirichlet data g.
        exact: Manufactured solution, None when no exact solution is known.
    """
    level_set: LevelSet
    material: MaterialParams
    body_force: Optional[Callable]
    boundary: Callable
    exact: Optional[ManufacturedSolution]

def make_level_set(kind: str, r0: float=None, gamma: float=None) -> LevelSet:
    cls = INTERFACES[kind]
    return cls(gamma) if kind == "line" else cls(r0)

def make_problem(level_set: LevelSet, material: MaterialParams, body_force: str) -> Problem:
    """
    Args:
        body_force: "manufactured" (exact solution known, boundary data taken
            from it), "unknown" (elliptic load with zero boundary data) or
            "zero" (no load, zero boundary data).
    """
    if body_force == "manufactured":
        exact = ManufacturedSolution(level_set, material)
        return Problem(level_set, material, exact.body_force, exact.displacement, exact)
    if body_force == "unknown":
        return Problem(level_set, material, EllipseLoad(level_set, material), zero_displacement, None)
    if body_force == "zero":
        return Problem(level_set, material, None, zero_displacement, None)
    raise ValueError(f"unknown body force {body_force!r}")

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import numpy as np

from ..elements import MaterialParams
from ..levelset import LevelSet

class EllipseLoad:
    """
    Body force F = (-11/4 - c_s x, -29/4 - c_s y) with c_s = lambda_s / mu_s
    taken on the side of the true interface. No closed-form solution is
    known for this load.
    """

    def __init__(self, level_set: LevelSet, material: MaterialParams):
        self.level_set = level_set
        self.material = material

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        plus = self.level_set(points) > 0
        mat = self.material
        ratio = np.where(plus, mat.lambda_plus/mat.mu_plus, mat.lambda_minus/mat.mu_minus)
        fx = -11/4 - ratio*points[..., 0]
        fy = -29/4 - ratio*points[..., 1]
        return np.stack([fx, fy], axis=-1)

def zero_displacement(points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return np.zeros(points.shape)

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import numpy as np

from ..elements import MaterialParams
from ..levelset import LevelSet

class ManufacturedSolution:
    """
    Exact solution u = L(x, y) (x, y) / mu_s for a quadratic level set L,
    where s is the side of the point with respect to the true interface.
    It is continuous across L = 0, and its traction is continuous there as
    long as lambda_s = c mu_s with a common ratio c on both sides.

    The body force is f = -div sigma(u)
      = -[5 grad L + p lap L + H p + c_s (3 grad L + H p)]
    with p = (x, y), H the Hessian of L and c_s = lambda_s / mu_s.
    """

    def __init__(self, level_set: LevelSet, material: MaterialParams):
        self.level_set = level_set
        self.material = material

    def plus(self, points) -> np.ndarray:
        """Boolean mask of points on the plus side of the true interface."""
        return self.level_set(points) > 0

    def _side_values(self, points, plus_value, minus_value):
        return np.where(self.plus(points), plus_value, minus_value)

    def mu(self, points) -> np.ndarray:
        return self._side_values(points, self.material.mu_plus, self.material.mu_minus)

    def lam(self, points) -> np.ndarray:
        return self._side_values(points, self.material.lambda_plus, self.material.lambda_minus)

    def displacement(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return (self.level_set(points)/self.mu(points))[..., None]*points

    def __call__(self, points) -> np.ndarray:
        return self.displacement(points)

    def gradient(self, points) -> np.ndarray:
        """Row c is the gradient of component c, shape (..., 2, 2)."""
        points = np.asarray(points, dtype=float)
        grad_l = self.level_set.gradient(points)
        value = self.level_set(points)
        g = value[..., None, None]*np.eye(2) + points[..., :, None]*grad_l[..., None, :]
        return g/self.mu(points)[..., None, None]

    def divergence(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        value = self.level_set(points)
        grad_l = self.level_set.gradient(points)
        return (2*value + np.einsum("...k,...k->...", points, grad_l))/self.mu(points)

    def stress(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        g = self.gradient(points)
        eps = 0.5*(g + np.swapaxes(g, -1, -2))
        div = self.divergence(points)
        return 2*self.mu(points)[..., None, None]*eps + (self.lam(points)*div)[..., None, None]*np.eye(2)

    def body_force(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        grad_l = self.level_set.gradient(points)
        hess = self.level_set.hessian(points)
        hp = np.einsum("...ij,...j->...i", hess, points)
        lap = self.level_set.laplacian(points)
        ratio = self.lam(points)/self.mu(points)
        return -(5*grad_l + lap[..., None]*points + hp + ratio[..., None]*(3*grad_l + hp))

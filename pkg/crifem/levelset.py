# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Implicit interface descriptions. The interface is the zero set of a level
set function L; L > 0 marks the plus subdomain and L < 0 the minus
subdomain. All evaluators are vectorized over trailing point arrays of
shape (..., 2).
"""

from abc import ABC, abstractmethod

import numpy as np

BISECTION_STEPS = 50
SIGN_SAMPLES = 100

class LevelSet(ABC):
    """
    Subclasses implement the evaluator, its gradient and its Hessian.
    """
    kind = "custom"

    @abstractmethod
    def __call__(self, points) -> np.ndarray:
        pass

    @abstractmethod
    def gradient(self, points) -> np.ndarray:
        """Gradient, shape (..., 2)."""
        pass

    @abstractmethod
    def hessian(self, points) -> np.ndarray:
        """Hessian, shape (..., 2, 2)."""
        pass

    def laplacian(self, points) -> np.ndarray:
        return np.trace(self.hessian(points), axis1=-2, axis2=-1)

    def sign(self, points) -> np.ndarray:
        return np.sign(self(points)).astype(np.int8)

    def bisect_roots(self, p, q) -> np.ndarray:
        """
        Locates the zero of L on each segment p[i] -> q[i] (arrays of shape
        (n, 2)) by bisection. L must change sign along every segment.

        Returns:
            Parameters t in [0, 1] with L(p + t (q - p)) ~ 0.
        """
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        lo = np.zeros(p.shape[0])
        hi = np.ones(p.shape[0])
        f_lo = self(p)
        for _ in range(BISECTION_STEPS):
            mid = 0.5*(lo + hi)
            f_mid = self(p + mid[:, None]*(q - p))
            same = np.sign(f_mid) == np.sign(f_lo)
            lo = np.where(same, mid, lo)
            f_lo = np.where(same, f_mid, f_lo)
            hi = np.where(same, hi, mid)
        return 0.5*(lo + hi)

    def edge_roots(self, p, q) -> np.ndarray:
        return self.bisect_roots(p, q)

    def count_sign_changes(self, p, q, samples: int=SIGN_SAMPLES) -> np.ndarray:
        """Number of sign changes of L sampled at samples+1 points per segment."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        t = np.linspace(0, 1, samples + 1)
        s = np.sign(self(p[:, None, :] + t[None, :, None]*(q - p)[:, None, :]))
        return np.count_nonzero(s[:, :-1]*s[:, 1:] < 0, axis=1)

class QuadraticLevelSet(LevelSet):
    """
    L(x, y) = axx x^2 + ayy y^2 + ax x + ay y + a0.

    Roots along segments are computed in closed form.
    """

    def __init__(self, axx: float=0.0, ayy: float=0.0, ax: float=0.0,
            ay: float=0.0, a0: float=0.0):
        self.axx = float(axx)
        self.ayy = float(ayy)
        self.ax = float(ax)
        self.ay = float(ay)
        self.a0 = float(a0)

    def __repr__(self):
        return (f"{self.__class__.__name__}(axx={self.axx}, ayy={self.ayy}, "
            f"ax={self.ax}, ay={self.ay}, a0={self.a0})")

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        x = points[..., 0]
        y = points[..., 1]
        return self.axx*x*x + self.ayy*y*y + self.ax*x + self.ay*y + self.a0

    def gradient(self, points):
        points = np.asarray(points, dtype=float)
        gx = 2*self.axx*points[..., 0] + self.ax
        gy = 2*self.ayy*points[..., 1] + self.ay
        return np.stack([gx, gy], axis=-1)

    def hessian(self, points):
        points = np.asarray(points, dtype=float)
        hess = np.array([[2*self.axx, 0.0], [0.0, 2*self.ayy]])
        return np.broadcast_to(hess, points.shape[:-1] + (2, 2))

    def edge_roots(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        d = q - p
        a = self.axx*d[:, 0]**2 + self.ayy*d[:, 1]**2
        b = (2*self.axx*p[:, 0] + self.ax)*d[:, 0] + (2*self.ayy*p[:, 1] + self.ay)*d[:, 1]
        c = self(p)
        disc = np.sqrt(np.maximum(b*b - 4*a*c, 0.0))
        # Stable quadratic formula; the second root avoids cancellation.
        qq = -0.5*(b + np.where(b >= 0, disc, -disc))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = np.where(a != 0, qq/a, np.inf)
            t2 = np.where(qq != 0, c/qq, np.inf)

        def outside(t):
            return np.maximum(np.maximum(-t, t - 1), 0.0)

        t = np.where(outside(t1) <= outside(t2), t1, t2)
        return np.clip(t, 0.0, 1.0)

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Gauss-type quadrature on the reference triangle (0,0), (1,0), (0,1) and on
the unit interval [0, 1], and their affine push-forward to physical
triangles and segments.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidInputError

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    Attributes:
        points: Reference coordinates, shape (q, 2) for triangle rules and
            (q,) for segment rules.
        weights: Positive weights summing to the reference measure (1/2 for
            the triangle, 1 for the interval).
        degree: Polynomials up to this total degree are integrated exactly.
    """
    points: np.ndarray
    weights: np.ndarray
    degree: int

def _symmetric_orbits(orbits):
    """Expands barycentric orbits (weight, a, b) into points and weights."""
    bary = []
    weights = []
    for w, a, b in orbits:
        if a is None:
            perms = [(1/3, 1/3, 1/3)]
        elif b is None:
            c = 1 - 2*a
            perms = [(a, a, c), (a, c, a), (c, a, a)]
        else:
            c = 1 - a - b
            perms = [(a, b, c), (b, c, a), (c, a, b), (b, a, c), (a, c, b), (c, b, a)]
        bary.extend(perms)
        weights.extend([w]*len(perms))
    bary = np.array(bary)
    # Reference coordinates are the barycentric weights of vertices 1 and 2.
    return bary[:, 1:], 0.5*np.array(weights)

_TRIANGLE_ORBITS = {
    1: [(1.0, None, None)],
    2: [(1/3, 1/6, None)],
    4: [
        (0.22338158967801146570, 0.44594849091596488632, None),
        (0.10995174365532186764, 0.09157621350977074346, None),
    ],
    6: [
        (0.11678627572637936603, 0.24928674517091042129, None),
        (0.05084490637020681692, 0.06308901449150222834, None),
        (0.08285107561837357519, 0.05314504984481694735, 0.31035245103378440542),
    ],
}

_SEGMENT_POINTS = {1: 1, 3: 2, 5: 3}

@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> QuadratureRule:
    """
    Symmetric rule on the reference triangle. Supported degrees are 1
    (centroid), 2 (three interior points), 4 (six points) and 6 (twelve
    points).
    """
    if degree not in _TRIANGLE_ORBITS:
        raise InvalidInputError(f"unsupported triangle quadrature degree {degree}, "
            f"choose from {sorted(_TRIANGLE_ORBITS)}")
    points, weights = _symmetric_orbits(_TRIANGLE_ORBITS[degree])
    points.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(points, weights, degree)

@lru_cache(maxsize=None)
def segment_rule(degree: int) -> QuadratureRule:
    """Gauss-Legendre rule on [0, 1]; degree 1, 3 or 5 (1, 2 or 3 points)."""
    if degree not in _SEGMENT_POINTS:
        raise InvalidInputError(f"unsupported segment quadrature degree {degree}, "
            f"choose from {sorted(_SEGMENT_POINTS)}")
    x, w = leggauss(_SEGMENT_POINTS[degree])
    points = 0.5*(x + 1)
    weights = 0.5*w
    points.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(points, weights, degree)

def map_triangle_rule(rule: QuadratureRule, tris):
    """
    Pushes a triangle rule forward to the triangles *tris* (shape (n, 3, 2)).

    Returns:
        Tuple (points, weights) of shapes (n, q, 2) and (n, q). The weights
        carry the Jacobian, so they sum to the triangle areas.
    """
    tris = np.asarray(tris, dtype=float)
    v0 = tris[:, 0, :]
    e1 = tris[:, 1, :] - v0
    e2 = tris[:, 2, :] - v0
    xi = rule.points[:, 0]
    eta = rule.points[:, 1]
    points = v0[:, None, :] + xi[None, :, None]*e1[:, None, :] + eta[None, :, None]*e2[:, None, :]
    jac = np.abs(e1[:, 0]*e2[:, 1] - e1[:, 1]*e2[:, 0])
    weights = jac[:, None]*rule.weights[None, :]
    return points, weights

def map_segment_rule(rule: QuadratureRule, p, q):
    """
    Pushes a segment rule forward to the segments p[i] -> q[i] (shape (n, 2)
    each). Returns (points, weights) of shapes (n, r, 2) and (n, r); the
    weights sum to the segment lengths.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    points = p[:, None, :] + rule.points[None, :, None]*d[:, None, :]
    weights = np.hypot(d[:, 0], d[:, 1])[:, None]*rule.weights[None, :]
    return points, weights

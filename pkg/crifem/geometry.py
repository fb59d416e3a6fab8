# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Planar primitives for cut-element integration: points, convex polygons,
fan triangulation and clipping of a triangle along a straight cut.

All polygons are stored counter-clockwise. A cut segment d -> e splits a
triangle into the part on its left (*plus*) and the part on its right
(*minus*).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, DegenerateCutError

SNAP_TOLERANCE = 1e-12
"""Relative distance (in units of the triangle diameter) below which a point is snapped to a vertex."""

class Point(NamedTuple):
    x: float
    y: float

def as_point(p) -> Point:
    x, y = (float(c) for c in p)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise InvalidInputError(f"point ({x}, {y}) has non-finite coordinates")
    return Point(x, y)

def _signed_area(vertices) -> float:
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5*float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

def triangle_areas(tris):
    """Signed areas of triangles given as array of shape (n, 3, 2)."""
    tris = np.asarray(tris, dtype=float)
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    return 0.5*(e1[:, 0]*e2[:, 1] - e1[:, 1]*e2[:, 0])

@dataclass(frozen=True, eq=False)
class Polygon:
    """
    Simple counter-clockwise polygon with at least three vertices and
    positive area. The vertex array is read-only.
    """
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise InvalidInputError(f"polygon needs at least 3 vertices, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("polygon has non-finite vertex coordinates")
        if _signed_area(v) <= 0:
            raise InvalidInputError("polygon is not counter-clockwise or has zero area")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.shape[0]

    def points(self) -> list[Point]:
        return [Point(*v) for v in self.vertices]

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def centroid(self) -> Point:
        tris = fan_triangulate(self)
        areas = triangle_areas(tris)
        c = np.einsum("t,tk->k", areas, tris.mean(axis=1))/areas.sum()
        return Point(*c)

def polygon_area(p) -> float:
    """
    Shoelace area of a polygon. Accepts a Polygon or any sequence of (x, y)
    vertices; the result is signed (positive for counter-clockwise input).
    """
    if isinstance(p, Polygon):
        return p.area
    v = np.asarray(p, dtype=float)
    if v.ndim != 2 or v.shape[0] < 3:
        raise InvalidInputError(f"polygon_area needs at least 3 vertices, got {len(v)}")
    return _signed_area(v)

def fan_triangulate(p: Polygon) -> np.ndarray:
    """
    Splits a convex polygon into triangles sharing its first vertex.

    Returns:
        Array of shape (n-2, 3, 2), each triangle counter-clockwise.
    """
    v = p.vertices
    n = v.shape[0]
    idx = np.stack([np.zeros(n - 2, dtype=int), np.arange(1, n - 1), np.arange(2, n)], axis=1)
    return v[idx]

def _locate_on_boundary(tri, p, tol):
    """
    Returns ("vertex", i) if p is within tol of vertex i, ("edge", i) if it lies
    in the interior of the edge tri[i] -> tri[i+1], else None.
    """
    dist = np.hypot(*(tri - p).T)
    i = int(np.argmin(dist))
    if dist[i] <= tol:
        return "vertex", i
    for i in range(3):
        a = tri[i]
        b = tri[(i + 1) % 3]
        ab = b - a
        length = np.hypot(*ab)
        t = np.dot(p - a, ab)/length**2
        off = abs(ab[0]*(p - a)[1] - ab[1]*(p - a)[0])/length
        if 0 < t < 1 and off <= tol:
            return "edge", i
    return None

def clip_triangle_by_segment(tri, d, e) -> tuple[Polygon, Polygon]:
    """
    Splits triangle *tri* along the segment from *d* to *e*, both of which
    must lie on the triangle boundary. Points within SNAP_TOLERANCE times the
    triangle diameter of a vertex are snapped onto it.

    Returns:
        (plus, minus): the pieces to the left and to the right of d -> e.

    Raises:
        DegenerateCutError: d and e lie on the same edge, coincide or are
            both vertices.
        InvalidInputError: d or e is not on the triangle boundary.
    """
    tri = np.array([as_point(v) for v in tri], dtype=float)
    area = _signed_area(tri)
    diam = max(np.hypot(*(tri[i] - tri[(i + 1) % 3])) for i in range(3))
    if abs(area) <= SNAP_TOLERANCE*diam**2:
        raise InvalidInputError("degenerate triangle")
    if area < 0:
        tri = tri[::-1].copy()
    tol = SNAP_TOLERANCE*diam
    d = np.array(as_point(d))
    e = np.array(as_point(e))
    if np.hypot(*(d - e)) <= tol:
        raise DegenerateCutError("cut segment has zero length")

    loc_d = _locate_on_boundary(tri, d, tol)
    loc_e = _locate_on_boundary(tri, e, tol)
    for name, loc in (("d", loc_d), ("e", loc_e)):
        if loc is None:
            raise InvalidInputError(f"cut point {name} is not on the triangle boundary")
    if loc_d[0] == "vertex" and loc_e[0] == "vertex":
        raise DegenerateCutError("cut segment joins two vertices (runs along an edge)")
    if loc_d[0] == "edge" and loc_e[0] == "edge" and loc_d[1] == loc_e[1]:
        raise DegenerateCutError("cut points lie on the same edge")
    for pv, pe in ((loc_d, loc_e), (loc_e, loc_d)):
        # Vertex i touches edges i and i-1.
        if pv[0] == "vertex" and pe[0] == "edge" and pe[1] in (pv[1], (pv[1] - 1) % 3):
            raise DegenerateCutError("cut segment runs along an edge")

    loop = []
    marks = {}
    for i in range(3):
        for name, pt, loc in (("d", d, loc_d), ("e", e, loc_e)):
            if loc == ("vertex", i):
                marks[name] = len(loop)
        loop.append(tri[i])
        on_edge = [(name, pt) for name, pt, loc in (("d", d, loc_d), ("e", e, loc_e))
            if loc == ("edge", i)]
        # Ordered along the edge; at most one entry here.
        for name, pt in on_edge:
            marks[name] = len(loop)
            loop.append(pt)

    n = len(loop)
    def walk(start, stop):
        out = [loop[start]]
        i = start
        while i != stop:
            i = (i + 1) % n
            out.append(loop[i])
        return Polygon(np.array(out))

    minus = walk(marks["d"], marks["e"])
    plus = walk(marks["e"], marks["d"])
    return plus, minus

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Element classification against a level set and per-element cut data.

Inside every interface element the curved interface is replaced by the
chord D-E between its two boundary crossings. The chord is oriented so
that the plus piece lies to its left and the unit normal n points from
the minus piece into the plus piece.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import AssumptionViolationError, InvalidInputError
from .geometry import Point, Polygon, SNAP_TOLERANCE, clip_triangle_by_segment, fan_triangulate
from .levelset import LevelSet
from .log import logger
from .mesh import Mesh, LOCAL_EDGES

class Side(Enum):
    Plus = 1
    Minus = -1

    @property
    def piece(self) -> int:
        """Piece index used in coefficient arrays: 0 for plus, 1 for minus."""
        return 0 if self is Side.Plus else 1

    @classmethod
    def of(cls, value: float) -> "Side":
        return cls.Plus if value > 0 else cls.Minus

@dataclass(frozen=True, eq=False)
class CutInfo:
    """
    Attributes:
        element: Element id.
        d, e: Chord end points, ordered so that *plus* lies left of d -> e.
        cut_edges: Local indices of edges whose interior is crossed.
        edge_splits: Per local edge the crossing point, or None.
        normal: Unit normal of the chord pointing into the plus piece.
        plus, minus: Sub-polygons of the element.
        vertex_sides: Level-set sign per local vertex after snapping.
    """
    element: int
    d: Point
    e: Point
    cut_edges: tuple
    edge_splits: tuple
    normal: np.ndarray
    plus: Polygon
    minus: Polygon
    vertex_sides: tuple

    @classmethod
    def from_points(cls, tri, d, e, vertex_sides, element: int=-1) -> "CutInfo":
        """
        Builds the cut data of triangle *tri* (3 points, counter-clockwise)
        for crossings *d*, *e* and per-vertex level-set signs *vertex_sides*.
        The vertices with positive sign end up in the plus piece.
        """
        tri = np.asarray(tri, dtype=float)
        d = np.asarray(d, dtype=float)
        e = np.asarray(e, dtype=float)
        vertex_sides = tuple(int(s) for s in vertex_sides)
        if not (1 in vertex_sides and -1 in vertex_sides):
            raise InvalidInputError(f"element {element}: vertex signs {vertex_sides} do not straddle the interface")
        v_plus = tri[vertex_sides.index(1)]
        t = e - d
        if t[0]*(v_plus - d)[1] - t[1]*(v_plus - d)[0] < 0:
            d, e = e, d
            t = -t
        plus, minus = clip_triangle_by_segment(tri, d, e)
        normal = np.array([-t[1], t[0]])/np.hypot(*t)
        normal.setflags(write=False)

        splits = []
        cut_edges = []
        diam = max(np.hypot(*(tri[i] - tri[(i + 1) % 3])) for i in range(3))
        for j, (a, b) in enumerate(LOCAL_EDGES):
            split = None
            for pt in (d, e):
                ab = tri[b] - tri[a]
                s = np.dot(pt - tri[a], ab)/np.dot(ab, ab)
                off = abs(ab[0]*(pt - tri[a])[1] - ab[1]*(pt - tri[a])[0])/np.hypot(*ab)
                if off <= SNAP_TOLERANCE*diam and SNAP_TOLERANCE < s < 1 - SNAP_TOLERANCE:
                    split = Point(*pt)
            splits.append(split)
            if split is not None:
                cut_edges.append(j)
        return cls(element, Point(*d), Point(*e), tuple(cut_edges), tuple(splits),
            normal, plus, minus, vertex_sides)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5*(np.asarray(self.d) + np.asarray(self.e))

    def edge_subsegments(self, tri, j):
        """
        Sub-segments of local edge j as a list of (start, end, piece) with
        piece 0 for plus and 1 for minus.
        """
        tri = np.asarray(tri, dtype=float)
        a, b = LOCAL_EDGES[j]
        ends = [(tri[a], self.vertex_sides[a]), (tri[b], self.vertex_sides[b])]
        split = self.edge_splits[j]
        if split is None:
            # Whole edge on the side of its non-zero end point.
            side = ends[0][1] if ends[0][1] != 0 else ends[1][1]
            return [(tri[a], tri[b], Side.of(side).piece)]
        split = np.asarray(split)
        return [(tri[a], split, Side.of(ends[0][1]).piece),
            (split, tri[b], Side.of(ends[1][1]).piece)]

@dataclass(frozen=True)
class NonInterface:
    side: Side

@dataclass(frozen=True, eq=False)
class Interface:
    cut: CutInfo

ElementClass = Union[NonInterface, Interface]

@dataclass(frozen=True, eq=False)
class EdgeCuts:
    """
    Attributes:
        vertex_signs: Level-set sign per mesh vertex after snapping (0 on the interface).
        t: Crossing parameter along each edge (lo -> hi), NaN if not crossed.
        points: Crossing point per edge, NaN if not crossed.
    """
    vertex_signs: np.ndarray
    t: np.ndarray
    points: np.ndarray

    @property
    def crossed(self) -> np.ndarray:
        return np.flatnonzero(~np.isnan(self.t))

def edge_root(ls: LevelSet, p, q) -> Optional[float]:
    """
    Zero of *ls* on the segment p -> q as a parameter t in (0, 1), or None
    if the end point signs agree.

    Raises:
        AssumptionViolationError: L changes sign more than once along p -> q.
    """
    p = np.asarray(p, dtype=float)[None, :]
    q = np.asarray(q, dtype=float)[None, :]
    if ls.count_sign_changes(p, q)[0] > 1:
        raise AssumptionViolationError(f"interface crosses segment {p[0]} -> {q[0]} more than once")
    if np.sign(ls(p)[0]) * np.sign(ls(q)[0]) >= 0:
        return None
    return float(ls.edge_roots(p, q)[0])

_SIGN_CHUNK = 16384

def find_edge_cuts(ls: LevelSet, mesh: Mesh) -> EdgeCuts:
    """
    Computes vertex signs and edge crossings for the whole mesh. Crossings
    closer than SNAP_TOLERANCE*h to an end point are snapped onto that
    vertex, which is then treated as lying on the interface.
    """
    signs = ls.sign(mesh.vertices)
    lo = mesh.edges[:, 0]
    hi = mesh.edges[:, 1]
    p = mesh.vertices[lo]
    q = mesh.vertices[hi]

    for start in range(0, mesh.n_edges, _SIGN_CHUNK):
        sl = slice(start, start + _SIGN_CHUNK)
        changes = ls.count_sign_changes(p[sl], q[sl])
        bad = np.flatnonzero(changes > 1)
        if bad.size:
            edge = start + int(bad[0])
            raise AssumptionViolationError(f"interface crosses edge {edge} "
                f"({p[edge]} -> {q[edge]}) {int(changes[bad[0]])} times; refine the mesh")

    crossing = np.flatnonzero(signs[lo]*signs[hi] < 0)
    t = ls.edge_roots(p[crossing], q[crossing])
    length = mesh.edge_lengths[crossing]
    tol = SNAP_TOLERANCE*mesh.h
    signs = signs.copy()
    snap_lo = t*length <= tol
    snap_hi = (1 - t)*length <= tol
    signs[lo[crossing[snap_lo]]] = 0
    signs[hi[crossing[snap_hi]]] = 0
    if np.any(snap_lo | snap_hi):
        logger.debug_log(f"snapped {np.count_nonzero(snap_lo | snap_hi)} crossings onto vertices")

    keep = signs[lo[crossing]]*signs[hi[crossing]] < 0
    t_all = np.full(mesh.n_edges, np.nan)
    t_all[crossing[keep]] = t[keep]
    points = p + t_all[:, None]*(q - p)
    signs.setflags(write=False)
    t_all.setflags(write=False)
    points.setflags(write=False)
    return EdgeCuts(signs, t_all, points)

def classify(ls: LevelSet, mesh: Mesh, element: int, edge_cuts: EdgeCuts=None) -> ElementClass:
    """
    Classifies one element. It is an interface element if its vertices
    (after snapping) carry both signs; the chord end points are then the
    crossings on its edges together with vertices lying on the interface.
    Otherwise the side is the level-set sign at the centroid.
    """
    if edge_cuts is None:
        edge_cuts = find_edge_cuts(ls, mesh)
    tri = mesh.triangle_points[element]
    vertex_signs = edge_cuts.vertex_signs[mesh.triangles[element]]
    if not (np.any(vertex_signs > 0) and np.any(vertex_signs < 0)):
        value = float(ls(tri.mean(axis=0)))
        if value == 0:
            value = 1.0 if np.any(vertex_signs > 0) else -1.0
        return NonInterface(Side.of(value))

    cut_points = [edge_cuts.points[edge] for edge in mesh.triangle_edges[element]
        if not np.isnan(edge_cuts.t[edge])]
    cut_points += [tri[i] for i in range(3) if vertex_signs[i] == 0]
    if len(cut_points) != 2:
        raise AssumptionViolationError(f"element {element}: interface crosses its "
            f"boundary {len(cut_points)} times")
    return Interface(CutInfo.from_points(tri, cut_points[0], cut_points[1],
        vertex_signs, element))

@dataclass(frozen=True, eq=False)
class Classification:
    """
    Attributes:
        classes: ElementClass per element.
        edge_cuts: Mesh-wide crossing data.
        cut_elements: Ids of interface elements, ascending.
        sides: +1/-1 per non-interface element, 0 for interface elements.
    """
    classes: list
    edge_cuts: EdgeCuts
    cut_elements: np.ndarray
    sides: np.ndarray
    level_set: LevelSet = field(repr=False)

    def __getitem__(self, element) -> ElementClass:
        return self.classes[element]

    def __len__(self):
        return len(self.classes)

def classify_mesh(ls: LevelSet, mesh: Mesh, threads: int=1) -> Classification:
    """Classifies all elements. Results are independent of *threads*."""
    edge_cuts = find_edge_cuts(ls, mesh)
    signs = edge_cuts.vertex_signs[mesh.triangles]
    candidates = np.flatnonzero(np.any(signs > 0, axis=1) & np.any(signs < 0, axis=1))

    centroid_values = ls(mesh.triangle_points.mean(axis=1))
    fallback = np.where(np.any(signs > 0, axis=1), 1, -1)
    sides = np.where(centroid_values > 0, 1, np.where(centroid_values < 0, -1, fallback)).astype(np.int8)
    classes = [NonInterface(Side.Plus) if s > 0 else NonInterface(Side.Minus) for s in sides]

    def work(element):
        return classify(ls, mesh, int(element), edge_cuts)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cut = list(pool.map(work, candidates))
    else:
        cut = [work(element) for element in candidates]
    for element, cls in zip(candidates, cut):
        classes[element] = cls
    sides[candidates] = 0
    sides.setflags(write=False)
    logger.debug_log(f"classified {mesh.n_triangles} elements, {candidates.size} cut by the interface")
    return Classification(classes, edge_cuts, candidates, sides, ls)

def subcell_triangles(mesh: Mesh, classification: Classification):
    """
    Triangulation of every element into pieces of constant material.

    Returns:
        (elements, pieces, tris): owning element, piece index (0 plus,
        1 minus) and vertex coordinates (n, 3, 2) of every sub-triangle,
        ordered by element.
    """
    elements = []
    pieces = []
    tris = []
    tri_points = mesh.triangle_points
    for element, cls in enumerate(classification.classes):
        if isinstance(cls, Interface):
            for piece, poly in ((0, cls.cut.plus), (1, cls.cut.minus)):
                fan = fan_triangulate(poly)
                elements.extend([element]*len(fan))
                pieces.extend([piece]*len(fan))
                tris.extend(fan)
        else:
            elements.append(element)
            pieces.append(cls.side.piece)
            tris.append(tri_points[element])
    return np.array(elements), np.array(pieces), np.array(tris)

REFINE_LEVELS = 4

def _crossed(ls: LevelSet, tris) -> np.ndarray:
    """Triangles whose vertices, edge midpoints or centroid disagree in sign."""
    mids = 0.5*(tris + np.roll(tris, -1, axis=1))
    samples = np.concatenate([tris, mids, tris.mean(axis=1, keepdims=True)], axis=1)
    plus = ls(samples) > 0
    return plus.any(axis=1) & ~plus.all(axis=1)

def _quadrisect(tris) -> np.ndarray:
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab, bc, ca = 0.5*(a + b), 0.5*(b + c), 0.5*(c + a)
    children = np.stack([
        np.stack([a, ab, ca], axis=1),
        np.stack([ab, b, bc], axis=1),
        np.stack([ca, bc, c], axis=1),
        np.stack([ab, bc, ca], axis=1),
    ], axis=1)
    return children.reshape(-1, 3, 2)

def _split_linear(ls: LevelSet, tris) -> np.ndarray:
    """
    Cuts each triangle along the zero line of the linear interpolant of
    *ls* into three triangles. Exactly one vertex per triangle has a sign
    differing from the other two.
    """
    values = ls(tris)
    plus = values > 0
    lone = np.argmax((plus != np.roll(plus, -1, axis=1)) & (plus != np.roll(plus, 1, axis=1)), axis=1)
    idx = (lone[:, None] + np.arange(3)[None, :]) % 3
    v = np.take_along_axis(tris, idx[:, :, None], axis=1)
    l = np.take_along_axis(values, idx, axis=1)
    p = v[:, 0] + (l[:, 0]/(l[:, 0] - l[:, 1]))[:, None]*(v[:, 1] - v[:, 0])
    q = v[:, 0] + (l[:, 0]/(l[:, 0] - l[:, 2]))[:, None]*(v[:, 2] - v[:, 0])
    parts = np.stack([
        np.stack([v[:, 0], p, q], axis=1),
        np.stack([p, v[:, 1], v[:, 2]], axis=1),
        np.stack([p, v[:, 2], q], axis=1),
    ], axis=1)
    return parts.reshape(-1, 3, 2)

def refine_subcells(ls: LevelSet, tris, levels: int=REFINE_LEVELS):
    """
    Resolves the true interface inside a set of triangles. Triangles crossed
    by L = 0 are split into four at their edge midpoints *levels* times, and
    crossed leaves are finally cut along the zero line of the linear
    interpolant of L. Every returned triangle then lies on one side of the
    curve up to a sliver of width O((h/2^levels)^2).

    Returns:
        (tris, parent): the refined triangles and the index of the input
        triangle each one came from.
    """
    tris = np.asarray(tris, dtype=float)
    parent = np.arange(tris.shape[0])
    kept_tris = []
    kept_parent = []
    for _ in range(levels):
        crossed = _crossed(ls, tris)
        kept_tris.append(tris[~crossed])
        kept_parent.append(parent[~crossed])
        tris = _quadrisect(tris[crossed])
        parent = np.repeat(parent[crossed], 4)
    plus = ls(tris) > 0
    mixed = plus.any(axis=1) & ~plus.all(axis=1)
    kept_tris.extend([tris[~mixed], _split_linear(ls, tris[mixed])])
    kept_parent.extend([parent[~mixed], np.repeat(parent[mixed], 3)])
    return np.concatenate(kept_tris).reshape(-1, 3, 2), np.concatenate(kept_parent)

def edge_segments(mesh: Mesh, edge_cuts: EdgeCuts, edges=None):
    """
    Splits edges at their interface crossing.

    Returns:
        (edge_ids, starts, ends) with one entry per sub-segment.
    """
    if edges is None:
        edges = np.arange(mesh.n_edges)
    edges = np.asarray(edges)
    pts = mesh.edge_points[edges]
    cut = ~np.isnan(edge_cuts.t[edges])
    whole = edges[~cut]
    split = edges[cut]
    mid = edge_cuts.points[split]
    edge_ids = np.concatenate([whole, split, split])
    starts = np.concatenate([pts[~cut, 0], pts[cut, 0], mid])
    ends = np.concatenate([pts[~cut, 1], mid, pts[cut, 1]])
    order = np.argsort(edge_ids, kind="stable")
    return edge_ids[order], starts[order], ends[order]

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Uniform right-triangle meshes on rectangles with edge connectivity and the
degree-of-freedom numbering of the vector Crouzeix-Raviart space.

Local edge j of a triangle (a, b, c) is the edge opposite local vertex j,
traversed from vertex j+1 to vertex j+2. Edges are stored from the lower
to the higher vertex index. Column 0 of *edge_triangles* holds the
triangle left of that orientation and column 1 the triangle to the right;
boundary edges keep their single triangle in column 0 and -1 in column 1.
"""

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, ExportError

LOCAL_EDGES = np.array([[1, 2], [2, 0], [0, 1]])

@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray
    edge_triangles: np.ndarray
    triangle_edges: np.ndarray
    triangle_edge_signs: np.ndarray
    h: float

    def __post_init__(self):
        for name in ("vertices", "triangles", "edges", "edge_triangles",
                "triangle_edges", "triangle_edge_signs"):
            getattr(self, name).setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def boundary_edges(self) -> np.ndarray:
        """Indices of edges with a single adjacent triangle."""
        return np.flatnonzero(self.edge_triangles[:, 1] < 0)

    @cached_property
    def interior_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_triangles[:, 1] >= 0)

    @cached_property
    def triangle_points(self) -> np.ndarray:
        """Vertex coordinates per triangle, shape (nT, 3, 2)."""
        return self.vertices[self.triangles]

    @cached_property
    def edge_points(self) -> np.ndarray:
        """Start and end coordinates per edge, shape (nE, 2, 2)."""
        return self.vertices[self.edges]

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        d = self.edge_points[:, 1] - self.edge_points[:, 0]
        return np.hypot(d[:, 0], d[:, 1])

    @cached_property
    def areas(self) -> np.ndarray:
        t = self.triangle_points
        e1 = t[:, 1] - t[:, 0]
        e2 = t[:, 2] - t[:, 0]
        return 0.5*(e1[:, 0]*e2[:, 1] - e1[:, 1]*e2[:, 0])

    @property
    def inv_h(self) -> int:
        return int(round(1/self.h))

def _connectivity(triangles):
    local = triangles[:, LOCAL_EDGES]
    pairs = np.sort(local, axis=2).reshape(-1, 2)
    edges, inverse = np.unique(pairs, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    triangle_edges = inverse.reshape(-1, 3)
    triangle_edge_signs = np.where(local[:, :, 0] < local[:, :, 1], 1, -1).astype(np.int8)

    owner = np.repeat(np.arange(triangles.shape[0]), 3)
    signs = triangle_edge_signs.reshape(-1)
    left = np.full(edges.shape[0], -1)
    right = np.full(edges.shape[0], -1)
    left[inverse[signs > 0]] = owner[signs > 0]
    right[inverse[signs < 0]] = owner[signs < 0]
    boundary_right = left < 0
    left[boundary_right] = right[boundary_right]
    right[boundary_right] = -1
    edge_triangles = np.stack([left, right], axis=1)
    return edges, edge_triangles, triangle_edges, triangle_edge_signs

def _cell_count(lo, hi, h, axis):
    n = (hi - lo)/h
    count = int(round(n))
    if count < 1 or abs(n - count) > 1e-9*max(n, 1):
        raise InvalidInputError(f"{axis}-extent {hi - lo} is not an integral multiple of h={h}")
    return count

def build_uniform_mesh(xmin: float, xmax: float, ymin: float, ymax: float, k: int) -> Mesh:
    """
    Partitions the rectangle into square cells of side h = 2**-k, each split
    into two right triangles by its lower-left to upper-right diagonal.
    """
    if not (xmax > xmin and ymax > ymin):
        raise InvalidInputError(f"empty domain [{xmin}, {xmax}] x [{ymin}, {ymax}]")
    if k < 0 or int(k) != k:
        raise InvalidInputError(f"refinement level k must be a non-negative integer, got {k}")
    h = 2.0**(-int(k))
    nx = _cell_count(xmin, xmax, h, "x")
    ny = _cell_count(ymin, ymax, h, "y")

    xs = xmin + h*np.arange(nx + 1)
    ys = ymin + h*np.arange(ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.stack([gx.reshape(-1), gy.reshape(-1)], axis=1)

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    v00 = (j*(nx + 1) + i).reshape(-1)
    v10 = v00 + 1
    v01 = v00 + nx + 1
    v11 = v01 + 1
    lower = np.stack([v00, v10, v11], axis=1)
    upper = np.stack([v00, v11, v01], axis=1)
    triangles = np.stack([lower, upper], axis=1).reshape(-1, 3)

    edges, edge_triangles, triangle_edges, triangle_edge_signs = _connectivity(triangles)
    return Mesh(vertices, triangles, edges, edge_triangles, triangle_edges,
        triangle_edge_signs, h)

@dataclass(frozen=True, eq=False)
class DofMap:
    """
    Global index of (edge, component) is 2*edge + component. Row t of
    *element_dofs* lists the global indices of the six local functions of
    triangle t: component 0 on local edges 0..2, then component 1.
    """
    total_dofs: int
    element_dofs: np.ndarray

    def index(self, edge, component):
        return 2*np.asarray(edge) + np.asarray(component)

def build_dof_map(mesh: Mesh) -> DofMap:
    te = mesh.triangle_edges
    element_dofs = np.concatenate([2*te, 2*te + 1], axis=1)
    element_dofs.setflags(write=False)
    return DofMap(2*mesh.n_edges, element_dofs)

def write_mesh_dump(mesh: Mesh, path):
    """
    Writes a plain-text dump, one record per line: "v x y" for vertices,
    "e lo hi left right" for edges and "t a b c e0 e1 e2" for triangles.
    """
    path = Path(path)
    lines = [f"v {x!r} {y!r}" for x, y in mesh.vertices.tolist()]
    lines += [f"e {lo} {hi} {l} {r}" for (lo, hi), (l, r)
        in zip(mesh.edges.tolist(), mesh.edge_triangles.tolist())]
    lines += [f"t {a} {b} {c} {e0} {e1} {e2}" for (a, b, c), (e0, e1, e2)
        in zip(mesh.triangles.tolist(), mesh.triangle_edges.tolist())]
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise ExportError(path, e.strerror or str(e)) from e

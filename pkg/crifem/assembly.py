# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Global assembly of the stabilized bilinear form

    a_h(u, v) = sum_T int_T 2 mu eps(u):eps(v) + lambda div u div v
              + tau/h sum_e int_e [u].[v] ds

and of the load vector, plus imposition of boundary data.

Jumps [u] are trace differences left minus right element with respect to
the canonical edge orientation (see :mod:`crifem.mesh`). On boundary
edges the jump is the trace of the single adjacent element.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import norm as sparse_norm

from .elements import MaterialParams, BasisTable, build_basis_table, stiffness_matrices, piece_values
from .errors import InvalidInputError
from .interface import Classification, EdgeCuts, subcell_triangles, edge_segments
from .log import logger
from .mesh import Mesh, DofMap, build_dof_map
from .quadrature import triangle_rule, segment_rule, map_triangle_rule, map_segment_rule

class EdgeSet(Enum):
    interior = "interior"
    all = "all"

@dataclass(frozen=True)
class StabilizationConfig:
    tau: float
    edge_set: EdgeSet = EdgeSet.interior

    def __post_init__(self):
        if not (np.isfinite(self.tau) and self.tau > 0):
            raise InvalidInputError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "edge_set", EdgeSet(self.edge_set))

    @classmethod
    def default(cls, mat: MaterialParams, edge_set: EdgeSet=EdgeSet.interior) -> "StabilizationConfig":
        """tau = 10 max(mu_plus, mu_minus)."""
        return cls(10*max(mat.mu_plus, mat.mu_minus), edge_set)

    def edges(self, mesh: Mesh) -> np.ndarray:
        if self.edge_set is EdgeSet.all:
            return np.arange(mesh.n_edges)
        return mesh.interior_edges

@dataclass(frozen=True, eq=False)
class GlobalSystem:
    """
    Attributes:
        matrix: System matrix (CSR), constrained once boundary data is applied.
        rhs: Right-hand side.
        constrained: Constrained degrees of freedom.
        values: Prescribed values of the constrained degrees of freedom.
        volume, jumps: Unconstrained volume and stabilization parts.
        load: Unconstrained load vector.
    """
    matrix: sp.csr_matrix
    rhs: np.ndarray
    constrained: np.ndarray
    values: np.ndarray
    volume: sp.csr_matrix
    jumps: sp.csr_matrix
    load: np.ndarray
    dofmap: DofMap
    mesh: Mesh
    classification: Classification
    basis: BasisTable
    material: MaterialParams
    stab: Optional[StabilizationConfig]

    @property
    def n_dofs(self) -> int:
        return self.dofmap.total_dofs

    @property
    def tau(self) -> float:
        return self.stab.tau if self.stab else 0.0

    def energy(self, u) -> float:
        """sqrt(a_h(u, u)) with the unconstrained form."""
        u = np.asarray(u, dtype=float)
        return float(np.sqrt(max(u @ (self.volume @ u) + u @ (self.jumps @ u), 0.0)))

    def symmetry_defect(self) -> float:
        """||K - K^T||_inf / ||K||_inf of the current matrix."""
        k = self.matrix
        scale = sparse_norm(k, np.inf)
        return float(sparse_norm(k - k.T, np.inf)/scale) if scale > 0 else 0.0

def load_vector(mesh: Mesh, classification: Classification, basis: BasisTable,
        f: Optional[Callable], dofmap: DofMap, degree: int=2) -> np.ndarray:
    """Assembles (f, v) piecewise over the sub-triangles of all elements."""
    if f is None:
        return np.zeros(dofmap.total_dofs)
    elements, pieces, tris = subcell_triangles(mesh, classification)
    points, weights = map_triangle_rule(triangle_rule(degree), tris)
    force = np.asarray(f(points), dtype=float)
    coef = basis.coefficients[elements, :, pieces]
    values = piece_values(coef[:, None], points[:, :, None, None, :])
    contrib = np.einsum("sq,sqc,sqic->si", weights, force, values)
    dofs = dofmap.element_dofs[elements]
    return np.bincount(dofs.ravel(), contrib.ravel(), minlength=dofmap.total_dofs)

def trace_operator(mesh: Mesh, edge_cuts: EdgeCuts, basis: BasisTable, dofmap: DofMap,
        edges, degree: int=3):
    """
    Maps global coefficients to jump values at edge quadrature points.
    Edges are split at their interface crossing and each part is
    integrated with a Gauss rule of the given degree.

    Returns:
        (B, weights, points): B has row 2*q + c for component c at
        quadrature point q; weights and points have one entry per q.
    """
    edge_ids, starts, ends = edge_segments(mesh, edge_cuts, edges)
    points, weights = map_segment_rule(segment_rule(degree), starts, ends)
    r = points.shape[1]
    points = points.reshape(-1, 2)
    weights = weights.reshape(-1)
    qp_edge = np.repeat(edge_ids, r)
    nq = points.shape[0]
    rows = np.broadcast_to(2*np.arange(nq)[:, None, None] + np.arange(2)[None, None, :], (nq, 6, 2))

    data = []
    row_idx = []
    col_idx = []
    for column, sign in ((0, 1.0), (1, -1.0)):
        owner = mesh.edge_triangles[qp_edge, column]
        has = owner >= 0
        values = basis.values(owner[has], points[has])
        cols = np.broadcast_to(dofmap.element_dofs[owner[has]][:, :, None], values.shape)
        data.append(sign*values.ravel())
        row_idx.append(rows[has].ravel())
        col_idx.append(cols.ravel())
    b = sp.coo_matrix((np.concatenate(data), (np.concatenate(row_idx), np.concatenate(col_idx))),
        shape=(2*nq, dofmap.total_dofs)).tocsr()
    return b, weights, points

def stabilization_matrix(mesh: Mesh, classification: Classification, basis: BasisTable,
        dofmap: DofMap, stab: StabilizationConfig, degree: int=3) -> sp.csr_matrix:
    """tau/h sum_e int_e [u].[v] ds over the edges selected by *stab*."""
    b, weights, _ = trace_operator(mesh, classification.edge_cuts, basis, dofmap,
        stab.edges(mesh), degree)
    w = sp.diags(np.repeat(stab.tau/mesh.h*weights, 2))
    s = (b.T @ w @ b).tocsr()
    return ((s + s.T)*0.5).tocsr()

def assemble(mesh: Mesh, classification: Classification, mat: MaterialParams,
        f: Optional[Callable], stab: Optional[StabilizationConfig],
        basis: BasisTable=None, threads: int=1) -> GlobalSystem:
    """
    Assembles the unconstrained system. With stab=None the jump term is
    omitted (tau = 0).

    Args:
        f: Body force mapping points (..., 2) to (..., 2), or None for zero load.
    """
    dofmap = build_dof_map(mesh)
    if basis is None:
        basis = build_basis_table(mesh, classification, mat, threads)
    k_local = stiffness_matrices(basis.coefficients, basis.areas, mat)
    dofs = dofmap.element_dofs
    rows = np.broadcast_to(dofs[:, :, None], k_local.shape)
    cols = np.broadcast_to(dofs[:, None, :], k_local.shape)
    shape = (dofmap.total_dofs, dofmap.total_dofs)
    volume = sp.coo_matrix((k_local.ravel(), (rows.ravel(), cols.ravel())), shape=shape).tocsr()
    if stab is None:
        jumps = sp.csr_matrix(shape)
    else:
        jumps = stabilization_matrix(mesh, classification, basis, dofmap, stab)
    load = load_vector(mesh, classification, basis, f, dofmap)
    matrix = (volume + jumps).tocsr()
    logger.debug_log(f"assembled {dofmap.total_dofs} dofs, {matrix.nnz} non-zeros, tau={stab.tau if stab else 0.0}")
    return GlobalSystem(matrix, load.copy(), np.zeros(0, dtype=int), np.zeros(0), volume,
        jumps, load, dofmap, mesh, classification, basis, mat, stab)

def edge_averages(mesh: Mesh, edge_cuts: EdgeCuts, func: Callable, edges=None,
        degree: int=3) -> np.ndarray:
    """
    Averages (1/|e|) int_e func ds per edge and component, shape (n, 2).
    Edges are split at their interface crossing.
    """
    if edges is None:
        edges = np.arange(mesh.n_edges)
    edges = np.asarray(edges)
    edge_ids, starts, ends = edge_segments(mesh, edge_cuts, edges)
    points, weights = map_segment_rule(segment_rule(degree), starts, ends)
    integrals = np.einsum("sr,src->sc", weights, np.asarray(func(points), dtype=float))
    total = np.stack([np.bincount(edge_ids, integrals[:, c], minlength=mesh.n_edges)
        for c in range(2)], axis=1)
    return total[edges]/mesh.edge_lengths[edges, None]

def apply_dirichlet(system: GlobalSystem, g: Callable) -> GlobalSystem:
    """
    Constrains both components on every boundary edge to the edge average
    of *g* and eliminates them symmetrically: constrained rows and columns
    are zeroed, the diagonal set to one and the right-hand side lifted.
    """
    mesh = system.mesh
    boundary = mesh.boundary_edges
    values = edge_averages(mesh, system.classification.edge_cuts, g, boundary).ravel()
    dofs = (2*boundary[:, None] + np.arange(2)[None, :]).ravel()
    n = system.n_dofs
    mask = np.zeros(n)
    mask[dofs] = 1.0
    lifted = np.zeros(n)
    lifted[dofs] = values

    k = system.matrix
    rhs = system.rhs - k @ lifted
    rhs[dofs] = values
    keep = sp.diags(1.0 - mask)
    matrix = (keep @ k @ keep + sp.diags(mask)).tocsr()
    matrix.eliminate_zeros()
    return replace(system, matrix=matrix, rhs=rhs, constrained=dofs, values=values)

def apply_weak_dirichlet(system: GlobalSystem, g: Callable) -> GlobalSystem:
    """
    Adds the boundary penalty data tau/h int_e g . v ds. The boundary part
    of the penalty matrix is already present when the system was assembled
    with EdgeSet.all.
    """
    if system.stab is None or system.stab.edge_set is not EdgeSet.all:
        raise InvalidInputError("weak boundary data requires stabilization over all edges")
    mesh = system.mesh
    b, weights, points = trace_operator(mesh, system.classification.edge_cuts, system.basis,
        system.dofmap, mesh.boundary_edges)
    data = np.asarray(g(points), dtype=float).reshape(-1)
    w = np.repeat(system.stab.tau/mesh.h*weights, 2)
    return replace(system, rhs=system.rhs + b.T @ (w*data))

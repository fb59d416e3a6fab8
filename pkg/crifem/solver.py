# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Linear solvers for the constrained system: Jacobi-preconditioned conjugate
gradients and dense LU elimination as a reference.
"""

import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lu_factor, lu_solve

from .assembly import GlobalSystem
from .errors import ConvergenceError, NotSPDError, SingularMatrixError, InvalidInputError
from .log import logger

DENSE_LIMIT = 5000

@dataclass(frozen=True)
class SolveReport:
    """
    Attributes:
        iterations: CG iterations (0 for the dense solver).
        residual: Final relative residual ||b - Kx|| / ||b||.
        wall_time: Seconds spent in the solver.
        history: Relative residual after each CG iteration.
    """
    iterations: int
    residual: float
    wall_time: float
    history: tuple = field(default=(), repr=False)
    solver: str = "cg"

def _operands(system):
    if isinstance(system, GlobalSystem):
        return system.matrix, system.rhs
    matrix, rhs = system
    return matrix, np.asarray(rhs, dtype=float)

def solve_cg(system, tol: float=1e-12, maxiter: int=None):
    """
    Preconditioned conjugate gradients with Jacobi preconditioner and zero
    initial guess. *system* is a GlobalSystem or a (matrix, rhs) pair.

    When the recursively updated residual meets the tolerance, the true
    residual is recomputed and the iteration restarts from the current
    iterate if it does not.

    Returns:
        (x, SolveReport)

    Raises:
        NotSPDError: non-positive diagonal entry or curvature.
        ConvergenceError: *maxiter* iterations without convergence.
    """
    start = time.perf_counter()
    a, b = _operands(system)
    a = sp.csr_matrix(a)
    n = b.shape[0]
    if maxiter is None:
        maxiter = 10*n
    norm_b = np.linalg.norm(b)
    x = np.zeros(n)
    if norm_b == 0:
        return x, SolveReport(0, 0.0, time.perf_counter() - start, (), "cg")

    diag = a.diagonal()
    if np.any(diag <= 0):
        raise NotSPDError(f"non-positive diagonal entry at index {int(np.argmin(diag))}")
    inv_diag = 1/diag

    history = []
    r = b.copy()
    z = inv_diag*r
    p = z.copy()
    rz = r @ z
    it = 0
    while it < maxiter:
        ap = a @ p
        curvature = p @ ap
        if curvature <= 0:
            raise NotSPDError(f"non-positive curvature {curvature:.3e} in iteration {it + 1}")
        alpha = rz/curvature
        x += alpha*p
        r -= alpha*ap
        it += 1
        rel = np.linalg.norm(r)/norm_b
        history.append(rel)
        if rel <= tol:
            r = b - a @ x
            rel = np.linalg.norm(r)/norm_b
            if rel <= tol:
                history[-1] = rel
                wall = time.perf_counter() - start
                logger.debug_log(f"CG converged in {it} iterations, residual {rel:.3e}")
                return x, SolveReport(it, rel, wall, tuple(history), "cg")
            logger.debug_log(f"CG residual replacement in iteration {it}, true residual {rel:.3e}")
            z = inv_diag*r
            p = z.copy()
            rz = r @ z
            continue
        z = inv_diag*r
        rz_new = r @ z
        p = z + (rz_new/rz)*p
        rz = rz_new
    raise ConvergenceError(f"CG did not reach tolerance {tol:g} in {maxiter} iterations "
        f"(residual {history[-1]:.3e})", history)

def solve_dense(system):
    """
    Dense LU elimination with partial pivoting for systems of dimension up
    to DENSE_LIMIT.

    Raises:
        SingularMatrixError: a pivot vanishes to working precision.
    """
    a, b = _operands(system)
    n = b.shape[0]
    if n > DENSE_LIMIT:
        raise InvalidInputError(f"dense solver limited to {DENSE_LIMIT} unknowns, got {n}")
    dense = a.toarray() if sp.issparse(a) else np.asarray(a, dtype=float)
    lu, piv = lu_factor(dense)
    pivots = np.abs(np.diag(lu))
    if n and pivots.min() <= 1e-14*np.linalg.norm(dense, np.inf):
        raise SingularMatrixError(f"matrix is singular to working precision "
            f"(smallest pivot {pivots.min():.3e} at {int(np.argmin(pivots))}); "
            "are boundary constraints missing?")
    return lu_solve((lu, piv), b)

def solve(system: GlobalSystem, solver: Literal["cg", "dense"]="cg", tol: float=1e-12,
        maxiter: int=None):
    """Dispatches to solve_cg or solve_dense. Returns (x, SolveReport)."""
    if solver == "cg":
        return solve_cg(system, tol, maxiter)
    if solver != "dense":
        raise InvalidInputError(f"unknown solver {solver!r}")
    start = time.perf_counter()
    x = solve_dense(system)
    a, b = _operands(system)
    norm_b = np.linalg.norm(b)
    rel = float(np.linalg.norm(b - a @ x)/norm_b) if norm_b > 0 else 0.0
    return x, SolveReport(0, rel, time.perf_counter() - start, (), "dense")

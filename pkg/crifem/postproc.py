# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Interpolation, error norms and convergence tables.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import pandas as pd

from .assembly import GlobalSystem, edge_averages, trace_operator
from .elements import BasisTable, MaterialParams, piece_values
from .interface import Classification, subcell_triangles, refine_subcells, edge_segments
from .levelset import LevelSet
from .mesh import Mesh, build_dof_map
from .quadrature import triangle_rule, segment_rule, map_triangle_rule

NORMS = ("l2", "h1", "div", "h1_semi")

@dataclass(frozen=True)
class ErrorReport:
    """
    Errors of one refinement level. *h1* is the full broken norm, *h1_semi*
    its seminorm part and *energy* the error in the norm induced by a_h
    (NaN when not computed).
    """
    inv_h: int
    l2: float
    h1: float
    div: float
    h1_semi: float = float("nan")
    energy: float = float("nan")
    orders: dict = field(default_factory=dict)

def interpolate(mesh: Mesh, classification: Classification, u: Callable, degree: int=5) -> np.ndarray:
    """
    Edge-average interpolant: the coefficient of (edge, component) is the
    mean of that component of *u* over the edge, integrated piecewise
    between interface crossings.
    """
    return edge_averages(mesh, classification.edge_cuts, u, degree=degree).reshape(-1)

def _jump_error(system: GlobalSystem, uh, exact) -> float:
    """
    tau/h sum_e int_e |[u - u_h]|^2 over the stabilized edges. On boundary
    edges the jump is the one-sided trace, so u does not drop out there.
    """
    mesh = system.mesh
    edges = system.stab.edges(mesh)
    b, weights, points = trace_operator(mesh, system.classification.edge_cuts, system.basis,
        system.dofmap, edges)
    edge_ids, _, _ = edge_segments(mesh, system.classification.edge_cuts, edges)
    qp_edge = np.repeat(edge_ids, len(segment_rule(3).weights))
    owners = mesh.edge_triangles[qp_edge]
    orientation = (owners[:, 0] >= 0).astype(float) - (owners[:, 1] >= 0)
    jump_u = orientation[:, None]*np.asarray(exact.displacement(points), dtype=float)
    jump_err = jump_u - (b @ uh).reshape(-1, 2)
    return float(system.tau/mesh.h*np.sum(weights*np.einsum("qc,qc->q", jump_err, jump_err)))

def error_norms(mesh: Mesh, classification: Classification, basis: BasisTable,
        ls: LevelSet, uh, exact, system: GlobalSystem=None, degree: int=4) -> ErrorReport:
    """
    Integrates u - u_h over the sub-triangles of every element, refined
    along the true interface so that the exact solution, which picks its
    branch from *ls*, is smooth on every integration cell. u_h takes the
    branch of the chord side of its element.
    """
    uh = np.asarray(uh, dtype=float)
    dofmap = build_dof_map(mesh)
    elements, pieces, tris = subcell_triangles(mesh, classification)
    tris, parent = refine_subcells(ls, tris)
    elements = elements[parent]
    pieces = pieces[parent]
    points, weights = map_triangle_rule(triangle_rule(degree), tris)

    local = uh[dofmap.element_dofs[elements]]
    coef = np.einsum("si,sicd->scd", local, basis.coefficients[elements, :, pieces])
    uh_values = piece_values(coef[:, None], points[:, :, None, :])
    uh_grad = coef[:, None, :, 1:]
    uh_div = uh_grad[..., 0, 0] + uh_grad[..., 1, 1]

    err = np.asarray(exact.displacement(points)) - uh_values
    err_grad = np.asarray(exact.gradient(points)) - uh_grad
    err_div = np.asarray(exact.divergence(points)) - uh_div

    l2 = np.sum(weights*np.einsum("sqc,sqc->sq", err, err))
    semi = np.sum(weights*np.einsum("sqab,sqab->sq", err_grad, err_grad))
    div = np.sum(weights*err_div**2)

    energy = float("nan")
    if system is not None:
        mat = system.material
        mu = mat.mu_pieces[pieces][:, None]
        lam = mat.lambda_pieces[pieces][:, None]
        eps = 0.5*(err_grad + np.swapaxes(err_grad, -1, -2))
        volume = np.sum(weights*(2*mu*np.einsum("sqab,sqab->sq", eps, eps) + lam*err_div**2))
        jumps = _jump_error(system, uh, exact) if system.stab is not None else 0.0
        energy = float(np.sqrt(volume + jumps))

    return ErrorReport(mesh.inv_h, float(np.sqrt(l2)), float(np.sqrt(l2 + semi)),
        float(np.sqrt(div)), float(np.sqrt(semi)), energy)

def convergence_order(coarse: float, fine: float) -> float:
    """log2(coarse / fine); NaN when either error is zero or missing."""
    if not (coarse > 0 and fine > 0):
        return float("nan")
    return float(np.log2(coarse/fine))

COLUMNS = ["inv_h", "l2", "l2_order", "h1", "h1_order", "div", "div_order",
    "tau", "mu_minus", "mu_plus", "lambda_ratio", "h1_semi", "h1_semi_order", "energy"]

def convergence_table(reports, tau: float=float("nan"), material: MaterialParams=None) -> pd.DataFrame:
    """
    Table with one row per refinement level and observed orders between
    consecutive rows. The first row has no orders.
    """
    rows = []
    previous = None
    for report in reports:
        row = {"inv_h": int(report.inv_h)}
        for name in NORMS:
            value = getattr(report, name)
            row[name] = value
            order = convergence_order(getattr(previous, name), value) if previous else float("nan")
            row[f"{name}_order"] = order
            report.orders[name] = order
        row["energy"] = report.energy
        row["tau"] = float(tau)
        row["mu_minus"] = material.mu_minus if material else float("nan")
        row["mu_plus"] = material.mu_plus if material else float("nan")
        row["lambda_ratio"] = material.lambda_ratio if material else float("nan")
        rows.append(row)
        previous = report
    return pd.DataFrame(rows, columns=COLUMNS)

SUMMARY_COLUMNS = ["inv_h", "dofs", "cut_elements", "iterations", "residual",
    "tau", "mu_minus", "mu_plus", "lambda_minus", "lambda_plus"]

def summary_table(rows) -> pd.DataFrame:
    """Per-level solver statistics for runs without an exact solution."""
    return pd.DataFrame(list(rows), columns=SUMMARY_COLUMNS)

def format_table(table: pd.DataFrame) -> str:
    """Renders a convergence table as error/order column pairs."""
    if "l2" not in table.columns:
        return table.to_string(index=False)
    view = table[["inv_h", "l2", "l2_order", "h1", "h1_order", "div", "div_order"]].copy()
    view.columns = ["1/h", "|u-uh|_0", "order", "|u-uh|_1,h", "order ", "|div(u-uh)|_0", "order  "]
    error_fmt = lambda v: f"{v:.3e}"
    order_fmt = lambda v: "" if np.isnan(v) else f"{v:.3f}"
    return view.to_string(index=False, formatters={
        "|u-uh|_0": error_fmt, "|u-uh|_1,h": error_fmt, "|div(u-uh)|_0": error_fmt,
        "order": order_fmt, "order ": order_fmt, "order  ": order_fmt,
    })

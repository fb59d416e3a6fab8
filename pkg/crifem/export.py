# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Result files: convergence tables as CSV and displacement fields as legacy
ASCII VTK unstructured grids.
"""

from contextlib import contextmanager
from enum import Enum
from pathlib import Path

import numpy as np
import pandas as pd

from .elements import BasisTable, piece_values
from .errors import ExportError
from .interface import Classification, subcell_triangles
from .log import logger
from .mesh import Mesh, build_dof_map

VTK_TRIANGLE = 5

def export_csv(table: pd.DataFrame, path):
    """Writes *table* without index; missing values become empty fields."""
    path = Path(path)
    try:
        table.to_csv(path, index=False, na_rep="")
    except OSError as e:
        raise ExportError(path, e.strerror or str(e)) from e
    logger.debug_log(f"wrote {len(table)} rows to {path}")

def read_convergence_csv(path) -> pd.DataFrame:
    path = Path(path)
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except OSError as e:
        raise ExportError(path, e.strerror or str(e)) from e

def _fmt(values) -> str:
    return " ".join(format(float(v), ".17g") for v in values)

class VtkLegacyWriter:
    """
    Sequential writer for an ASCII legacy VTK file. Sections have to be
    written in the order points, cells, point data, cell data.

    Example::

        with VtkLegacyWriter(path, "title") as w:
            w.write_points(points)
            w.write_triangles(triangles)
            w.write_point_vectors("displacement", u)
            w.write_cell_scalars("side", sides)
    """
    class State(Enum):
        Closed = 0
        WaitForPoints = 1
        WaitForCells = 2
        WaitForData = 3
        PointData = 4
        CellData = 5

    def __init__(self, path, title: str="crifem"):
        self.path = Path(path)
        self.title = title
        self.state = self.State.Closed
        self.cm = None
        self.f = None
        self.n_points = 0
        self.n_cells = 0

    @contextmanager
    def contextmanager(self):
        assert self.state == self.State.Closed
        try:
            with open(self.path, "w") as self.f:
                self.f.write("# vtk DataFile Version 2.0\n")
                self.f.write(f"{self.title}\n")
                self.f.write("ASCII\n")
                self.f.write("DATASET UNSTRUCTURED_GRID\n")
                self.state = self.State.WaitForPoints
                yield self
        except OSError as e:
            raise ExportError(self.path, e.strerror or str(e)) from e
        finally:
            self.f = None
            self.state = self.State.Closed

    def write_points(self, points):
        assert self.state == self.State.WaitForPoints
        points = np.asarray(points, dtype=float)
        self.n_points = points.shape[0]
        self.f.write(f"POINTS {self.n_points} double\n")
        for x, y in points:
            self.f.write(f"{_fmt((x, y, 0.0))}\n")
        self.state = self.State.WaitForCells

    def write_triangles(self, triangles):
        assert self.state == self.State.WaitForCells
        triangles = np.asarray(triangles, dtype=int)
        self.n_cells = triangles.shape[0]
        self.f.write(f"CELLS {self.n_cells} {4*self.n_cells}\n")
        for a, b, c in triangles:
            self.f.write(f"3 {a} {b} {c}\n")
        self.f.write(f"CELL_TYPES {self.n_cells}\n")
        for _ in range(self.n_cells):
            self.f.write(f"{VTK_TRIANGLE}\n")
        self.state = self.State.WaitForData

    def write_point_vectors(self, name: str, vectors):
        assert self.state in (self.State.WaitForData, self.State.PointData)
        vectors = np.asarray(vectors, dtype=float)
        assert vectors.shape[0] == self.n_points
        if self.state == self.State.WaitForData:
            self.f.write(f"POINT_DATA {self.n_points}\n")
        self.f.write(f"VECTORS {name} double\n")
        for vx, vy in vectors:
            self.f.write(f"{_fmt((vx, vy, 0.0))}\n")
        self.state = self.State.PointData

    def write_cell_scalars(self, name: str, values):
        assert self.state in (self.State.WaitForData, self.State.PointData, self.State.CellData)
        values = np.asarray(values)
        assert values.shape[0] == self.n_cells
        if self.state != self.State.CellData:
            self.f.write(f"CELL_DATA {self.n_cells}\n")
        self.f.write(f"SCALARS {name} int 1\n")
        self.f.write("LOOKUP_TABLE default\n")
        for v in values:
            self.f.write(f"{int(v)}\n")
        self.state = self.State.CellData

    def __enter__(self):
        assert self.cm is None
        self.cm = self.contextmanager()
        return self.cm.__enter__()

    def __exit__(self, exc_type, exc_value, traceback):
        assert self.cm
        cm = self.cm
        self.cm = None
        return cm.__exit__(exc_type, exc_value, traceback)

def export_vtk(mesh: Mesh, classification: Classification, basis: BasisTable, uh, path):
    """
    Writes the discrete displacement. Interface elements are emitted as
    their sub-triangles and every sub-triangle gets its own three points,
    so the field is rendered with its jumps. Cell data holds the material
    side (+1/-1) and the parent element id.
    """
    uh = np.asarray(uh, dtype=float)
    dofmap = build_dof_map(mesh)
    elements, pieces, tris = subcell_triangles(mesh, classification)
    local = uh[dofmap.element_dofs[elements]]
    coef = np.einsum("si,sicd->scd", local, basis.coefficients[elements, :, pieces])
    values = piece_values(coef[:, None], tris[:, :, None, :])
    n = tris.shape[0]
    with VtkLegacyWriter(path, f"crifem displacement 1/h={mesh.inv_h}") as w:
        w.write_points(tris.reshape(-1, 2))
        w.write_triangles(np.arange(3*n).reshape(n, 3))
        w.write_point_vectors("displacement", values.reshape(-1, 2))
        w.write_cell_scalars("side", np.where(pieces == 0, 1, -1))
        w.write_cell_scalars("element", elements)
    logger.debug_log(f"wrote {n} cells to {path}")

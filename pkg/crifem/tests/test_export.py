# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pandas as pd
import pytest

from ..curves import CircleLevelSet
from ..elements import MaterialParams, build_basis_table
from ..export import VtkLegacyWriter, export_csv, read_convergence_csv, export_vtk
from ..interface import classify_mesh, subcell_triangles
from ..mesh import build_uniform_mesh
from ..postproc import ErrorReport, convergence_table, interpolate
from ..errors import ExportError

def test_csv_round_trip(tmp_path):
    reports = [ErrorReport(8, 1.887e-3, 4.098e-2, 4.694e-2, 4.1e-2, 0.3),
        ErrorReport(16, 5.354e-4, 1.957e-2, 2.311e-2, 1.9e-2, 0.15)]
    table = convergence_table(reports, 1000.0, MaterialParams.from_lame_ratio(100, 1, 5))
    path = tmp_path/"convergence.csv"
    export_csv(table, path)
    header, first, second = path.read_text().splitlines()
    assert header.startswith("inv_h,l2,l2_order,h1,h1_order,div,div_order,tau,mu_minus,mu_plus,lambda_ratio")
    assert first.startswith("8,0.001887,,")
    back = read_convergence_csv(path)
    pd.testing.assert_frame_equal(back, table, check_dtype=False)

def test_csv_export_error(tmp_path):
    with pytest.raises(ExportError):
        export_csv(pd.DataFrame({"inv_h": [1]}), tmp_path/"missing"/"out.csv")
    with pytest.raises(ExportError):
        read_convergence_csv(tmp_path/"missing.csv")

def test_vtk_writer_order(tmp_path):
    with VtkLegacyWriter(tmp_path/"bad.vtk") as w:
        with pytest.raises(AssertionError):
            w.write_triangles([[0, 1, 2]])

def test_vtk_writer(tmp_path):
    path = tmp_path/"tri.vtk"
    with VtkLegacyWriter(path, "one triangle") as w:
        w.write_points([[0, 0], [1, 0], [0, 1]])
        w.write_triangles([[0, 1, 2]])
        w.write_point_vectors("displacement", [[0.1, 0], [0, 0], [0, 0.25]])
        w.write_cell_scalars("side", [-1])
    lines = path.read_text().splitlines()
    assert lines[:5] == ["# vtk DataFile Version 2.0", "one triangle", "ASCII",
        "DATASET UNSTRUCTURED_GRID", "POINTS 3 double"]
    assert "CELLS 1 4" in lines
    assert "CELL_TYPES 1" in lines
    assert lines[lines.index("CELL_TYPES 1") + 1] == "5"
    assert "POINT_DATA 3" in lines
    assert "0.10000000000000001 0 0" in lines
    assert lines[-1] == "-1"

def test_export_vtk(tmp_path):
    mesh = build_uniform_mesh(-1, 1, -1, 1, 2)
    mat = MaterialParams.from_lame_ratio(100, 1, 5)
    classification = classify_mesh(CircleLevelSet(0.36), mesh)
    basis = build_basis_table(mesh, classification, mat)
    uh = interpolate(mesh, classification, lambda p: np.stack([p[..., 1], -p[..., 0]], axis=-1))
    path = tmp_path/"solution.vtk"
    export_vtk(mesh, classification, basis, uh, path)
    _, pieces, tris = subcell_triangles(mesh, classification)
    n = tris.shape[0]
    assert n > mesh.n_triangles
    lines = path.read_text().splitlines()
    assert f"POINTS {3*n} double" in lines
    assert f"CELLS {n} {4*n}" in lines
    assert f"CELL_DATA {n}" in lines
    assert "SCALARS side int 1" in lines
    assert "SCALARS element int 1" in lines
    start = lines.index("VECTORS displacement double") + 1
    values = np.array([line.split() for line in lines[start:start + 3*n]], dtype=float)
    points = tris.reshape(-1, 2)
    # a rigid rotation is reproduced exactly by the broken space
    assert values[:, 0] == pytest.approx(points[:, 1], abs=1e-12)
    assert values[:, 1] == pytest.approx(-points[:, 0], abs=1e-12)
    assert np.all(values[:, 2] == 0)

def test_export_vtk_error(tmp_path):
    mesh = build_uniform_mesh(-1, 1, -1, 1, 0)
    mat = MaterialParams(1, 1, 1, 1)
    classification = classify_mesh(CircleLevelSet(0.5), mesh)
    basis = build_basis_table(mesh, classification, mat)
    with pytest.raises(ExportError):
        export_vtk(mesh, classification, basis, np.zeros(32), tmp_path/"missing"/"u.vtk")

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

import numpy as np
import pytest

from ..assembly import (EdgeSet, StabilizationConfig, assemble, apply_dirichlet,
    apply_weak_dirichlet, edge_averages, trace_operator)
from ..curves import CircleLevelSet, LineLevelSet
from ..elements import MaterialParams
from ..interface import classify_mesh
from ..mesh import build_uniform_mesh, LOCAL_EDGES
from ..postproc import interpolate
from ..problems import make_problem
from ..solver import solve
from ..errors import InvalidInputError

def plain_cr_stiffness(mesh, mu, lam):
    """Dense CR elasticity stiffness assembled without any interface data."""
    n = 2*mesh.n_edges
    k = np.zeros((n, n))
    for t, tri in enumerate(mesh.triangle_points):
        vander = np.column_stack([np.ones(3), tri])
        grad_bary = np.linalg.inv(vander)[1:, :].T
        area = 0.5*abs(np.linalg.det(vander))
        grads = []
        dofs = []
        for comp in range(2):
            for j in range(3):
                g = np.zeros((2, 2))
                g[comp] = -2*grad_bary[j]
                grads.append(g)
                dofs.append(2*mesh.triangle_edges[t, j] + comp)
        for a, ga in zip(dofs, grads):
            for b, gb in zip(dofs, grads):
                ea = 0.5*(ga + ga.T)
                eb = 0.5*(gb + gb.T)
                k[a, b] += area*(2*mu*np.sum(ea*eb) + lam*np.trace(ga)*np.trace(gb))
    return k

def example_system(k=2, r0=0.36, mat=None, stab="default", f=None):
    mesh = build_uniform_mesh(-1, 1, -1, 1, k)
    mat = mat or MaterialParams.from_lame_ratio(100, 1, 5)
    classification = classify_mesh(CircleLevelSet(r0), mesh)
    if stab == "default":
        stab = StabilizationConfig.default(mat)
    return assemble(mesh, classification, mat, f, stab)

def test_stabilization_config():
    mat = MaterialParams.from_lame_ratio(100, 1, 5)
    stab = StabilizationConfig.default(mat)
    assert stab.tau == 1000
    assert stab.edge_set is EdgeSet.interior
    assert StabilizationConfig(1.0, "all").edge_set is EdgeSet.all
    with pytest.raises(InvalidInputError):
        StabilizationConfig(0.0)
    with pytest.raises(InvalidInputError):
        StabilizationConfig(-1.0)

def test_equal_materials_without_jumps_is_plain_cr():
    mat = MaterialParams(1, 1, 5, 5)
    system = example_system(k=0, r0=0.5, mat=mat, stab=None)
    assert system.classification.cut_elements.size == 6
    oracle = plain_cr_stiffness(system.mesh, 1, 5)
    assert np.abs(system.matrix.toarray() - oracle).max() <= 1e-12*np.abs(oracle).max()
    assert np.count_nonzero(system.rhs) == 0

def test_equal_materials_match_uncut_solution():
    mat = MaterialParams(2, 2, 3, 3)
    f = lambda p: np.stack([1 + p[..., 0], 2 - p[..., 1]], axis=-1)
    zero = lambda p: np.zeros(np.shape(p))
    solutions = []
    for r0 in (0.36, 5.0):
        system = apply_dirichlet(example_system(k=2, r0=r0, mat=mat, f=f), zero)
        solutions.append(solve(system, "dense")[0])
    assert np.abs(solutions[0] - solutions[1]).max() <= 1e-10*np.abs(solutions[1]).max()

def test_rigid_motions_in_kernel():
    system = example_system(k=3)
    mesh = system.mesh
    unconstrained = system.volume + system.jumps
    translation = np.tile([1.0, 0.0], mesh.n_edges)
    rotation = interpolate(mesh, system.classification, lambda p: np.stack([-p[..., 1], p[..., 0]], axis=-1))
    scale = abs(unconstrained).max()
    assert np.abs(unconstrained @ translation).max() <= 1e-10*scale
    assert np.abs(unconstrained @ rotation).max() <= 1e-10*scale

def test_jump_term_linear_in_tau():
    one = example_system(k=2, stab=StabilizationConfig(1.0))
    two = example_system(k=2, stab=StabilizationConfig(2.0))
    assert abs(two.jumps - 2*one.jumps).max() <= 1e-12*abs(two.jumps).max()
    assert abs(two.volume - one.volume).max() == 0
    assert one.tau == 1.0
    assert example_system(k=0, stab=None).tau == 0.0

def test_jump_of_cr_functions_has_zero_mean():
    # int_e [v] ds vanishes on interior edges for every basis function
    system = example_system(k=2, stab=StabilizationConfig(1.0))
    mesh = system.mesh
    for edge in mesh.interior_edges:
        b, weights, _ = trace_operator(mesh, system.classification.edge_cuts, system.basis,
            system.dofmap, [edge])
        for comp in range(2):
            means = b[comp::2].T @ weights
            assert np.abs(means).max() < 1e-10

def test_matrix_symmetric():
    system = example_system(k=3)
    assert system.symmetry_defect() <= 1e-14
    constrained = apply_dirichlet(system, lambda p: np.zeros(np.shape(p)))
    assert constrained.symmetry_defect() <= 1e-14

def test_constrained_matrix_positive_definite():
    system = apply_dirichlet(example_system(k=1), lambda p: np.zeros(np.shape(p)))
    assert np.linalg.eigvalsh(system.matrix.toarray()).min() > 0

def test_dirichlet_zero():
    system = apply_dirichlet(example_system(k=1), lambda p: np.zeros(np.shape(p)))
    assert system.constrained.size == 2*system.mesh.boundary_edges.size
    assert np.all(system.values == 0)
    dense = system.matrix.toarray()
    for dof in system.constrained:
        expected = np.zeros(system.n_dofs)
        expected[dof] = 1
        assert np.array_equal(dense[dof], expected)
        assert system.rhs[dof] == 0

def test_dirichlet_edge_averages():
    mat = MaterialParams.from_lame_ratio(100, 1, 5)
    ls = CircleLevelSet(0.36)
    problem = make_problem(ls, mat, "manufactured")
    system = apply_dirichlet(example_system(k=3, mat=mat, f=problem.body_force), problem.boundary)
    mesh = system.mesh
    nodes, w = np.polynomial.legendre.leggauss(20)
    for i, edge in enumerate(mesh.boundary_edges):
        p, q = mesh.edge_points[edge]
        pts = 0.5*(p + q) + 0.5*nodes[:, None]*(q - p)
        oracle = 0.5*w @ problem.boundary(pts)
        assert system.values[2*i:2*i + 2] == pytest.approx(oracle, abs=1e-12)
        assert system.rhs[2*edge:2*edge + 2] == pytest.approx(oracle, abs=1e-12)

def test_edge_averages_split_edges():
    mesh = build_uniform_mesh(0, 1, 0, 1, 1)
    classification = classify_mesh(LineLevelSet(0.3), mesh)
    step = lambda p: np.stack([np.where(p[..., 0] > 0.3, 1.0, 0.0), p[..., 1]], axis=-1)
    averages = edge_averages(mesh, classification.edge_cuts, step)
    bottom = np.flatnonzero(np.all(mesh.edge_points[:, :, 1] == 0, axis=1) &
        np.all(mesh.edge_points[:, :, 0] <= 0.5, axis=1))
    assert averages[bottom[0]] == pytest.approx([0.4, 0.0])

def test_weak_dirichlet_requires_all_edges():
    g = lambda p: np.ones(np.shape(p))
    with pytest.raises(InvalidInputError):
        apply_weak_dirichlet(example_system(k=1), g)
    system = example_system(k=1, stab=StabilizationConfig(10.0, EdgeSet.all))
    weak = apply_weak_dirichlet(system, g)
    assert np.abs(weak.rhs - system.rhs).max() > 0
    assert weak.constrained.size == 0

def test_weak_dirichlet_reproduces_translation():
    # constant data is reproduced exactly with the penalty on all edges
    mesh = build_uniform_mesh(-1, 1, -1, 1, 2)
    mat = MaterialParams.from_lame_ratio(10, 1, 5)
    classification = classify_mesh(CircleLevelSet(0.6), mesh)
    system = assemble(mesh, classification, mat, None, StabilizationConfig(100.0, EdgeSet.all))
    system = apply_weak_dirichlet(system, lambda p: np.broadcast_to([0.5, -2.0], np.shape(p)))
    uh, _ = solve(system, "dense")
    assert uh == pytest.approx(np.tile([0.5, -2.0], mesh.n_edges), abs=1e-10)

@pytest.mark.parametrize("k", [2, 3, 4])
def test_patch_piecewise_linear(k):
    gamma = (np.sqrt(5) - 1)/2
    mat = MaterialParams.from_lame_ratio(10, 1, 5)
    slope = mat.mu_minus/mat.mu_plus

    def exact(p):
        x = p[..., 0]
        ux = np.where(x > gamma, gamma + slope*(x - gamma), x)
        return np.stack([ux, np.full(x.shape, 0.3)], axis=-1)

    mesh = build_uniform_mesh(0, 1, 0, 1, k)
    classification = classify_mesh(LineLevelSet(gamma), mesh)
    assert classification.cut_elements.size > 0
    system = assemble(mesh, classification, mat, None, StabilizationConfig.default(mat))
    system = apply_dirichlet(system, exact)
    uh, report = solve(system, "dense")
    assert report.residual < 1e-10
    assert uh == pytest.approx(interpolate(mesh, classification, exact), abs=1e-9)

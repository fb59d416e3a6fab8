# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Crouzeix-Raviart vector basis and the broken immersed basis of interface
elements, local stiffness matrices and load vectors.

Each element carries six local functions: functions 0..2 have a non-zero
first component and are dual to the edge averages over local edges 0..2,
functions 3..5 do the same for the second component. A linear piece is
stored as coefficients (a, b, c) of a + b x + c y per component, and the
coefficient array of one element has shape (6, 2, 2, 3) indexed by
(function, piece, component, coefficient) where piece 0 is plus and piece
1 is minus. Functions of non-interface elements store the same
coefficients in both pieces.
"""

from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import InvalidInputError, BasisConstructionError
from .geometry import Point, fan_triangulate
from .interface import Side, CutInfo, Interface, NonInterface, ElementClass, Classification
from .log import logger
from .mesh import Mesh
from .quadrature import triangle_rule, map_triangle_rule

PIVOT_TOLERANCE = 1e-13

@dataclass(frozen=True)
class MaterialParams:
    """Lame parameters of the plus and minus subdomains."""
    mu_plus: float
    mu_minus: float
    lambda_plus: float
    lambda_minus: float

    def __post_init__(self):
        for name in ("mu_plus", "mu_minus", "lambda_plus", "lambda_minus"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidInputError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.mu_plus <= 0 or self.mu_minus <= 0:
            raise InvalidInputError(f"shear moduli must be positive, got "
                f"mu_plus={self.mu_plus}, mu_minus={self.mu_minus}")
        if self.lambda_plus < 0 or self.lambda_minus < 0:
            raise InvalidInputError(f"lambda must be non-negative, got "
                f"lambda_plus={self.lambda_plus}, lambda_minus={self.lambda_minus}")

    @classmethod
    def from_lame_ratio(cls, mu_plus: float, mu_minus: float, ratio: float) -> "MaterialParams":
        """lambda = ratio*mu on both sides."""
        return cls(mu_plus, mu_minus, ratio*mu_plus, ratio*mu_minus)

    @classmethod
    def from_shear_poisson(cls, mu_plus, nu_plus, mu_minus, nu_minus) -> "MaterialParams":
        """lambda = 2 mu nu / (1 - 2 nu) per side."""
        for nu in (nu_plus, nu_minus):
            if not -1 < nu < 0.5:
                raise InvalidInputError(f"Poisson ratio must lie in (-1, 0.5), got {nu}")
        return cls(mu_plus, mu_minus, 2*mu_plus*nu_plus/(1 - 2*nu_plus),
            2*mu_minus*nu_minus/(1 - 2*nu_minus))

    @classmethod
    def from_young_poisson(cls, e_plus, nu_plus, e_minus, nu_minus) -> "MaterialParams":
        """mu = E / (2 (1 + nu)), lambda = E nu / ((1 + nu)(1 - 2 nu)) per side."""
        for nu in (nu_plus, nu_minus):
            if not -1 < nu < 0.5:
                raise InvalidInputError(f"Poisson ratio must lie in (-1, 0.5), got {nu}")
        def lame(e, nu):
            return e/(2*(1 + nu)), e*nu/((1 + nu)*(1 - 2*nu))
        mu_p, lam_p = lame(e_plus, nu_plus)
        mu_m, lam_m = lame(e_minus, nu_minus)
        return cls(mu_p, mu_m, lam_p, lam_m)

    def mu(self, side: Side) -> float:
        return self.mu_plus if side is Side.Plus else self.mu_minus

    def lam(self, side: Side) -> float:
        return self.lambda_plus if side is Side.Plus else self.lambda_minus

    @property
    def mu_pieces(self) -> np.ndarray:
        """Shear moduli indexed by piece (plus, minus)."""
        return np.array([self.mu_plus, self.mu_minus])

    @property
    def lambda_pieces(self) -> np.ndarray:
        return np.array([self.lambda_plus, self.lambda_minus])

    @property
    def lambda_ratio(self) -> float:
        """Common lambda/mu of both sides, NaN if they differ."""
        rp = self.lambda_plus/self.mu_plus
        rm = self.lambda_minus/self.mu_minus
        return rp if np.isclose(rp, rm, rtol=1e-12, atol=0) else float("nan")

@dataclass(frozen=True, eq=False)
class LinearPiece:
    """Linear vector field; row c of *coefficients* holds (a, b, c) of component c."""
    coefficients: np.ndarray

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        k = self.coefficients
        return k[:, 0] + points[..., 0, None]*k[:, 1] + points[..., 1, None]*k[:, 2]

    @property
    def gradient(self) -> np.ndarray:
        """Constant gradient, row c = d(component c)/d(x, y)."""
        return self.coefficients[:, 1:].copy()

@dataclass(frozen=True, eq=False)
class ShapeFunction:
    """
    One or two linear pieces on an element. Two-piece functions are split by
    the chord through *chord_point* with normal *chord_normal*; points with
    (p - chord_point) . chord_normal >= 0 use the plus piece.
    """
    pieces: tuple
    element: int = -1
    chord_point: Optional[np.ndarray] = None
    chord_normal: Optional[np.ndarray] = None

    @property
    def is_broken(self) -> bool:
        return len(self.pieces) == 2

    def piece(self, side: Side) -> LinearPiece:
        if not self.is_broken:
            return self.pieces[0]
        return self.pieces[side.piece]

    def __call__(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if not self.is_broken:
            return self.pieces[0](points)
        plus = (points - self.chord_point) @ self.chord_normal >= 0
        return np.where(plus[..., None], self.pieces[0](points), self.pieces[1](points))

def _barycentric_coefficients(tris):
    """Coefficients (alpha, beta, gamma) of each barycentric coordinate, shape (n, 3, 3)."""
    tris = np.asarray(tris, dtype=float)
    n = tris.shape[0]
    vander = np.concatenate([np.ones((n, 3, 1)), tris], axis=2)
    det = np.linalg.det(vander)
    scale = np.max(np.abs(tris - tris.mean(axis=1, keepdims=True)), axis=(1, 2))
    if np.any(np.abs(det) <= 1e-14*np.maximum(scale, 1e-300)**2):
        raise InvalidInputError("degenerate triangle in basis construction")
    # Column j of the inverse holds the coefficients of lambda_j.
    return np.swapaxes(np.linalg.inv(vander), 1, 2)

def cr_coefficients(tris) -> np.ndarray:
    """
    Coefficients of the standard Crouzeix-Raviart vector basis for triangles
    of shape (n, 3, 2), returned with shape (n, 6, 2, 3) indexed by
    (function, component, coefficient). The scalar factor of function j is
    1 - 2 lambda_j, lambda_j the barycentric coordinate of vertex j.
    """
    bary = _barycentric_coefficients(tris)
    scalar = -2*bary
    scalar[:, :, 0] += 1
    n = scalar.shape[0]
    coef = np.zeros((n, 6, 2, 3))
    coef[:, 0:3, 0, :] = scalar
    coef[:, 3:6, 1, :] = scalar
    return coef

def cr_basis(tri) -> list[ShapeFunction]:
    coef = cr_coefficients(np.asarray(tri, dtype=float)[None])[0]
    return [ShapeFunction((LinearPiece(coef[i]),)) for i in range(6)]

def _system(tri, cut: CutInfo, mat: MaterialParams, origin, scale):
    tri = np.asarray(tri, dtype=float)
    d = (np.asarray(cut.d) - origin)/scale
    e = (np.asarray(cut.e) - origin)/scale
    n1, n2 = cut.normal
    m = np.zeros((12, 12))

    for j in range(3):
        segments = [((start - origin)/scale, (end - origin)/scale, piece)
            for start, end, piece in cut.edge_subsegments(tri, j)]
        edge_length = np.hypot(*(segments[-1][1] - segments[0][0]))
        for start, end, piece in segments:
            frac = np.hypot(*(end - start))/edge_length
            mid = 0.5*(start + end)
            row = frac*np.array([1.0, mid[0], mid[1]])
            for comp in range(2):
                col = piece*6 + comp*3
                m[comp*3 + j, col:col + 3] += row

    for r, pt in ((6, d), (8, e)):
        row = np.array([1.0, pt[0], pt[1]])
        for comp in range(2):
            m[r + comp, comp*3:comp*3 + 3] = row
            m[r + comp, 6 + comp*3:6 + comp*3 + 3] = -row

    for piece, sign, side in ((0, 1.0, Side.Plus), (1, -1.0, Side.Minus)):
        mu = mat.mu(side)
        lam = mat.lam(side)
        b1, c1, b2, c2 = piece*6 + 1, piece*6 + 2, piece*6 + 4, piece*6 + 5
        m[10, b1] = sign*(2*mu + lam)*n1
        m[10, c1] = sign*mu*n2
        m[10, b2] = sign*mu*n2
        m[10, c2] = sign*lam*n1
        m[11, b1] = sign*lam*n2
        m[11, c1] = sign*mu*n1
        m[11, b2] = sign*mu*n1
        m[11, c2] = sign*(2*mu + lam)*n2

    rhs = np.zeros((12, 6))
    rhs[:6, :] = np.eye(6)
    return m, rhs

def local_system_matrix(tri, cut: CutInfo, mat: MaterialParams):
    """
    The 12x12 system defining the broken basis of an interface element in
    physical coordinates, and its six right-hand sides.

    Unknowns are ordered (piece, component, coefficient), i.e. index
    piece*6 + comp*3 + k for the coefficient k of a + b x + c y. Rows 0..5
    are the edge averages of the first and second component over local
    edges 0..2, rows 6..9 continuity of both components at D and at E, and
    rows 10, 11 continuity of both traction components across the chord.

    Returns:
        (M, rhs) of shapes (12, 12) and (12, 6).
    """
    return _system(tri, cut, mat, np.zeros(2), 1.0)

def _solve_broken(tri, cut: CutInfo, mat: MaterialParams) -> np.ndarray:
    tri = np.asarray(tri, dtype=float)
    origin = tri.mean(axis=0)
    scale = max(np.hypot(*(tri[i] - tri[(i + 1) % 3])) for i in range(3))
    m, rhs = _system(tri, cut, mat, origin, scale)
    row_scale = np.max(np.abs(m), axis=1)
    m = m/row_scale[:, None]
    rhs = rhs/row_scale[:, None]
    lu, piv = lu_factor(m, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_TOLERANCE*np.linalg.norm(m, np.inf):
        raise BasisConstructionError(cut.element,
            f"local basis system is singular (smallest pivot {pivots.min():.3e})")
    x = lu_solve((lu, piv), rhs)
    coef = x.T.reshape(6, 2, 2, 3)
    coef[..., 1:] /= scale
    coef[..., 0] -= coef[..., 1]*origin[0] + coef[..., 2]*origin[1]
    return coef

def broken_basis(tri, cut: CutInfo, mat: MaterialParams) -> list[ShapeFunction]:
    """
    Broken basis of an interface element. Each function consists of a plus
    and a minus linear piece that agree at D and E, have continuous
    traction across D-E and are dual to the six edge averages.

    Raises:
        BasisConstructionError: the local system is singular to working precision.
    """
    coef = _solve_broken(tri, cut, mat)
    point = np.asarray(cut.d)
    return [ShapeFunction((LinearPiece(coef[i, 0]), LinearPiece(coef[i, 1])),
        cut.element, point, cut.normal) for i in range(6)]

def strain_stress(piece: LinearPiece, side: Side, mat: MaterialParams):
    """
    Returns:
        (eps, sigma, div) of a linear piece evaluated with the Lame
        parameters of *side*.
    """
    grad = piece.gradient
    eps = 0.5*(grad + grad.T)
    div = float(np.trace(grad))
    sigma = 2*mat.mu(side)*eps + mat.lam(side)*div*np.eye(2)
    return eps, sigma, div

@dataclass(frozen=True, eq=False)
class LocalBasis:
    """
    Coefficients (6, 2, 2, 3) and piece areas (plus, minus) of one element.
    *chord* is (point, normal) for interface elements, None otherwise.
    """
    element: int
    coefficients: np.ndarray
    areas: np.ndarray
    chord: Optional[tuple] = None

    def functions(self) -> list[ShapeFunction]:
        if self.chord is None:
            return [ShapeFunction((LinearPiece(self.coefficients[i, 0]),), self.element)
                for i in range(6)]
        return [ShapeFunction((LinearPiece(self.coefficients[i, 0]), LinearPiece(self.coefficients[i, 1])),
            self.element, *self.chord) for i in range(6)]

def local_basis(tri, cls: ElementClass, mat: MaterialParams, element: int=-1) -> LocalBasis:
    tri = np.asarray(tri, dtype=float)
    if isinstance(cls, Interface):
        coef = _solve_broken(tri, cls.cut, mat)
        areas = np.array([cls.cut.plus.area, cls.cut.minus.area])
        return LocalBasis(cls.cut.element, coef, areas, (np.asarray(cls.cut.d), cls.cut.normal))
    cr = cr_coefficients(tri[None])[0]
    coef = np.stack([cr, cr], axis=1)
    area = 0.5*abs((tri[1, 0] - tri[0, 0])*(tri[2, 1] - tri[0, 1])
        - (tri[1, 1] - tri[0, 1])*(tri[2, 0] - tri[0, 0]))
    areas = np.zeros(2)
    areas[cls.side.piece] = area
    return LocalBasis(element, coef, areas)

def stiffness_matrices(coefficients, areas, mat: MaterialParams) -> np.ndarray:
    """
    Exact element stiffness matrices
    K_ij = sum_pieces |piece| (2 mu eps_i : eps_j + lambda div_i div_j).

    Args:
        coefficients: Shape (n, 6, 2, 2, 3).
        areas: Piece areas, shape (n, 2).

    Returns:
        Array of shape (n, 6, 6).
    """
    grad = coefficients[..., 1:]
    eps = 0.5*(grad + np.swapaxes(grad, -1, -2))
    div = grad[..., 0, 0] + grad[..., 1, 1]
    mu_area = areas*mat.mu_pieces[None, :]
    lam_area = areas*mat.lambda_pieces[None, :]
    k = 2*np.einsum("np,nipab,njpab->nij", mu_area, eps, eps)
    k += np.einsum("np,nip,njp->nij", lam_area, div, div)
    return 0.5*(k + np.swapaxes(k, 1, 2))

def local_stiffness(tri, cls: ElementClass, mat: MaterialParams) -> np.ndarray:
    """6x6 stiffness matrix of one element."""
    basis = local_basis(tri, cls, mat)
    return stiffness_matrices(basis.coefficients[None], basis.areas[None], mat)[0]

def piece_values(coefficients, points) -> np.ndarray:
    """
    Values of linear pieces with coefficients (..., 3) at points (..., 2)
    broadcast against each other.
    """
    return coefficients[..., 0] + coefficients[..., 1]*points[..., 0] + coefficients[..., 2]*points[..., 1]

def local_load(tri, cls: ElementClass, f: Callable, mat: MaterialParams, degree: int=2) -> np.ndarray:
    """
    Load vector F_i = int_T f . phi_i of one element, integrated piecewise
    over the fan-triangulated sub-polygons. *f* maps points (..., 2) to
    forces (..., 2).
    """
    basis = local_basis(tri, cls, mat)
    if isinstance(cls, Interface):
        parts = [(0, fan_triangulate(cls.cut.plus)), (1, fan_triangulate(cls.cut.minus))]
    else:
        parts = [(cls.side.piece, np.asarray(tri, dtype=float)[None])]
    rule = triangle_rule(degree)
    load = np.zeros(6)
    for piece, tris in parts:
        points, weights = map_triangle_rule(rule, tris)
        force = np.asarray(f(points))
        # values: (t, q, function, component)
        values = piece_values(basis.coefficients[None, None, :, piece], points[:, :, None, None, :])
        load += np.einsum("tq,tqc,tqic->i", weights, force, values)
    return load

@dataclass(frozen=True, eq=False)
class BasisTable:
    """
    Local bases of all elements of a mesh.

    Attributes:
        coefficients: Shape (nT, 6, 2, 2, 3).
        areas: Piece areas, shape (nT, 2).
        chord_points, chord_normals: Shape (nT, 2), NaN for non-interface elements.
        sides: Piece index of non-interface elements, -1 for interface elements.
    """
    coefficients: np.ndarray
    areas: np.ndarray
    chord_points: np.ndarray
    chord_normals: np.ndarray
    sides: np.ndarray

    def pieces_at(self, elements, points) -> np.ndarray:
        """
        Piece index used by each element at each point (chord side test).
        *elements* must broadcast against points[..., 0].
        """
        elements = np.asarray(elements)
        points = np.asarray(points, dtype=float)
        rel = points - self.chord_points[elements]
        with np.errstate(invalid="ignore"):
            plus = np.einsum("...k,...k->...", rel, self.chord_normals[elements]) >= 0
        cut_piece = np.where(plus, 0, 1)
        return np.where(self.sides[elements] >= 0, self.sides[elements], cut_piece)

    def values(self, elements, points) -> np.ndarray:
        """Values of the six local functions, shape (..., 6, 2)."""
        elements = np.asarray(elements)
        points = np.asarray(points, dtype=float)
        pieces = self.pieces_at(elements, points)
        coef = self.coefficients[elements, :, pieces]
        return piece_values(coef, points[..., None, None, :])

    def local(self, element: int) -> LocalBasis:
        chord = None
        if self.sides[element] < 0:
            chord = (self.chord_points[element], self.chord_normals[element])
        return LocalBasis(element, self.coefficients[element], self.areas[element], chord)

def build_basis_table(mesh: Mesh, classification: Classification, mat: MaterialParams,
        threads: int=1) -> BasisTable:
    """
    Builds all local bases. Interface elements are solved in parallel when
    threads > 1; the result does not depend on the thread count.
    """
    tris = mesh.triangle_points
    cr = cr_coefficients(tris)
    coefficients = np.repeat(cr[:, :, None], 2, axis=2)
    sides = np.where(classification.sides > 0, 0, 1).astype(np.int8)
    areas = np.zeros((mesh.n_triangles, 2))
    areas[np.arange(mesh.n_triangles), sides] = np.abs(mesh.areas)
    chord_points = np.full((mesh.n_triangles, 2), np.nan)
    chord_normals = np.full((mesh.n_triangles, 2), np.nan)

    cut_elements = classification.cut_elements
    def work(element):
        cut = classification[element].cut
        return _solve_broken(tris[element], cut, mat)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solved = list(pool.map(work, cut_elements))
    else:
        solved = [work(element) for element in cut_elements]

    for element, coef in zip(cut_elements, solved):
        cut = classification[element].cut
        coefficients[element] = coef
        areas[element] = (cut.plus.area, cut.minus.area)
        chord_points[element] = cut.d
        chord_normals[element] = cut.normal
    sides[cut_elements] = -1
    logger.debug_log(f"built local bases for {mesh.n_triangles} elements "
        f"({len(cut_elements)} broken)")
    return BasisTable(coefficients, areas, chord_points, chord_normals, sides)

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from .errors import CrifemError
from .mesh import build_uniform_mesh, build_dof_map
from .interface import classify_mesh
from .elements import MaterialParams, build_basis_table
from .assembly import StabilizationConfig, EdgeSet, assemble, apply_dirichlet
from .solver import solve
from .postproc import interpolate, error_norms, convergence_table
from .config import parse_config
from .study import ConvergenceStudy

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from .assembly import GlobalSystem, assemble, apply_dirichlet, apply_weak_dirichlet
from .config import RunConfig
from .errors import ExportError
from .export import export_csv, export_vtk
from .interface import Classification, classify_mesh
from .log import logger
from .mesh import Mesh, build_uniform_mesh
from .postproc import ErrorReport, error_norms, convergence_table, summary_table, format_table
from .solver import SolveReport, solve

@dataclass(frozen=True, eq=False)
class LevelResult:
    k: int
    mesh: Mesh
    classification: Classification
    system: GlobalSystem
    uh: np.ndarray
    report: SolveReport
    errors: Optional[ErrorReport]

class ConvergenceStudy:
    """
    Runs one configuration over all refinement levels and writes its
    artifacts to the output directory: config.txt with the resolved
    configuration, convergence.csv, table.txt and solution_k<k>.vtk.

    Example::

        with ConvergenceStudy(parse_config(flags={"example": "1a"})) as study:
            table = study.run()
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.problem = config.problem()
        self.stab = config.stabilization()
        self.out = Path(config.out)
        self.results = []
        self.cm = None

    @contextmanager
    def contextmanager(self):
        try:
            self.out.mkdir(parents=True, exist_ok=True)
            (self.out / "config.txt").write_text(self.config.to_raw().to_text())
        except OSError as e:
            raise ExportError(self.out, e.strerror or str(e)) from e
        logger.debug_log(f"writing results to {self.out}")
        yield self

    def run_level(self, k: int) -> LevelResult:
        cfg = self.config
        problem = self.problem
        mesh = build_uniform_mesh(*cfg.domain, k)
        classification = classify_mesh(problem.level_set, mesh, cfg.threads)
        system = assemble(mesh, classification, problem.material, problem.body_force,
            self.stab, threads=cfg.threads)
        if cfg.dirichlet == "weak":
            system = apply_weak_dirichlet(system, problem.boundary)
        else:
            system = apply_dirichlet(system, problem.boundary)
        uh, report = solve(system, cfg.solver, cfg.tol, cfg.maxiter)
        errors = None
        if problem.exact is not None:
            errors = error_norms(mesh, classification, system.basis, problem.level_set,
                uh, problem.exact, system)
        logger.log("level", f"1/h={mesh.inv_h}: {system.n_dofs} dofs, "
            f"{len(classification.cut_elements)} cut elements, {report.solver} "
            f"{report.iterations} iterations, residual {report.residual:.2e}")
        result = LevelResult(k, mesh, classification, system, uh, report, errors)
        self.results.append(result)
        if cfg.vtk:
            export_vtk(mesh, classification, system.basis, uh, self.out / f"solution_k{k}.vtk")
        return result

    def table(self) -> pd.DataFrame:
        mat = self.problem.material
        if self.problem.exact is not None:
            return convergence_table([r.errors for r in self.results], self.stab.tau, mat)
        return summary_table({
            "inv_h": r.mesh.inv_h,
            "dofs": r.system.n_dofs,
            "cut_elements": len(r.classification.cut_elements),
            "iterations": r.report.iterations,
            "residual": r.report.residual,
            "tau": self.stab.tau,
            "mu_minus": mat.mu_minus,
            "mu_plus": mat.mu_plus,
            "lambda_minus": mat.lambda_minus,
            "lambda_plus": mat.lambda_plus,
        } for r in self.results)

    def run(self) -> pd.DataFrame:
        for k in self.config.levels:
            self.run_level(k)
        table = self.table()
        export_csv(table, self.out / "convergence.csv")
        text = format_table(table)
        try:
            (self.out / "table.txt").write_text(text + "\n")
        except OSError as e:
            raise ExportError(self.out / "table.txt", e.strerror or str(e)) from e
        for line in text.splitlines():
            logger.log("result", line)
        return table

    def __enter__(self):
        assert self.cm is None
        self.cm = self.contextmanager()
        return self.cm.__enter__()

    def __exit__(self, exc_type, exc_value, traceback):
        assert self.cm
        cm = self.cm
        self.cm = None
        return cm.__exit__(exc_type, exc_value, traceback)

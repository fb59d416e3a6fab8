# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Exceptions raised by crifem. Every exception carries a human-readable *text*
and an *exit_code* that the command-line driver returns when the exception
terminates a run.
"""

class CrifemError(Exception):
    """
    Base class of all errors raised by crifem. The message is kept in the
    *text* attribute and returned by str().
    """
    exit_code = 1

    def __init__(self, text: str):
        super().__init__()
        self.text = text

    def __str__(self):
        return self.text

class InvalidInputError(CrifemError):
    """Geometric or numeric input that violates a documented precondition."""
    exit_code = 3

class DegenerateCutError(InvalidInputError):
    """A cut segment that runs along a single triangle edge."""
    pass

class AssumptionViolationError(CrifemError):
    """
    The interface crosses the mesh in a way the method does not support,
    typically because the mesh is too coarse for the interface curvature.
    """
    exit_code = 3

class BasisConstructionError(CrifemError):
    """
    The local 12x12 system of an interface element is singular to working
    precision. This should never happen and indicates a bug.
    """
    exit_code = 3

    def __init__(self, element: int, text: str):
        super().__init__(f"element {element}: {text}")
        self.element = element

class ConfigError(CrifemError):
    """Invalid run configuration. *key* names the offending configuration key."""
    exit_code = 2

    def __init__(self, key: str, text: str):
        super().__init__(f"{key}: {text}")
        self.key = key

class SolverError(CrifemError):
    exit_code = 4

class ConvergenceError(SolverError):
    """
    Raised when the iterative solver exhausts its iteration budget. *history*
    holds the relative residual after every iteration.
    """
    def __init__(self, text: str, history=()):
        super().__init__(text)
        self.history = tuple(history)

class NotSPDError(SolverError):
    """Non-positive curvature encountered; the assembled matrix is not SPD."""
    pass

class SingularMatrixError(SolverError):
    pass

class ExportError(CrifemError):
    exit_code = 5

    def __init__(self, path, text: str):
        super().__init__(f"{path}: {text}")
        self.path = path

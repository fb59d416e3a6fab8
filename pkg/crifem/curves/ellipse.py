# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from ..levelset import QuadraticLevelSet

class EllipseLevelSet(QuadraticLevelSet):
    """Ellipse L = x^2/4 + y^2 - r0^2 with semi-axes 2 r0 and r0."""
    kind = "ellipse"

    def __init__(self, r0: float):
        self.r0 = float(r0)
        super().__init__(axx=0.25, ayy=1.0, a0=-self.r0**2)

    def __repr__(self):
        return f"EllipseLevelSet(r0={self.r0})"

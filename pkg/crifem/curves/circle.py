# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from ..levelset import QuadraticLevelSet

class CircleLevelSet(QuadraticLevelSet):
    """
    Circle of radius r0 centered at the origin, L = x^2 + y^2 - r0^2.
    The disc interior is the minus subdomain.
    """
    kind = "circle"

    def __init__(self, r0: float):
        self.r0 = float(r0)
        super().__init__(axx=1.0, ayy=1.0, a0=-self.r0**2)

    def __repr__(self):
        return f"CircleLevelSet(r0={self.r0})"

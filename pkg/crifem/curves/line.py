# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from ..levelset import QuadraticLevelSet

class LineLevelSet(QuadraticLevelSet):
    """Vertical line x = gamma, L = x - gamma. The plus side is x > gamma."""
    kind = "line"

    def __init__(self, gamma: float):
        self.gamma = float(gamma)
        super().__init__(ax=1.0, a0=-self.gamma)

    def __repr__(self):
        return f"LineLevelSet(gamma={self.gamma})"

# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

from .circle import CircleLevelSet
from .ellipse import EllipseLevelSet
from .line import LineLevelSet

INTERFACES = {
    "circle": CircleLevelSet,
    "ellipse": EllipseLevelSet,
    "line": LineLevelSet,
}

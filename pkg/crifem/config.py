# SPDX-FileCopyrightText: 2024 The crifem authors
# SPDX-License-Identifier: Apache-2.0

"""
Run configuration. Configuration files are flat ``key=value`` lines; blank
lines and lines starting with ``#`` are ignored. Values are merged with
increasing precedence from built-in defaults, the selected example preset,
the configuration file and command-line flags.
"""

import re
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Optional

from .assembly import EdgeSet, StabilizationConfig
from .elements import MaterialParams
from .errors import ConfigError, InvalidInputError
from .levelset import LevelSet
from .problems import EXAMPLES, Problem, make_level_set, make_problem

KEY_PATTERN = "[a-z0-9_]+"

class RawConfig(dict):
    """Keys can only contain a-z, 0-9 and underscores. Values are strings."""

    @classmethod
    def from_text(cls, text: str, source: str="<config>") -> "RawConfig":
        cfg = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{lineno}", f"expected key=value, got '{line}'")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
        return cfg

    @classmethod
    def from_file(cls, path) -> "RawConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise ConfigError("config", f"cannot read {path}: {e.strerror or e}") from e
        return cls.from_text(text, str(path))

    def __setitem__(self, key, value):
        if not re.fullmatch(KEY_PATTERN, key):
            raise ConfigError(key, "configuration keys can only contain a-z, 0-9 and underscores")
        super().__setitem__(key, value)

    def update(self, other=(), **kwargs):
        for key, value in dict(other, **kwargs).items():
            self[key] = value

    def to_text(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.items())

def encode(obj) -> str:
    """Encodes a configuration value as text readable by parse_config."""
    if obj is None:
        return ""
    elif isinstance(obj, bool):
        return "true" if obj else "false"
    elif isinstance(obj, Enum):
        return str(obj.value)
    elif isinstance(obj, float):
        return repr(obj)
    else:
        return str(obj)

def _optional(parse):
    def wrapper(text):
        return None if text == "" else parse(text)
    return wrapper

def _bool(text):
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got '{text}'")

def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got '{text}'")
        return text
    return parse

LAMBDA_KEYS = ("lambda_ratio", "lambda_minus", "lambda_plus", "nu_minus", "nu_plus")

KEYS = {
    "example": (_optional(_choice(*EXAMPLES)), None, "built-in experiment: " + ", ".join(EXAMPLES)),
    "xmin": (float, -1.0, "domain rectangle"),
    "xmax": (float, 1.0, "domain rectangle"),
    "ymin": (float, -1.0, "domain rectangle"),
    "ymax": (float, 1.0, "domain rectangle"),
    "k_min": (int, 3, "coarsest level, h = 2^-k"),
    "k_max": (int, 6, "finest level"),
    "interface": (_choice("circle", "ellipse", "line"), "circle", "interface shape"),
    "r0": (float, 0.5, "circle radius / ellipse minor semi-axis"),
    "gamma": (float, 0.0, "position of the line interface x = gamma"),
    "mu_minus": (float, 1.0, "shear modulus inside (L < 0)"),
    "mu_plus": (float, 1.0, "shear modulus outside (L > 0)"),
    "lambda_ratio": (_optional(float), None, "lambda = ratio*mu on both sides (1 if no lambda key is set)"),
    "lambda_minus": (_optional(float), None, "explicit lambda inside"),
    "lambda_plus": (_optional(float), None, "explicit lambda outside"),
    "nu_minus": (_optional(float), None, "Poisson ratio inside"),
    "nu_plus": (_optional(float), None, "Poisson ratio outside"),
    "body_force": (_choice("manufactured", "unknown", "zero"), "manufactured", "load case"),
    "tau": (_optional(float), None, "stabilization parameter (default 10*max(mu))"),
    "edge_set": (_choice("interior", "all"), "interior", "edges carrying the jump penalty"),
    "dirichlet": (_choice("strong", "weak"), "strong", "boundary data by constraints or penalty"),
    "solver": (_choice("cg", "dense"), "cg", "linear solver"),
    "tol": (float, 1e-12, "relative residual tolerance of CG"),
    "maxiter": (_optional(int), None, "CG iteration limit (default 10*unknowns)"),
    "threads": (int, 1, "worker threads for element loops"),
    "out": (str, "results", "output directory"),
    "vtk": (_bool, True, "write VTK fields"),
}

def help_text() -> str:
    lines = []
    for key, (_, default, text) in KEYS.items():
        lines.append(f"{key:<14}{text} (default: {encode(default) or '-'})")
    return "\n".join(lines)

@dataclass(frozen=True)
class RunConfig:
    example: Optional[str]
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    k_min: int
    k_max: int
    interface: str
    r0: float
    gamma: float
    mu_minus: float
    mu_plus: float
    lambda_ratio: Optional[float]
    lambda_minus: Optional[float]
    lambda_plus: Optional[float]
    nu_minus: Optional[float]
    nu_plus: Optional[float]
    body_force: str
    tau: Optional[float]
    edge_set: str
    dirichlet: str
    solver: str
    tol: float
    maxiter: Optional[int]
    threads: int
    out: str
    vtk: bool

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.k_min < 0:
            raise ConfigError("k_min", f"must be non-negative, got {self.k_min}")
        if self.k_min > self.k_max:
            raise ConfigError("k_max", f"must not be smaller than k_min ({self.k_max} < {self.k_min})")
        if not self.xmax > self.xmin:
            raise ConfigError("xmax", "must be larger than xmin")
        if not self.ymax > self.ymin:
            raise ConfigError("ymax", "must be larger than ymin")
        if self.interface in ("circle", "ellipse") and not self.r0 > 0:
            raise ConfigError("r0", f"must be positive, got {self.r0}")
        for key in ("mu_minus", "mu_plus"):
            if not getattr(self, key) > 0:
                raise ConfigError(key, f"must be positive, got {getattr(self, key)}")
        for key in ("lambda_ratio", "lambda_minus", "lambda_plus"):
            value = getattr(self, key)
            if value is not None and not value >= 0:
                raise ConfigError(key, f"must be non-negative, got {value}")
        for key in ("nu_minus", "nu_plus"):
            value = getattr(self, key)
            if value is not None and not -1 < value < 0.5:
                raise ConfigError(key, f"must lie in (-1, 0.5), got {value}")
        given = [key for key in LAMBDA_KEYS if getattr(self, key) is not None]
        groups = [("lambda_ratio",), ("lambda_minus", "lambda_plus"), ("nu_minus", "nu_plus")]
        if not any(set(given) == set(group) for group in groups):
            raise ConfigError(given[0] if given else "lambda_ratio",
                "set either lambda_ratio, or lambda_minus and lambda_plus, or nu_minus and nu_plus")
        if self.tau is not None and not self.tau > 0:
            raise ConfigError("tau", f"must be positive, got {self.tau}")
        if not self.tol > 0:
            raise ConfigError("tol", f"must be positive, got {self.tol}")
        if self.maxiter is not None and self.maxiter < 1:
            raise ConfigError("maxiter", f"must be positive, got {self.maxiter}")
        if self.threads < 1:
            raise ConfigError("threads", f"must be at least 1, got {self.threads}")
        if self.dirichlet == "weak" and self.edge_set != "all":
            raise ConfigError("dirichlet", "weak boundary data requires edge_set=all")

    @property
    def levels(self) -> range:
        return range(self.k_min, self.k_max + 1)

    @property
    def domain(self) -> tuple:
        return (self.xmin, self.xmax, self.ymin, self.ymax)

    def material(self) -> MaterialParams:
        try:
            if self.lambda_ratio is not None:
                return MaterialParams.from_lame_ratio(self.mu_plus, self.mu_minus, self.lambda_ratio)
            if self.nu_minus is not None:
                return MaterialParams.from_shear_poisson(self.mu_plus, self.nu_plus,
                    self.mu_minus, self.nu_minus)
            return MaterialParams(self.mu_plus, self.mu_minus, self.lambda_plus, self.lambda_minus)
        except InvalidInputError as e:
            raise ConfigError("material", str(e)) from e

    def level_set(self) -> LevelSet:
        return make_level_set(self.interface, self.r0, self.gamma)

    def stabilization(self) -> StabilizationConfig:
        mat = self.material()
        edge_set = EdgeSet(self.edge_set)
        if self.tau is None:
            return StabilizationConfig.default(mat, edge_set)
        return StabilizationConfig(self.tau, edge_set)

    def problem(self) -> Problem:
        return make_problem(self.level_set(), self.material(), self.body_force)

    def to_raw(self) -> RawConfig:
        """Resolved configuration including the effective tau."""
        raw = RawConfig({f.name: encode(getattr(self, f.name)) for f in fields(self)})
        raw["tau"] = encode(self.stabilization().tau)
        return raw

def parse_config(path=None, flags: dict=None) -> RunConfig:
    """
    Merges defaults, example preset, the file at *path* and *flags* (a
    mapping of keys to strings or values) into a validated RunConfig.

    Raises:
        ConfigError: unknown key, unparsable value or inconsistent settings.
    """
    user = RawConfig()
    if path is not None:
        user.update(RawConfig.from_file(path))
    for key, value in (flags or {}).items():
        if value is not None:
            user[key] = encode(value)

    for key in user:
        if key not in KEYS:
            raise ConfigError(key, "unknown configuration key")

    merged = {key: encode(default) for key, (_, default, _) in KEYS.items()}
    example = user.get("example", "")
    if example:
        if example not in EXAMPLES:
            raise ConfigError("example", f"unknown example '{example}', choose from {', '.join(EXAMPLES)}")
        preset = dict(EXAMPLES[example])
        if any(key in user for key in LAMBDA_KEYS):
            preset = {k: v for k, v in preset.items() if k not in LAMBDA_KEYS}
        merged.update({k: encode(v) for k, v in preset.items()})
    merged.update(user)
    if not any(merged[key] for key in LAMBDA_KEYS):
        merged["lambda_ratio"] = "1.0"

    values = {}
    for key, (parse, _, _) in KEYS.items():
        try:
            values[key] = parse(merged[key])
        except ValueError as e:
            raise ConfigError(key, f"cannot parse '{merged[key]}': {e}") from e
    return RunConfig(**values)

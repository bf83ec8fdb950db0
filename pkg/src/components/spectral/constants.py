"""Constants for the spectral component."""

import math
from typing import NamedTuple

DEFAULT_MAX_FREQUENCY: int = 512
DEFAULT_QUAD_NODES: int = 8192
ANTI_ALIAS_FACTOR: int = 4  # quad_nodes >= ANTI_ALIAS_FACTOR * max_frequency

NULL_THRESHOLD: float = 1e-12  # eigenvalues below this * kappa(0) are null
TRACE_SLACK: float = 1e-8

# Extended spectra used by the deterministic curves
THEORY_FREQUENCY: int = 2**14
EXTRAPOLATION_MIN_POINTS: int = 3

ALPHA_RANK_WINDOW: tuple[int, int] = (5, 200)
ALPHA_MIN_POINTS: int = 10
ALPHA_TAIL_START: float = 0.2  # tail window starts at this fraction of the resolved ranks

BETA_COEFFICIENT_FLOOR: float = 1e-10
BETA_MIN_RANK: int = 3  # only coefficients beyond this rank enter the fit
BETA_MIN_POINTS: int = 3

MU0_RELATIVE_FLOOR: float = 1e-6  # mu0 above this * ||f|| counts as positive

TAIL_TOLERANCE: float = 1e-3
POWERLAW_SUM_MAX_TERMS: int = 10**8
POWERLAW_SUM_CHUNK: int = 2**20


class TableRow(NamedTuple):
    """One row of the rate table of a kernel."""

    row: str
    target: str
    beta: float
    mu0_positive: bool
    exp_nsc: float
    exp_gen: float


_STANDARD_TARGETS = ("cos2", "theta_sq", "shifted_sq", "sawtooth")
_ODD_ORDER_TARGETS = ("cos2", "sign", "tent", "sawtooth")

# f1..f4 per (order, bias)
TARGET_SETS: dict[tuple[int, bool], tuple[str, str, str, str]] = {
    (0, False): _ODD_ORDER_TARGETS,
    (0, True): _STANDARD_TARGETS,
    (1, False): _STANDARD_TARGETS,
    (1, True): _STANDARD_TARGETS,
    (2, False): _ODD_ORDER_TARGETS,
    (2, True): _STANDARD_TARGETS,
}

NOMINAL_ALPHA: dict[int, float] = {0: 2.0, 1: 4.0, 2: 6.0}

INF = math.inf

RATE_TABLES: dict[tuple[int, bool], tuple[TableRow, ...]] = {
    (1, False): (
        TableRow("f1", "cos2", INF, False, 1 / 4, -3 / 4),
        TableRow("f2", "theta_sq", 2.0, True, 1.0, 0.0),
        TableRow("f3", "shifted_sq", 2.0, False, 1 / 4, -3 / 4),
        TableRow("f4", "sawtooth", 1.0, False, 3 / 4, -1 / 4),
    ),
    (1, True): (
        TableRow("f1", "cos2", INF, False, 1 / 4, -3 / 4),
        TableRow("f2", "theta_sq", 2.0, False, 1 / 4, -3 / 4),
        TableRow("f3", "shifted_sq", 2.0, False, 1 / 4, -3 / 4),
        TableRow("f4", "sawtooth", 1.0, False, 3 / 4, -1 / 4),
    ),
    (2, False): (
        TableRow("f1", "cos2", INF, False, 1 / 6, -5 / 6),
        TableRow("f2", "sign", 1.0, False, 5 / 6, -1 / 6),
        TableRow("f3", "tent", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f4", "sawtooth", 1.0, True, 1.0, 0.0),
    ),
    (2, True): (
        TableRow("f1", "cos2", INF, False, 1 / 6, -5 / 6),
        TableRow("f2", "theta_sq", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f3", "shifted_sq", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f4", "sawtooth", 1.0, False, 5 / 6, -1 / 6),
    ),
    (0, False): (
        TableRow("f1", "cos2", INF, True, 1.0, 0.0),
        TableRow("f2", "sign", 1.0, False, 1 / 2, -1 / 2),
        TableRow("f3", "tent", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f4", "sawtooth", 1.0, True, 1.0, 0.0),
    ),
    (0, True): (
        TableRow("f1", "cos2", INF, False, 1 / 2, -1 / 2),
        TableRow("f2", "theta_sq", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f3", "shifted_sq", 2.0, False, 1 / 2, -1 / 2),
        TableRow("f4", "sawtooth", 1.0, False, 1 / 2, -1 / 2),
    ),
}

__all__ = [
    "ALPHA_MIN_POINTS",
    "ALPHA_RANK_WINDOW",
    "ALPHA_TAIL_START",
    "ANTI_ALIAS_FACTOR",
    "BETA_COEFFICIENT_FLOOR",
    "BETA_MIN_POINTS",
    "BETA_MIN_RANK",
    "DEFAULT_MAX_FREQUENCY",
    "DEFAULT_QUAD_NODES",
    "EXTRAPOLATION_MIN_POINTS",
    "MU0_RELATIVE_FLOOR",
    "NOMINAL_ALPHA",
    "NULL_THRESHOLD",
    "POWERLAW_SUM_CHUNK",
    "POWERLAW_SUM_MAX_TERMS",
    "RATE_TABLES",
    "TAIL_TOLERANCE",
    "TARGET_SETS",
    "THEORY_FREQUENCY",
    "TRACE_SLACK",
    "TableRow",
]

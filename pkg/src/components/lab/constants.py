"""Defaults of the Monte-Carlo learning-curve experiments."""

DEFAULT_N_GRID: tuple[int, ...] = (16, 32, 64, 128, 256, 512, 1024)
EXTENDED_N: int = 2048  # opt-in: one more Cholesky size, dominating runtime
DEFAULT_REPEATS: int = 20
DEFAULT_SIGMA: float = 0.1
DEFAULT_SEED: int = 20240101
DEFAULT_MAX_FREQUENCY: int = 512
PRIOR_TRUNCATION: int = 256

DEFAULT_TOLERANCE: float = 0.15
DEFAULT_DROP_HEAD: int = 2
MIN_R_SQUARED: float = 0.9
PLATEAU_SLOPE_TOLERANCE: float = 0.1  # |slope| bound for Theta(1) rows
LEVEL_RATIO_TOLERANCE: float = 0.2  # |level / constant - 1| bound for Theta(1) rows
MIN_SLOPE_POINTS: int = 3

CURVE_HEADER: tuple[str, ...] = (
    "n",
    "f0_mean",
    "f0_std",
    "g_mean",
    "g_std",
    "m_mean",
    "m_std",
    "f0_det",
    "g_det",
    "m_det",
)

__all__ = [
    "CURVE_HEADER",
    "DEFAULT_DROP_HEAD",
    "DEFAULT_MAX_FREQUENCY",
    "DEFAULT_N_GRID",
    "DEFAULT_REPEATS",
    "DEFAULT_SEED",
    "DEFAULT_SIGMA",
    "DEFAULT_TOLERANCE",
    "EXTENDED_N",
    "LEVEL_RATIO_TOLERANCE",
    "MIN_R_SQUARED",
    "MIN_SLOPE_POINTS",
    "PLATEAU_SLOPE_TOLERANCE",
    "PRIOR_TRUNCATION",
]

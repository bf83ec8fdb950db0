"""Log-log least-squares fits shared by the spectral and lab packages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from utils.errors import DomainError, InsufficientDataError


@dataclass(frozen=True, slots=True)
class LogLogFit:
    """Ordinary least squares of log y on log x."""

    slope: float
    intercept: float
    stderr: float
    r_squared: float
    count: int

    def predict(self, x: np.ndarray | float) -> np.ndarray | float:
        return np.exp(self.intercept) * np.power(x, self.slope)


def loglog_fit(xs: np.ndarray, ys: np.ndarray, *, min_points: int = 3) -> LogLogFit:
    """Fit ``log ys = intercept + slope * log xs``.

    Args:
        xs: Strictly positive abscissae.
        ys: Strictly positive ordinates, same length as ``xs``.
        min_points: Smallest number of points accepted.

    Returns:
        The fitted line with the slope's standard error and R².

    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        msg = f"Shape mismatch xs={xs.shape} ys={ys.shape}"
        raise DomainError(msg)
    if xs.size < min_points:
        msg = f"Need at least {min_points} points for a log-log fit, got {xs.size}"
        raise InsufficientDataError(msg)
    if np.any(xs <= 0) or np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        msg = "Log-log fit requires strictly positive finite values"
        raise DomainError(msg)

    result = linregress(np.log(xs), np.log(ys))
    return LogLogFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        stderr=float(result.stderr),
        r_squared=float(result.rvalue**2),
        count=int(xs.size),
    )


__all__ = ["LogLogFit", "loglog_fit"]

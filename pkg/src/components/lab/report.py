"""Slope fits of learning curves and their comparison with predicted rates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger

from components.spectral import RatePrediction
from utils.errors import DomainError, InsufficientDataError
from utils.fitting import loglog_fit

from .constants import (
    DEFAULT_DROP_HEAD,
    DEFAULT_TOLERANCE,
    LEVEL_RATIO_TOLERANCE,
    MIN_R_SQUARED,
    MIN_SLOPE_POINTS,
    PLATEAU_SLOPE_TOLERANCE,
)
from .experiment import LearningCurveResult


@dataclass(frozen=True, slots=True)
class SlopeFit:
    slope: float
    stderr: float
    r_squared: float


def fit_slope(xs: np.ndarray, ys: np.ndarray, drop_head: int = DEFAULT_DROP_HEAD) -> SlopeFit:
    """OLS slope of log ys against log xs after dropping the ``drop_head`` smallest xs.

    Raises:
        DomainError: if any remaining y is not strictly positive.
        InsufficientDataError: if fewer than three points remain.

    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    order = np.argsort(xs, kind="stable")[drop_head:]
    if order.size < MIN_SLOPE_POINTS:
        msg = f"fit_slope needs {MIN_SLOPE_POINTS} points after dropping {drop_head}, have {order.size}"
        raise InsufficientDataError(msg)
    if np.any(~(ys[order] > 0)):
        msg = f"fit_slope needs strictly positive values, got {ys[order].tolist()}"
        raise DomainError(msg)
    fit = loglog_fit(xs[order], ys[order], min_points=MIN_SLOPE_POINTS)
    return SlopeFit(slope=fit.slope, stderr=fit.stderr, r_squared=fit.r_squared)


@dataclass(frozen=True, slots=True, kw_only=True)
class RateRow:
    quantity: str
    predicted: float
    plateau: bool
    slope: float = math.nan
    stderr: float = math.nan
    r_squared: float = math.nan
    level_ratio: float | None = None
    passed: bool = False
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "quantity": self.quantity,
            "predicted": self.predicted,
            "plateau": self.plateau,
            "slope": self.slope,
            "stderr": self.stderr,
            "r_squared": self.r_squared,
            "level_ratio": self.level_ratio,
            "passed": self.passed,
            "note": self.note,
        }


@dataclass(frozen=True, slots=True, kw_only=True)
class RateReport:
    label: str
    tolerance: float
    prediction: RatePrediction
    rows: tuple[RateRow, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def row(self, quantity: str) -> RateRow:
        for row in self.rows:
            if row.quantity == quantity:
                return row
        msg = f"No report row for '{quantity}'"
        raise KeyError(msg)

    def as_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "prediction": self.prediction.as_dict(),
            "rows": [row.as_dict() for row in self.rows],
        }


def _compare_row(
    quantity: str,
    n_grid: np.ndarray,
    values: np.ndarray,
    predicted: float,
    constant: float | None,
    *,
    plateau: bool,
    tolerance: float,
    drop_head: int,
) -> RateRow:
    try:
        fitted = fit_slope(n_grid, values, drop_head)
    except (DomainError, InsufficientDataError) as exc:
        return RateRow(quantity=quantity, predicted=predicted, plateau=plateau, note=str(exc))

    level_ratio = None
    if plateau:
        passed = abs(fitted.slope) <= PLATEAU_SLOPE_TOLERANCE
        if constant:
            level_ratio = float(values[-1] / constant)
            passed = passed and abs(level_ratio - 1.0) <= LEVEL_RATIO_TOLERANCE
    else:
        passed = abs(fitted.slope - predicted) <= tolerance and fitted.r_squared >= MIN_R_SQUARED
    return RateRow(
        quantity=quantity,
        predicted=predicted,
        plateau=plateau,
        slope=fitted.slope,
        stderr=fitted.stderr,
        r_squared=fitted.r_squared,
        level_ratio=level_ratio,
        passed=passed,
    )


def compare_to_theory(
    result: LearningCurveResult,
    prediction: RatePrediction,
    tolerance: float = DEFAULT_TOLERANCE,
    *,
    drop_head: int = DEFAULT_DROP_HEAD,
) -> RateReport:
    """Fit the NSC, generalization-error and MSE slopes and check them against ``prediction``.

    Power-law rows pass when the slope is within ``tolerance`` of the
    predicted exponent with R^2 >= 0.9; Theta(1) rows pass when
    |slope| <= 0.1 and, where the constant is known, the value at the
    largest n is within 20% of it. Columns that are entirely NaN (G without observation
    noise) and rows with an unbounded predicted exponent are skipped.
    """
    rows = []
    candidates = (
        ("nsc", result.f0_mean, prediction.exp_nsc, None, False),
        ("gen", result.g_mean, prediction.exp_gen, prediction.constant_gen, prediction.mu0_positive),
        ("mse", result.m_mean, prediction.exp_mse, prediction.constant_mse, prediction.mu0_positive),
    )
    for quantity, values, predicted, constant, plateau in candidates:
        if np.all(np.isnan(values)):
            logger.info(f"Skipping {quantity}: no values")
            continue
        if not math.isfinite(predicted):
            logger.info(f"Skipping {quantity}: predicted exponent {predicted}")
            continue
        row = _compare_row(
            quantity,
            result.n_grid,
            values,
            predicted,
            constant,
            plateau=plateau,
            tolerance=tolerance,
            drop_head=drop_head,
        )
        level = "PASS" if row.passed else "FAIL"
        logger.info(f"{level} {quantity} slope={row.slope:.3f} predicted={predicted:.3f} r2={row.r_squared:.3f}")
        rows.append(row)
    return RateReport(label=result.label, tolerance=tolerance, prediction=prediction, rows=tuple(rows))


__all__ = ["RateReport", "RateRow", "SlopeFit", "compare_to_theory", "fit_slope"]

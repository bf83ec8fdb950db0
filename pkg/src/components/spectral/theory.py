"""Deterministic leading-order learning curves evaluated in feature space."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from utils.errors import DomainError, TruncationError
from utils.fitting import loglog_fit

from .constants import TAIL_TOLERANCE
from .mercer import Spectrum
from .targets import TargetExpansion


@dataclass(frozen=True, eq=False)
class TheoryCurve:
    n_grid: np.ndarray
    f0_det: np.ndarray
    g_det: np.ndarray
    m_det: np.ndarray
    p_used: int
    tail_bound: float

    def rows(self) -> list[tuple[int, float, float, float]]:
        return [
            (int(n), float(f), float(g), float(m))
            for n, f, g, m in zip(self.n_grid, self.f0_det, self.g_det, self.m_det, strict=True)
        ]


def eigenvalue_tail_bound(spectrum: Spectrum) -> float:
    """Estimate of sum_{p > P} lambda_p from a power law fitted to the last half of the ranks."""
    if spectrum.complete:
        return 0.0
    count = spectrum.positive_count
    if count < 6:
        return float("inf")
    ranks = np.arange(count // 2, count + 1)
    fit = loglog_fit(ranks, spectrum.eigenvalue[ranks - 1])
    decay = -fit.slope
    if decay <= 1.0:
        return float("inf")
    return float(spectrum.eigenvalue[-1] * count / (decay - 1.0))


def theory_curves(
    spectrum: Spectrum,
    expansion: TargetExpansion,
    sigma_model2: float,
    sigma_true2: float | None = None,
    n_grid: Sequence[int] | np.ndarray = (),
    *,
    t: float = 0.0,
    tail_tol: float = TAIL_TOLERANCE,
) -> TheoryCurve:
    """Leading-order F0, G and M as functions of n.

    With x_p = n lambda_p / sigma^2(n) and sigma^2(n) = sigma_model2 * n^t:

    - f0 = 1/2 sum[log(1 + x) - x/(1 + x)] + n/(2 sigma^2) [sum mu^2/(1 + x) + mu0^2]
    - g = 1/(2 sigma^2) [sum lambda/(1 + x) - sum lambda/(1 + x)^2 + sum mu^2/(1 + x)^2 + mu0^2]
    - m = sigma_true^2/sigma^2 [sum lambda/(1 + x) - sum lambda/(1 + x)^2] + sum mu^2/(1 + x)^2 + mu0^2

    The in-span mass above the listed modes (``expansion.tail_sq``) is counted
    with mu0 as not yet learned.

    Raises:
        TruncationError: if the eigenvalue mass beyond the listed modes exceeds
            ``tail_tol * lambda_1``.

    """
    if sigma_model2 <= 0:
        msg = f"sigma_model2 must be positive, got {sigma_model2}"
        raise DomainError(msg)
    if expansion.mu.shape != spectrum.eigenvalue.shape:
        msg = f"Expansion has {expansion.mu.size} coefficients for {spectrum.positive_count} modes"
        raise DomainError(msg)
    sigma_true2 = sigma_model2 if sigma_true2 is None else sigma_true2

    tail = eigenvalue_tail_bound(spectrum)
    if tail > tail_tol * spectrum.eigenvalue[0]:
        msg = f"Eigenvalue tail {tail:.3e} exceeds {tail_tol:g} * lambda_1 on {spectrum.label}; extend the spectrum"
        raise TruncationError(msg)

    n = np.asarray(n_grid, dtype=float)
    lam = spectrum.eigenvalue[None, :]
    mu_sq = expansion.mu[None, :] ** 2
    unlearned = expansion.mu0**2 + expansion.tail_sq
    sigma2 = sigma_model2 * n**t
    x = n[:, None] * lam / sigma2[:, None]
    shrink = 1.0 / (1.0 + x)

    variance = np.sum(lam * shrink, axis=1) - np.sum(lam * shrink**2, axis=1)
    bias = np.sum(mu_sq * shrink**2, axis=1) + unlearned
    f0 = 0.5 * np.sum(np.log1p(x) - x * shrink, axis=1) + n / (2.0 * sigma2) * (
        np.sum(mu_sq * shrink, axis=1) + unlearned
    )
    g = (variance + bias) / (2.0 * sigma2)
    m = sigma_true2 / sigma2 * variance + bias

    logger.debug(
        f"Theory curves {spectrum.label} target={expansion.name} P={spectrum.positive_count} "
        f"tail={tail:.3e} points={n.size}",
    )
    return TheoryCurve(
        n_grid=n.astype(int),
        f0_det=f0,
        g_det=g,
        m_det=m,
        p_used=spectrum.positive_count,
        tail_bound=tail,
    )


__all__ = ["TheoryCurve", "eigenvalue_tail_bound", "theory_curves"]

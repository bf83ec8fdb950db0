"""Capacity and source exponents, and the learning-curve rates they imply."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger

from utils.errors import DomainError, InsufficientDataError
from utils.fitting import loglog_fit

from .constants import (
    ALPHA_MIN_POINTS,
    ALPHA_RANK_WINDOW,
    ALPHA_TAIL_START,
    BETA_COEFFICIENT_FLOOR,
    BETA_MIN_POINTS,
    BETA_MIN_RANK,
)
from .mercer import Spectrum
from .targets import TargetExpansion


def estimate_alpha(
    spectrum: Spectrum,
    rank_window: tuple[int, int] = ALPHA_RANK_WINDOW,
    *,
    include_extrapolated: bool = False,
) -> float:
    """Negated log-log slope of lambda_p against the 1-based rank p.

    The window is clipped to the modes resolved by quadrature unless
    ``include_extrapolated`` is set.

    Raises:
        InsufficientDataError: if fewer than ``ALPHA_MIN_POINTS`` ranks fall in the window.

    """
    first, last = rank_window
    last = min(last, spectrum.positive_count if include_extrapolated else spectrum.resolved_count)
    ranks = np.arange(first, last + 1)
    if ranks.size < ALPHA_MIN_POINTS:
        msg = f"alpha needs {ALPHA_MIN_POINTS} eigenvalues in ranks {first}..{last}, have {ranks.size}"
        raise InsufficientDataError(msg)
    fit = loglog_fit(ranks, spectrum.eigenvalue[ranks - 1], min_points=ALPHA_MIN_POINTS)
    logger.debug(f"alpha fit {spectrum.label} ranks={first}..{last} slope={fit.slope:.4f} r2={fit.r_squared:.4f}")
    return -fit.slope


def tail_rank_window(spectrum: Spectrum, *, include_extrapolated: bool = False) -> tuple[int, int]:
    """Ranks from ``ALPHA_TAIL_START`` of the listed modes up to the last one.

    Near the head the rank runs a few places ahead of the frequency, which
    steepens a fitted slope; this window sits past that offset. Only resolved
    modes count unless ``include_extrapolated`` is set.
    """
    last = spectrum.positive_count if include_extrapolated else spectrum.resolved_count
    return max(ALPHA_RANK_WINDOW[0], int(ALPHA_TAIL_START * last)), last


def estimate_tail_alpha(spectrum: Spectrum) -> float:
    """Alpha over the tail window of every listed mode, extrapolated ones included.

    Meant for spectra built with ``extend_to``: the extrapolated modes carry
    the per-frequency power law measured on the resolved band out to ranks
    where the offset between rank and frequency no longer biases the slope.
    Smooth kernels need this, since their resolved band ends after about a
    hundred ranks.
    """
    window = tail_rank_window(spectrum, include_extrapolated=True)
    return estimate_alpha(spectrum, window, include_extrapolated=True)


def estimate_beta(expansion: TargetExpansion) -> float:
    """Negated log-log slope of |mu_p| against p over the nonzero coefficients.

    Returns +inf for finite expansions, that is when fewer than
    ``BETA_MIN_POINTS`` nonzero coefficients sit beyond rank ``BETA_MIN_RANK``.
    """
    ranks = np.flatnonzero(np.abs(expansion.mu) > BETA_COEFFICIENT_FLOOR) + 1
    ranks = ranks[ranks > BETA_MIN_RANK]
    if ranks.size < BETA_MIN_POINTS:
        return math.inf
    fit = loglog_fit(ranks, np.abs(expansion.mu[ranks - 1]), min_points=BETA_MIN_POINTS)
    return -fit.slope


@dataclass(frozen=True, slots=True, kw_only=True)
class RatePrediction:
    """Power-law exponents of the learning curves; 0 encodes a Theta(1) plateau."""

    alpha: float
    beta: float
    mu0_positive: bool
    t: float
    exp_nsc: float
    exp_gen: float
    exp_mse: float
    constant_gen: float | None = None
    constant_mse: float | None = None

    def as_dict(self) -> dict[str, float | bool | None]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "mu0_positive": self.mu0_positive,
            "t": self.t,
            "exp_nsc": self.exp_nsc,
            "exp_gen": self.exp_gen,
            "exp_mse": self.exp_mse,
            "constant_gen": self.constant_gen,
            "constant_mse": self.constant_mse,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RatePrediction:
        """Rebuild from ``as_dict`` output; extra keys are ignored."""
        names = ("alpha", "beta", "mu0_positive", "t", "exp_nsc", "exp_gen", "exp_mse", "constant_gen", "constant_mse")
        missing = [name for name in names[:7] if name not in data]
        if missing:
            msg = f"Rate prediction is missing {missing}"
            raise DomainError(msg)
        return cls(**{name: data[name] for name in names if name in data})


def predict_rates(
    alpha: float,
    beta: float,
    mu0_positive: bool,
    t: float = 0.0,
    *,
    mu0: float = 0.0,
    sigma2: float | None = None,
    noisy: bool = True,
) -> RatePrediction:
    """Exponents of the expected NSC, generalization error and excess MSE.

    Args:
        alpha: eigenvalue decay exponent, > 1.
        beta: coefficient decay exponent, > 1/2 (may be +inf).
        mu0_positive: whether the target has mass outside the kernel's span.
        t: exponent of the model noise schedule sigma^2 = n^t, < 1.
        mu0: out-of-span mass, used for the plateau constants.
        sigma2: noise variance, used for the generalization-error plateau.
        noisy: drop the noise branch of the MSE exponent when False.

    Raises:
        DomainError: if any precondition on alpha, beta or t fails.

    """
    problems = []
    if not alpha > 1:
        problems.append(f"alpha={alpha} must exceed 1")
    if not beta > 0.5:
        problems.append(f"beta={beta} must exceed 1/2")
    if not t < 1:
        problems.append(f"t={t} must be below 1")
    if problems:
        msg = "; ".join(problems)
        raise DomainError(msg)

    if mu0_positive:
        return RatePrediction(
            alpha=alpha,
            beta=beta,
            mu0_positive=True,
            t=t,
            exp_nsc=1.0,
            exp_gen=0.0,
            exp_mse=0.0,
            constant_gen=mu0**2 / (2.0 * sigma2) if sigma2 else None,
            constant_mse=mu0**2,
        )

    source = (1.0 - 2.0 * beta) / alpha if math.isfinite(beta) else -math.inf
    exp_mse = source * (1.0 - t)
    if noisy:
        exp_mse = max((1.0 - alpha - t) / alpha, exp_mse)
    return RatePrediction(
        alpha=alpha,
        beta=beta,
        mu0_positive=False,
        t=t,
        exp_nsc=max(1.0 / alpha, source + 1.0),
        exp_gen=max((1.0 - alpha) * (1.0 - t) / alpha, source * (1.0 - t)),
        exp_mse=exp_mse,
    )


__all__ = [
    "RatePrediction",
    "estimate_alpha",
    "estimate_beta",
    "estimate_tail_alpha",
    "predict_rates",
    "tail_rank_window",
]

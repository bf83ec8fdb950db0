"""Exact GP posterior on S1 through one Cholesky factorization."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from components.kernels import (
    DEFAULT_JITTER,
    AngularPoint,
    JitterPolicy,
    ZonalKernel,
    as_thetas,
    cross_gram,
    gram,
    jittered_cholesky,
)
from utils.errors import DomainError

from .constants import VARIANCE_CLAMP_TOLERANCE

Target = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Training inputs as angles, noisy outputs and the function that generated them."""

    points: np.ndarray
    y: np.ndarray
    sigma_true2: float = 0.0
    target: Target | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", as_thetas(self.points))
        object.__setattr__(self, "y", np.atleast_1d(np.asarray(self.y, dtype=float)))
        if self.points.size == 0 or self.points.shape != self.y.shape:
            msg = f"Dataset needs n >= 1 matching points and outputs, got {self.points.shape} and {self.y.shape}"
            raise DomainError(msg)
        if self.sigma_true2 < 0:
            msg = f"sigma_true2 must be >= 0, got {self.sigma_true2}"
            raise DomainError(msg)

    @property
    def n(self) -> int:
        return int(self.points.size)

    @property
    def angular_points(self) -> list[AngularPoint]:
        return [AngularPoint(theta) for theta in self.points]

    def f_values(self) -> np.ndarray:
        if self.target is None:
            msg = "Dataset has no target function"
            raise DomainError(msg)
        return np.asarray(self.target(self.points), dtype=float)


@dataclass(frozen=True, eq=False)
class PosteriorState:
    """A fitted GP: chol @ chol.T == K + (sigma_model2 + jitter) I and dual solves it against y."""

    kernel: ZonalKernel
    points: np.ndarray
    chol: np.ndarray
    dual: np.ndarray
    sigma_model2: float
    jitter: float = 0.0

    @property
    def n(self) -> int:
        return int(self.points.size)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return cho_solve((self.chol, True), rhs, check_finite=False)

    def whiten(self, rhs: np.ndarray) -> np.ndarray:
        """chol^-1 rhs."""
        return solve_triangular(self.chol, rhs, lower=True, check_finite=False)

    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))


def fit(
    kernel: ZonalKernel,
    dataset: Dataset,
    sigma_model2: float,
    *,
    jitter_policy: JitterPolicy = DEFAULT_JITTER,
) -> PosteriorState:
    """Factor K + sigma_model2 I and solve for the dual weights.

    Raises:
        DomainError: if ``sigma_model2`` is negative.
        SingularMatrixError: if the jitter ladder is exhausted.

    """
    if sigma_model2 < 0:
        msg = f"sigma_model2 must be >= 0, got {sigma_model2}"
        raise DomainError(msg)
    entries = gram(kernel, dataset.points).entries
    system = entries + sigma_model2 * np.eye(dataset.n)
    chol, jitter = jittered_cholesky(system, kappa0=kernel.kappa0, policy=jitter_policy)
    dual = cho_solve((chol, True), dataset.y, check_finite=False)
    return PosteriorState(
        kernel=kernel,
        points=dataset.points,
        chol=chol,
        dual=dual,
        sigma_model2=sigma_model2,
        jitter=jitter,
    )


def _scalar_or_array(values: np.ndarray, query: object) -> np.ndarray | float:
    if isinstance(query, AngularPoint) or np.isscalar(query):
        return float(values[0])
    return values


def posterior_mean(state: PosteriorState, x: AngularPoint | np.ndarray | float) -> np.ndarray | float:
    """k(x, X) @ dual."""
    k_x = cross_gram(state.kernel, x, state.points)
    return _scalar_or_array(k_x @ state.dual, x)


def posterior_mean_var(state: PosteriorState, x: Iterable[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and variance at many inputs, sharing one cross-covariance."""
    k_x = cross_gram(state.kernel, x, state.points)
    mean = k_x @ state.dual
    whitened = state.whiten(k_x.T)
    var = state.kernel.kappa0 - np.sum(whitened**2, axis=0)
    floor = -VARIANCE_CLAMP_TOLERANCE * state.kernel.kappa0
    if np.any(var < floor):
        logger.warning(f"Posterior variance below tolerance min={var.min():.3e} n={state.n}; clamped to 0")
    return mean, np.maximum(var, 0.0)


def posterior_var(state: PosteriorState, x: AngularPoint | np.ndarray | float) -> np.ndarray | float:
    """k(x, x) - k(x, X)(K + sigma^2 I)^-1 k(X, x), clamped at 0."""
    _, var = posterior_mean_var(state, x)
    return _scalar_or_array(var, x)


def krr_predict(
    kernel: ZonalKernel,
    points: Iterable[AngularPoint] | np.ndarray,
    y: np.ndarray,
    lambda_reg: float,
    x: AngularPoint | np.ndarray | float,
) -> np.ndarray | float:
    """Kernel ridge regression k(x, X)(K + n lambda I)^-1 y."""
    if lambda_reg <= 0:
        msg = f"lambda_reg must be positive, got {lambda_reg}"
        raise DomainError(msg)
    thetas = as_thetas(points)
    n = thetas.size
    system = gram(kernel, thetas).entries + n * lambda_reg * np.eye(n)
    weights = cho_solve(cho_factor(system, lower=True, check_finite=False), np.asarray(y, dtype=float))
    return _scalar_or_array(cross_gram(kernel, x, thetas) @ weights, x)


__all__ = [
    "Dataset",
    "PosteriorState",
    "fit",
    "krr_predict",
    "posterior_mean",
    "posterior_mean_var",
    "posterior_var",
]

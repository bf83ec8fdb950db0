"""Learning-curve functionals of a fitted GP: NSC, generalization error, excess MSE."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from loguru import logger
from scipy.linalg import solve_triangular

from components.kernels import ZonalKernel, as_thetas, cross_gram, gram, jittered_cholesky
from utils.errors import DomainError

from .constants import DEFAULT_TEST_NODES, INCLUDE_NOISE_IN_PREDICTIVE
from .posterior import Dataset, PosteriorState, Target, fit, posterior_mean, posterior_mean_var


def quadrature_grid(nodes: int = DEFAULT_TEST_NODES) -> np.ndarray:
    """Uniform grid on [-pi, pi) whose plain average integrates against U(S1)."""
    if nodes < 1:
        msg = f"quadrature needs at least one node, got {nodes}"
        raise DomainError(msg)
    return -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes


def kl_gaussian(
    mean1: np.ndarray | float,
    var1: np.ndarray | float,
    mean2: np.ndarray | float,
    var2: np.ndarray | float,
) -> np.ndarray | float:
    """KL(N(mean1, var1) || N(mean2, var2)), elementwise."""
    var1 = np.asarray(var1, dtype=float)
    var2 = np.asarray(var2, dtype=float)
    if np.any(var1 <= 0) or np.any(var2 <= 0):
        msg = "kl_gaussian needs strictly positive variances"
        raise DomainError(msg)
    shift = (np.asarray(mean1, dtype=float) - np.asarray(mean2, dtype=float)) ** 2
    kl = 0.5 * (np.log(var2 / var1) + (var1 + shift) / var2 - 1.0)
    return float(kl) if kl.ndim == 0 else kl


def nsc(state: PosteriorState, dataset: Dataset, f_values: np.ndarray | None = None) -> float:
    """Normalized stochastic complexity F0(D_n) at sigma^2 = the model noise of ``state``.

    F0 = 1/2 log det(I + K/sigma^2) + 1/(2 sigma^2) y'(I + K/sigma^2)^-1 y - 1/(2 sigma^2) |y - f(x)|^2
    """
    sigma2 = state.sigma_model2
    if sigma2 <= 0:
        msg = "nsc needs a positive noise variance"
        raise DomainError(msg)
    f_values = dataset.f_values() if f_values is None else np.asarray(f_values, dtype=float)
    residual = dataset.y - f_values
    log_det = state.log_det() - state.n * math.log(sigma2)
    # (1/2 sigma^2) y'(I + K/sigma^2)^-1 y == 1/2 y'(K + sigma^2 I)^-1 y
    return 0.5 * log_det + 0.5 * float(dataset.y @ state.dual) - float(residual @ residual) / (2.0 * sigma2)


class NscTerms(NamedTuple):
    """Noise expectation of F0 split into its data-independent and target parts."""

    t1: float
    t2: float

    @property
    def total(self) -> float:
        return self.t1 + self.t2


def _factor(kernel: ZonalKernel, thetas: np.ndarray, sigma2: float) -> np.ndarray:
    system = gram(kernel, thetas).entries + sigma2 * np.eye(thetas.size)
    chol, _ = jittered_cholesky(system, kappa0=kernel.kappa0)
    return chol


def expected_nsc_terms(
    kernel: ZonalKernel,
    points: np.ndarray,
    f_values: np.ndarray,
    sigma2: float,
) -> NscTerms:
    """T1 = 1/2 log det(I + K/sigma^2) - 1/2 tr(I - (I + K/sigma^2)^-1), T2 = 1/(2 sigma^2) f'(I + K/sigma^2)^-1 f."""
    if sigma2 <= 0:
        msg = "expected_nsc needs a positive noise variance"
        raise DomainError(msg)
    thetas = as_thetas(points)
    n = thetas.size
    chol = _factor(kernel, thetas, sigma2)
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol)))) - n * math.log(sigma2)
    inverse_chol = solve_triangular(chol, np.eye(n), lower=True, check_finite=False)
    # tr((I + K/sigma^2)^-1) = sigma^2 tr((K + sigma^2 I)^-1) = sigma^2 |chol^-1|_F^2
    trace = sigma2 * float(np.sum(inverse_chol**2))
    whitened = inverse_chol @ np.asarray(f_values, dtype=float)
    return NscTerms(t1=0.5 * log_det - 0.5 * (n - trace), t2=0.5 * float(whitened @ whitened))


def expected_nsc(kernel: ZonalKernel, points: np.ndarray, f_values: np.ndarray, sigma2: float) -> float:
    """E over the noise of F0(D_n); equals T1 + T2."""
    return expected_nsc_terms(kernel, points, f_values, sigma2).total


def _predictive_variance(var: np.ndarray, sigma_model2: float, include_noise: bool) -> np.ndarray:
    predictive = var + sigma_model2 if include_noise else var
    # a zero predictive variance would make the KL infinite; keep it representable
    return np.maximum(predictive, np.finfo(float).tiny)


def bayes_gen_error(
    state: PosteriorState,
    target: Target,
    sigma_true2: float,
    quad_nodes: int = DEFAULT_TEST_NODES,
    *,
    include_noise_in_predictive: bool = INCLUDE_NOISE_IN_PREDICTIVE,
) -> float:
    """Average over a uniform test grid of KL(N(f, sigma_true2) || predictive).

    The predictive variance is k(x, x) plus the model noise when
    ``include_noise_in_predictive`` is set, the posterior variance alone otherwise.
    """
    grid = quadrature_grid(quad_nodes)
    mean, var = posterior_mean_var(state, grid)
    predictive = _predictive_variance(var, state.sigma_model2, include_noise_in_predictive)
    return float(np.mean(kl_gaussian(target(grid), sigma_true2, mean, predictive)))


def expected_gen_error(
    state: PosteriorState,
    target: Target,
    sigma_true2: float,
    quad_nodes: int = DEFAULT_TEST_NODES,
    *,
    include_noise_in_predictive: bool = INCLUDE_NOISE_IN_PREDICTIVE,
) -> float:
    """Noise expectation of ``bayes_gen_error`` for the inputs of ``state``, in closed form.

    The posterior mean is linear in the noise, so E(f - mean)^2 is the squared
    bias of the noiseless fit plus sigma_true2 |(K + sigma^2 I)^-1 k(X, x)|^2.
    The outputs stored in ``state`` are not used.
    """
    if sigma_true2 <= 0:
        msg = "expected_gen_error needs a positive true noise variance"
        raise DomainError(msg)
    grid = quadrature_grid(quad_nodes)
    f_train = np.asarray(target(state.points), dtype=float)
    f_grid = np.asarray(target(grid), dtype=float)
    _, var = posterior_mean_var(state, grid)
    k_x = _grid_cross(state, grid)
    weights = state.solve(k_x.T)
    clean_mean = weights.T @ f_train
    noise_spread = sigma_true2 * np.sum(weights**2, axis=0)
    predictive = _predictive_variance(var, state.sigma_model2, include_noise_in_predictive)
    kl = 0.5 * (
        np.log(predictive / sigma_true2) + (sigma_true2 + (f_grid - clean_mean) ** 2 + noise_spread) / predictive - 1.0
    )
    return float(np.mean(kl))


def _grid_cross(state: PosteriorState, grid: np.ndarray) -> np.ndarray:
    return cross_gram(state.kernel, grid, state.points)


def excess_mse(state: PosteriorState, target: Target, quad_nodes: int = DEFAULT_TEST_NODES) -> float:
    """Average over a uniform test grid of (posterior mean - f)^2."""
    grid = quadrature_grid(quad_nodes)
    mean = posterior_mean(state, grid)
    return float(np.mean((mean - np.asarray(target(grid), dtype=float)) ** 2))


@dataclass(frozen=True, slots=True)
class IdentityCheck:
    """Both sides of G(D_n) = E F0(D_{n+1}) - F0(D_n); iterates as (lhs, rhs)."""

    lhs: float
    rhs: float
    diff_se: float = 0.0
    draws: int = 0

    @property
    def diff(self) -> float:
        return self.lhs - self.rhs

    def __iter__(self):
        yield self.lhs
        yield self.rhs


def gen_error_identity_check(
    kernel: ZonalKernel,
    dataset: Dataset,
    target: Target,
    sigma2: float,
    quad_nodes: int = DEFAULT_TEST_NODES,
    *,
    draws: int = 0,
    seed: int = 0,
) -> IdentityCheck:
    """Compare the generalization error with the increment of F0 on one test point.

    Both sides use the same test grid and the predictive density that
    includes the noise. With ``draws == 0`` the noise expectation is taken in
    closed form on both sides and they agree to rounding. Otherwise the
    training noise is drawn ``draws`` times from a generator seeded with
    ``seed`` and shared by both sides; the expectation over the test output
    is always analytic.
    """
    if sigma2 <= 0:
        msg = "identity check needs a positive noise variance"
        raise DomainError(msg)
    thetas = dataset.points
    n = thetas.size
    f_train = np.asarray(target(thetas), dtype=float)
    grid = quadrature_grid(quad_nodes)
    f_grid = np.asarray(target(grid), dtype=float)

    if draws == 0:
        state = fit(kernel, Dataset(thetas, f_train, sigma2, target), sigma2)
        lhs = expected_gen_error(state, target, sigma2, quad_nodes)
        base = expected_nsc(kernel, thetas, f_train, sigma2)
        augmented = [
            expected_nsc(kernel, np.append(thetas, x), np.append(f_train, fx), sigma2)
            for x, fx in zip(grid, f_grid, strict=True)
        ]
        rhs = float(np.mean(augmented)) - base
        logger.debug(f"Identity check analytic n={n} lhs={lhs:.12g} rhs={rhs:.12g}")
        return IdentityCheck(lhs=lhs, rhs=rhs)

    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, math.sqrt(sigma2), size=(n, draws))
    outputs = f_train[:, None] + noise
    state = fit(kernel, Dataset(thetas, f_train, sigma2, target), sigma2)

    # left side: one KL average per draw on the shared inputs
    k_grid = _grid_cross(state, grid)
    means = k_grid @ state.solve(outputs)
    _, var = posterior_mean_var(state, grid)
    predictive = var + sigma2
    lhs_draws = np.mean(
        0.5
        * (
            np.log(predictive / sigma2)[:, None]
            + (sigma2 + (f_grid[:, None] - means) ** 2) / predictive[:, None]
            - 1.0
        ),
        axis=0,
    )

    # right side: F0(D_n) per draw minus the average of E_{y'} F0(D_{n+1}) over the grid
    log_det_n = state.log_det() - n * math.log(sigma2)
    quad_n = np.sum(state.whiten(outputs) ** 2, axis=0)
    residual = np.sum(noise**2, axis=0)
    f0_n = 0.5 * log_det_n + 0.5 * quad_n - residual / (2.0 * sigma2)

    f0_next = np.zeros(draws)
    for x, fx in zip(grid, f_grid, strict=True):
        points = np.append(thetas, x)
        chol = _factor(kernel, points, sigma2)
        log_det = 2.0 * float(np.sum(np.log(np.diag(chol)))) - (n + 1) * math.log(sigma2)
        stacked = np.vstack([outputs, np.full((1, draws), fx)])
        whitened = _whiten(chol, stacked)
        # E_{y'} y'A^-1 y adds sigma^2 (A^-1)_{last,last} = sigma^2 / chol_{last,last}^2
        quadratic = np.sum(whitened**2, axis=0) + sigma2 / chol[-1, -1] ** 2
        f0_next += 0.5 * log_det + 0.5 * quadratic - (residual + sigma2) / (2.0 * sigma2)
    rhs_draws = f0_next / grid.size - f0_n

    diffs = lhs_draws - rhs_draws
    diff_se = float(np.std(diffs, ddof=1) / math.sqrt(draws)) if draws > 1 else math.inf
    check = IdentityCheck(lhs=float(lhs_draws.mean()), rhs=float(rhs_draws.mean()), diff_se=diff_se, draws=draws)
    logger.debug(f"Identity check draws={draws} n={n} diff={check.diff:.3e} se={diff_se:.3e}")
    return check


def _whiten(chol: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return solve_triangular(chol, rhs, lower=True, check_finite=False)


__all__ = [
    "IdentityCheck",
    "NscTerms",
    "bayes_gen_error",
    "excess_mse",
    "expected_gen_error",
    "expected_nsc",
    "expected_nsc_terms",
    "gen_error_identity_check",
    "kl_gaussian",
    "nsc",
    "quadrature_grid",
]

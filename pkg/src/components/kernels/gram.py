"""Gram matrices and jittered Cholesky factorizations."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import LinAlgError, cho_factor

from utils.errors import SingularMatrixError

from .arccos import AngularPoint, ZonalKernel, as_thetas, pairwise_angles
from .constants import JITTER_FACTOR, JITTER_MAX, JITTER_START


@dataclass(frozen=True, slots=True)
class JitterPolicy:
    """Diagonal regularization ladder, in units of kappa(0)."""

    start: float = JITTER_START
    factor: float = JITTER_FACTOR
    maximum: float = JITTER_MAX

    def ladder(self) -> list[float]:
        steps = [0.0]
        level = self.start
        while level <= self.maximum * (1 + 1e-9):
            steps.append(level)
            level *= self.factor
        return steps


DEFAULT_JITTER = JitterPolicy()


@dataclass(frozen=True, slots=True)
class GramMatrix:
    entries: np.ndarray
    jitter_used: float = 0.0

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


def cross_gram(
    kernel: ZonalKernel,
    points_a: Iterable[AngularPoint] | np.ndarray,
    points_b: Iterable[AngularPoint] | np.ndarray,
) -> np.ndarray:
    """Kernel matrix k(a_i, b_j)."""
    return np.asarray(kernel.profile(pairwise_angles(as_thetas(points_a), as_thetas(points_b))))


def jittered_cholesky(
    matrix: np.ndarray,
    *,
    kappa0: float,
    policy: JitterPolicy = DEFAULT_JITTER,
) -> tuple[np.ndarray, float]:
    """Lower Cholesky factor of ``matrix + jitter * I`` with the smallest jitter that works.

    Returns:
        The lower-triangular factor and the absolute jitter added.

    Raises:
        SingularMatrixError: if the largest jitter of the ladder still fails.

    """
    n = matrix.shape[0]
    for relative in policy.ladder():
        jitter = relative * kappa0
        try:
            chol, _ = cho_factor(matrix + jitter * np.eye(n), lower=True, check_finite=False)
        except LinAlgError:
            logger.debug(f"Cholesky failed n={n} jitter={jitter:.1e}, escalating")
            continue
        if jitter > 0:
            logger.debug(f"Cholesky succeeded with jitter={jitter:.1e} n={n}")
        return np.tril(chol), jitter
    msg = f"Cholesky failed for n={n} after jitter up to {policy.maximum * kappa0:.1e}"
    raise SingularMatrixError(msg)


def gram(
    kernel: ZonalKernel,
    points: Iterable[AngularPoint] | np.ndarray,
    jitter_policy: JitterPolicy | None = None,
) -> GramMatrix:
    """Symmetric Gram matrix of ``kernel`` on ``points``.

    With a ``jitter_policy`` the matrix is also checked for a Cholesky
    factorization and ``jitter_used`` records the diagonal term that made
    it succeed; the stored entries never include the jitter.
    """
    thetas = as_thetas(points)
    raw = cross_gram(kernel, thetas, thetas)
    entries = 0.5 * (raw + raw.T)
    jitter = 0.0
    if jitter_policy is not None:
        _, jitter = jittered_cholesky(entries, kappa0=kernel.kappa0, policy=jitter_policy)
    return GramMatrix(entries=entries, jitter_used=jitter)


__all__ = [
    "DEFAULT_JITTER",
    "GramMatrix",
    "JitterPolicy",
    "cross_gram",
    "gram",
    "jittered_cholesky",
]

"""Exception hierarchy shared by every gp-lab package."""

from __future__ import annotations

import numpy as np


class GpLabError(Exception):
    """Base class for all errors raised by gp-lab."""


class DomainError(GpLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class QuadratureResolutionError(GpLabError, ValueError):
    """Too few quadrature nodes for the requested frequency range."""


class InsufficientDataError(GpLabError, ValueError):
    """Not enough usable points for a regression fit."""


class TruncationError(GpLabError, RuntimeError):
    """A truncated spectral sum leaves too much eigenvalue mass behind."""


class SingularMatrixError(GpLabError, np.linalg.LinAlgError):
    """Cholesky factorization failed even after jitter escalation."""


class ConfigError(GpLabError, ValueError):
    """Invalid experiment configuration or command-line input."""


class CellFailure(GpLabError, RuntimeError):
    """A learning-curve cell failed; carries the (n, repeat) it belongs to."""

    def __init__(self, n: int, repeat: int, cause: BaseException) -> None:
        self.n = n
        self.repeat = repeat
        self.cause = cause
        super().__init__(f"cell n={n} repeat={repeat} failed: {cause}")


__all__ = [
    "CellFailure",
    "ConfigError",
    "DomainError",
    "GpLabError",
    "InsufficientDataError",
    "QuadratureResolutionError",
    "SingularMatrixError",
    "TruncationError",
]

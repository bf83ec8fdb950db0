"""Arc-cosine kernels on the unit circle as zonal profiles."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from utils.errors import DomainError

from .constants import ANGLE_SLACK, KERNEL_ORDERS


def wrap_angle(theta: np.ndarray | float) -> np.ndarray | float:
    """Map any real angle to its representative in [-pi, pi)."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True, slots=True)
class AngularPoint:
    """A point x = (cos theta, sin theta) on S1."""

    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @property
    def xy(self) -> tuple[float, float]:
        return math.cos(self.theta), math.sin(self.theta)


def as_thetas(points: Iterable[AngularPoint] | np.ndarray | float) -> np.ndarray:
    """Angles of ``points`` as a wrapped 1-D float array."""
    if isinstance(points, AngularPoint):
        return np.array([points.theta])
    if isinstance(points, np.ndarray) or np.isscalar(points):
        return np.atleast_1d(wrap_angle(np.asarray(points, dtype=float)))
    return np.array([p.theta if isinstance(p, AngularPoint) else wrap_angle(p) for p in points], dtype=float)


def pairwise_angles(thetas_a: np.ndarray, thetas_b: np.ndarray) -> np.ndarray:
    """Angles in [0, pi] between every pair of points.

    Equal to arccos of the inner product, computed from the wrapped angle
    difference so that nearly coincident and nearly antipodal pairs keep
    full precision.
    """
    diff = np.subtract.outer(np.asarray(thetas_a, dtype=float), np.asarray(thetas_b, dtype=float))
    return np.abs(np.mod(diff + np.pi, 2 * np.pi) - np.pi)


def angle_between(p1: AngularPoint, p2: AngularPoint) -> float:
    return float(pairwise_angles(np.array([p1.theta]), np.array([p2.theta]))[0, 0])


@runtime_checkable
class ZonalKernel(Protocol):
    """Kernel on S1 that depends only on the angle between its inputs."""

    @property
    def kappa0(self) -> float: ...

    def profile(self, delta: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True, slots=True)
class KernelSpec:
    """Arc-cosine kernel of order 0, 1 or 2, with or without hidden biases."""

    order: int
    bias: bool = False

    def __post_init__(self) -> None:
        if self.order not in (0, 1, 2):
            msg = f"Arc-cosine order must be 0, 1 or 2, got {self.order!r}"
            raise DomainError(msg)

    @classmethod
    def from_name(cls, name: str, *, bias: bool = False) -> KernelSpec:
        try:
            order = KERNEL_ORDERS[name]
        except KeyError:
            msg = f"Unknown kernel '{name}', expected one of {sorted(KERNEL_ORDERS)}"
            raise DomainError(msg) from None
        return cls(order=order, bias=bias)

    @property
    def name(self) -> str:
        return f"arccos{self.order}"

    @property
    def label(self) -> str:
        return f"{self.name}/{'on' if self.bias else 'off'}"

    @property
    def kappa0(self) -> float:
        return 3.0 if self.order == 2 else 1.0

    def profile(self, delta: np.ndarray) -> np.ndarray:
        return zonal_profile(self, delta)


def _biased_angle(delta: np.ndarray) -> np.ndarray:
    # arccos((cos delta + 1) / 2) written as 2 arcsin(sin(delta/2) / sqrt 2)
    return 2.0 * np.arcsin(np.abs(np.sin(delta / 2.0)) / math.sqrt(2.0))


def zonal_profile(spec: KernelSpec, delta: np.ndarray | float) -> np.ndarray | float:
    """Kernel value as a function of the angle ``delta`` in [0, pi]."""
    arr = np.asarray(delta, dtype=float)
    if np.any(arr < -ANGLE_SLACK) or np.any(arr > np.pi + ANGLE_SLACK) or np.any(np.isnan(arr)):
        msg = f"Angle outside [0, pi]: min={np.min(arr):.3g} max={np.max(arr):.3g}"
        raise DomainError(msg)
    psi = np.clip(arr, 0.0, np.pi)
    if spec.bias:
        psi = _biased_angle(psi)

    sin_psi = np.sin(psi)
    cos_psi = np.cos(psi)
    if spec.order == 0:
        values = (np.pi - psi) / np.pi
    elif spec.order == 1:
        values = (sin_psi + (np.pi - psi) * cos_psi) / np.pi
    else:
        values = (3.0 * sin_psi * cos_psi + (np.pi - psi) * (1.0 + 2.0 * cos_psi**2)) / np.pi

    if values.ndim == 0:
        return float(values)
    return values


__all__ = [
    "AngularPoint",
    "KernelSpec",
    "ZonalKernel",
    "angle_between",
    "as_thetas",
    "pairwise_angles",
    "wrap_angle",
    "zonal_profile",
]

"""Experiment configuration and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from components.gpr_core.constants import DEFAULT_TEST_NODES, INCLUDE_NOISE_IN_PREDICTIVE
from components.kernels import KernelSpec
from components.spectral import BUILTIN_TARGETS, PRIOR_TARGET, TABLE_ROWS
from components.spectral.constants import DEFAULT_QUAD_NODES, THEORY_FREQUENCY
from utils.errors import ConfigError, DomainError
from utils.serialization import read_json

from .constants import (
    DEFAULT_MAX_FREQUENCY,
    DEFAULT_N_GRID,
    DEFAULT_REPEATS,
    DEFAULT_SEED,
    DEFAULT_SIGMA,
    EXTENDED_N,
    PRIOR_TRUNCATION,
)


@dataclass(frozen=True, slots=True, kw_only=True)
class ExperimentConfig:
    """One learning-curve experiment.

    ``sigma_true`` and ``sigma_model`` are standard deviations; cell n fits
    with model variance ``sigma_model**2 * n**t``. With ``sigma_model = 0`` the
    fit interpolates (jittered), and F0, G and the theory overlay are NaN.
    """

    kernel: KernelSpec
    target: str
    n_grid: tuple[int, ...] = DEFAULT_N_GRID
    repeats: int = DEFAULT_REPEATS
    sigma_true: float = DEFAULT_SIGMA
    sigma_model: float = DEFAULT_SIGMA
    t: float = 0.0
    seed: int = DEFAULT_SEED
    quad_nodes: int = DEFAULT_TEST_NODES
    include_noise_in_predictive: bool = INCLUDE_NOISE_IN_PREDICTIVE
    extended_grid: bool = False
    prior_truncation: int = PRIOR_TRUNCATION
    max_frequency: int = DEFAULT_MAX_FREQUENCY
    spectral_quad_nodes: int = DEFAULT_QUAD_NODES
    theory_frequency: int = THEORY_FREQUENCY
    label: str = field(default="")

    def __post_init__(self) -> None:
        errors = []
        if not self.n_grid:
            errors.append("n_grid is empty")
        elif any(n < 1 for n in self.n_grid) or any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            errors.append(f"n_grid must be strictly increasing positive integers, got {list(self.n_grid)}")
        if self.repeats < 1:
            errors.append(f"repeats must be >= 1, got {self.repeats}")
        if self.sigma_true < 0:
            errors.append(f"sigma_true must be >= 0, got {self.sigma_true}")
        if self.sigma_model < 0:
            errors.append(f"sigma_model must be >= 0, got {self.sigma_model}")
        if not self.t < 1:
            errors.append(f"t must be below 1, got {self.t}")
        if self.quad_nodes < 1:
            errors.append(f"quad_nodes must be >= 1, got {self.quad_nodes}")
        known = {*TABLE_ROWS, PRIOR_TARGET, *BUILTIN_TARGETS}
        if self.target not in known:
            errors.append(f"unknown target '{self.target}', expected one of {sorted(known)}")
        if errors:
            msg = "Invalid experiment config: " + "; ".join(errors)
            raise ConfigError(msg)

    @property
    def effective_grid(self) -> tuple[int, ...]:
        if self.extended_grid and self.n_grid[-1] < EXTENDED_N:
            return (*self.n_grid, EXTENDED_N)
        return self.n_grid

    @property
    def sigma_true2(self) -> float:
        return self.sigma_true**2

    def sigma_model2(self, n: int) -> float:
        return self.sigma_model**2 * float(n) ** self.t

    @property
    def name(self) -> str:
        return self.label or f"{self.kernel.label}/{self.target}"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        """Build from the JSON layout; ``kernel`` is a name and ``bias`` a boolean."""
        if not isinstance(data, dict):
            msg = f"Experiment config must be a JSON object, got {type(data).__name__}"
            raise ConfigError(msg)
        data = dict(data)
        allowed = {f.name for f in fields(cls)} | {"bias"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            msg = f"Unknown config keys: {unknown}"
            raise ConfigError(msg)
        try:
            kernel = KernelSpec.from_name(str(data.pop("kernel")), bias=bool(data.pop("bias", False)))
        except KeyError:
            msg = "Experiment config needs a 'kernel'"
            raise ConfigError(msg) from None
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if "target" not in data:
            msg = "Experiment config needs a 'target'"
            raise ConfigError(msg)
        try:
            if "n_grid" in data:
                data["n_grid"] = tuple(int(n) for n in data["n_grid"])
            return cls(kernel=kernel, **data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self) -> dict[str, Any]:
        payload = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "kernel"}
        payload["kernel"] = self.kernel.name
        payload["bias"] = self.kernel.bias
        payload["n_grid"] = list(self.n_grid)
        return payload


def load_config(path: Path | str, *, defaults: dict[str, Any] | None = None) -> ExperimentConfig:
    """Read an ``ExperimentConfig`` from a JSON file, filling absent keys from ``defaults``.

    Raises:
        ConfigError: if the file is missing, not JSON, or describes an invalid experiment.

    """
    try:
        data = read_json(path)
    except FileNotFoundError:
        msg = f"Config file not found: {path}"
        raise ConfigError(msg) from None
    except json.JSONDecodeError as exc:
        msg = f"Config file {path} is not valid JSON: {exc}"
        raise ConfigError(msg) from exc
    if isinstance(data, dict) and defaults:
        data = {**defaults, **data}
    return ExperimentConfig.from_dict(data)


__all__ = ["ExperimentConfig", "load_config"]

"""Monte-Carlo learning curves over a grid of sample sizes."""

from __future__ import annotations

import math
import os
import time
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from loguru import logger

from components.gpr_core import Dataset, bayes_gen_error, excess_mse, fit, nsc
from components.spectral import (
    PRIOR_TARGET,
    Spectrum,
    TargetExpansion,
    mercer_spectrum,
    resolve_target,
    sample_target_from_prior,
    target_expansion,
    theory_curves,
)
from utils.errors import CellFailure, TruncationError
from utils.parallel import ordered_map
from utils.serialization import csv_text, read_csv

from .config import ExperimentConfig
from .constants import CURVE_HEADER
from .rng import cell_generator

Target = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class ExperimentTarget:
    """Target function of an experiment with its expansion on the kernel's spectrum."""

    function: Target
    expansion: TargetExpansion
    spectrum: Spectrum


def resolve_experiment_target(config: ExperimentConfig) -> ExperimentTarget:
    spectrum = mercer_spectrum(
        config.kernel,
        config.max_frequency,
        config.spectral_quad_nodes,
        extend_to=config.theory_frequency,
    )
    if config.target == PRIOR_TARGET:
        expansion = sample_target_from_prior(
            spectrum,
            min(config.prior_truncation, spectrum.positive_count),
            config.seed,
        )
        return ExperimentTarget(expansion.as_function(), expansion, spectrum)
    target = resolve_target(config.target, config.kernel)
    return ExperimentTarget(target, target_expansion(target, spectrum), spectrum)


def generate_dataset(
    config: ExperimentConfig,
    n: int,
    repeat_index: int,
    target: Target | None = None,
) -> Dataset:
    """Inputs uniform on [-pi, pi) and outputs f(theta) + N(0, sigma_true^2), keyed on (seed, n, repeat)."""
    if target is None:
        target = (
            resolve_experiment_target(config).function
            if config.target == PRIOR_TARGET
            else resolve_target(config.target, config.kernel)
        )
    rng = cell_generator(config.seed, n, repeat_index)
    thetas = rng.uniform(-np.pi, np.pi, size=n)
    noise = rng.standard_normal(n) * config.sigma_true
    y = np.asarray(target(thetas), dtype=float) + noise
    return Dataset(points=thetas, y=y, sigma_true2=config.sigma_true2, target=target)


@dataclass(frozen=True, slots=True)
class CellResult:
    n: int
    repeat: int
    f0: float
    g: float
    m: float


def run_cell(config: ExperimentConfig, target: Target, n: int, repeat: int) -> CellResult:
    """Generate, fit and evaluate one (n, repeat) cell.

    Raises:
        CellFailure: wrapping the solver error, tagged with the cell.

    """
    try:
        dataset = generate_dataset(config, n, repeat, target)
        sigma2 = config.sigma_model2(n)
        state = fit(config.kernel, dataset, sigma2)
        # F0 and G need a positive model variance; sigma_model = 0 interpolates
        f0 = nsc(state, dataset) if sigma2 > 0 else math.nan
        if config.sigma_true2 > 0 and sigma2 > 0:
            g = bayes_gen_error(
                state,
                target,
                config.sigma_true2,
                config.quad_nodes,
                include_noise_in_predictive=config.include_noise_in_predictive,
            )
        else:
            # KL is undefined without noise in the truth or the model
            g = math.nan
        m = excess_mse(state, target, config.quad_nodes)
    except np.linalg.LinAlgError as exc:
        raise CellFailure(n, repeat, exc) from exc
    return CellResult(n=n, repeat=repeat, f0=f0, g=g, m=m)


@dataclass(frozen=True, eq=False)
class LearningCurveResult:
    """Per-n means and standard deviations over repeats, with the deterministic overlay."""

    n_grid: np.ndarray
    f0_mean: np.ndarray
    f0_std: np.ndarray
    g_mean: np.ndarray
    g_std: np.ndarray
    m_mean: np.ndarray
    m_std: np.ndarray
    f0_det: np.ndarray
    g_det: np.ndarray
    m_det: np.ndarray
    label: str = ""

    def rows(self) -> list[tuple]:
        columns = (
            self.f0_mean,
            self.f0_std,
            self.g_mean,
            self.g_std,
            self.m_mean,
            self.m_std,
            self.f0_det,
            self.g_det,
            self.m_det,
        )
        return [(int(n), *(float(c[i]) for c in columns)) for i, n in enumerate(self.n_grid)]

    def to_csv(self) -> str:
        return csv_text(CURVE_HEADER, self.rows())

    def write_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(), encoding="utf-8")
        return path

    @classmethod
    def read_csv(cls, path: Path | str) -> LearningCurveResult:
        records = read_csv(path)
        columns = {name: np.array([float(r[name]) for r in records]) for name in CURVE_HEADER}
        return cls(
            n_grid=columns.pop("n").astype(int),
            label=Path(path).stem,
            **columns,
        )


def _aggregate(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ddof = 1 if values.shape[1] > 1 else 0
    return values.mean(axis=1), values.std(axis=1, ddof=ddof)


def run_learning_curve(config: ExperimentConfig, *, max_workers: int | None = None) -> LearningCurveResult:
    """Run every (n, repeat) cell and aggregate per n in grid order.

    Cells run on up to ``max_workers`` threads (all cores when None); the
    output does not depend on the worker count.
    """
    workers = max_workers or os.cpu_count() or 1
    resolved = resolve_experiment_target(config)
    grid = config.effective_grid
    cells = [(n, r) for n in grid for r in range(config.repeats)]
    logger.info(f"Running {config.name} cells={len(cells)} workers={workers}")

    start = time.perf_counter()
    results = ordered_map(
        lambda cell: run_cell(config, resolved.function, *cell),
        cells,
        max_workers=workers,
    )
    logger.info(f"Finished {config.name} in {time.perf_counter() - start:.1f}s")

    shape = (len(grid), config.repeats)
    f0 = np.array([c.f0 for c in results]).reshape(shape)
    g = np.array([c.g for c in results]).reshape(shape)
    m = np.array([c.m for c in results]).reshape(shape)

    f0_det = g_det = m_det = np.full(len(grid), math.nan)
    if config.sigma_model > 0:
        try:
            theory = theory_curves(
                resolved.spectrum,
                resolved.expansion,
                config.sigma_model**2,
                config.sigma_true2,
                grid,
                t=config.t,
            )
            f0_det, g_det, m_det = theory.f0_det, theory.g_det, theory.m_det
        except TruncationError as exc:
            logger.warning(f"No theory overlay for {config.name}: {exc}")
    else:
        logger.info(f"No theory overlay for {config.name}: sigma_model is 0")
    if config.sigma_true2 == 0:
        g_det = np.full(len(grid), math.nan)

    f0_mean, f0_std = _aggregate(f0)
    g_mean, g_std = _aggregate(g)
    m_mean, m_std = _aggregate(m)
    return LearningCurveResult(
        n_grid=np.asarray(grid, dtype=int),
        f0_mean=f0_mean,
        f0_std=f0_std,
        g_mean=g_mean,
        g_std=g_std,
        m_mean=m_mean,
        m_std=m_std,
        f0_det=f0_det,
        g_det=g_det,
        m_det=m_det,
        label=config.name,
    )


__all__ = [
    "CellResult",
    "ExperimentTarget",
    "LearningCurveResult",
    "generate_dataset",
    "resolve_experiment_target",
    "run_cell",
    "run_learning_curve",
]

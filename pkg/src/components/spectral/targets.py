"""Target functions on S1 and their expansion in a kernel's eigenbasis."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

import numpy as np
from loguru import logger
from scipy.special import zeta

from components.kernels import KernelSpec, wrap_angle
from utils.errors import DomainError

from .constants import DEFAULT_QUAD_NODES, MU0_RELATIVE_FLOOR, TARGET_SETS
from .mercer import SQRT2, Parity, Spectrum, design_matrix

TABLE_ROWS = ("f1", "f2", "f3", "f4")
PRIOR_TARGET = "prior"


@dataclass(frozen=True, slots=True)
class SeriesFamily:
    """Fourier coefficients ``scale * (+-1)^m * m^-decay`` on one parity class.

    ``residue`` restricts the family to even (0) or odd (1) frequencies;
    ``None`` keeps every m >= 1.
    """

    kind: Parity
    scale: float
    decay: float
    residue: int | None = None
    alternating: bool = False

    def coefficients(self, frequencies: np.ndarray) -> np.ndarray:
        m = np.asarray(frequencies, dtype=float)
        safe = np.where(m >= 1, m, 1.0)
        values = self.scale * safe ** (-self.decay)
        if self.alternating:
            values = values * np.where(np.asarray(frequencies) % 2 == 0, 1.0, -1.0)
        active = m >= 1
        if self.residue is not None:
            active &= np.asarray(frequencies) % 2 == self.residue
        return np.where(active, values, 0.0)

    def energy_above(self, frequency: int, classes: Iterable[int] = (0, 1)) -> float:
        """Squared norm carried by frequencies > ``frequency`` in the given parity classes."""
        s = 2.0 * self.decay
        total = 0.0
        for residue in classes:
            if self.residue is not None and residue != self.residue:
                continue
            first = frequency + 1 if (frequency + 1) % 2 == residue else frequency + 2
            first = max(first, 2 if residue == 0 else 1)
            # sum over m = first, first + 2, ... of m^-s
            total += 2.0**-s * float(zeta(s, first / 2.0))
        # each coefficient contributes coefficient^2 / 2 under the uniform measure
        return 0.5 * self.scale**2 * total


@dataclass(frozen=True)
class FourierTarget:
    """Target with a closed-form Fourier series.

    f(theta) = constant + sum_m a_m cos(m theta) + b_m sin(m theta), where the
    coefficients are the finite ``terms`` plus the power-law ``families``.
    """

    name: str
    function: Callable[[np.ndarray], np.ndarray]
    constant: float = 0.0
    terms: tuple[tuple[int, Parity, float], ...] = ()
    families: tuple[SeriesFamily, ...] = ()

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        return np.asarray(self.function(wrap_angle(np.asarray(theta, dtype=float))), dtype=float)

    def coefficient_table(self, top_frequency: int) -> np.ndarray:
        """Raw Fourier coefficients as rows m = 0..top with columns (constant, a_m, b_m)."""
        m = np.arange(top_frequency + 1)
        table = np.zeros((top_frequency + 1, 3))
        table[0, Parity.CONSTANT] = self.constant
        for family in self.families:
            table[:, family.kind] += family.coefficients(m)
        for frequency, parity, value in self.terms:
            if frequency <= top_frequency:
                table[frequency, parity] += value
        return table

    def energy_above(self, frequency: int, classes: Iterable[int] = (0, 1)) -> float:
        classes = tuple(classes)
        finite = sum(
            0.5 * value**2
            for m, parity, value in self.terms
            if m > frequency and parity != Parity.CONSTANT and m % 2 in classes
        )
        return finite + sum(family.energy_above(frequency, classes) for family in self.families)

    @property
    def l2_norm_sq(self) -> float:
        return self.constant**2 + self.energy_above(0)


def _sawtooth(theta: np.ndarray) -> np.ndarray:
    return np.where(theta >= 0, np.pi / 2 - theta, -np.pi / 2 - theta)


BUILTIN_TARGETS: dict[str, FourierTarget] = {
    target.name: target
    for target in (
        FourierTarget("cos2", lambda th: np.cos(2 * th), terms=((2, Parity.COSINE, 1.0),)),
        FourierTarget(
            "theta_sq",
            lambda th: th**2,
            constant=np.pi**2 / 3,
            families=(SeriesFamily(Parity.COSINE, 4.0, 2.0, alternating=True),),
        ),
        FourierTarget(
            "shifted_sq",
            lambda th: (np.abs(th) - np.pi / 2) ** 2,
            constant=np.pi**2 / 12,
            families=(SeriesFamily(Parity.COSINE, 4.0, 2.0, residue=0),),
        ),
        FourierTarget(
            "sawtooth",
            _sawtooth,
            families=(SeriesFamily(Parity.SINE, 2.0, 1.0, residue=0),),
        ),
        FourierTarget(
            "sign",
            lambda th: np.where(th > 0, 1.0, np.where(th < 0, -1.0, 0.0)),
            families=(SeriesFamily(Parity.SINE, 4.0 / np.pi, 1.0, residue=1),),
        ),
        FourierTarget(
            "tent",
            lambda th: np.pi / 2 - np.abs(th),
            families=(SeriesFamily(Parity.COSINE, 4.0 / np.pi, 2.0, residue=1),),
        ),
        FourierTarget(
            "abs",
            np.abs,
            constant=np.pi / 2,
            families=(SeriesFamily(Parity.COSINE, -4.0 / np.pi, 2.0, residue=1),),
        ),
        FourierTarget("zero", np.zeros_like),
    )
}


def resolve_target(name: str, kernel: KernelSpec | None = None) -> FourierTarget:
    """Built-in target by name, or by table row ``f1``..``f4`` for ``kernel``."""
    if name in TABLE_ROWS:
        if kernel is None:
            msg = f"Target row '{name}' needs a kernel to resolve"
            raise DomainError(msg)
        name = TARGET_SETS[(kernel.order, kernel.bias)][TABLE_ROWS.index(name)]
    try:
        return BUILTIN_TARGETS[name]
    except KeyError:
        known = sorted([*TABLE_ROWS, *BUILTIN_TARGETS])
        msg = f"Unknown target '{name}', expected one of {known}"
        raise DomainError(msg) from None


@dataclass(frozen=True, eq=False)
class TargetExpansion:
    """Coefficients of a target aligned to the modes of ``spectrum``.

    ``tail_sq`` is the squared norm of in-span components above the highest
    listed frequency; with it, Parseval reads
    ``sum(mu**2) + mu0**2 + tail_sq == l2_norm**2``.
    """

    mu: np.ndarray
    mu0: float
    l2_norm: float
    spectrum: Spectrum = field(repr=False)
    tail_sq: float = 0.0
    name: str = ""

    @property
    def mu0_positive(self) -> bool:
        return self.mu0 > MU0_RELATIVE_FLOOR * max(self.l2_norm, np.finfo(float).tiny)

    @property
    def parseval_gap(self) -> float:
        return float(np.sum(self.mu**2) + self.mu0**2 + self.tail_sq - self.l2_norm**2)

    def as_function(self) -> SeriesTarget:
        return SeriesTarget(self)


@dataclass(frozen=True, eq=False)
class SeriesTarget:
    """Target defined by its eigen-expansion, f = sum_p mu_p phi_p."""

    expansion: TargetExpansion

    @property
    def name(self) -> str:
        return self.expansion.name

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        thetas = np.atleast_1d(np.asarray(theta, dtype=float))
        support = np.flatnonzero(self.expansion.mu)
        if support.size == 0:
            return np.zeros(thetas.shape)
        count = int(support[-1]) + 1
        basis = design_matrix(self.expansion.spectrum, thetas, count)
        return basis @ self.expansion.mu[:count]


def _coefficients_by_fft(
    target: Callable, quad_nodes: int, top_frequency: int
) -> tuple[np.ndarray, float]:
    u = 2.0 * np.pi * np.arange(quad_nodes) / quad_nodes
    values = np.asarray(target(wrap_angle(u)), dtype=float)
    spectrum = np.fft.rfft(values) / quad_nodes
    usable = min(top_frequency, quad_nodes // 2 - 1)
    table = np.zeros((top_frequency + 1, 3))
    table[0, Parity.CONSTANT] = spectrum[0].real
    table[1 : usable + 1, Parity.COSINE] = 2.0 * spectrum[1 : usable + 1].real
    table[1 : usable + 1, Parity.SINE] = -2.0 * spectrum[1 : usable + 1].imag
    return table, float(np.mean(values**2))


def _aligned(table: np.ndarray, spectrum: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm coefficients of the listed modes and a mask of the listed cells."""
    scale = np.array([1.0, 1.0 / SQRT2, 1.0 / SQRT2])
    normalized = table * scale
    listed = np.zeros(table.shape, dtype=bool)
    listed[spectrum.frequency, spectrum.parity] = True
    return normalized[spectrum.frequency, spectrum.parity], np.sum(normalized[~listed] ** 2)


def target_expansion(
    target: FourierTarget | Callable[[np.ndarray], np.ndarray],
    spectrum: Spectrum,
    quad_nodes: int = DEFAULT_QUAD_NODES,
) -> TargetExpansion:
    """Expand ``target`` in the eigenfunctions of ``spectrum``.

    Built-in targets use their closed-form series: the out-of-span mass is
    the energy on listed frequencies without a positive eigenvalue plus the
    energy above the top frequency in parity classes outside the span. Any
    other callable is integrated by the trapezoid rule on ``quad_nodes``
    points and its out-of-span mass is the Parseval residual, so it also
    absorbs the truncated in-span tail.
    """
    top = spectrum.top_frequency
    name = getattr(target, "name", getattr(target, "__name__", "user"))
    if isinstance(target, FourierTarget):
        table = target.coefficient_table(top)
        mu, off_grid = _aligned(table, spectrum)
        span = {0 if p == "even" else 1 for p in spectrum.span_parities}
        outside = {0, 1} - span
        tail_sq = target.energy_above(top, span) if span else 0.0
        mu0_sq = off_grid + (target.energy_above(top, outside) if outside else 0.0)
        l2_sq = target.l2_norm_sq
    else:
        table, l2_sq = _coefficients_by_fft(target, quad_nodes, top)
        mu, _ = _aligned(table, spectrum)
        tail_sq = 0.0
        mu0_sq = max(0.0, l2_sq - float(np.sum(mu**2)))

    expansion = TargetExpansion(
        mu=mu,
        mu0=math.sqrt(max(mu0_sq, 0.0)),
        l2_norm=math.sqrt(l2_sq),
        spectrum=spectrum,
        tail_sq=tail_sq,
        name=name,
    )
    logger.debug(
        f"Expanded target={name} on {spectrum.label} mu0={expansion.mu0:.6g} "
        f"tail_sq={tail_sq:.3g} norm={expansion.l2_norm:.6g}",
    )
    return expansion


def sample_target_from_prior(spectrum: Spectrum, truncation: int, seed: int) -> TargetExpansion:
    """Draw mu_p = sqrt(lambda_p) * omega_p for the leading ``truncation`` modes."""
    if not 1 <= truncation <= spectrum.positive_count:
        msg = f"truncation must lie in [1, {spectrum.positive_count}], got {truncation}"
        raise DomainError(msg)
    rng = np.random.default_rng(seed)
    mu = np.zeros(spectrum.positive_count)
    mu[:truncation] = np.sqrt(spectrum.eigenvalue[:truncation]) * rng.standard_normal(truncation)
    return TargetExpansion(
        mu=mu,
        mu0=0.0,
        l2_norm=float(np.sqrt(np.sum(mu**2))),
        spectrum=spectrum,
        name=f"{PRIOR_TARGET}[{seed}]",
    )


__all__ = [
    "BUILTIN_TARGETS",
    "PRIOR_TARGET",
    "TABLE_ROWS",
    "FourierTarget",
    "SeriesFamily",
    "SeriesTarget",
    "TargetExpansion",
    "resolve_target",
    "sample_target_from_prior",
    "target_expansion",
]

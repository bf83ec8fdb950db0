"""Mercer decomposition of zonal kernels under the uniform measure on S1."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from loguru import logger
from numpy.polynomial import chebyshev

from components.kernels import ZonalKernel
from utils.errors import DomainError, QuadratureResolutionError
from utils.fitting import LogLogFit, loglog_fit

from .constants import (
    ANTI_ALIAS_FACTOR,
    DEFAULT_MAX_FREQUENCY,
    DEFAULT_QUAD_NODES,
    EXTRAPOLATION_MIN_POINTS,
    NULL_THRESHOLD,
    TRACE_SLACK,
)

SQRT2 = math.sqrt(2.0)
_PARITY_CLASSES = {0: "even", 1: "odd"}


class Parity(IntEnum):
    CONSTANT = 0
    COSINE = 1
    SINE = 2


@dataclass(frozen=True, slots=True)
class Mode:
    frequency: int
    parity: Parity
    eigenvalue: float
    extrapolated: bool = False


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Positive Mercer eigenpairs sorted by decreasing eigenvalue.

    Modes are stored column-wise; ``extrapolated`` flags eigenvalues that
    continue the power law of the resolved band instead of coming from
    quadrature. ``span_parities`` lists the frequency parity classes
    ("even", "odd") that keep positive eigenvalues above the highest
    listed frequency.
    """

    frequency: np.ndarray
    parity: np.ndarray
    eigenvalue: np.ndarray
    extrapolated: np.ndarray
    null_frequencies: frozenset[tuple[int, Parity]]
    max_frequency: int
    resolved_frequency: int
    kappa0: float
    span_parities: frozenset[str] = frozenset()
    complete: bool = False
    label: str = ""

    @property
    def positive_count(self) -> int:
        return int(self.eigenvalue.size)

    @property
    def resolved_count(self) -> int:
        """Number of leading modes that do not depend on extrapolation."""
        flagged = np.flatnonzero(self.extrapolated)
        return int(flagged[0]) if flagged.size else self.positive_count

    @property
    def top_frequency(self) -> int:
        if self.frequency.size == 0:
            return self.max_frequency
        return max(self.max_frequency, int(self.frequency.max()))

    @property
    def modes(self) -> list[Mode]:
        return [self.mode(i) for i in range(self.positive_count)]

    def __len__(self) -> int:
        return self.positive_count

    def mode(self, index: int) -> Mode:
        return Mode(
            frequency=int(self.frequency[index]),
            parity=Parity(int(self.parity[index])),
            eigenvalue=float(self.eigenvalue[index]),
            extrapolated=bool(self.extrapolated[index]),
        )

    def truncate(self, count: int) -> Spectrum:
        """Keep the ``count`` leading modes."""
        count = max(0, min(count, self.positive_count))
        return Spectrum(
            frequency=self.frequency[:count],
            parity=self.parity[:count],
            eigenvalue=self.eigenvalue[:count],
            extrapolated=self.extrapolated[:count],
            null_frequencies=self.null_frequencies,
            max_frequency=self.max_frequency,
            resolved_frequency=self.resolved_frequency,
            kappa0=self.kappa0,
            span_parities=self.span_parities,
            complete=self.complete and count == self.positive_count,
            label=self.label,
        )

    @classmethod
    def synthetic(cls, eigenvalues: Sequence[float], *, label: str = "synthetic") -> Spectrum:
        """Complete spectrum with the given eigenvalues placed on Fourier modes in order."""
        values = np.asarray(eigenvalues, dtype=float)
        index = np.arange(values.size)
        frequency = (index + 1) // 2
        parity = np.where(index == 0, Parity.CONSTANT, np.where(index % 2 == 1, Parity.COSINE, Parity.SINE))
        return _assemble(
            frequency=frequency,
            parity=parity.astype(np.int8),
            eigenvalue=values,
            extrapolated=np.zeros(values.size, dtype=bool),
            null_frequencies=frozenset(),
            max_frequency=int(frequency.max()) if values.size else 0,
            resolved_frequency=int(frequency.max()) if values.size else 0,
            kappa0=float(values.sum()),
            complete=True,
            label=label,
        )


def _assemble(**fields) -> Spectrum:
    """Drop non-positive modes and sort the rest by (-eigenvalue, frequency, parity)."""
    eigenvalue = np.asarray(fields.pop("eigenvalue"), dtype=float)
    frequency = np.asarray(fields.pop("frequency"), dtype=np.int64)
    parity = np.asarray(fields.pop("parity"), dtype=np.int8)
    extrapolated = np.asarray(fields.pop("extrapolated"), dtype=bool)
    keep = eigenvalue > 0
    eigenvalue, frequency, parity, extrapolated = (
        eigenvalue[keep],
        frequency[keep],
        parity[keep],
        extrapolated[keep],
    )
    order = np.lexsort((parity, frequency, -eigenvalue))
    return Spectrum(
        frequency=frequency[order],
        parity=parity[order],
        eigenvalue=eigenvalue[order],
        extrapolated=extrapolated[order],
        **fields,
    )


def profile_coefficients(kernel: ZonalKernel, quad_nodes: int) -> np.ndarray:
    """Cosine-Fourier coefficients c_m, m = 0..quad_nodes/2, by the periodic trapezoid rule."""
    u = 2.0 * np.pi * np.arange(quad_nodes) / quad_nodes
    delta = np.minimum(u, 2.0 * np.pi - u)
    values = np.asarray(kernel.profile(delta), dtype=float)
    return np.fft.rfft(values).real / quad_nodes


def _tail_laws(coefficients: np.ndarray, positive: np.ndarray, resolved: int) -> dict[int, LogLogFit]:
    """Power laws c_m ~ A m^-a per parity class over the upper half of the resolved band."""
    laws: dict[int, LogLogFit] = {}
    window = np.arange(max(1, resolved // 2), resolved + 1)
    for residue in (0, 1):
        members = window[window % 2 == residue]
        hits = members[positive[members]]
        if hits.size < EXTRAPOLATION_MIN_POINTS or hits.size * 2 < members.size:
            continue
        law = loglog_fit(hits, coefficients[hits], min_points=EXTRAPOLATION_MIN_POINTS)
        if law.slope >= -1.0:
            logger.warning(
                f"Tail law for {_PARITY_CLASSES[residue]} frequencies not summable slope={law.slope:.3f}; not extended",
            )
            continue
        laws[residue] = law
    return laws


def _clip_tail_mass(eig: np.ndarray, extrapolated: np.ndarray, kappa0: float) -> None:
    """Scale the extrapolated eigenvalues in place so the trace stays within kappa(0).

    Aliasing lifts the quadrature coefficients of kernels with a kink at
    delta = 0, so the resolved band already holds slightly more than its share.
    """
    multiplicity = np.where(np.arange(eig.size) == 0, 1.0, 2.0)
    resolved_mass = float(np.sum(multiplicity * eig * ~extrapolated))
    tail_mass = float(np.sum(multiplicity * eig * extrapolated))
    if resolved_mass + tail_mass <= kappa0:
        return
    budget = kappa0 - resolved_mass
    if budget <= 0.0:
        msg = f"Resolved eigenvalues sum to {resolved_mass:.10f}, no room below kappa(0)={kappa0:.10f}"
        raise DomainError(msg)
    scale = budget / tail_mass
    eig[extrapolated] *= scale
    logger.debug(f"Extrapolated tail mass {tail_mass:.3e} clipped to {budget:.3e} scale={scale:.6f}")


def mercer_spectrum(
    kernel: ZonalKernel,
    max_frequency: int = DEFAULT_MAX_FREQUENCY,
    quad_nodes: int = DEFAULT_QUAD_NODES,
    *,
    extend_to: int = 0,
    extrapolate: bool = True,
) -> Spectrum:
    """Eigenpairs of the integral operator of a zonal kernel on S1.

    Frequency m carries eigenvalue c_m = (1/pi) int_0^pi kappa(u) cos(mu) du,
    shared by its cosine and sine eigenfunctions. Eigenvalues below
    ``NULL_THRESHOLD * kappa(0)`` up to the highest frequency that clears the
    threshold (the resolved band) are null. With ``extrapolate`` the parity
    classes that stay positive in the upper half of the resolved band are
    continued by their fitted power law, up to ``max(max_frequency, extend_to)``,
    with the extrapolated mass scaled down where needed to keep the trace
    within kappa(0).

    Raises:
        QuadratureResolutionError: if ``quad_nodes < 4 * max_frequency``.
        DomainError: if the trace still exceeds ``kappa(0) + TRACE_SLACK``.

    """
    if max_frequency < 1:
        msg = f"max_frequency must be >= 1, got {max_frequency}"
        raise DomainError(msg)
    if quad_nodes < ANTI_ALIAS_FACTOR * max_frequency:
        msg = f"quad_nodes={quad_nodes} below {ANTI_ALIAS_FACTOR} * max_frequency={max_frequency}"
        raise QuadratureResolutionError(msg)

    kappa0 = float(kernel.kappa0)
    threshold = NULL_THRESHOLD * kappa0
    coefficients = profile_coefficients(kernel, quad_nodes)[: max_frequency + 1]
    if np.any(coefficients < -threshold):
        worst = int(np.argmin(coefficients))
        msg = f"Kernel is not positive semidefinite: c_{worst}={coefficients[worst]:.3e}"
        raise DomainError(msg)

    positive = coefficients >= threshold
    hits = np.flatnonzero(positive)
    resolved = int(hits.max()) if hits.size else 0
    laws = _tail_laws(coefficients, positive, resolved) if extrapolate and resolved >= 2 else {}

    top = max(max_frequency, extend_to) if laws else max_frequency
    m = np.arange(top + 1)
    eig = np.zeros(top + 1)
    eig[: max_frequency + 1] = np.where(positive, coefficients, 0.0)
    eig[resolved + 1 :] = 0.0
    extrapolated = np.zeros(top + 1, dtype=bool)
    for residue, law in laws.items():
        selected = (m > resolved) & (m % 2 == residue)
        eig[selected] = law.predict(m[selected].astype(float))
        extrapolated[selected] = True
    if extrapolated.any():
        _clip_tail_mass(eig, extrapolated, kappa0)

    null: set[tuple[int, Parity]] = set()
    for freq in np.flatnonzero(eig[: max_frequency + 1] <= 0):
        if freq == 0:
            null.add((0, Parity.CONSTANT))
        else:
            null.add((int(freq), Parity.COSINE))
            null.add((int(freq), Parity.SINE))

    # frequency 0 gives one constant mode, every other frequency a cosine and a sine
    frequency = np.concatenate([m[:1], np.repeat(m[1:], 2)])
    parity = np.concatenate([[Parity.CONSTANT], np.tile([Parity.COSINE, Parity.SINE], top)])
    spectrum = _assemble(
        frequency=frequency,
        parity=parity,
        eigenvalue=np.concatenate([eig[:1], np.repeat(eig[1:], 2)]),
        extrapolated=np.concatenate([extrapolated[:1], np.repeat(extrapolated[1:], 2)]),
        null_frequencies=frozenset(null),
        max_frequency=max_frequency,
        resolved_frequency=resolved,
        kappa0=kappa0,
        span_parities=frozenset(_PARITY_CLASSES[r] for r in laws),
        label=getattr(kernel, "label", type(kernel).__name__),
    )

    trace = float(spectrum.eigenvalue.sum())
    if trace > kappa0 + TRACE_SLACK:
        msg = f"Spectrum trace {trace:.10f} of {spectrum.label} exceeds kappa(0)={kappa0:.10f}"
        raise DomainError(msg)
    logger.debug(
        f"Spectrum {spectrum.label} P={spectrum.positive_count} resolved={resolved} "
        f"null={len(null)} span={sorted(spectrum.span_parities)}",
    )
    return spectrum


def eigenfunction_value(mode: Mode | tuple[int, Parity], theta: np.ndarray | float) -> np.ndarray | float:
    """Unit-norm eigenfunction: 1, sqrt2 cos(m theta) or sqrt2 sin(m theta)."""
    frequency, parity = (mode.frequency, mode.parity) if isinstance(mode, Mode) else mode
    arr = np.asarray(theta, dtype=float)
    if parity == Parity.CONSTANT:
        values = np.ones_like(arr)
    elif parity == Parity.COSINE:
        values = SQRT2 * np.cos(frequency * arr)
    else:
        values = SQRT2 * np.sin(frequency * arr)
    return float(values) if values.ndim == 0 else values


def design_matrix(spectrum: Spectrum, thetas: np.ndarray, count: int | None = None) -> np.ndarray:
    """Matrix Phi[i, p] = phi_p(theta_i) over the leading ``count`` modes."""
    count = spectrum.positive_count if count is None else count
    thetas = np.asarray(thetas, dtype=float)
    freq = spectrum.frequency[:count]
    parity = spectrum.parity[:count]
    phase = np.outer(thetas, freq)
    return np.where(
        parity == Parity.CONSTANT,
        1.0,
        np.where(parity == Parity.COSINE, SQRT2 * np.cos(phase), SQRT2 * np.sin(phase)),
    )


@dataclass(frozen=True, eq=False)
class TruncatedKernel:
    """Zonal kernel rebuilt from the eigenpairs of ``spectrum`` up to ``max_frequency``."""

    spectrum: Spectrum
    max_frequency: int
    _series: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        series = np.zeros(self.max_frequency + 1)
        for index in range(self.spectrum.positive_count):
            freq = int(self.spectrum.frequency[index])
            if freq > self.max_frequency:
                continue
            if self.spectrum.parity[index] == Parity.CONSTANT:
                series[0] = self.spectrum.eigenvalue[index]
            elif self.spectrum.parity[index] == Parity.COSINE:
                series[freq] = 2.0 * self.spectrum.eigenvalue[index]
        object.__setattr__(self, "_series", series)

    @property
    def label(self) -> str:
        return f"{self.spectrum.label}|m<={self.max_frequency}"

    @property
    def kappa0(self) -> float:
        return float(self._series.sum())

    def profile(self, delta: np.ndarray) -> np.ndarray:
        # cos(m delta) = T_m(cos delta)
        return chebyshev.chebval(np.cos(np.asarray(delta, dtype=float)), self._series)

    def exact_spectrum(self) -> Spectrum:
        keep = self.spectrum.frequency <= self.max_frequency
        null = {
            (m, p)
            for m, p in self.spectrum.null_frequencies
            if m <= self.max_frequency
        }
        return _assemble(
            frequency=self.spectrum.frequency[keep],
            parity=self.spectrum.parity[keep],
            eigenvalue=self.spectrum.eigenvalue[keep],
            extrapolated=self.spectrum.extrapolated[keep],
            null_frequencies=frozenset(null),
            max_frequency=self.max_frequency,
            resolved_frequency=self.max_frequency,
            kappa0=self.kappa0,
            complete=True,
            label=self.label,
        )


__all__ = [
    "Mode",
    "Parity",
    "Spectrum",
    "TruncatedKernel",
    "design_matrix",
    "eigenfunction_value",
    "mercer_spectrum",
    "profile_coefficients",
]

"""Power-law sums sum_i a1 i^-s1 / (1 + a2 m i^-s2)^s3 and their growth regimes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from utils.errors import DomainError

from .constants import POWERLAW_SUM_CHUNK, POWERLAW_SUM_MAX_TERMS


def powerlaw_sum(a1: float, a2: float, s1: float, s2: float, s3: float, m: float, terms: int) -> float:
    """Exact sum of ``a1 i^-s1 / (1 + a2 m i^-s2)^s3`` for i = 1..terms."""
    if min(a1, a2, s1, s2, s3, m) <= 0:
        msg = f"powerlaw_sum needs positive constants, got a1={a1} a2={a2} s1={s1} s2={s2} s3={s3} m={m}"
        raise DomainError(msg)
    if not 1 <= terms <= POWERLAW_SUM_MAX_TERMS:
        msg = f"terms={terms} outside [1, {POWERLAW_SUM_MAX_TERMS}]"
        raise DomainError(msg)

    partials = []
    for start in range(1, terms + 1, POWERLAW_SUM_CHUNK):
        i = np.arange(start, min(start + POWERLAW_SUM_CHUNK, terms + 1), dtype=float)
        partials.append(float(np.sum(a1 * i**-s1 / (1.0 + a2 * m * i**-s2) ** s3)))
    return math.fsum(partials)


@dataclass(frozen=True, slots=True)
class Regime:
    """Growth of the sum in m: Theta(m^exponent), times log m when ``logarithmic``."""

    exponent: float
    logarithmic: bool = False

    @property
    def label(self) -> str:
        power = f"m^{self.exponent:g}"
        return f"Theta({power} log m)" if self.logarithmic else f"Theta({power})"

    def scale(self, m: float) -> float:
        value = m**self.exponent
        return value * math.log(m) if self.logarithmic else value


def classify_regime(s1: float, s2: float, s3: float) -> Regime:
    """Regime of the sum for large m, decided by comparing s2*s3 with s1 - 1."""
    if min(s1, s2, s3) <= 0 or s1 <= 1:
        msg = f"classify_regime needs s1 > 1 and s2, s3 > 0, got s1={s1} s2={s2} s3={s3}"
        raise DomainError(msg)
    product = s2 * s3
    if math.isclose(product, s1 - 1.0, rel_tol=1e-12, abs_tol=1e-12):
        return Regime(exponent=-s3, logarithmic=True)
    if product > s1 - 1.0:
        return Regime(exponent=(1.0 - s1) / s2)
    return Regime(exponent=-s3)


__all__ = ["Regime", "classify_regime", "powerlaw_sum"]

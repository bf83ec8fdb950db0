"""CSV and JSON forms of spectra and target expansions."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from utils.serialization import write_csv, write_json

from .mercer import Parity, Spectrum
from .targets import TargetExpansion

SPECTRUM_HEADER = ("rank", "frequency", "parity", "eigenvalue")
EXPANSION_HEADER = ("rank", "mu")


def spectrum_rows(spectrum: Spectrum) -> list[tuple[int, int, str, float]]:
    return [
        (rank, int(freq), Parity(int(parity)).name.lower(), float(eig))
        for rank, (freq, parity, eig) in enumerate(
            zip(spectrum.frequency, spectrum.parity, spectrum.eigenvalue, strict=True),
            start=1,
        )
    ]


def spectrum_summary(spectrum: Spectrum) -> dict[str, Any]:
    return {
        "label": spectrum.label,
        "positive_count": spectrum.positive_count,
        "resolved_count": spectrum.resolved_count,
        "max_frequency": spectrum.max_frequency,
        "resolved_frequency": spectrum.resolved_frequency,
        "kappa0": spectrum.kappa0,
        "trace": float(spectrum.eigenvalue.sum()),
        "span_parities": sorted(spectrum.span_parities),
        "null_frequencies": sorted(
            [m, Parity(p).name.lower()] for m, p in spectrum.null_frequencies
        ),
    }


def write_spectrum(spectrum: Spectrum, path: Path | str) -> Path:
    """Write the spectrum CSV and a JSON summary next to it."""
    path = Path(path)
    write_json(path.with_suffix(".json"), spectrum_summary(spectrum))
    return write_csv(path, SPECTRUM_HEADER, spectrum_rows(spectrum))


def expansion_summary(expansion: TargetExpansion, beta: float | None = None) -> dict[str, Any]:
    summary = {
        "target": expansion.name,
        "mu0": expansion.mu0,
        "mu0_positive": expansion.mu0_positive,
        "l2_norm": expansion.l2_norm,
        "tail_sq": expansion.tail_sq,
    }
    if beta is not None:
        summary["beta"] = beta
    return summary


def write_expansion(expansion: TargetExpansion, path: Path | str) -> Path:
    rows = [(rank, float(mu)) for rank, mu in enumerate(expansion.mu, start=1)]
    return write_csv(path, EXPANSION_HEADER, rows)


__all__ = [
    "EXPANSION_HEADER",
    "SPECTRUM_HEADER",
    "expansion_summary",
    "spectrum_rows",
    "spectrum_summary",
    "write_expansion",
    "write_spectrum",
]

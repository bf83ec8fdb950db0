import numpy as np
import pytest

from components.kernels import KernelSpec
from components.spectral import mercer_spectrum

ALL_KERNELS = [KernelSpec(order, bias) for order in (0, 1, 2) for bias in (False, True)]


class ZeroKernel:
    """Degenerate zonal kernel k = 0, with a configurable prior variance at the diagonal."""

    label = "zero"

    def __init__(self, kappa0: float = 0.0) -> None:
        self._kappa0 = kappa0

    @property
    def kappa0(self) -> float:
        return self._kappa0

    def profile(self, delta: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(delta, dtype=float))


@pytest.fixture(scope="session")
def arccos1() -> KernelSpec:
    return KernelSpec(order=1, bias=False)


@pytest.fixture(scope="session")
def arccos1_spectrum(arccos1):
    return mercer_spectrum(arccos1)


@pytest.fixture(scope="session")
def spectra():
    """Default-resolution spectrum of every kernel, keyed on (order, bias)."""
    return {(k.order, k.bias): mercer_spectrum(k) for k in ALL_KERNELS}


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)

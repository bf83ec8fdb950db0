"""Constants for exact GP regression and its learning-curve functionals."""

DEFAULT_TEST_NODES: int = 2048  # uniform theta-grid for expectations over the test input
VARIANCE_CLAMP_TOLERANCE: float = 1e-10  # relative to kappa(0)
INCLUDE_NOISE_IN_PREDICTIVE: bool = True

__all__ = [
    "DEFAULT_TEST_NODES",
    "INCLUDE_NOISE_IN_PREDICTIVE",
    "VARIANCE_CLAMP_TOLERANCE",
]

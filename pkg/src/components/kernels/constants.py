"""Constants for the kernels component."""

ANGLE_SLACK: float = 1e-12  # tolerated overshoot of delta outside [0, pi]

# Diagonal jitter escalation, relative to kappa(0)
JITTER_START: float = 1e-10
JITTER_FACTOR: float = 10.0
JITTER_MAX: float = 1e-6

PSD_TOLERANCE: float = 1e-8  # eigenvalues >= -PSD_TOLERANCE * kappa(0)

KERNEL_ORDERS: dict[str, int] = {
    "arccos0": 0,
    "arccos1": 1,
    "arccos2": 2,
}

__all__ = [
    "ANGLE_SLACK",
    "JITTER_FACTOR",
    "JITTER_MAX",
    "JITTER_START",
    "KERNEL_ORDERS",
    "PSD_TOLERANCE",
]

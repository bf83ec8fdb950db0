"""Counter-based random streams keyed on (seed, n, repeat)."""

import numpy as np


def cell_generator(seed: int, n: int, repeat: int) -> np.random.Generator:
    """Independent Philox stream for one learning-curve cell.

    The stream depends only on its key, never on how many other cells ran
    before it or on which thread runs it.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(n, repeat))
    return np.random.Generator(np.random.Philox(sequence))


__all__ = ["cell_generator"]

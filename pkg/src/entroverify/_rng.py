"""Seed handling and Haar/Ginibre sampling shared by states and channels."""

from __future__ import annotations

import numpy as np


def as_generator(seed) -> np.random.Generator:
    """Coerce None / int / SeedSequence / Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Complex standard-normal matrix."""
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    q, r = np.linalg.qr(ginibre(d, d, rng) / np.sqrt(2.0))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))

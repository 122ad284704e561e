from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PositivityError

METHODS = ("recurrence", "closed")


def check_method(method: str) -> str:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return method


def as_output(values):
    """Return a Python float for 0-d results, an ndarray otherwise."""
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class OrthoData:
    """Grid, weights and squared norms of a finite discrete orthogonality."""

    points: np.ndarray
    weights: np.ndarray
    norms: np.ndarray
    N: int

    def __post_init__(self):
        for name in ("points", "weights", "norms"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.N + 1,):
                raise ValueError(f"{name} must have length N+1={self.N + 1}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        bad = np.flatnonzero(self.weights < 0)
        if bad.size:
            raise PositivityError("negative weights", bad.tolist())
        bad = np.flatnonzero(self.norms <= 0)
        if bad.size:
            raise PositivityError("nonpositive norms", bad.tolist())

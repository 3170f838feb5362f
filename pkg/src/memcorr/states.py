"""The Bell-like mixed family ``r |psi><psi| + (1 - r) I / 4``.

``psi = sqrt(1 - alpha**2) |01> + alpha |10>``; ``r`` sets the weight of the
pure part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .measures import ENTANGLEMENT_TOL, concurrence


@dataclass(frozen=True)
class BellDiagonalBlend:
    alpha: float
    r: float

    def __post_init__(self):
        for name in ("alpha", "r"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise UsageError(f"{name} must lie in [0, 1], got {value}")


def bell_like_vector(alpha: float) -> np.ndarray:
    return np.array([0.0, math.sqrt(1.0 - alpha * alpha), alpha, 0.0], dtype=complex)


def make_initial(params: BellDiagonalBlend) -> np.ndarray:
    psi = bell_like_vector(params.alpha)
    return params.r * np.outer(psi, psi.conj()) + 0.25 * (1.0 - params.r) * np.eye(4, dtype=complex)


def is_initially_entangled(params: BellDiagonalBlend) -> bool:
    """Whether the family member has nonzero concurrence.

    Decided by evaluating the concurrence itself; a purity cut at ``r = 1/3``
    is only exact for ``alpha = 1/sqrt(2)``.
    """
    return concurrence(make_initial(params)) > ENTANGLEMENT_TOL

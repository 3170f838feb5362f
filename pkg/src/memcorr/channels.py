"""Two-use noisy channels with correlated (memory) noise.

A memory channel acting on two consecutive qubits is the convex mixture

    rho -> (1 - mu) * sum_ij E_ij rho E_ij^H + mu * sum_k E_kk rho E_kk^H

of an uncorrelated branch (independent noise on each qubit) and a fully
correlated branch (the same noise operation on both qubits).  The two branches
are kept as separate :class:`KrausSet` objects and mixed when the channel is
applied.

:func:`closed_form_elements` reproduces the literature's printed X-state
matrix elements exactly as published, typos included.  The Kraus path is the
reference; the closed forms exist for cross-checking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import qmat
from .errors import ChannelIntegrityError, UsageError

COMPLETENESS_TOL = 1e-12
TRACE_DRIFT_TOL = 1e-10


class ChannelKind(enum.Enum):
    AMPLITUDE_DAMPING = "ad"
    PHASE_DAMPING = "pd"
    DEPOLARIZING = "dp"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(k.value for k in cls)
            raise UsageError(f"unknown channel {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators with their probabilities folded into the magnitudes."""

    operators: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(qmat.as_matrix(op) for op in self.operators)
        if not ops:
            raise UsageError("a Kraus set needs at least one operator")
        if len({op.shape for op in ops}) != 1:
            raise UsageError("Kraus operators must share one dimension")
        for op in ops:
            op.flags.writeable = False
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def gram(self) -> np.ndarray:
        """``sum_i E_i^H E_i``; the identity for a trace-preserving set."""
        return sum(qmat.dagger(op) @ op for op in self.operators)

    def completeness_error(self) -> float:
        return float(np.max(np.abs(self.gram() - np.eye(self.dim))))

    def apply(self, rho) -> np.ndarray:
        return sum(op @ rho @ qmat.dagger(op) for op in self.operators)

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class MemoryChannel:
    kind: ChannelKind
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind.parse(self.kind))
        _check_unit_interval("mu", self.mu)


@dataclass(frozen=True)
class DampingParameter:
    """Damping probability ``p`` together with the ``gamma*t`` it came from.

    Amplitude damping uses ``p = 1 - exp(-gamma t)``; phase damping and
    depolarizing use ``p = (1 - exp(-gamma t)) / 2``.  Build instances with
    :meth:`from_gamma_t`; :meth:`direct` is the expert escape hatch for
    supplying ``p`` without a time (``gamma_t`` is then ``None``).
    """

    kind: ChannelKind
    p: float
    gamma_t: Optional[float] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind.parse(self.kind))
        _check_unit_interval("p", self.p)
        if self.gamma_t is not None:
            if not self.gamma_t >= 0.0:
                raise UsageError(f"gamma_t must be >= 0, got {self.gamma_t}")
            expected = damping_probability(self.kind, self.gamma_t)
            if abs(expected - self.p) > 1e-12:
                raise UsageError(
                    f"p={self.p} inconsistent with gamma_t={self.gamma_t} for {self.kind.value}"
                )

    @classmethod
    def from_gamma_t(cls, kind, gamma_t: float) -> "DampingParameter":
        kind = ChannelKind.parse(kind)
        if not gamma_t >= 0.0:
            raise UsageError(f"gamma_t must be >= 0, got {gamma_t}")
        return cls(kind, damping_probability(kind, gamma_t), float(gamma_t))

    @classmethod
    def direct(cls, kind, p: float) -> "DampingParameter":
        return cls(ChannelKind.parse(kind), float(p), None)


def damping_probability(kind, gamma_t: float) -> float:
    kind = ChannelKind.parse(kind)
    decay = -math.expm1(-gamma_t)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        return decay
    return 0.5 * decay


def _check_unit_interval(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise UsageError(f"{name} must lie in [0, 1], got {value}")


def _pauli_weights(kind: ChannelKind, p: float) -> Sequence[tuple[float, int]]:
    """(probability, Pauli index) pairs of the single-qubit Pauli channel."""
    if kind is ChannelKind.PHASE_DAMPING:
        return ((1.0 - p, 0), (p, 3))
    return ((1.0 - p, 0), (p / 3, 1), (p / 3, 2), (p / 3, 3))


def single_qubit_kraus(kind, p: float) -> KrausSet:
    kind = ChannelKind.parse(kind)
    _check_unit_interval("p", p)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        a0 = np.array([[math.sqrt(1.0 - p), 0.0], [0.0, 1.0]], dtype=complex)
        a1 = np.array([[0.0, 0.0], [math.sqrt(p), 0.0]], dtype=complex)
        return KrausSet((a0, a1), f"{kind.value} single p={p}")
    ops = tuple(math.sqrt(w) * qmat.PAULIS[k] for w, k in _pauli_weights(kind, p))
    return KrausSet(ops, f"{kind.value} single p={p}")


def uncorrelated_kraus(kind, p: float) -> KrausSet:
    """Independent noise on both qubits: ``{A_i (x) A_j}``."""
    kind = ChannelKind.parse(kind)
    single = single_qubit_kraus(kind, p)
    ops = tuple(qmat.kron(a, b) for a in single.operators for b in single.operators)
    return KrausSet(ops, f"{kind.value} uncorrelated p={p}")


def correlated_kraus(kind, p: float) -> KrausSet:
    """Identical noise on both qubits.

    For amplitude damping this is the pair ``E00 = diag(sqrt(1-p), 1, 1, 1)``
    and ``E11`` with a single entry ``sqrt(p)`` mapping ``|00>`` to ``|11>``.
    For the Pauli channels it is ``{sqrt(P_k) sigma_k (x) sigma_k}``.
    """
    kind = ChannelKind.parse(kind)
    _check_unit_interval("p", p)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        e00 = np.diag([math.sqrt(1.0 - p), 1.0, 1.0, 1.0]).astype(complex)
        e11 = np.zeros((4, 4), dtype=complex)
        e11[3, 0] = math.sqrt(p)
        return KrausSet((e00, e11), f"{kind.value} correlated p={p}")
    ops = tuple(
        math.sqrt(w) * qmat.kron(qmat.PAULIS[k], qmat.PAULIS[k]) for w, k in _pauli_weights(kind, p)
    )
    return KrausSet(ops, f"{kind.value} correlated p={p}")


def _resolve_p(channel: MemoryChannel, damping) -> float:
    if isinstance(damping, DampingParameter):
        if damping.kind is not channel.kind:
            raise UsageError(
                f"damping parameter built for {damping.kind.value}, channel is {channel.kind.value}"
            )
        return damping.p
    raise UsageError("damping must be a DampingParameter; use DampingParameter.direct for raw p")


def memory_completeness_error(kind, p: float, mu: float) -> float:
    """Deviation of ``(1-mu) sum E_ij^H E_ij + mu sum E_kk^H E_kk`` from identity."""
    _check_unit_interval("mu", mu)
    total = (1.0 - mu) * uncorrelated_kraus(kind, p).gram() + mu * correlated_kraus(kind, p).gram()
    return float(np.max(np.abs(total - np.eye(4))))


def apply_memory_channel(rho, channel: MemoryChannel, damping: DampingParameter) -> np.ndarray:
    """Send a two-qubit state through two correlated uses of ``channel``.

    Raises:
        ChannelIntegrityError: if the output trace drifts by more than 1e-10.
    """
    rho = qmat.as_matrix(rho, dims=(4,))
    p = _resolve_p(channel, damping)
    mu = channel.mu
    out = np.zeros((4, 4), dtype=complex)
    if mu < 1.0:
        out += (1.0 - mu) * uncorrelated_kraus(channel.kind, p).apply(rho)
    if mu > 0.0:
        out += mu * correlated_kraus(channel.kind, p).apply(rho)
    drift = abs(np.trace(out) - np.trace(rho))
    if drift > TRACE_DRIFT_TOL:
        raise ChannelIntegrityError(f"trace drift {drift:.3e} through {channel.kind.value} channel")
    return out


def _x_state(d11, d22, d33, d44, c23, c14=0.0) -> np.ndarray:
    rho = np.diag([d11, d22, d33, d44]).astype(complex)
    rho[1, 2] = c23
    rho[2, 1] = np.conj(c23)
    rho[0, 3] = c14
    rho[3, 0] = np.conj(c14)
    return rho


def closed_form_elements(kind, alpha: float, r: float, p: float, mu: float) -> np.ndarray:
    """Evolved X-state of the Bell-like family from the published elements.

    The expressions are reproduced verbatim.  Two of them disagree with the
    Kraus construction: the phase-damping coherence carries ``(1-p)**2``
    where the Kraus operators give ``(1-2p)**2``, and the depolarizing
    ``rho_11 = rho_44`` is a copy of the ``rho_33`` expression.  The result
    is therefore not guaranteed to be a valid state; no check is made.
    """
    kind = ChannelKind.parse(kind)
    for name, value in (("alpha", alpha), ("r", r), ("p", p), ("mu", mu)):
        _check_unit_interval(name, value)
    a2 = alpha * alpha
    coh = r * alpha * math.sqrt(1.0 - a2)
    if kind is ChannelKind.AMPLITUDE_DAMPING:
        d11 = 0.25 * (1 - p) * (1 - r) * (1 - p * (1 - mu))
        d22 = 0.25 * (1 + r * (3 - 4 * a2) - 4 * p * r * (1 - a2) * (1 - mu) - p**2 * (1 - r) * (1 - mu))
        d33 = 0.25 * (1 - r * (1 - 4 * a2) - p**2 * (1 - r) * (1 - mu) - 4 * p * r * a2 * (1 - mu))
        d44 = 0.25 * (1 - r + p**2 * (1 - r) * (1 - mu) + 2 * p - p * mu + p * r * (2 - 3 * mu))
        return _x_state(d11, d22, d33, d44, coh * (1 - p * (1 - mu)))
    if kind is ChannelKind.PHASE_DAMPING:
        d11 = 0.25 * (1 - r)
        d22 = 0.25 * (1 + r * (3 - 4 * a2))
        d33 = 0.25 * (1 - r * (1 - 4 * a2))
        return _x_state(d11, d22, d33, d11, coh * ((1 - p) ** 2 * (1 - mu) + mu))
    d11 = (9 + r * (36 * a2 - 9 + 16 * p**2 * (1 - mu) - 24 * p * (2 * a2 - mu))) / 36
    d22 = (9 + r * (27 - 36 * a2 + 16 * p**2 * (1 - mu) + 24 * p * (2 * a2 + mu - 2))) / 36
    d33 = (9 + r * (36 * a2 - 9 + 16 * p**2 * (1 - mu) + 24 * p * (mu - 2 * a2))) / 36
    return _x_state(d11, d22, d33, d11, coh * ((3 - 4 * p) ** 2 * (1 - mu) + 9 * mu) / 9)

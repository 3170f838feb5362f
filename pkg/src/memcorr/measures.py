"""Correlation measures for two-qubit states.

Discord is computed two ways.  :func:`discord_xstate` evaluates the
closed-form X-state expression (minimum of a ``sigma_z`` and a ``sigma_x``
measurement candidate on qubit B).  :func:`discord_oracle` minimises the
conditional entropy by brute force over every projective measurement on
qubit B, ignoring any structure of the state.  The two should agree on the
states this package produces; the oracle is the check on the formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import UsageError

X_FORM_TOL = 1e-10
ENTANGLEMENT_TOL = 1e-12
NEGATIVE_SLACK = 1e-10
DEGENERATE_OUTCOME = 1e-14

ORACLE_THETA_STEPS = 64
ORACLE_PHI_STEPS = 128
ORACLE_REFINE_PASSES = 2
ORACLE_REFINE_FACTOR = 8

_X_MASK = np.array([[i == j or i + j == 3 for j in range(4)] for i in range(4)])


@dataclass(frozen=True)
class MeasurementAngles:
    """Bloch angles of a two-outcome projective measurement on qubit B.

    The outcomes are ``(I +/- n.sigma) / 2`` with ``n`` given by
    :meth:`bloch_vector`.
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise UsageError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise UsageError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def bloch_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class CorrelationReport:
    concurrence: float
    discord_formula: float
    discord_oracle: float
    mutual_info: float
    classical_corr: float

    def as_dict(self) -> dict:
        return {
            "concurrence": self.concurrence,
            "discord_formula": self.discord_formula,
            "discord_oracle": self.discord_oracle,
            "mutual_info": self.mutual_info,
            "classical_corr": self.classical_corr,
        }


def _clamp_small_negative(value: float, what: str) -> float:
    if value < -NEGATIVE_SLACK:
        raise ArithmeticError(f"{what} came out negative: {value:.3e}")
    return max(0.0, value)


def require_x_form(rho) -> np.ndarray:
    rho = qmat.as_matrix(rho, dims=(4,))
    off = np.max(np.abs(rho[~_X_MASK]))
    if off > X_FORM_TOL:
        raise UsageError(f"state is not of X form (off-pattern entry {off:.3e})")
    return rho


def concurrence(rho) -> float:
    """Concurrence of an X state, ``2 max(0, |r23| - sqrt(r11 r44), |r14| - sqrt(r22 r33))``."""
    rho = require_x_form(rho)
    d = np.clip(np.real(np.diag(rho)), 0.0, None)
    c1 = abs(rho[1, 2]) - math.sqrt(d[0] * d[3])
    c2 = abs(rho[0, 3]) - math.sqrt(d[1] * d[2])
    return float(2.0 * max(0.0, c1, c2))


def discord_xstate(rho) -> float:
    """Discord of an X state (measurement on B) from the closed-form expression."""
    rho = require_x_form(rho)
    d = np.real(np.diag(rho))
    h_b = qmat.binary_entropy(d[0] + d[2])
    s_ab = qmat.von_neumann_entropy(rho)
    bloch = math.sqrt((1.0 - 2.0 * (d[2] + d[3])) ** 2 + 4.0 * (abs(rho[0, 3]) + abs(rho[1, 2])) ** 2)
    d1 = qmat.binary_entropy((1.0 + bloch) / 2.0)
    d2 = qmat.entropy_from_eigenvalues(d) - h_b
    q1 = h_b - s_ab + d1
    q2 = h_b - s_ab + d2
    return _clamp_small_negative(min(q1, q2), "X-state discord")


def _entropies(rho: np.ndarray) -> tuple[float, float, float]:
    return (
        qmat.von_neumann_entropy(qmat.partial_trace(rho, "B")),
        qmat.von_neumann_entropy(qmat.partial_trace(rho, "A")),
        qmat.von_neumann_entropy(rho),
    )


def mutual_information(rho) -> float:
    """``S(rho_A) + S(rho_B) - S(rho_AB)`` in bits."""
    s_a, s_b, s_ab = _entropies(qmat.as_matrix(rho, dims=(4,)))
    return _clamp_small_negative(s_a + s_b - s_ab, "mutual information")


def _bloch_directions(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _xlogx(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * np.log2(safe), 0.0)


def _outcome_entropy(m: np.ndarray) -> np.ndarray:
    """``p S(m / p)`` for a stack of unnormalised 2x2 states ``m`` with ``p = tr m``."""
    tr = np.real(m[:, 0, 0] + m[:, 1, 1])
    gap = np.sqrt(np.real(m[:, 0, 0] - m[:, 1, 1]) ** 2 + 4.0 * np.abs(m[:, 0, 1]) ** 2)
    lam = np.clip(np.stack([(tr + gap) / 2, (tr - gap) / 2], axis=-1), 0.0, None)
    out = _xlogx(tr) - _xlogx(lam).sum(axis=-1)
    return np.where(tr < DEGENERATE_OUTCOME, 0.0, out)


def conditional_entropy(rho, theta, phi) -> np.ndarray:
    """Average post-measurement entropy of A, ``sum_k p_k S(rho_A|k)``.

    The measurement projects qubit B onto ``(I +/- n.sigma) / 2`` with ``n``
    the Bloch direction of ``(theta, phi)``.  ``theta`` and ``phi`` broadcast
    against each other; the result has their broadcast shape.
    """
    t = qmat.as_matrix(rho, dims=(4,)).reshape(2, 2, 2, 2)
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    shape = theta.shape
    n = _bloch_directions(theta.ravel(), phi.ravel())
    rho_a = np.einsum("ijkj->ik", t)
    # tr_B[(I (x) sigma_k) rho] for k = x, y, z
    moments = np.stack([np.einsum("ibjc,cb->ij", t, s) for s in qmat.PAULIS[1:]])
    shift = np.tensordot(n, moments, axes=1)
    total = _outcome_entropy(0.5 * (rho_a + shift)) + _outcome_entropy(0.5 * (rho_a - shift))
    return total.reshape(shape)


def _grid_argmin(values: np.ndarray) -> tuple[int, int]:
    # row-major argmin: ties go to the smallest theta, then smallest phi
    flat = int(np.argmin(values))
    return divmod(flat, values.shape[1])


def minimize_conditional_entropy(rho) -> tuple[float, MeasurementAngles]:
    """Coarse (theta, phi) grid search followed by local zoom passes."""
    dtheta = math.pi / ORACLE_THETA_STEPS
    dphi = 2 * math.pi / ORACLE_PHI_STEPS
    thetas = np.arange(ORACLE_THETA_STEPS) * dtheta
    phis = np.arange(ORACLE_PHI_STEPS) * dphi
    vals = conditional_entropy(rho, thetas[:, None], phis[None, :])
    i, j = _grid_argmin(vals)
    best = float(vals[i, j])
    theta_c, phi_c = float(thetas[i]), float(phis[j])

    offsets = np.arange(-ORACLE_REFINE_FACTOR, ORACLE_REFINE_FACTOR + 1)
    for _ in range(ORACLE_REFINE_PASSES):
        dtheta /= ORACLE_REFINE_FACTOR
        dphi /= ORACLE_REFINE_FACTOR
        thetas = np.unique(np.clip(theta_c + offsets * dtheta, 0.0, math.pi))
        phis = np.mod(phi_c + offsets * dphi, 2 * math.pi)
        vals = conditional_entropy(rho, thetas[:, None], phis[None, :])
        i, j = _grid_argmin(vals)
        if vals[i, j] < best:
            best = float(vals[i, j])
            theta_c, phi_c = float(thetas[i]), float(phis[j])
    return best, MeasurementAngles(theta_c, phi_c % (2 * math.pi))


def _oracle(rho: np.ndarray, s_a: float, mi: float) -> tuple[float, float, MeasurementAngles]:
    min_cond, angles = minimize_conditional_entropy(rho)
    classical = _clamp_small_negative(s_a - min_cond, "classical correlation")
    discord = _clamp_small_negative(mi - classical, "oracle discord")
    return discord, classical, angles


def discord_oracle(rho) -> tuple[float, float, MeasurementAngles]:
    """Brute-force discord with projective measurements on qubit B.

    Returns ``(discord, classical_correlation, optimal_angles)``.  Since the
    minimum is taken over a finite set of bases, the discord is an upper
    bound on the exact value.
    """
    rho = qmat.as_matrix(rho, dims=(4,))
    s_a, s_b, s_ab = _entropies(rho)
    mi = _clamp_small_negative(s_a + s_b - s_ab, "mutual information")
    return _oracle(rho, s_a, mi)


def correlation_report(rho) -> CorrelationReport:
    rho = qmat.as_matrix(rho, dims=(4,))
    s_a, s_b, s_ab = _entropies(rho)
    mi = _clamp_small_negative(s_a + s_b - s_ab, "mutual information")
    discord, classical, _ = _oracle(rho, s_a, mi)
    return CorrelationReport(
        concurrence=concurrence(rho),
        discord_formula=discord_xstate(rho),
        discord_oracle=discord,
        mutual_info=mi,
        classical_corr=classical,
    )

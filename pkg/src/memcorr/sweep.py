"""Time sweeps and entanglement birth/death locators."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .channels import ChannelKind, DampingParameter, MemoryChannel, apply_memory_channel
from .errors import NoTransitionError, UsageError
from .measures import ENTANGLEMENT_TOL, CorrelationReport, concurrence, correlation_report
from .states import BellDiagonalBlend, make_initial

CSV_HEADER = (
    "gamma_t",
    "p",
    "mu",
    "alpha",
    "r",
    "channel",
    "QE",
    "QD_formula",
    "QD_oracle",
    "mutual_info",
    "classical_corr",
)

DEFAULT_GAMMA_T_MAX = 5.0
DEFAULT_STEPS = 500
BISECTION_WIDTH = 1e-6
BIRTH_P_CEILING = 0.99


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    text = format(float(x), ".12g")
    return "0" if text == "-0" else text


@dataclass(frozen=True)
class SweepConfig:
    """One figure panel: a channel, the mu curves, the initial state and a time grid.

    ``steps`` is the number of uniformly spaced samples on ``[0, gamma_t_max]``,
    both ends included.
    """

    channel_kind: ChannelKind
    mu_list: tuple
    alpha: float
    r: float
    gamma_t_max: float = DEFAULT_GAMMA_T_MAX
    steps: int = DEFAULT_STEPS
    output_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "channel_kind", ChannelKind.parse(self.channel_kind))
        mus = tuple(float(m) for m in self.mu_list)
        if not mus:
            raise UsageError("mu_list must not be empty")
        if any(not 0.0 <= m <= 1.0 for m in mus):
            raise UsageError(f"every mu must lie in [0, 1], got {mus}")
        object.__setattr__(self, "mu_list", mus)
        BellDiagonalBlend(self.alpha, self.r)
        if not self.gamma_t_max > 0.0:
            raise UsageError(f"gamma_t_max must be positive, got {self.gamma_t_max}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise UsageError(f"steps must be an integer >= 2, got {self.steps}")

    def gamma_t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.gamma_t_max, int(self.steps))


@dataclass(frozen=True)
class SweepRow:
    gamma_t: float
    p: float
    mu: float
    alpha: float
    r: float
    channel: str
    report: CorrelationReport

    def values(self) -> tuple:
        rep = self.report
        return (
            self.gamma_t,
            self.p,
            self.mu,
            self.alpha,
            self.r,
            self.channel,
            rep.concurrence,
            rep.discord_formula,
            rep.discord_oracle,
            rep.mutual_info,
            rep.classical_corr,
        )


def evolve(kind, mu: float, alpha: float, r: float, damping: DampingParameter) -> np.ndarray:
    """Bell-like initial state pushed through the memory channel."""
    rho0 = make_initial(BellDiagonalBlend(alpha, r))
    return apply_memory_channel(rho0, MemoryChannel(kind, mu), damping)


def evolve_at(kind, mu: float, alpha: float, r: float, gamma_t: float) -> np.ndarray:
    return evolve(kind, mu, alpha, r, DampingParameter.from_gamma_t(kind, gamma_t))


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Evaluate every (mu, gamma_t) point, ordered by mu then gamma_t."""
    rows = []
    grid = cfg.gamma_t_grid()
    rho0 = make_initial(BellDiagonalBlend(cfg.alpha, cfg.r))
    for mu in sorted(set(cfg.mu_list)):
        channel = MemoryChannel(cfg.channel_kind, mu)
        for gt in grid:
            damping = DampingParameter.from_gamma_t(cfg.channel_kind, float(gt))
            rho = apply_memory_channel(rho0, channel, damping)
            rows.append(
                SweepRow(
                    float(gt), damping.p, mu, cfg.alpha, cfg.r, cfg.channel_kind.value,
                    correlation_report(rho),
                )
            )
    return rows


def format_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def write_csv(rows: Iterable[SweepRow], path: str) -> None:
    text = format_csv(rows)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


@dataclass(frozen=True)
class TransitionQuery:
    """Where concurrence switches on (``birth``) or off (``death``).

    Without an explicit ``bracket`` the search runs over ``[0, 5]`` for death
    and, for birth, up to the time at which the damping probability reaches
    0.99 (or ``[0, 5]`` when the channel's ``p`` never gets that far).
    """

    channel_kind: ChannelKind
    mu: float
    alpha: float
    r: float
    direction: str
    bracket: Optional[tuple] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "channel_kind", ChannelKind.parse(self.channel_kind))
        MemoryChannel(self.channel_kind, self.mu)
        BellDiagonalBlend(self.alpha, self.r)
        if self.direction not in ("birth", "death"):
            raise UsageError(f"direction must be 'birth' or 'death', got {self.direction!r}")
        if self.bracket is None:
            object.__setattr__(self, "bracket", default_bracket(self.channel_kind, self.direction))
        lo, hi = (float(x) for x in self.bracket)
        if not 0.0 <= lo < hi:
            raise UsageError(f"bracket must satisfy 0 <= lo < hi, got {self.bracket}")
        object.__setattr__(self, "bracket", (lo, hi))


def default_bracket(kind, direction: str) -> tuple[float, float]:
    kind = ChannelKind.parse(kind)
    if direction == "birth" and kind is ChannelKind.AMPLITUDE_DAMPING:
        # p = 1 - exp(-gamma t) >= 0.99
        return (0.0, -math.log(1.0 - BIRTH_P_CEILING))
    return (0.0, DEFAULT_GAMMA_T_MAX)


def _entangled(q: TransitionQuery, gamma_t: float) -> bool:
    rho = evolve_at(q.channel_kind, q.mu, q.alpha, q.r, gamma_t)
    return concurrence(rho) > ENTANGLEMENT_TOL


def find_transition(q: TransitionQuery, width: float = BISECTION_WIDTH) -> float:
    """Bisect for the entanglement birth or death time inside ``q.bracket``.

    Raises:
        NoTransitionError: if the bracket endpoints are not (separable,
            entangled) for birth or (entangled, separable) for death.
    """
    lo, hi = q.bracket
    before = q.direction == "death"
    if _entangled(q, lo) != before or _entangled(q, hi) == before:
        raise NoTransitionError(
            f"no transition in bracket [{lo}, {hi}] for {q.direction} "
            f"({q.channel_kind.value}, mu={q.mu}, alpha={q.alpha}, r={q.r})"
        )
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        if _entangled(q, mid) == before:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SurfacePoint:
    r: float
    mu: float
    concurrence: float


def entanglement_surface(
    kind, alpha: float, damping: DampingParameter, r_values: Sequence[float], mu_values: Sequence[float]
) -> list[SurfacePoint]:
    """Concurrence over an (r, mu) grid at fixed damping."""
    out = []
    for r in r_values:
        for mu in mu_values:
            rho = evolve(kind, float(mu), alpha, float(r), damping)
            out.append(SurfacePoint(float(r), float(mu), concurrence(rho)))
    return out


SURFACE_HEADER = ("r", "mu", "p", "alpha", "channel", "QE")


def format_surface_csv(points: Iterable[SurfacePoint], p: float, alpha: float, kind) -> str:
    kind = ChannelKind.parse(kind)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SURFACE_HEADER)
    for pt in points:
        writer.writerow([_fmt(pt.r), _fmt(pt.mu), _fmt(p), _fmt(alpha), kind.value, _fmt(pt.concurrence)])
    return buf.getvalue()


# Parameter sets of the published figures.  The mu curves are not listed in
# the captions; these five span the memoryless to perfect-memory range.
FIGURE_MU = (0.0, 0.3, 0.6, 0.9, 1.0)
FIGURE_CONFIGS = {
    "fig1": SweepConfig(ChannelKind.AMPLITUDE_DAMPING, FIGURE_MU, 0.5, 0.3),
    "fig3a": SweepConfig(ChannelKind.AMPLITUDE_DAMPING, FIGURE_MU, 0.5, 0.3),
    "fig3b": SweepConfig(ChannelKind.PHASE_DAMPING, FIGURE_MU, 0.5, 0.3),
    "fig3c": SweepConfig(ChannelKind.DEPOLARIZING, FIGURE_MU, 0.5, 0.3),
    "fig4a": SweepConfig(ChannelKind.AMPLITUDE_DAMPING, FIGURE_MU, 0.5, 0.5),
    "fig4b": SweepConfig(ChannelKind.PHASE_DAMPING, FIGURE_MU, 0.5, 0.5),
    "fig4c": SweepConfig(ChannelKind.DEPOLARIZING, FIGURE_MU, 0.5, 0.5),
}
# Figure 5 shares the Figure 4 parameters (discord columns of the same sweep);
# Figure 2 is an (r, mu) surface at p = 0.95, see entanglement_surface.
FIGURE_CONFIGS["fig5a"] = FIGURE_CONFIGS["fig4a"]
FIGURE_CONFIGS["fig5b"] = FIGURE_CONFIGS["fig4b"]
FIGURE_CONFIGS["fig5c"] = FIGURE_CONFIGS["fig4c"]


def distinct_figure_configs() -> list[SweepConfig]:
    seen = []
    for cfg in FIGURE_CONFIGS.values():
        if cfg not in seen:
            seen.append(cfg)
    return seen

"""Self-check suites exposed through ``memcorr verify``.

Each suite returns a :class:`SuiteResult`.  A failed check makes the suite
fail.  Disagreements between the published closed forms and the Kraus
construction are reported as discrepancies instead, as long as the Kraus
construction itself passes the completeness checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    ChannelKind,
    DampingParameter,
    MemoryChannel,
    apply_memory_channel,
    closed_form_elements,
    correlated_kraus,
    memory_completeness_error,
    uncorrelated_kraus,
)
from .errors import UsageError
from .states import BellDiagonalBlend, make_initial
from .sweep import distinct_figure_configs, run_sweep

LEVELS = ("cptp", "closed-form", "discord-oracle", "all")

CPTP_TOL = 1e-12
CLOSED_FORM_TOL = 1e-10
DISCORD_GAP_TOL = 2e-3

CPTP_GRID = np.linspace(0.0, 1.0, 21)
CLOSED_FORM_GRID = {
    "alpha": np.linspace(0.0, 1.0, 5),
    "r": np.linspace(0.0, 1.0, 5),
    "p": np.linspace(0.0, 1.0, 21),
    "mu": np.linspace(0.0, 1.0, 5),
}


@dataclass
class Check:
    name: str
    value: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.value <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (tol {self.tol:.0e})"


@dataclass
class SuiteResult:
    level: str
    checks: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = [f"== {self.level} =="]
        out += [c.line() for c in self.checks]
        out += [f"[NOTE] {d}" for d in self.discrepancies]
        return out


def cptp_suite(grid=CPTP_GRID) -> SuiteResult:
    result = SuiteResult("cptp")
    for kind in ChannelKind:
        worst = worst_unc = worst_cor = 0.0
        for p in grid:
            worst_unc = max(worst_unc, uncorrelated_kraus(kind, p).completeness_error())
            worst_cor = max(worst_cor, correlated_kraus(kind, p).completeness_error())
            for mu in grid:
                worst = max(worst, memory_completeness_error(kind, p, mu))
        result.checks.append(Check(f"{kind.value} uncorrelated completeness", worst_unc, CPTP_TOL))
        result.checks.append(Check(f"{kind.value} correlated completeness", worst_cor, CPTP_TOL))
        result.checks.append(Check(f"{kind.value} memory-map completeness", worst, CPTP_TOL))
    return result


def closed_form_gap(kind, grid=CLOSED_FORM_GRID) -> tuple[float, tuple]:
    """Largest entrywise |closed form - Kraus path| and where it occurs."""
    kind = ChannelKind.parse(kind)
    worst, where = 0.0, None
    for alpha, r in itertools.product(grid["alpha"], grid["r"]):
        rho0 = make_initial(BellDiagonalBlend(alpha, r))
        for p, mu in itertools.product(grid["p"], grid["mu"]):
            kraus = apply_memory_channel(rho0, MemoryChannel(kind, mu), DampingParameter.direct(kind, p))
            gap = float(np.max(np.abs(closed_form_elements(kind, alpha, r, p, mu) - kraus)))
            if gap > worst:
                worst, where = gap, (float(alpha), float(r), float(p), float(mu))
    return worst, where


def closed_form_suite(grid=CLOSED_FORM_GRID) -> SuiteResult:
    result = SuiteResult("closed-form")
    cptp = cptp_suite(grid=np.unique(np.concatenate([grid["p"], grid["mu"]])))
    kraus_ok = cptp.ok
    result.checks += cptp.checks
    for kind in ChannelKind:
        gap, where = closed_form_gap(kind, grid)
        if gap <= CLOSED_FORM_TOL:
            result.discrepancies.append(f"{kind.value} closed form matches Kraus path (max gap {gap:.3e})")
        elif kraus_ok:
            a, r, p, mu = where
            result.discrepancies.append(
                f"{kind.value} closed form differs from Kraus path: max gap {gap:.3e} "
                f"at alpha={a:g}, r={r:g}, p={p:g}, mu={mu:g}"
            )
        else:
            result.checks.append(Check(f"{kind.value} closed form vs Kraus path", gap, CLOSED_FORM_TOL))
    return result


def discord_gap(configs=None) -> tuple[float, int]:
    """Max |formula - oracle| discord over the figure sweeps, and the row count."""
    worst, count = 0.0, 0
    for cfg in configs if configs is not None else distinct_figure_configs():
        for row in run_sweep(cfg):
            rep = row.report
            worst = max(worst, abs(rep.discord_formula - rep.discord_oracle))
            count += 1
    return worst, count


def discord_oracle_suite(configs=None) -> SuiteResult:
    result = SuiteResult("discord-oracle")
    worst, count = discord_gap(configs)
    result.checks.append(Check(f"formula vs oracle discord over {count} sweep points", worst, DISCORD_GAP_TOL))
    return result


SUITES = {
    "cptp": cptp_suite,
    "closed-form": closed_form_suite,
    "discord-oracle": discord_oracle_suite,
}


def verify(level: str = "all") -> list[SuiteResult]:
    if level == "all":
        return [suite() for suite in SUITES.values()]
    if level not in SUITES:
        raise UsageError(f"level must be one of {LEVELS}, got {level!r}")
    return [SUITES[level]()]

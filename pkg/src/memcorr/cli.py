"""Command line entry point.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import verification
from .channels import ChannelKind, DampingParameter
from .errors import NoTransitionError, UsageError
from .measures import correlation_report
from .sweep import (
    DEFAULT_GAMMA_T_MAX,
    DEFAULT_STEPS,
    SweepConfig,
    TransitionQuery,
    entanglement_surface,
    evolve,
    find_transition,
    format_csv,
    format_surface_csv,
    run_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _mu_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid mu list {text!r}") from None


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--channel", required=True, choices=[k.value for k in ChannelKind])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--r", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sweep", help="correlation measures on a gamma*t grid, as CSV")
    _add_state_args(sp)
    sp.add_argument("--mu", type=_mu_list, required=True, help="comma separated memory coefficients")
    sp.add_argument("--gamma-t-max", type=float, default=DEFAULT_GAMMA_T_MAX)
    sp.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    sp.add_argument("--out", default="-", help="output path, '-' for stdout")

    tp = sub.add_parser("transition", help="entanglement birth or death time by bisection")
    _add_state_args(tp)
    tp.add_argument("--direction", required=True, choices=["birth", "death"])
    tp.add_argument("--mu", type=float, required=True)
    tp.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))

    pp = sub.add_parser("point", help="correlation report for a single evolved state")
    _add_state_args(pp)
    pp.add_argument("--mu", type=float, required=True)
    when = pp.add_mutually_exclusive_group(required=True)
    when.add_argument("--gamma-t", type=float)
    when.add_argument("--expert-p", type=float, help="damping probability entered directly")

    fp = sub.add_parser("surface", help="concurrence over an (r, mu) grid at fixed damping, as CSV")
    fp.add_argument("--channel", required=True, choices=[k.value for k in ChannelKind])
    fp.add_argument("--alpha", type=float, required=True)
    when = fp.add_mutually_exclusive_group(required=True)
    when.add_argument("--gamma-t", type=float)
    when.add_argument("--expert-p", type=float, help="damping probability entered directly")
    fp.add_argument("--r-steps", type=int, default=51)
    fp.add_argument("--mu-steps", type=int, default=51)
    fp.add_argument("--out", default="-")

    vp = sub.add_parser("verify", help="run the built-in consistency suites")
    vp.add_argument("--level", choices=verification.LEVELS, default="all")
    return parser


def _damping(kind: ChannelKind, args) -> DampingParameter:
    if args.expert_p is not None:
        return DampingParameter.direct(kind, args.expert_p)
    return DampingParameter.from_gamma_t(kind, args.gamma_t)


def _open_output(path: str):
    # opened before any computation so a bad path fails fast
    if path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="ascii", newline="")


def _cmd_sweep(args) -> int:
    cfg = SweepConfig(args.channel, args.mu, args.alpha, args.r, args.gamma_t_max, args.steps, args.out)
    with _open_output(args.out) as fh:
        fh.write(format_csv(run_sweep(cfg)))
    return EXIT_OK


def _cmd_transition(args) -> int:
    q = TransitionQuery(
        args.channel, args.mu, args.alpha, args.r, args.direction,
        tuple(args.bracket) if args.bracket else None,
    )
    try:
        t = find_transition(q)
    except NoTransitionError as exc:
        print(f"no transition in bracket: {exc}")
        return EXIT_OK
    print(format(t, ".12g"))
    return EXIT_OK


def _cmd_point(args) -> int:
    kind = ChannelKind.parse(args.channel)
    damping = _damping(kind, args)
    rep = correlation_report(evolve(kind, args.mu, args.alpha, args.r, damping))
    record = {"channel": kind.value, "gamma_t": damping.gamma_t, "p": damping.p, "mu": args.mu,
              "alpha": args.alpha, "r": args.r, **rep.as_dict()}
    print(json.dumps(record, indent=2))
    return EXIT_OK


def _cmd_surface(args) -> int:
    kind = ChannelKind.parse(args.channel)
    if args.r_steps < 2 or args.mu_steps < 2:
        raise UsageError("--r-steps and --mu-steps must be >= 2")
    damping = _damping(kind, args)
    with _open_output(args.out) as fh:
        points = entanglement_surface(
            kind, args.alpha, damping, np.linspace(0, 1, args.r_steps), np.linspace(0, 1, args.mu_steps)
        )
        fh.write(format_surface_csv(points, damping.p, args.alpha, kind))
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = verification.verify(args.level)
    for res in results:
        print("\n".join(res.lines()))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


COMMANDS = {
    "sweep": _cmd_sweep,
    "transition": _cmd_transition,
    "point": _cmd_point,
    "surface": _cmd_surface,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"memcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"memcorr: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

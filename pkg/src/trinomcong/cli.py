"""Command line front end.

    trinomcong sweep --checks thm_i,cor_1_9 --prime-max 500 --threads 4 -o report.json
    trinomcong identity --name lemma3 --n-max 20
    trinomcong solve-m --b 4 --c 1
    trinomcong represent --p 13
    trinomcong check --name thm_ii --p 7 --b 4 --c 1 --m 36

``sweep`` reads an optional ``key = value`` file (``--config``); flags given
on the command line override it.  The default worker count comes from the
``TRINOMCONG_THREADS`` environment variable.  Exit status is 0 iff nothing
failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .congruences import CHECKS, CheckVerdict, solve_m
from .modnt import NumberTheoryError, cornacchia_x2_4y2
from .sequences import TrinomialParams
from .sweep import (
    IDENTITY_SUITES,
    ConfigError,
    SweepConfig,
    convert_option,
    default_threads,
    emit_report,
    parse_config_text,
    run_identity_suite,
    run_sweep,
)

log = logging.getLogger("trinomcong")

# flag dest -> config-file key
_SWEEP_FLAGS = ("checks", "prime_min", "prime_max", "params", "b_range", "c_range",
                "m_mode", "m_values", "t_range", "gamma_range", "threads", "output",
                "format")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trinomcong", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run congruence checks over primes and parameters")
    sw.add_argument("--config", help="key=value configuration file")
    sw.add_argument("--checks", help=f"comma separated ids from: {', '.join(CHECKS)}")
    sw.add_argument("--prime-min", dest="prime_min")
    sw.add_argument("--prime-max", dest="prime_max")
    sw.add_argument("--params", help="explicit (b,c) pairs, e.g. '1,1 2,-1'")
    sw.add_argument("--b-range", dest="b_range", help="lo:hi")
    sw.add_argument("--c-range", dest="c_range", help="lo:hi")
    sw.add_argument("--m-mode", dest="m_mode", choices=("auto", "explicit"))
    sw.add_argument("--m", dest="m_values", help="explicit m values (with --m-mode explicit)")
    sw.add_argument("--t-range", dest="t_range", help="lo:hi, capped at p-1")
    sw.add_argument("--gamma-range", dest="gamma_range", help="lo:hi")
    sw.add_argument("--threads")
    sw.add_argument("-o", "--output", help="write the report here instead of stdout")
    sw.add_argument("--format", choices=("json", "csv"))

    idp = sub.add_parser("identity", help="run exact identity sweeps")
    idp.add_argument("--name", action="append", choices=sorted(IDENTITY_SUITES),
                     help="suite to run (repeatable, default: all)")
    idp.add_argument("--n-max", type=int, default=30)
    idp.add_argument("--p-max", type=int, default=200)

    sm = sub.add_parser("solve-m", help="integer m with (m-d)^2 = 16mc")
    sm.add_argument("--b", type=int, required=True)
    sm.add_argument("--c", type=int, required=True)

    rp = sub.add_parser("represent", help="write p = x^2 + 4y^2 with x = 1 (mod 4)")
    rp.add_argument("--p", type=int, required=True)

    ck = sub.add_parser("check", help="run a single congruence check")
    ck.add_argument("--name", required=True, choices=sorted(CHECKS))
    ck.add_argument("--p", type=int, required=True)
    ck.add_argument("--b", type=int)
    ck.add_argument("--c", type=int)
    ck.add_argument("--m", type=int)
    ck.add_argument("--t", type=int)
    ck.add_argument("--gamma", type=int)
    return parser


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    kwargs: dict = {"threads": default_threads()}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            kwargs.update(parse_config_text(fh.read()))
    for key in _SWEEP_FLAGS:
        raw = getattr(args, key)
        if raw is not None:
            try:
                name, value = convert_option(key, str(raw))
            except ValueError as exc:
                raise ConfigError(f"--{key.replace('_', '-')}: {exc}") from None
            kwargs[name] = value
    if kwargs.get("m_values") and "m_mode" not in kwargs:
        kwargs["m_mode"] = "explicit"
    return SweepConfig(**kwargs)


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _sweep_config(args)
    report = run_sweep(config)
    data = emit_report(report, config.fmt)
    if config.output:
        with open(config.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    s = report.summary
    print(f"pass={s['pass']} fail={s['fail']} skip={s['skip']} "
          f"wall={report.wall_time:.2f}s", file=sys.stderr)
    return 0 if report.ok else 1


def _cmd_identity(args: argparse.Namespace) -> int:
    failures = 0
    for name in args.name or sorted(IDENTITY_SUITES):
        reports = run_identity_suite(name, args.n_max, args.p_max)
        bad = [r for r in reports if not r.holds]
        failures += len(bad)
        print(f"{name}: {len(reports) - len(bad)}/{len(reports)} hold")
        for r in bad:
            print(f"  FAIL {r.identity} {r.params}: lhs={r.lhs} rhs={r.rhs}")
    return 0 if failures == 0 else 1


def _run_check(args: argparse.Namespace) -> CheckVerdict:
    fn, kind = CHECKS[args.name]

    def need(*names: str) -> None:
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise ConfigError(f"{args.name} needs --{' --'.join(missing)}")

    if kind == "prime":
        return fn(args.p)
    if kind == "bc":
        need("b", "c")
        return fn(TrinomialParams(args.b, args.c), args.p)
    if kind == "bcm":
        need("b", "c", "m")
        return fn(TrinomialParams(args.b, args.c), args.m, args.p)
    if kind == "md":
        need("b", "c", "m")
        return fn(args.m, args.b * args.b - 4 * args.c, args.p)
    if kind == "t":
        need("t")
        return fn(args.t, args.p)
    need("b", "gamma")
    return fn(args.b, args.gamma, args.p)


def _cmd_check(args: argparse.Namespace) -> int:
    v = _run_check(args)
    rec = {"check": v.check, "p": v.p, "params": v.params, "e": v.e, "lhs": v.lhs,
           "rhs": v.rhs, "holds": v.holds, "skip_reason": v.skip_reason}
    if v.aux:
        rec["aux"] = v.aux
    print(json.dumps(rec))
    return 1 if v.holds is False else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "identity":
            return _cmd_identity(args)
        if args.command == "solve-m":
            print(json.dumps(solve_m(TrinomialParams(args.b, args.c))))
            return 0
        if args.command == "represent":
            x, y = cornacchia_x2_4y2(args.p)
            print(json.dumps({"p": args.p, "x": x, "y": y}))
            return 0
        return _cmd_check(args)
    except (NumberTheoryError, OSError) as exc:
        print(f"trinomcong: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

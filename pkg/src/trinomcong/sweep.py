"""Sweep orchestration: prime sieving, parameter grids, parallel runs, reports."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Iterator, Optional

from .congruences import CHECKS, CheckVerdict, solve_m
from .identities import (
    IdentityReport,
    verify_clausen_square,
    verify_harmonic_identity,
    verify_harmonic_recurrence,
    verify_known_inverse_binom,
    verify_legendre_connection,
    verify_lemma3,
    verify_lemma3_recurrence,
    verify_lemma4,
    verify_lemma4_recurrence,
    verify_lemma5,
    verify_lemma6,
    verify_sun_lemma31,
    verify_transition_binomials,
    verify_wolstenholme,
)
from .modnt import NumberTheoryError
from .sequences import TrinomialParams

log = logging.getLogger(__name__)

__all__ = [
    "THREADS_ENV",
    "SweepConfig",
    "SweepReport",
    "ConfigError",
    "sieve_primes",
    "run_sweep",
    "emit_report",
    "parse_config_text",
    "IDENTITY_SUITES",
    "run_identity_suite",
]

THREADS_ENV = "TRINOMCONG_THREADS"
SIEVE_LIMIT = 10 ** 8
CSV_FIELDS = ("check", "p", "b", "c", "m", "t", "e", "lhs", "rhs", "holds", "skip_reason")


class ConfigError(NumberTheoryError):
    pass


def sieve_primes(lo: int, hi: int) -> list[int]:
    """All primes in ``[lo, hi]``, ascending."""
    if not 2 <= lo <= hi <= SIEVE_LIMIT:
        raise ConfigError(f"need 2 <= lo <= hi <= 10^8, got lo={lo}, hi={hi}")
    flags = bytearray([1]) * (hi + 1)
    flags[0:2] = b"\x00\x00"
    for q in range(2, isqrt(hi) + 1):
        if flags[q]:
            flags[q * q::q] = bytes(len(range(q * q, hi + 1, q)))
    return [n for n in range(lo, hi + 1) if flags[n]]


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class SweepConfig:
    checks: tuple[str, ...] = tuple(CHECKS)
    prime_min: int = 3
    prime_max: int = 300
    # explicit (b, c) pairs; when empty the b/c grid is used
    params: tuple[tuple[int, int], ...] = ()
    b_range: tuple[int, int] = (-4, 4)
    c_range: tuple[int, int] = (-4, 4)
    m_mode: str = "auto"
    m_values: tuple[int, ...] = ()
    t_range: tuple[int, int] = (1, 10)
    gamma_range: tuple[int, int] = (1, 4)
    threads: int = 1
    output: Optional[str] = None
    fmt: str = "json"

    def __post_init__(self) -> None:
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check id(s): {', '.join(unknown)}")
        if self.prime_min < 3 or self.prime_max < self.prime_min:
            raise ConfigError("need 3 <= prime_min <= prime_max")
        if self.m_mode not in ("auto", "explicit"):
            raise ConfigError(f"m_mode must be 'auto' or 'explicit', got {self.m_mode!r}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        if self.gamma_range[0] < 1:
            raise ConfigError("gamma values must be positive")

    def bc_pairs(self) -> list[tuple[int, int]]:
        if self.params:
            return list(self.params)
        return [(b, c) for b in range(self.b_range[0], self.b_range[1] + 1)
                for c in range(self.c_range[0], self.c_range[1] + 1)]

    def echo(self) -> dict:
        """The configuration as reported; omits settings that cannot change verdicts."""
        out = asdict(self)
        for key in ("threads", "output", "fmt"):
            out.pop(key)
        return json.loads(json.dumps(out))


@dataclass
class SweepReport:
    config: SweepConfig
    verdicts: list[CheckVerdict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skip": 0}
        for v in self.verdicts:
            if v.skipped:
                counts["skip"] += 1
            elif v.holds:
                counts["pass"] += 1
            else:
                counts["fail"] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0


def _prime_cells(config: SweepConfig, p: int) -> Iterator[CheckVerdict]:
    pairs = config.bc_pairs()
    for check in config.checks:
        fn, kind = CHECKS[check]
        if kind == "prime":
            yield fn(p)
        elif kind == "bc":
            for b, c in pairs:
                yield fn(TrinomialParams(b, c), p)
        elif kind in ("bcm", "md"):
            for b, c in pairs:
                tp = TrinomialParams(b, c)
                ms = solve_m(tp) if config.m_mode == "auto" else config.m_values
                for m in ms:
                    info = {"b": b, "c": c, "m": m}
                    if (m - tp.d) ** 2 != 16 * m * c:
                        yield CheckVerdict(check, p, info,
                                           skip_reason="m does not satisfy (m-d)^2 = 16mc")
                    elif kind == "bcm":
                        yield fn(tp, m, p)
                    else:
                        v = fn(m, tp.d, p)
                        yield replace(v, params={**info, "d": tp.d})
        elif kind == "t":
            lo, hi = config.t_range
            for t in range(lo, min(hi, p - 1) + 1):
                yield fn(t, p)
        elif kind == "bgamma":
            bs = sorted({b for b, _ in pairs})
            for b in bs:
                for g in range(config.gamma_range[0], config.gamma_range[1] + 1):
                    yield fn(b, g, p)
        else:  # pragma: no cover
            raise AssertionError(kind)


def _run_prime(config: SweepConfig, p: int) -> list[CheckVerdict]:
    return list(_prime_cells(config, p))


def run_sweep(config: SweepConfig) -> SweepReport:
    """Run every (check, prime, parameter) cell; order of the result is canonical."""
    start = time.perf_counter()
    primes = sieve_primes(config.prime_min, config.prime_max)
    verdicts: list[CheckVerdict] = []
    if config.threads == 1 or len(primes) <= 1:
        for p in primes:
            verdicts.extend(_run_prime(config, p))
    else:
        # largest primes first so the tail of the schedule is cheap
        order = sorted(primes, reverse=True)
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            for chunk in pool.map(_run_prime, [config] * len(order), order):
                verdicts.extend(chunk)
    verdicts.sort(key=CheckVerdict.sort_key)
    report = SweepReport(config, verdicts, time.perf_counter() - start)
    log.info("sweep finished: %s in %.2fs", report.summary, report.wall_time)
    return report


def _verdict_record(v: CheckVerdict) -> dict:
    rec = {
        "check": v.check,
        "p": v.p,
        "params": v.params,
        "e": v.e if not v.skipped else None,
        "lhs": v.lhs,
        "rhs": v.rhs,
        "holds": v.holds,
        "skip_reason": v.skip_reason,
    }
    if v.aux:
        rec["aux"] = v.aux
    return rec


def emit_report(report: SweepReport, fmt: str = "json") -> bytes:
    """Serialize a report; the bytes depend only on the config and verdicts."""
    if fmt == "json":
        doc = {
            "config": report.config.echo(),
            "verdicts": [_verdict_record(v) for v in report.verdicts],
            "summary": report.summary,
        }
        return (json.dumps(doc, indent=1) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for v in report.verdicts:
            ps = v.params
            writer.writerow([
                v.check, v.p,
                *("" if ps.get(k) is None else ps[k] for k in ("b", "c", "m", "t")),
                "" if v.skipped else v.e,
                "" if v.lhs is None else v.lhs,
                "" if v.rhs is None else v.rhs,
                "" if v.holds is None else str(v.holds).lower(),
                v.skip_reason or "",
            ])
        return buf.getvalue().encode()
    raise ConfigError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# key=value configuration
# ---------------------------------------------------------------------------

def _int_pair(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        lo, sep, hi = text.partition("..")
    if not sep:
        v = int(text)
        return v, v
    return int(lo), int(hi)


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in text.replace(";", " ").split():
        b, _, c = item.partition(",")
        out.append((int(b), int(c)))
    return tuple(out)


_CONFIG_KEYS: dict[str, tuple[str, Callable[[str], object]]] = {
    "checks": ("checks", lambda s: tuple(x.strip() for x in s.split(",") if x.strip())),
    "prime_min": ("prime_min", int),
    "prime_max": ("prime_max", int),
    "params": ("params", _pairs),
    "b_range": ("b_range", _int_pair),
    "c_range": ("c_range", _int_pair),
    "m_mode": ("m_mode", str.strip),
    "m_values": ("m_values", lambda s: tuple(int(x) for x in s.replace(",", " ").split())),
    "t_range": ("t_range", _int_pair),
    "gamma_range": ("gamma_range", _int_pair),
    "threads": ("threads", int),
    "output": ("output", str.strip),
    "format": ("fmt", lambda s: s.strip().lower()),
}


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments allowed) into config kwargs."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: cannot parse {raw!r}")
        name, conv = _CONFIG_KEYS[key]
        try:
            out[name] = conv(value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return out


def convert_option(key: str, value: str) -> tuple[str, object]:
    name, conv = _CONFIG_KEYS[key]
    return name, conv(value)


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------

F = Fraction
HARMONIC_XS = (F(1, 2), F(-1, 2), F(2), F(-2), F(3, 5), F(-7, 3), F(-1))
RATIONAL_XS = (F(2), F(1, 2), F(-3), F(5, 7))
LEMMA4_MD = ((4, 12), (1, 5), (25, 5), (36, 12))
LEMMA5_XS = (-3, -2, -1, 2, 3, 4, 5, F(1, 2), F(-1, 3))
LEMMA6_XS = tuple(range(10))


def _grid(lo: int = -4, hi: int = 4) -> list[TrinomialParams]:
    return [TrinomialParams(b, c) for b in range(lo, hi + 1) for c in range(lo, hi + 1)]


def _primes(lo: int, hi: int) -> list[int]:
    return [p for p in sieve_primes(2, hi) if p >= max(lo, 3)]


def _suite_clausen(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for tp in _grid():
        for n in range(n_max + 1):
            yield verify_clausen_square(n, tp)


def _suite_harmonic(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for x in HARMONIC_XS:
        for n in range(n_max + 1):
            yield verify_harmonic_identity(n, x)
            yield verify_harmonic_recurrence(n, x)


def _suite_known_inverse(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for x in RATIONAL_XS:
        for n in range(n_max + 1):
            yield verify_known_inverse_binom(n, x)


def _suite_lemma3(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for x in RATIONAL_XS:
        for n in range(1, n_max + 1):
            yield verify_lemma3(n, x)
            yield verify_lemma3_recurrence(n, x)


def _suite_lemma4(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for m, d in LEMMA4_MD:
        for n in range(n_max + 1):
            yield verify_lemma4(n, m, d)
            yield verify_lemma4_recurrence(n, m, d)


def _suite_legendre(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for tp in _grid():
        if tp.d == 0:
            continue
        for n in range(n_max + 1):
            yield verify_legendre_connection(n, tp)


def _suite_lemma5(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for p in _primes(3, p_max):
        for x in LEMMA5_XS:
            xf = F(x)
            if xf.denominator % p == 0:
                continue
            num = xf.numerator * (xf.denominator - xf.numerator)
            if num % p == 0:
                continue
            yield verify_lemma5(p, x)


def _suite_lemma6(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for p in _primes(3, p_max):
        for x in LEMMA6_XS:
            yield verify_lemma6(p, x)


def _suite_transition(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for p in _primes(3, min(p_max, 100)):
        for l in range(1, (p - 1) // 2 + 1):
            for k in range(0, max(p - 2 * l - 1, l - 1) + 1):
                yield verify_transition_binomials(p, l, k)


def _suite_sun_lemma31(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for p in _primes(3, p_max):
        for l in range((p - 1) // 2 + 1):
            yield verify_sun_lemma31(p, l)


def _suite_wolstenholme(n_max: int, p_max: int) -> Iterator[IdentityReport]:
    for p in _primes(5, max(p_max, 5)):
        yield verify_wolstenholme(p)


IDENTITY_SUITES: dict[str, Callable[[int, int], Iterable[IdentityReport]]] = {
    "clausen_square": _suite_clausen,
    "harmonic": _suite_harmonic,
    "known_inverse_binom": _suite_known_inverse,
    "lemma3": _suite_lemma3,
    "lemma4": _suite_lemma4,
    "legendre_connection": _suite_legendre,
    "lemma5": _suite_lemma5,
    "lemma6": _suite_lemma6,
    "transition_binomials": _suite_transition,
    "sun_lemma31": _suite_sun_lemma31,
    "wolstenholme": _suite_wolstenholme,
}


def run_identity_suite(name: str, n_max: int = 30, p_max: int = 200) -> list[IdentityReport]:
    try:
        suite = IDENTITY_SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown identity suite {name!r}") from None
    return list(suite(n_max, p_max))

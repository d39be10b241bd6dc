"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``python tests/test_acceptance.py`` or through pytest
(``pytest tests/test_acceptance.py -s`` shows the lines inline; with
capture on they are still written to the terminal).
"""

from __future__ import annotations

import os
import random
import sys
import time
from functools import lru_cache

import pytest

from trinomcong.congruences import (
    check_conj_5_4,
    check_cor_1_7,
    check_cor_1_8,
    check_cor_1_9,
    check_eq_1_3,
    check_eq_1_4,
    check_mortenson,
    check_s_closed_forms,
    check_sun_tauraso,
    check_thm_i,
    check_thm_ii,
    solve_m,
)
from trinomcong.modnt import cornacchia_x2_4y2, make_modulus, vr_from_int
from trinomcong.sequences import (
    TrinomialParams,
    binom_valued,
    central_binomial_series,
    poly_power_coeff,
    trinomial_exact,
    trinomial_mod_series,
)
from trinomcong.sweep import SweepConfig, emit_report, run_identity_suite, run_sweep, sieve_primes

GRID = [TrinomialParams(b, c) for b in range(-4, 5) for c in range(-4, 5)]
THM_II_TRIPLES = [(4, 1, 4), (4, 1, 36), (3, 1, 1), (3, 1, 25), (5, 4, 1), (5, 4, 81),
                  (3, 4, 1), (3, 4, 49)]
WORKERS = min(4, os.cpu_count() or 1)


def _tally(verdicts):
    fails = [v for v in verdicts if v.holds is False]
    passes = sum(1 for v in verdicts if v.holds)
    return fails, passes


def _cells(fails, passes, extra=""):
    msg = f"{passes} pass, {len(fails)} fail"
    if fails:
        f = fails[0]
        msg += f"; first failure {getattr(f, 'check', getattr(f, 'identity', '?'))} " \
               f"p={getattr(f, 'p', '')} params={f.params}"
    return msg + extra


def crit_identities():
    t0 = time.perf_counter()
    names = ("clausen_square", "harmonic", "known_inverse_binom", "lemma3", "lemma4",
             "legendre_connection")
    reports = [r for n in names for r in run_identity_suite(n, n_max=30)]
    dt = time.perf_counter() - t0
    fails, passes = _tally(reports)
    return not fails and dt < 60, _cells(fails, passes, f", {dt:.1f}s (limit 60s)")


def crit_thm_i():
    vs = [check_thm_i(tp, p) for p in sieve_primes(3, 300) for tp in GRID if tp.d % p]
    fails, passes = _tally(vs)
    skipped = sum(v.skipped for v in vs)
    return not fails and not skipped, _cells(fails, passes)


def crit_thm_ii():
    vs = [check_thm_ii(TrinomialParams(b, c), m, p)
          for b, c, m in THM_II_TRIPLES for p in sieve_primes(3, 300)]
    fails, passes = _tally(vs)
    return not fails, _cells(fails, passes, f", {sum(v.skipped for v in vs)} inadmissible")


def _exhaustive_x2_4y2(p):
    for y in range(0, int((p / 4) ** 0.5) + 1):
        r = p - 4 * y * y
        x = int(r ** 0.5)
        while x * x > r:
            x -= 1
        while (x + 1) ** 2 <= r:
            x += 1
        if x * x == r:
            return (x if x % 4 == 1 else -x), y
    return None


def crit_corollary():
    t0 = time.perf_counter()
    vs = []
    for p in sieve_primes(3, 500):
        vs += [check_cor_1_7(p), check_cor_1_8(p)]
        if p > 3:
            vs.append(check_cor_1_9(p))
    bad_reps = [p for p in sieve_primes(5, 1999) if p % 4 == 1
                and cornacchia_x2_4y2(p) != _exhaustive_x2_4y2(p)]
    dt = time.perf_counter() - t0
    fails, passes = _tally(vs)
    skipped = sum(v.skipped for v in vs)
    ok = not fails and not skipped and not bad_reps and dt < 120
    return ok, _cells(fails, passes, f", {len(bad_reps)} representation mismatches, "
                                     f"{dt:.1f}s (limit 120s)")


def crit_conjecture():
    vs = [check_conj_5_4(p) for p in sieve_primes(5, 500) if p % 4 == 1]
    fails, passes = _tally(vs)
    return not fails and all(v.e == 3 for v in vs), _cells(fails, passes, " (mod p^3)")


def _random_md_triples(count, seed=20240611):
    rng = random.Random(seed)
    primes = sieve_primes(5, 500)
    out = []
    while len(out) < count:
        tp = TrinomialParams(rng.randint(-30, 30), rng.randint(-30, 30))
        ms = solve_m(tp)
        if not ms:
            continue
        m = rng.choice(ms)
        p = rng.choice(primes)
        if (4 * m * tp.d) % p:
            out.append((m, tp.d, p))
    return out


def crit_imported():
    vs = []
    for b, c in ((1, 1), (2, -1), (3, 2)):
        tp = TrinomialParams(b, c)
        vs += [check_eq_1_3(tp, p) for p in sieve_primes(5, 200) if tp.d % p]
    for p in sieve_primes(3, 500):
        vs += [check_eq_1_4(p), check_mortenson(p)]
    for p in sieve_primes(3, 100):
        vs += [check_sun_tauraso(t, p) for t in range(1, p)]
    vs += [check_s_closed_forms(m, d, p) for m, d, p in _random_md_triples(200)]
    fails, passes = _tally(vs)
    skipped = sum(v.skipped for v in vs)
    return not fails and not skipped, _cells(fails, passes)


def crit_proof_steps():
    reports = []
    for name in ("transition_binomials", "sun_lemma31", "lemma5", "lemma6"):
        reports += run_identity_suite(name, p_max=200)
    reports += run_identity_suite("wolstenholme", p_max=500)
    fails, passes = _tally(reports)
    return not fails, _cells(fails, passes)


def crit_oracles():
    mismatches = 0
    for tp in GRID:
        mismatches += sum(trinomial_exact(n, tp) != poly_power_coeff(n, tp) for n in range(61))
    rng = random.Random(8)
    for p in (7, 101, 997):
        length = min(p, 200)
        for e in (1, 2, 3):
            mod = make_modulus(p, e)
            for _ in range(25):
                tp = TrinomialParams(rng.randint(-100, 100), rng.randint(-100, 100))
                s = trinomial_mod_series(tp, mod, length)
                mismatches += sum(s[k].value != trinomial_exact(k, tp) % mod.pe
                                  for k in range(length))
            cs = central_binomial_series(mod, length)
            for k in range(length):
                bv = binom_valued(2 * k, k, mod)
                ref = vr_from_int(trinomial_exact(k, TrinomialParams(2, 1)), mod)
                mismatches += (cs[k].val, cs[k].unit) != (bv.val, bv.unit)
                mismatches += (bv.val, bv.unit) != (ref.val, ref.unit)
    return mismatches == 0, f"{mismatches} mismatches"


def _full_config(threads):
    # criteria 2-6 over every prime up to 10^3, with the full t range for t-indexed checks
    return SweepConfig(prime_max=1000, t_range=(1, 999), threads=threads)


@lru_cache(maxsize=None)
def _full_sweep(threads):
    report = run_sweep(_full_config(threads))
    return report, emit_report(report, "json")


def crit_performance():
    report, _ = _full_sweep(WORKERS)
    s = report.summary
    ok = s["fail"] == 0 and report.wall_time < 300
    return ok, (f"{s['pass']} pass, {s['fail']} fail, {s['skip']} skip in "
                f"{report.wall_time:.1f}s with {WORKERS} worker(s) (limit 300s)")


def crit_determinism():
    _, a = _full_sweep(1)
    _, b = _full_sweep(8)
    return a == b, f"{len(a)} bytes, identical={a == b}"


CRITERIA = [
    (1, "identity suite", crit_identities),
    (2, "part (i) over the (b, c) grid", crit_thm_i),
    (3, "part (ii) parameter triples", crit_thm_ii),
    (4, "corollary congruences and x^2 + 4y^2", crit_corollary),
    (5, "mod p^3 conjecture", crit_conjecture),
    (6, "imported congruences", crit_imported),
    (7, "proof-step suite", crit_proof_steps),
    (8, "oracle equivalences", crit_oracles),
    (9, "sweep performance to 10^3", crit_performance),
    (10, "determinism across worker counts", crit_determinism),
]


def _line(num, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {num:>2} ({title}): {detail}"


@pytest.mark.slow
@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(_line(num, title, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)

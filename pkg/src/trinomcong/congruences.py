"""Per-prime checks of the congruences for sums of ``T_k(b,c)^2 / m^k``.

Each ``check_*`` function is a pure function of its parameters and the
prime, and returns a :class:`CheckVerdict`.  Primes excluded by a
hypothesis give a skip verdict with a reason instead of raising.

All sums run over ascending ``k`` and every division is a modular inverse
taken per term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt
from typing import Callable, Optional

from .modnt import (
    NumberTheoryError,
    cornacchia_x2_4y2,
    fermat_quotient,
    legendre,
    least_nonneg_residue,
    make_modulus,
    vr_div,
    vr_from_int,
    vr_to_residue,
)
from .sequences import (
    TrinomialParams,
    central_binomial_valued,
    s_sum,
    sun_tauraso_rhs,
    trinomial_mod_ints,
)

__all__ = [
    "InvalidM",
    "CheckVerdict",
    "CHECKS",
    "solve_m",
    "check_thm_i",
    "check_thm_ii",
    "check_eq_1_3",
    "check_eq_1_4",
    "check_cor_1_7",
    "check_cor_1_8",
    "check_cor_1_9",
    "check_conj_5_4",
    "check_mortenson",
    "check_sun_tauraso",
    "check_s_closed_forms",
    "check_bc2_family",
    "thm_ii_rhs",
]


class InvalidM(NumberTheoryError):
    """``m`` does not satisfy ``(m - d)^2 = 16 m c``."""


@dataclass(frozen=True)
class CheckVerdict:
    check: str
    p: int
    params: dict = field(default_factory=dict)
    e: int = 0
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    holds: Optional[bool] = None
    skip_reason: Optional[str] = None
    aux: dict = field(default_factory=dict)

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None

    def sort_key(self) -> tuple:
        ps = self.params
        return (self.check, self.p,
                tuple((k, ps[k]) for k in ("b", "c", "m", "t") if ps.get(k) is not None))


def _skip(check: str, p: int, params: dict, reason: str) -> CheckVerdict:
    return CheckVerdict(check, p, params, skip_reason=reason)


def _verdict(check: str, p: int, params: dict, e: int, lhs: int, rhs: int,
             aux: Optional[dict] = None, extra_ok: bool = True) -> CheckVerdict:
    aux = aux or {}
    return CheckVerdict(check, p, params, e, lhs, rhs,
                        lhs == rhs and extra_ok, None, aux)


# ---------------------------------------------------------------------------
# shared sums
# ---------------------------------------------------------------------------

def _weighted_square_sum(b: int, c: int, ratio: int, p: int, e: int) -> int:
    """``sum_{k<p} T_k(b,c)^2 * ratio^k`` modulo ``p^e``."""
    pe = p ** e
    total, w = 0, 1
    for t in trinomial_mod_ints(b, c, p, e, p):
        total += t * t % pe * w
        w = w * ratio % pe
    return total % pe


@lru_cache(maxsize=32)
def _central_squares(p: int, e: int) -> tuple[int, ...]:
    """``C(2k,k)^2`` modulo ``p^e`` for ``k < p``, through valued residues."""
    cb = central_binomial_valued(p, e, p)
    return tuple(vr_to_residue(v * v, e).value for v in cb)


def _central_square_sum(ratio: int, p: int, e: int, upto: int) -> int:
    """``sum_{k<=upto} C(2k,k)^2 ratio^k`` modulo ``p^e``."""
    pe = p ** e
    sq = _central_squares(p, e)
    total, w = 0, 1
    for k in range(upto + 1):
        total += sq[k] * w
        w = w * ratio % pe
    return total % pe


@lru_cache(maxsize=32)
def _eq_1_3_terms(p: int) -> tuple[int, ...]:
    """``C(2k,k) / (2k+1)`` modulo ``p^2`` for ``k < p``; the ``k = (p-1)/2`` slot is 0.

    For ``k > (p-1)/2`` the numerator has valuation 1 while ``2k+1`` is a unit,
    so the quotient is computed from units known modulo ``p^3``.
    """
    mod3 = make_modulus(p, 3)
    cb = central_binomial_valued(p, 3, p)
    half = (p - 1) // 2
    return tuple(0 if k == half else
                 vr_to_residue(vr_div(cb[k], vr_from_int(2 * k + 1, mod3)), 2).value
                 for k in range(p))


@lru_cache(maxsize=32)
def _sun_tauraso_terms(p: int) -> tuple[int, ...]:
    """``C(2k,k) / k`` modulo ``p`` for ``1 <= k < p`` (index 0 unused)."""
    mod = make_modulus(p, 1)
    cb = central_binomial_valued(p, 1, p)
    return (0,) + tuple(vr_to_residue(vr_div(cb[k], vr_from_int(k, mod)), 1).value
                        for k in range(1, p))


def _inv(a: int, pe: int) -> int:
    return pow(a % pe, -1, pe)


# ---------------------------------------------------------------------------
# m-solver
# ---------------------------------------------------------------------------

def solve_m(params: TrinomialParams) -> list[int]:
    """Integer roots of ``m^2 - (2d + 16c) m + d^2 = 0``, ascending."""
    d, c = params.d, params.c
    s = 2 * d + 16 * c
    disc = s * s - 4 * d * d
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc or (s + r) % 2:
        return []
    return sorted({(s - r) // 2, (s + r) // 2})


# ---------------------------------------------------------------------------
# main theorem
# ---------------------------------------------------------------------------

def check_thm_i(params: TrinomialParams, p: int) -> CheckVerdict:
    """``sum T_k^2 / (-d)^k = sum_{l<=(p-1)/2} C(2l,l)^2 (-c/(4d))^l (mod p^2)``."""
    b, c, d = params.b, params.c, params.d
    info = {"b": b, "c": c}
    if d % p == 0:
        return _skip("thm_i", p, info, f"p divides d = {d}")
    pe = p * p
    lhs = _weighted_square_sum(b, c, _inv(-d, pe), p, 2)
    ratio = -c * _inv(4 * d, pe) % pe
    rhs = _central_square_sum(ratio, p, 2, (p - 1) // 2)
    return _verdict("thm_i", p, info, 2, lhs, rhs)


def thm_ii_rhs(d: int, m: int, p: int) -> int:
    """Right side of the part (ii) congruence, modulo ``p^2``.

    The bracket ``q_p(d) - q_p(m) + S(...) - S(...)`` is only meaningful
    modulo ``p``; it is formed there and lifted by the factor ``p``.
    """
    pe = p * p
    eps = legendre(-1, p)
    bracket = (fermat_quotient(d, p) - fermat_quotient(m, p)
               + s_sum(Fraction(m + d, 4 * m), p)
               - s_sum(Fraction(m + d, 4 * d), p)).value
    inner = d * _inv(d - m, p) * eps * bracket % p
    return (eps + p * inner) % pe


def check_thm_ii(params: TrinomialParams, m: int, p: int) -> CheckVerdict:
    b, c, d = params.b, params.c, params.d
    info = {"b": b, "c": c, "m": m}
    if (m - d) ** 2 != 16 * m * c:
        raise InvalidM(f"m={m} does not satisfy (m-d)^2 = 16mc for b={b}, c={c}")
    if (m * d * (m - d)) % p == 0:
        return _skip("thm_ii", p, info, f"p divides m*d*(m-d) = {m * d * (m - d)}")
    pe = p * p
    lhs = _weighted_square_sum(b, c, _inv(m, pe), p, 2)
    return _verdict("thm_ii", p, info, 2, lhs, thm_ii_rhs(d, m, p))


# ---------------------------------------------------------------------------
# imported congruences
# ---------------------------------------------------------------------------

def check_eq_1_3(params: TrinomialParams, p: int) -> CheckVerdict:
    """Modulo ``p^3``: ``sum T_k^2 / d^k = (16c/d)^((p-1)/2) + p sum' C(2k,k)/(2k+1) (-c/d)^k``."""
    b, c, d = params.b, params.c, params.d
    info = {"b": b, "c": c}
    if p <= 3:
        return _skip("eq_1_3", p, info, "requires p > 3")
    if d % p == 0:
        return _skip("eq_1_3", p, info, f"p divides d = {d}")
    pe = p ** 3
    dinv = _inv(d, pe)
    lhs = _weighted_square_sum(b, c, dinv, p, 3)
    head = pow(16 * c * dinv % pe, (p - 1) // 2, pe)
    # the k-sum is needed modulo p^2; C(2k,k) carries valuation 1 for k > (p-1)/2
    p2 = p * p
    ratio = -c * dinv % p2
    terms = _eq_1_3_terms(p)
    total, w = 0, 1
    for k in range(p):
        total += terms[k] * w
        w = w * ratio % p2
    rhs = (head + p * (total % p2)) % pe
    return _verdict("eq_1_3", p, info, 3, lhs, rhs)


def check_eq_1_4(p: int) -> CheckVerdict:
    """``sum T_k(2,-1)^2 / 8^k = (-2/p) (mod p^2)``."""
    pe = p * p
    lhs = _weighted_square_sum(2, -1, _inv(8, pe), p, 2)
    return _verdict("eq_1_4", p, {"b": 2, "c": -1}, 2, lhs, legendre(-2, p) % pe)


def check_mortenson(p: int) -> CheckVerdict:
    """``sum_{k<p} C(2k,k)^2 / 16^k = (-1/p) (mod p^2)``."""
    pe = p * p
    lhs = _central_square_sum(_inv(16, pe), p, 2, p - 1)
    return _verdict("mortenson", p, {}, 2, lhs, legendre(-1, p) % pe)


def check_sun_tauraso(t: int, p: int) -> CheckVerdict:
    """``sum_{k=1}^{p-1} C(2k,k) / (k (-t)^k) = (2t^p - 2V_p(t)) / (pt) (mod p)``."""
    info = {"t": t}
    if t % p == 0:
        return _skip("sun_tauraso", p, info, f"p divides t = {t}")
    terms = _sun_tauraso_terms(p)
    y = _inv(-t, p)
    total, w = 0, 1
    for k in range(1, p):
        w = w * y % p
        total += terms[k] * w
    return _verdict("sun_tauraso", p, info, 1, total % p, sun_tauraso_rhs(t, p).value)


def _s_closed_form(num: int, den: int, p: int) -> int:
    """``S_{p-1}(num/den)`` via the Sun-Tauraso evaluation at ``t = <-den/num>_p``."""
    t = least_nonneg_residue(Fraction(-den, num), p)
    return sun_tauraso_rhs(t, p).value


def check_s_closed_forms(m: int, d: int, p: int) -> CheckVerdict:
    """Closed forms of ``S_{p-1}((m+d)/(4m))`` and ``S_{p-1}((m+d)/(4d))`` modulo ``p``.

    ``lhs`` / ``rhs`` hold the first sum and its closed form; the second pair
    is carried in ``aux`` and must match as well.
    """
    info = {"m": m, "d": d}
    if (4 * m * d) % p == 0:
        return _skip("s_closed_forms", p, info, f"p divides 4md = {4 * m * d}")
    s_m = s_sum(Fraction(m + d, 4 * m), p).value
    s_d = s_sum(Fraction(m + d, 4 * d), p).value
    if (m + d) % p == 0:
        cf_m = cf_d = 0
    else:
        cf_m = _s_closed_form(m + d, 4 * m, p)
        cf_d = _s_closed_form(m + d, 4 * d, p)
    aux = {"s_d": s_d, "closed_d": cf_d}
    return _verdict("s_closed_forms", p, info, 1, s_m, cf_m, aux, s_d == cf_d)


# ---------------------------------------------------------------------------
# corollary and conjecture
# ---------------------------------------------------------------------------

def _x_term(x: int, p: int) -> int:
    """``2x - p/(2x)`` modulo ``p^2``."""
    pe = p * p
    return (2 * x - p * _inv(2 * x, pe)) % pe


def _cor_1_7_closed(p: int) -> int:
    pe = p * p
    if p % 4 == 1:
        x, _ = cornacchia_x2_4y2(p)
        return legendre(2, p) * _x_term(x, p) % pe
    q = (p + 1) // 4
    return (-1) ** q * 2 * p * _inv(comb((p + 1) // 2, q), pe) % pe


def check_cor_1_7(p: int) -> CheckVerdict:
    """``sum T_k(2,2)^2/4^k = sum C(2k,k)^2/8^k =`` closed form ``(mod p^2)``.

    ``lhs`` is the trinomial sum, ``rhs`` the closed form; the binomial sum is
    in ``aux`` and must agree with both.
    """
    pe = p * p
    s_t = _weighted_square_sum(2, 2, _inv(4, pe), p, 2)
    s_c = _central_square_sum(_inv(8, pe), p, 2, p - 1)
    closed = _cor_1_7_closed(p)
    return _verdict("cor_1_7", p, {"b": 2, "c": 2}, 2, s_t, closed,
                    {"binomial_sum": s_c}, s_c == closed)


def check_cor_1_8(p: int) -> CheckVerdict:
    """``sum T_k(2,-1)^2 / (-8)^k`` is ``2x - p/(2x)`` or ``0`` modulo ``p^2``."""
    pe = p * p
    lhs = _weighted_square_sum(2, -1, _inv(-8, pe), p, 2)
    if p % 4 == 1:
        x, _ = cornacchia_x2_4y2(p)
        rhs = _x_term(x, p)
    else:
        rhs = 0
    return _verdict("cor_1_8", p, {"b": 2, "c": -1}, 2, lhs, rhs)


def check_cor_1_9(p: int) -> CheckVerdict:
    """``sum T_k(4,1)^2/4^k = sum T_k(4,1)^2/36^k = (-1/p) (mod p^2)``, ``p > 3``."""
    info = {"b": 4, "c": 1}
    if p <= 3:
        return _skip("cor_1_9", p, info, "requires p > 3")
    pe = p * p
    s4 = _weighted_square_sum(4, 1, _inv(4, pe), p, 2)
    s36 = _weighted_square_sum(4, 1, _inv(36, pe), p, 2)
    return _verdict("cor_1_9", p, info, 2, s4, legendre(-1, p) % pe,
                    {"sum_36": s36}, s36 == legendre(-1, p) % pe)


def check_conj_5_4(p: int) -> CheckVerdict:
    """The two sums of the (2,2) corollary agree modulo ``p^3`` when ``p = 1 (mod 4)``.

    For ``p = 3 (mod 4)`` the conjectured exponent is 2, which is exactly
    :func:`check_cor_1_7`.
    """
    if p % 4 == 3:
        v = check_cor_1_7(p)
        return CheckVerdict("conj_5_4", p, v.params, v.e, v.lhs, v.rhs, v.holds,
                            v.skip_reason, v.aux)
    pe = p ** 3
    s_t = _weighted_square_sum(2, 2, _inv(4, pe), p, 3)
    s_c = _central_square_sum(_inv(8, pe), p, 3, p - 1)
    return _verdict("conj_5_4", p, {"b": 2, "c": 2}, 3, s_t, s_c)


def check_bc2_family(b: int, gamma: int, p: int) -> CheckVerdict:
    """``sum T_k(b, g^2)^2 / (b - 2g)^(2k) = (-g^2/p) (mod p)``, lifted to ``p^2``.

    When ``p`` does not divide ``g`` nor ``m d (m - d)`` with ``m = (b-2g)^2``
    the sum is also compared modulo ``p^2`` with the part (ii) right side;
    otherwise the verdict is at exponent 1.
    """
    c = gamma * gamma
    m = (b - 2 * gamma) ** 2
    info = {"b": b, "c": c, "m": m}
    if (b - 2 * gamma) % p == 0:
        return _skip("bc2_family", p, info, f"p divides b - 2*gamma = {b - 2 * gamma}")
    d = b * b - 4 * c
    pe = p * p
    lhs = _weighted_square_sum(b, c, _inv(m, pe), p, 2)
    leg = legendre(-c, p)
    mod_p_ok = lhs % p == leg % p
    if gamma % p and (m * d * (m - d)) % p:
        return _verdict("bc2_family", p, info, 2, lhs, thm_ii_rhs(d, m, p),
                        {"legendre": leg % p}, mod_p_ok)
    return _verdict("bc2_family", p, info, 1, lhs % p, leg % p)


# check id -> (function, parameter kind)
CHECKS: dict[str, tuple[Callable[..., CheckVerdict], str]] = {
    "thm_i": (check_thm_i, "bc"),
    "thm_ii": (check_thm_ii, "bcm"),
    "eq_1_3": (check_eq_1_3, "bc"),
    "eq_1_4": (check_eq_1_4, "prime"),
    "cor_1_7": (check_cor_1_7, "prime"),
    "cor_1_8": (check_cor_1_8, "prime"),
    "cor_1_9": (check_cor_1_9, "prime"),
    "conj_5_4": (check_conj_5_4, "prime"),
    "mortenson": (check_mortenson, "prime"),
    "sun_tauraso": (check_sun_tauraso, "t"),
    "s_closed_forms": (check_s_closed_forms, "md"),
    "bc2_family": (check_bc2_family, "bgamma"),
}

"""Exact and modular generators for the sequences around ``T_n(b, c)``.

Exact values use Python integers and :class:`fractions.Fraction`.  Modular
series are materialized as full lists of length at most ``p``; the
``*_ints`` helpers return plain integers and are what the congruence checks
consume in their inner loops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Union

from .modnt import (
    Modulus,
    NumberTheoryError,
    Rational,
    Residue,
    ValuedResidue,
    make_modulus,
    rat_mod,
    vr_div,
    vr_from_int,
    vr_mul,
)

__all__ = [
    "OutOfRange",
    "TrinomialParams",
    "ModSeries",
    "trinomial_exact",
    "trinomial_exact_alt",
    "poly_power_coeff",
    "delannoy",
    "trinomial_mod_ints",
    "trinomial_mod_series",
    "central_binomial_series",
    "central_binomial_valued",
    "binom_valued",
    "harmonic_exact",
    "harmonic_mod",
    "inverses_mod",
    "v_poly",
    "s_sum",
    "polylog_finite",
    "sun_tauraso_rhs",
]


class OutOfRange(NumberTheoryError):
    pass


@dataclass(frozen=True)
class TrinomialParams:
    b: int
    c: int
    d: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", self.b * self.b - 4 * self.c)


@dataclass(frozen=True)
class ModSeries:
    modulus: Modulus
    terms: tuple[Union[Residue, ValuedResidue], ...]
    kind: str

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, k: int):
        return self.terms[k]


# ---------------------------------------------------------------------------
# T_n(b, c)
# ---------------------------------------------------------------------------

def trinomial_exact(n: int, params: TrinomialParams) -> int:
    """``sum_k C(n,2k) C(2k,k) b^(n-2k) c^k``."""
    b, c = params.b, params.c
    return sum(comb(n, 2 * k) * comb(2 * k, k) * b ** (n - 2 * k) * c ** k
               for k in range(n // 2 + 1))


def trinomial_exact_alt(n: int, params: TrinomialParams) -> int:
    """Second multinomial form, ``sum_k C(n,k) C(n-k,k) b^(n-2k) c^k``."""
    b, c = params.b, params.c
    return sum(comb(n, k) * comb(n - k, k) * b ** (n - 2 * k) * c ** k
               for k in range(n // 2 + 1))


def poly_power_coeff(n: int, params: TrinomialParams) -> int:
    """Coefficient of ``x^n`` in ``(x^2 + bx + c)^n`` by literal expansion."""
    base = [params.c, params.b, 1]  # ascending powers of x
    poly = [1]
    for _ in range(n):
        out = [0] * (len(poly) + 2)
        for i, a in enumerate(poly):
            if a:
                for j, q in enumerate(base):
                    out[i + j] += a * q
        poly = out
    return poly[n]


def delannoy(n: int) -> int:
    return sum(comb(n, k) * comb(n + k, k) for k in range(n + 1))


@lru_cache(maxsize=64)
def inverses_mod(p: int, e: int, n: int) -> tuple[int, ...]:
    """``(0, 1^-1, ..., (n-1)^-1)`` modulo ``p^e`` for ``n <= p``."""
    if n > p:
        raise OutOfRange(f"{n - 1} is not invertible modulo {p}")
    pe = p ** e
    return (0,) + tuple(pow(k, -1, pe) for k in range(1, n))


def trinomial_mod_ints(b: int, c: int, p: int, e: int, length: int) -> list[int]:
    """``T_0, ..., T_{length-1}`` modulo ``p^e`` as plain integers.

    Uses ``(k+1) T_{k+1} = (2k+1) b T_k - k d T_{k-1}``, which only ever
    divides by ``k + 1 < p``.
    """
    if length > p:
        raise OutOfRange(f"length {length} exceeds p = {p}")
    pe = p ** e
    if length <= 0:
        return []
    inv = inverses_mod(p, e, p)
    b %= pe
    d = (b * b - 4 * c) % pe
    out = [1 % pe]
    if length > 1:
        out.append(b)
    prev, cur = out[0], b
    for k in range(1, length - 1):
        nxt = ((2 * k + 1) * b * cur - k * d * prev) % pe * inv[k + 1] % pe
        out.append(nxt)
        prev, cur = cur, nxt
    return out


def trinomial_mod_series(params: TrinomialParams, mod: Modulus, length: int) -> ModSeries:
    vals = trinomial_mod_ints(params.b, params.c, mod.p, mod.e, length)
    return ModSeries(mod, tuple(Residue(v, mod) for v in vals),
                     f"T(b={params.b},c={params.c})")


# ---------------------------------------------------------------------------
# binomials with valuation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def central_binomial_valued(p: int, e: int, length: int) -> tuple[ValuedResidue, ...]:
    """``C(2k, k)`` for ``k < length`` as valued residues modulo ``p^e``."""
    if length > p:
        raise OutOfRange(f"length {length} exceeds p = {p}")
    mod = make_modulus(p, e)
    if length <= 0:
        return ()
    cur = vr_from_int(1, mod)
    out = [cur]
    for k in range(length - 1):
        # C(2k+2, k+1) = C(2k, k) * 2(2k+1) / (k+1); 2k+1 = p at k = (p-1)/2
        cur = vr_div(vr_mul(cur, vr_from_int(2 * (2 * k + 1), mod)),
                     vr_from_int(k + 1, mod))
        out.append(cur)
    return tuple(out)


def central_binomial_series(mod: Modulus, length: int) -> ModSeries:
    return ModSeries(mod, central_binomial_valued(mod.p, mod.e, length), "C(2k,k)")


def binom_valued(n: int, k: int, mod: Modulus) -> ValuedResidue:
    """p-adic decomposition of ``C(n, k)`` for ``0 <= n < p^2``."""
    p = mod.p
    if n < 0 or n >= p * p:
        raise OutOfRange(f"binom_valued needs 0 <= n < p^2, got n={n}")
    if k < 0 or k > n:
        return vr_from_int(0, mod)
    k = min(k, n - k)
    pe = mod.pe
    val, num, den = 0, 1, 1
    for j in range(1, k + 1):
        top, bot = n - k + j, j
        while top % p == 0:
            top //= p
            val += 1
        while bot % p == 0:
            bot //= p
            val -= 1
        num = num * top % pe
        den = den * bot % pe
    return ValuedResidue(mod, False, val, num * pow(den, -1, pe) % pe, val + mod.e)


# ---------------------------------------------------------------------------
# harmonic numbers, V_n, S_{p-1}, finite polylogarithms
# ---------------------------------------------------------------------------

def harmonic_exact(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def harmonic_mod(n: int, mod: Modulus) -> Residue:
    if n >= mod.p:
        raise OutOfRange(f"H_{n} has a denominator divisible by {mod.p}")
    inv = inverses_mod(mod.p, mod.e, n + 1)
    return Residue(sum(inv[1:n + 1]) % mod.pe, mod)


def v_poly(t: Residue, n: int) -> Residue:
    """``V_n(t)`` with ``V_0 = 2``, ``V_1 = t``, ``V_{n+1} = t (V_n + V_{n-1})``."""
    pe = t.modulus.pe
    x = t.value
    prev, cur = 2 % pe, x
    if n == 0:
        return Residue(prev, t.modulus)
    for _ in range(n - 1):
        prev, cur = cur, x * (cur + prev) % pe
    return Residue(cur, t.modulus)


def s_sum(x: Rational, p: int) -> Residue:
    """``S_{p-1}(x) = sum_{k=1}^{p-1} C(2k,k) x^k / k`` modulo ``p``.

    Terms with ``k > (p-1)/2`` vanish modulo ``p`` and are skipped.
    """
    mod = make_modulus(p, 1)
    xr = rat_mod(x, p, p)
    inv = inverses_mod(p, 1, p)
    total, cb, xk = 0, 1, 1
    for k in range(1, (p - 1) // 2 + 1):
        cb = cb * 2 * (2 * k - 1) % p * inv[k] % p
        xk = xk * xr % p
        total += cb * inv[k] % p * xk
    return Residue(total % p, mod)


def polylog_finite(dgt: int, x: Rational, p: int) -> Residue:
    """``sum_{k=1}^{p-1} x^k / k^dgt`` modulo ``p``."""
    if dgt < 1:
        raise NumberTheoryError("polylogarithm weight must be positive")
    mod = make_modulus(p, 1)
    xr = rat_mod(x, p, p)
    inv = inverses_mod(p, 1, p)
    total, xk = 0, 1
    for k in range(1, p):
        xk = xk * xr % p
        total += xk * pow(inv[k], dgt, p)
    return Residue(total % p, mod)


def sun_tauraso_rhs(t: int, p: int) -> Residue:
    """``(2 t^p - 2 V_p(t)) / (p t)`` modulo ``p``."""
    if t % p == 0:
        raise NumberTheoryError(f"{p} divides t = {t}")
    m2 = make_modulus(p, 2)
    tr = m2(t)
    num = (2 * (tr ** p) - 2 * v_poly(tr, p)).value
    if num % p:
        raise ArithmeticError(f"2t^p - 2V_p(t) not divisible by {p} for t={t}")
    return make_modulus(p, 1)((num // p) * pow(t, -1, p))

"""Arithmetic modulo odd prime powers p^e (e <= 3) with p-adic valuation tracking.

Also houses the number-theoretic primitives used throughout the package:
primality, Legendre symbols, Fermat quotients, ``Q_p(x)``, least nonnegative
residues of p-integral rationals and the ``x^2 + 4y^2`` representation of
primes ``p = 1 (mod 4)``.

Python integers are unbounded, so products of two residues below ``2**63``
never overflow; the ``2**63`` cap on ``p**e`` is kept as a contract only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional, Union

__all__ = [
    "NumberTheoryError",
    "NotInvertible",
    "ModulusMismatch",
    "PrecisionLoss",
    "Modulus",
    "Residue",
    "ValuedResidue",
    "make_modulus",
    "is_prime",
    "res_add",
    "res_sub",
    "res_mul",
    "res_neg",
    "res_inv",
    "res_pow",
    "rat_mod",
    "least_nonneg_residue",
    "legendre",
    "fermat_quotient",
    "q_p_poly",
    "p_valuation",
    "vr_from_int",
    "vr_zero",
    "vr_add",
    "vr_sub",
    "vr_neg",
    "vr_mul",
    "vr_div",
    "vr_to_residue",
    "cornacchia_x2_4y2",
]

MAX_MODULUS = 1 << 63

Rational = Union[int, Fraction]


class NumberTheoryError(ValueError):
    """Base class for errors raised by this package."""


class NotInvertible(NumberTheoryError, ZeroDivisionError):
    pass


class ModulusMismatch(NumberTheoryError):
    pass


class PrecisionLoss(NumberTheoryError):
    """A value is not determined to the requested p-adic precision."""


# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------

# Deterministic for n < 3.3 * 10**24 (Sorenson & Webster), far above 2**63.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for every 64-bit input."""
    if n < 0:
        raise NumberTheoryError(f"is_prime expects n >= 0, got {n}")
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# moduli and residues
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Modulus:
    p: int
    e: int
    pe: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if self.e not in (1, 2, 3):
            raise NumberTheoryError(f"exponent must be 1, 2 or 3, got {self.e}")
        if self.p < 3 or not is_prime(self.p):
            raise NumberTheoryError(f"{self.p} is not an odd prime")
        pe = self.p ** self.e
        if pe >= MAX_MODULUS:
            raise NumberTheoryError(f"{self.p}^{self.e} does not fit in 63 bits")
        object.__setattr__(self, "pe", pe)

    def __call__(self, value: Rational) -> "Residue":
        """Reduce an integer (or p-integral rational) into this modulus."""
        return Residue(rat_mod(value, self.p, self.pe), self)

    def with_exponent(self, e: int) -> "Modulus":
        return make_modulus(self.p, e)

    def __repr__(self) -> str:
        return f"Modulus({self.p}^{self.e})"


@lru_cache(maxsize=None)
def make_modulus(p: int, e: int) -> Modulus:
    return Modulus(p, e)


@dataclass(frozen=True)
class Residue:
    """A canonical class ``value mod p^e`` with ``0 <= value < p^e``."""

    value: int
    modulus: Modulus

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus.pe:
            raise NumberTheoryError(
                f"residue {self.value} not canonical modulo {self.modulus.pe}")

    def _coerce(self, other: Union["Residue", int]) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus!r} vs {other.modulus!r}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue((self.value + o) % self.modulus.pe, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue((self.value - o) % self.modulus.pe, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue((o - self.value) % self.modulus.pe, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o % self.modulus.pe, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value % self.modulus.pe, self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * res_inv(Residue(o % self.modulus.pe, self.modulus))

    def __pow__(self, n: int):
        return res_pow(self, n)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus.p}^{self.modulus.e})"


def _same(a: Residue, b: Residue) -> Modulus:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus!r} vs {b.modulus!r}")
    return a.modulus


def res_add(a: Residue, b: Residue) -> Residue:
    m = _same(a, b)
    return Residue((a.value + b.value) % m.pe, m)


def res_sub(a: Residue, b: Residue) -> Residue:
    m = _same(a, b)
    return Residue((a.value - b.value) % m.pe, m)


def res_mul(a: Residue, b: Residue) -> Residue:
    m = _same(a, b)
    return Residue(a.value * b.value % m.pe, m)


def res_neg(a: Residue) -> Residue:
    return Residue(-a.value % a.modulus.pe, a.modulus)


def res_inv(a: Residue) -> Residue:
    m = a.modulus
    if a.value % m.p == 0:
        raise NotInvertible(f"{a.value} is not invertible modulo {m.p}^{m.e}")
    return Residue(pow(a.value, -1, m.pe), m)


def res_pow(a: Residue, n: int) -> Residue:
    """``a**n`` by square-and-multiply; ``n`` must be nonnegative."""
    if n < 0:
        raise NumberTheoryError("negative exponent; invert explicitly")
    pe = a.modulus.pe
    result, base = 1 % pe, a.value
    while n:
        if n & 1:
            result = result * base % pe
        base = base * base % pe
        n >>= 1
    return Residue(result, a.modulus)


def rat_mod(x: Rational, p: int, pe: int) -> int:
    """Image of a p-integral rational in ``Z / pe Z`` (``pe`` a power of ``p``)."""
    if isinstance(x, int):
        return x % pe
    num, den = x.numerator, x.denominator
    if den % p == 0:
        raise NotInvertible(f"denominator of {x} is divisible by {p}")
    return num * pow(den, -1, pe) % pe


def least_nonneg_residue(x: Rational, mod: Union[Modulus, int]) -> int:
    """The unique ``r`` in ``[0, p)`` with ``r * den(x) = num(x) (mod p)``."""
    if isinstance(mod, Modulus):
        if mod.e != 1:
            raise NumberTheoryError("least nonnegative residue is defined modulo p only")
        p = mod.p
    else:
        p = make_modulus(mod, 1).p
    return rat_mod(Fraction(x), p, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol ``(a/p)`` via Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def fermat_quotient(a: int, p: int) -> Residue:
    """``q_p(a) = (a^(p-1) - 1) / p`` reduced modulo ``p``."""
    if a % p == 0:
        raise NotInvertible(f"{p} divides {a}")
    m2 = make_modulus(p, 2)
    num = res_pow(m2(a), p - 1).value - 1
    assert num % p == 0
    return make_modulus(p, 1)((num // p) % p)


def q_p_poly(x: Rational, p: int) -> Residue:
    """``Q_p(x) = (x^p + (1-x)^p - 1) / p`` modulo ``p``."""
    m2 = make_modulus(p, 2)
    xr = m2(x)
    num = (res_pow(xr, p) + res_pow(1 - xr, p) - 1).value
    if num % p:
        raise ArithmeticError(f"x^p + (1-x)^p - 1 not divisible by {p}; x={x}")
    return make_modulus(p, 1)(num // p)


# ---------------------------------------------------------------------------
# valuation-tracked residues
# ---------------------------------------------------------------------------

def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise NumberTheoryError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class ValuedResidue:
    """``p^val * unit`` with ``unit`` a p-adic unit.

    ``prec`` is the absolute precision: the represented value is known modulo
    ``p^prec``; ``None`` marks an exact value (only the exact zero, since a
    unit is always stored modulo at most ``p^e``).  For nonzero values the
    unit is canonical modulo ``p^(prec - val)`` and ``prec - val <= e``.
    """

    modulus: Modulus
    is_zero: bool
    val: int = 0
    unit: int = 0
    prec: Optional[int] = None

    @property
    def rel_prec(self) -> int:
        assert not self.is_zero and self.prec is not None
        return self.prec - self.val

    @property
    def unit_residue(self) -> Residue:
        return Residue(self.unit % self.modulus.pe, self.modulus)

    def __add__(self, other: "ValuedResidue") -> "ValuedResidue":
        return vr_add(self, other)

    def __sub__(self, other: "ValuedResidue") -> "ValuedResidue":
        return vr_sub(self, other)

    def __neg__(self) -> "ValuedResidue":
        return vr_neg(self)

    def __mul__(self, other: "ValuedResidue") -> "ValuedResidue":
        return vr_mul(self, other)

    def __truediv__(self, other: "ValuedResidue") -> "ValuedResidue":
        return vr_div(self, other)

    def __repr__(self) -> str:
        p = self.modulus.p
        if self.is_zero:
            return "0" if self.prec is None else f"0 (mod {p}^{self.prec})"
        return f"{p}^{self.val}*{self.unit} (mod {p}^{self.prec})"


def vr_zero(mod: Modulus, prec: Optional[int] = None) -> ValuedResidue:
    return ValuedResidue(mod, True, 0, 0, prec)


def _make(mod: Modulus, val: int, unit: int, prec: int) -> ValuedResidue:
    """Normalize ``p^val * unit`` known modulo ``p^prec``."""
    p = mod.p
    if prec <= val:
        return vr_zero(mod, prec)
    unit %= p ** (prec - val)
    if unit == 0:
        return vr_zero(mod, prec)
    while unit % p == 0:
        unit //= p
        val += 1
    return ValuedResidue(mod, False, val, unit % p ** (prec - val), prec)


def vr_from_int(n: int, mod: Modulus) -> ValuedResidue:
    """Decompose an exact integer; the unit keeps ``e`` digits of precision."""
    if n == 0:
        return vr_zero(mod)
    v = p_valuation(n, mod.p)
    return ValuedResidue(mod, False, v, (n // mod.p ** v) % mod.pe, v + mod.e)


def _check(a: ValuedResidue, b: ValuedResidue) -> Modulus:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus!r} vs {b.modulus!r}")
    return a.modulus


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def vr_add(a: ValuedResidue, b: ValuedResidue) -> ValuedResidue:
    mod = _check(a, b)
    prec = _min_prec(a.prec, b.prec)
    if a.is_zero and b.is_zero:
        return vr_zero(mod, prec)
    if a.is_zero or b.is_zero:
        x = b if a.is_zero else a
        assert prec is not None
        return _make(mod, x.val, x.unit, prec)
    assert prec is not None
    p = mod.p
    vmin = min(a.val, b.val)
    s = p ** (a.val - vmin) * a.unit + p ** (b.val - vmin) * b.unit
    return _make(mod, vmin, s, prec)


def vr_neg(a: ValuedResidue) -> ValuedResidue:
    if a.is_zero:
        return a
    return _make(a.modulus, a.val, -a.unit, a.prec)  # type: ignore[arg-type]


def vr_sub(a: ValuedResidue, b: ValuedResidue) -> ValuedResidue:
    return vr_add(a, vr_neg(b))


def vr_mul(a: ValuedResidue, b: ValuedResidue) -> ValuedResidue:
    mod = _check(a, b)
    if (a.is_zero and a.prec is None) or (b.is_zero and b.prec is None):
        return vr_zero(mod)
    if a.is_zero or b.is_zero:
        # zero known mod p^k times anything of valuation >= w is zero mod p^(k+w)
        ka = a.prec if a.is_zero else a.val
        kb = b.prec if b.is_zero else b.val
        return vr_zero(mod, ka + kb)  # type: ignore[operator]
    rel = min(a.rel_prec, b.rel_prec)
    val = a.val + b.val
    return _make(mod, val, a.unit * b.unit, val + rel)


def vr_div(a: ValuedResidue, b: ValuedResidue) -> ValuedResidue:
    mod = _check(a, b)
    if b.is_zero:
        raise NotInvertible("division by a zero valued residue")
    if a.is_zero:
        if a.prec is None:
            return vr_zero(mod)
        if a.prec - b.val <= 0:
            raise PrecisionLoss("quotient is not determined to any precision")
        return vr_zero(mod, a.prec - b.val)
    val = a.val - b.val
    if val < 0:
        raise PrecisionLoss(
            f"quotient has negative {mod.p}-adic valuation {val}")
    rel = min(a.rel_prec, b.rel_prec)
    m = mod.p ** rel
    return _make(mod, val, a.unit * pow(b.unit, -1, m), val + rel)


def vr_to_residue(a: ValuedResidue, target_e: int) -> Residue:
    """Reduce ``a`` modulo ``p^target_e``; refuses to invent missing digits."""
    target = make_modulus(a.modulus.p, target_e)
    if a.prec is not None and a.prec < target_e:
        raise PrecisionLoss(
            f"value known modulo {a.modulus.p}^{a.prec} only, "
            f"{a.modulus.p}^{target_e} requested")
    if a.is_zero:
        return Residue(0, target)
    return Residue(a.modulus.p ** a.val * a.unit % target.pe, target)


# ---------------------------------------------------------------------------
# p = x^2 + 4 y^2
# ---------------------------------------------------------------------------

def _sqrt_minus_one(p: int) -> int:
    # p = 1 (mod 4): z^((p-1)/4) is a square root of -1 for any non-residue z
    for z in range(2, p):
        if legendre(z, p) == -1:
            return pow(z, (p - 1) // 4, p)
    raise AssertionError("no quadratic non-residue found")


def cornacchia_x2_4y2(p: int) -> tuple[int, int]:
    """Solve ``p = x^2 + 4 y^2`` with ``x = 1 (mod 4)`` and ``y >= 0``.

    Cornacchia's algorithm for the form ``x^2 + 4y^2``: start from a root
    ``r0`` of ``r^2 = -4 (mod p)`` in ``(p/2, p)``, run the Euclidean
    algorithm on ``(p, r0)`` until the remainder drops below ``sqrt(p)``.
    """
    if p % 4 != 1 or not is_prime(p):
        raise NumberTheoryError(f"{p} is not a prime congruent to 1 mod 4")
    r0 = 2 * _sqrt_minus_one(p) % p
    if 2 * r0 < p:
        r0 = p - r0
    a, b = p, r0
    limit = isqrt(p)
    while b > limit:
        a, b = b, a % b
    rest = p - b * b
    if rest % 4:
        raise AssertionError(f"Cornacchia failed for p={p}")
    y = isqrt(rest // 4)
    if y * y != rest // 4:
        raise AssertionError(f"Cornacchia failed for p={p}")
    x = b if b % 4 == 1 else -b
    return x, y

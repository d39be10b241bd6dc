"""Exact verification of the binomial / harmonic identities behind the congruences.

Every ``verify_*`` function evaluates both sides independently with exact
rationals (or exact residues for the mod-p and mod-p^2 statements) and returns
an :class:`IdentityReport`.  Identities in an indeterminate ``x`` are checked
at rational sample points; :func:`sample_points` together with the degree
bounds in :data:`DEGREE_BOUNDS` turns a finite sweep into a proof for fixed
``n`` (two polynomials of degree < N agreeing at N points are equal).

Recurrence certificates are checked on freshly computed values of each side,
never on a closed form standing in for the other side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .modnt import (
    Modulus,
    NumberTheoryError,
    Rational,
    Residue,
    ValuedResidue,
    make_modulus,
    q_p_poly,
    rat_mod,
    vr_from_int,
    vr_mul,
    vr_to_residue,
)
from .sequences import (
    OutOfRange,
    TrinomialParams,
    binom_valued,
    harmonic_exact,
    harmonic_mod,
    polylog_finite,
    s_sum,
    trinomial_exact,
)

__all__ = [
    "IdentityReport",
    "QuadExtRat",
    "DEGREE_BOUNDS",
    "sample_points",
    "verify_clausen_square",
    "verify_harmonic_identity",
    "verify_harmonic_recurrence",
    "verify_known_inverse_binom",
    "verify_lemma3",
    "verify_lemma3_recurrence",
    "verify_lemma4",
    "verify_lemma4_recurrence",
    "verify_lemma5",
    "verify_lemma6",
    "verify_legendre_connection",
    "verify_transition_binomials",
    "verify_sun_lemma31",
    "verify_wolstenholme",
]

F = Fraction


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    params: tuple
    holds: bool
    lhs: str
    rhs: str
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def _report(identity: str, params: tuple, lhs, rhs, note: str = "") -> IdentityReport:
    return IdentityReport(identity, params, lhs == rhs, str(lhs), str(rhs), note)


def _multi(identity: str, params: tuple, pairs: Sequence[tuple[str, object, object]],
           note: str = "") -> IdentityReport:
    holds = all(l == r for _, l, r in pairs)
    lhs = "; ".join(f"{tag}: {l}" for tag, l, _ in pairs)
    rhs = "; ".join(f"{tag}: {r}" for tag, _, r in pairs)
    return IdentityReport(identity, params, holds, lhs, rhs, note)


# ---------------------------------------------------------------------------
# sample points
# ---------------------------------------------------------------------------

# Degree in x of (lhs - rhs) * (x+1)^k after clearing the (x+1) denominators.
DEGREE_BOUNDS: dict[str, Callable[[int], int]] = {
    "harmonic": lambda n: n,
    "known_inverse_binom": lambda n: 2 * n + 1,
    "lemma3": lambda n: 3 * n,
}


def sample_points(count: int, exclude: Sequence[Rational] = (-1, 0)) -> list[Fraction]:
    """``count`` distinct rationals, small height first, avoiding ``exclude``."""
    banned = {F(v) for v in exclude}
    out: list[Fraction] = []
    seen: set[Fraction] = set()
    height = 0
    while len(out) < count:
        height += 1
        for den in range(1, height + 1):
            for num in range(-height, height + 1):
                v = F(num, den)
                if max(abs(num), den) != height or v in seen or v in banned:
                    continue
                seen.add(v)
                out.append(v)
                if len(out) == count:
                    return out
    return out


# ---------------------------------------------------------------------------
# quadratic extension Q(sqrt(rad))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadExtRat:
    """``a + b * sqrt(rad)`` with rational ``a``, ``b``; arithmetic is formal."""

    a: Fraction
    b: Fraction
    rad: int

    @classmethod
    def of(cls, a: Rational, b: Rational, rad: int) -> "QuadExtRat":
        return cls(F(a), F(b), rad)

    def _other(self, o) -> "QuadExtRat":
        if isinstance(o, QuadExtRat):
            if o.rad != self.rad:
                raise NumberTheoryError("mixing different quadratic extensions")
            return o
        return QuadExtRat(F(o), F(0), self.rad)

    def __add__(self, o):
        o = self._other(o)
        return QuadExtRat(self.a + o.a, self.b + o.b, self.rad)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._other(o)
        return QuadExtRat(self.a - o.a, self.b - o.b, self.rad)

    def __rsub__(self, o):
        return self._other(o) - self

    def __neg__(self):
        return QuadExtRat(-self.a, -self.b, self.rad)

    def __mul__(self, o):
        o = self._other(o)
        return QuadExtRat(self.a * o.a + self.rad * self.b * o.b,
                          self.a * o.b + self.b * o.a, self.rad)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtRat":
        return QuadExtRat(self.a, -self.b, self.rad)

    def norm(self) -> Fraction:
        return self.a * self.a - self.rad * self.b * self.b

    def __truediv__(self, o):
        o = self._other(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("zero-norm divisor")
        q = self * o.conjugate()
        return QuadExtRat(q.a / n, q.b / n, self.rad)

    def __pow__(self, k: int):
        if k < 0:
            return QuadExtRat(F(1), F(0), self.rad) / self ** (-k)
        out = QuadExtRat(F(1), F(0), self.rad)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out


# ---------------------------------------------------------------------------
# exact identities
# ---------------------------------------------------------------------------

def verify_clausen_square(n: int, params: TrinomialParams) -> IdentityReport:
    """``T_n(b,c)^2 = sum_k C(n+k,2k) C(2k,k)^2 c^k d^(n-k)``."""
    c, d = params.c, params.d
    lhs = trinomial_exact(n, params) ** 2
    rhs = sum(comb(n + k, 2 * k) * comb(2 * k, k) ** 2 * c ** k * d ** (n - k)
              for k in range(n + 1))
    return _report("clausen_square", (n, params.b, params.c), lhs, rhs)


def _harmonic_lhs(n: int, x: Fraction) -> Fraction:
    h = F(0)
    total = F(0)
    for k in range(n + 1):
        if k:
            h += F(1, k)
        total += comb(n, k) * h * x ** k
    return total


def _harmonic_rhs(n: int, x: Fraction) -> Fraction:
    return ((1 + x) ** n * harmonic_exact(n)
            - sum(((1 + x) ** (n - k) / k for k in range(1, n + 1)), F(0)))


def verify_harmonic_identity(n: int, x: Rational) -> IdentityReport:
    """``sum_k C(n,k) H_k x^k = (1+x)^n H_n - sum_k (1+x)^(n-k) / k``."""
    x = F(x)
    return _report("harmonic", (n, x), _harmonic_lhs(n, x), _harmonic_rhs(n, x))


def _harmonic_cert(s: Callable[[int], Fraction], n: int, x: Fraction) -> Fraction:
    return (-(n + 1) * (x + 1) ** 2 * s(n) + (2 * n + 3) * (x + 1) * s(n + 1)
            - (n + 2) * s(n + 2))


def verify_harmonic_recurrence(n: int, x: Rational) -> IdentityReport:
    """Both sides of the harmonic identity satisfy the order-2 certificate."""
    x = F(x)
    lhs_side = _harmonic_cert(lambda j: _harmonic_lhs(j, x), n, x)
    rhs_side = _harmonic_cert(lambda j: _harmonic_rhs(j, x), n, x)
    return _multi("harmonic_recurrence", (n, x),
                  [("sum", lhs_side, -x), ("closed", rhs_side, -x)])


def verify_known_inverse_binom(n: int, x: Rational) -> IdentityReport:
    """``sum_k x^k / C(n,k) = (n+1) sum_{k=1}^{n+1} (x^k+1)/(k(x+1)) (x/(x+1))^(n+1-k)``."""
    x = F(x)
    if x == -1:
        raise NumberTheoryError("x = -1 is excluded")
    lhs = sum((x ** k / comb(n, k) for k in range(n + 1)), F(0))
    r = x / (x + 1)
    rhs = (n + 1) * sum(((x ** k + 1) / (k * (x + 1)) * r ** (n + 1 - k)
                         for k in range(1, n + 2)), F(0))
    return _report("known_inverse_binom", (n, x), lhs, rhs)


def _lemma3_lhs(n: int, x: Fraction) -> Fraction:
    return sum((x ** k / comb(2 * n - 1, k) for k in range(n)), F(0))


def _lemma3_tail(n: int, x: Fraction) -> Fraction:
    r = x / (x + 1)
    return (2 * n * (x - 1) / (x + 1) ** 2
            * sum((x ** k / (k * comb(2 * k, k)) * r ** (2 * n - 2 * k)
                   for k in range(1, n + 1)), F(0)))


def _lemma3_rhs(n: int, x: Fraction) -> Fraction:
    r = x / (x + 1)
    head = 2 * n / (x + 1) * sum((r ** (2 * n - k) / k for k in range(1, 2 * n + 1)), F(0))
    return head + _lemma3_tail(n, x)


def _lemma3_key_head(n: int, x: Fraction) -> Fraction:
    r = x / (x + 1)
    return (F(n) / (x + 1) ** 2
            * sum((((4 * k - 1) * x + 2 * k - 1) / F(k * (2 * k - 1)) * r ** (2 * n - 2 * k)
                   for k in range(1, n + 1)), F(0)))


def _lemma3_key_rhs(n: int, x: Fraction) -> Fraction:
    return _lemma3_key_head(n, x) + _lemma3_tail(n, x)


def _lemma3_args(n: int, x: Rational) -> Fraction:
    if n < 1:
        raise NumberTheoryError("lemma 3 needs n >= 1")
    x = F(x)
    if x == -1:
        raise NumberTheoryError("x = -1 is excluded")
    return x


def verify_lemma3(n: int, x: Rational) -> IdentityReport:
    """Three exact assertions: the lemma, the intermediate form, the bridge."""
    x = _lemma3_args(n, x)
    head_rhs = 2 * n / (x + 1) * sum(((x / (x + 1)) ** (2 * n - k) / k
                                      for k in range(1, 2 * n + 1)), F(0))
    lhs = _lemma3_lhs(n, x)
    return _multi("lemma3", (n, x), [
        ("lemma", lhs, _lemma3_rhs(n, x)),
        ("key", lhs, _lemma3_key_rhs(n, x)),
        ("bridge", _lemma3_key_head(n, x), head_rhs),
    ])


def _lemma3_cert_rhs(n: int, x: Fraction) -> Fraction:
    return (-F(n * ((4 * n + 3) * x + 2 * n + 1), 1) / (2 * n + 1)
            + F(n * n + n) * (x ** (n + 1) - x ** (n + 2)) / ((2 * n + 1) * comb(2 * n, n)))


def verify_lemma3_recurrence(n: int, x: Rational) -> IdentityReport:
    """``(n+1) x^2 S_n - n (1+x)^2 S_{n+1}`` equals the inhomogeneous part on both sides."""
    x = _lemma3_args(n, x)

    def cert(s: Callable[[int, Fraction], Fraction]) -> Fraction:
        return (n + 1) * x ** 2 * s(n, x) - n * (1 + x) ** 2 * s(n + 1, x)

    target = _lemma3_cert_rhs(n, x)
    return _multi("lemma3_recurrence", (n, x),
                  [("sum", cert(_lemma3_lhs), target),
                   ("closed", cert(_lemma3_key_rhs), target)])


def _lemma4_lhs(n: int, m: int, d: int) -> Fraction:
    y = -F((m - d) ** 2, m * d)
    inner = [F(0)]
    for k in range(1, n + 1):
        inner.append(inner[-1] + y ** k / (k * comb(2 * k, k)))
    return sum((comb(n, l) * comb(n + l, l) * (-1) ** l * inner[l]
                for l in range(1, n + 1)), F(0))


def _lemma4_rhs(n: int, m: int, d: int) -> Fraction:
    u, w = F(-d, m), F(-m, d)
    return (F(d - m, d + m) * (-1) ** n
            * sum(((u ** k - w ** k) / k for k in range(1, n + 1)), F(0)))


def _lemma4_args(m: int, d: int) -> None:
    if d * m * (m + d) == 0:
        raise NumberTheoryError("lemma 4 needs d m (m + d) != 0")


def verify_lemma4(n: int, m: int, d: int) -> IdentityReport:
    _lemma4_args(m, d)
    return _report("lemma4", (n, m, d), _lemma4_lhs(n, m, d), _lemma4_rhs(n, m, d))


def verify_lemma4_recurrence(n: int, m: int, d: int) -> IdentityReport:
    """Both sides satisfy the order-3 homogeneous certificate at index ``n``."""
    _lemma4_args(m, d)
    c1 = -2 * d * d + m * d - 2 * m * m - d * d * n + m * d * n - m * m * n
    c2 = -2 * d * d + 3 * m * d - 2 * m * m - d * d * n + m * d * n - m * m * n

    def cert(s: Callable[[int, int, int], Fraction]) -> Fraction:
        return (m * d * (n + 1) * s(n, m, d) + c1 * s(n + 1, m, d)
                + c2 * s(n + 2, m, d) + m * d * (n + 3) * s(n + 3, m, d))

    return _multi("lemma4_recurrence", (n, m, d),
                  [("sum", cert(_lemma4_lhs), 0), ("closed", cert(_lemma4_rhs), 0)])


def verify_legendre_connection(n: int, params: TrinomialParams) -> IdentityReport:
    """``T_n(b,c) = sqrt(d)^n P_n(b / sqrt(d))`` evaluated in ``Q(sqrt d)``."""
    d = params.d
    if d == 0:
        raise NumberTheoryError("d = 0: b / sqrt(d) is undefined")
    sq = QuadExtRat.of(0, 1, d)
    y = QuadExtRat.of(0, F(params.b, d), d)  # b / sqrt(d) = (b/d) sqrt(d)
    half = (y - 1) * F(1, 2)
    p_n = QuadExtRat.of(0, 0, d)
    term = QuadExtRat.of(1, 0, d)
    for k in range(n + 1):
        p_n = p_n + term * (comb(n, k) * comb(n + k, k))
        term = term * half
    value = sq ** n * p_n
    return _multi("legendre_connection", (n, params.b, params.c),
                  [("rational", value.a, trinomial_exact(n, params)),
                   ("radical", value.b, 0)])


# ---------------------------------------------------------------------------
# modular lemmas
# ---------------------------------------------------------------------------

def verify_lemma5(p: int, x: Rational) -> IdentityReport:
    """``sum_{k<p} x^k / k = -Q_p(x) (mod p)``."""
    xr = rat_mod(x, p, p)
    if xr == 0 or xr == 1:
        raise NumberTheoryError(f"lemma 5 needs p not dividing x(1-x); p={p}, x={x}")
    lhs = polylog_finite(1, x, p)
    rhs = -q_p_poly(x, p)
    return _report("lemma5", (p, F(x)), lhs.value, rhs.value)


def verify_lemma6(p: int, x: Rational) -> IdentityReport:
    """``sum_{k<=(p-1)/2} (1-x)^k / k = H_{(p-1)/2} + S_{p-1}(x/4) (mod p)``."""
    mod = make_modulus(p, 1)
    x = F(x)
    half = (p - 1) // 2
    y = mod(1 - x)
    lhs = sum(((y ** k) * pow(k, -1, p) for k in range(1, half + 1)), mod(0))
    rhs = harmonic_mod(half, mod) + s_sum(x / 4, p)
    return _report("lemma6", (p, x), lhs.value, rhs.value)


def _neg_binom(a: int, k: int) -> int:
    """``C(a, k)`` for any integer ``a`` by the falling factorial."""
    num = 1
    for j in range(k):
        num *= a - j
    den = 1
    for j in range(1, k + 1):
        den *= j
    assert num % den == 0
    return num // den


def verify_transition_binomials(p: int, l: int, k: int) -> IdentityReport:
    """Binomial congruences mod ``p^2`` used when splitting the main sum.

    (a) ``C(p-2l-1, k) = C(-2l-1, k) (1 - p (H_{2l+k} - H_{2l}))`` for
        ``0 <= k <= p-2l-1``;
    (b) ``C(p+k, 2l) = (p / 2l) (-1)^(k+1) / C(2l-1, k)`` for ``0 <= k <= l-1``.

    Whichever of the two applies to ``(l, k)`` is checked; ``l`` ranges over
    ``1 .. (p-1)/2``.
    """
    if not 1 <= l <= (p - 1) // 2:
        raise OutOfRange(f"l={l} outside 1..{(p - 1) // 2}")
    in_a = 0 <= k <= p - 2 * l - 1
    in_b = 0 <= k <= l - 1
    if not (in_a or in_b):
        raise OutOfRange(f"k={k} outside both ranges for p={p}, l={l}")
    mod = make_modulus(p, 2)
    pairs = []
    if in_a:
        lhs = vr_to_residue(binom_valued(p - 2 * l - 1, k, mod), 2)
        h = harmonic_mod(2 * l + k, mod) - harmonic_mod(2 * l, mod)
        rhs = mod(_neg_binom(-2 * l - 1, k)) * (1 - p * h)
        pairs.append(("a", lhs.value, rhs.value))
    if in_b:
        lhs = vr_to_residue(binom_valued(p + k, 2 * l, mod), 2)
        unit = vr_from_int((-1) ** (k + 1) * pow(2 * l * comb(2 * l - 1, k), -1, mod.pe), mod)
        rhs = vr_to_residue(vr_mul(vr_from_int(p, mod), unit), 2)
        pairs.append(("b", lhs.value, rhs.value))
    return _multi("transition_binomials", (p, l, k), pairs)


def verify_sun_lemma31(p: int, l: int) -> IdentityReport:
    """``C(h,l) C(h+l,l) (-1)^l = C(2l,l)^2 / 16^l (mod p^2)`` with ``h = (p-1)/2``."""
    h = (p - 1) // 2
    if not 0 <= l <= h:
        raise OutOfRange(f"l={l} outside 0..{h}")
    mod = make_modulus(p, 2)
    lhs = mod(comb(h, l) * comb(h + l, l) * (-1) ** l)
    rhs = mod(F(comb(2 * l, l) ** 2, 16 ** l))
    return _report("sun_lemma31", (p, l), lhs.value, rhs.value,
                   note="sign read as (-1)^l; printed as (-1)^k with k unbound")


def verify_wolstenholme(p: int) -> IdentityReport:
    """``H_{p-1} = 0`` modulo ``p^2`` (``p > 3``), modulo ``p`` for ``p = 3``."""
    e = 2 if p > 3 else 1
    mod = make_modulus(p, e)
    return _report("wolstenholme", (p, e), harmonic_mod(p - 1, mod).value, 0)

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from trinomcong.identities import (
    DEGREE_BOUNDS,
    QuadExtRat,
    sample_points,
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
from trinomcong.modnt import NumberTheoryError
from trinomcong.sequences import OutOfRange, TrinomialParams, harmonic_exact

F = Fraction


def test_sample_points_distinct_and_excluding():
    pts = sample_points(60)
    assert len(set(pts)) == 60
    assert F(-1) not in pts and F(0) not in pts
    assert sample_points(3) == [F(1), F(-2), F(2)]


# --- Lemma 2.1 ------------------------------------------------------------

def test_clausen_examples():
    r = verify_clausen_square(0, TrinomialParams(3, 5))
    assert r.holds and r.lhs == r.rhs == "1"
    r = verify_clausen_square(2, TrinomialParams(1, 1))
    assert r.holds and r.lhs == "9"


def test_clausen_grid():
    for b in range(-4, 5):
        for c in range(-4, 5):
            for n in range(0, 41, 4):
                assert verify_clausen_square(n, TrinomialParams(b, c))


# --- Lemma 2.2 and its certificate ----------------------------------------

def test_harmonic_examples():
    assert verify_harmonic_identity(0, F(5, 3)).lhs == "0"
    # at x = -1 only the k = n term of the right side survives: the sum is -1/n
    assert verify_harmonic_identity(0, -1).lhs == "0"
    for n in range(1, 12):
        r = verify_harmonic_identity(n, -1)
        assert r.holds and F(r.lhs) == F(-1, n)
    assert F(verify_harmonic_identity(2, -1).lhs) != -harmonic_exact(2)


def test_harmonic_identity_by_degree_bound():
    # both sides are polynomials of degree <= n in x
    for n in range(0, 16):
        for x in sample_points(DEGREE_BOUNDS["harmonic"](n) + 1, exclude=()):
            assert verify_harmonic_identity(n, x)


def test_harmonic_recurrence():
    assert verify_harmonic_recurrence(0, 2)
    for n in range(0, 26):
        for x in (F(1, 2), F(-1, 2), 2, -2, F(3, 5), F(-7, 3), 0):
            assert verify_harmonic_recurrence(n, x), (n, x)


# --- inverse binomial identities ------------------------------------------

def test_known_inverse_examples():
    assert verify_known_inverse_binom(0, F(9, 4)).lhs == "1"
    r = verify_known_inverse_binom(1, 1)
    assert r.holds and r.lhs == "2"
    with pytest.raises(NumberTheoryError):
        verify_known_inverse_binom(3, -1)


def test_known_inverse_by_degree_bound():
    for n in range(0, 12):
        for x in sample_points(DEGREE_BOUNDS["known_inverse_binom"](n) + 1, exclude=(-1,)):
            assert verify_known_inverse_binom(n, x), (n, x)


def test_lemma3_example():
    r = verify_lemma3(1, 2)
    assert r.holds
    assert r.lhs.startswith("lemma: 1;")


def test_lemma3_sample_set():
    for n in range(1, 21):
        for x in (2, F(1, 2), -3, F(5, 7)):
            assert verify_lemma3(n, x), (n, x)
            assert verify_lemma3_recurrence(n, x), (n, x)


def test_lemma3_by_degree_bound():
    for n in range(1, 8):
        for x in sample_points(DEGREE_BOUNDS["lemma3"](n) + 1, exclude=(-1,)):
            assert verify_lemma3(n, x), (n, x)


def test_lemma3_rejects_minus_one():
    with pytest.raises(NumberTheoryError):
        verify_lemma3(2, -1)
    with pytest.raises(NumberTheoryError):
        verify_lemma3(0, 2)


# --- Lemma 2.4 ------------------------------------------------------------

@pytest.mark.parametrize("m,d", [(4, 12), (1, 5), (25, 5), (36, 12), (-3, 7), (2, -9)])
def test_lemma4_n1_closed_value(m, d):
    # both sides reduce to (m - d)^2 / (m d) at n = 1
    r = verify_lemma4(1, m, d)
    assert r.holds and F(r.lhs) == F((m - d) ** 2, m * d)


@pytest.mark.parametrize("m,d", [(4, 12), (1, 5), (25, 5), (36, 12)])
def test_lemma4_and_certificate(m, d):
    for n in range(0, 21):
        assert verify_lemma4(n, m, d)
        assert verify_lemma4_recurrence(n, m, d)


def test_lemma4_constraint():
    for m, d in ((0, 3), (3, 0), (3, -3)):
        with pytest.raises(NumberTheoryError):
            verify_lemma4(2, m, d)


# --- Legendre polynomials in Q(sqrt d) ------------------------------------

@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50),
       st.integers(-30, 30))
def test_quad_ext_conjugate_product(a, b, rad):
    z = QuadExtRat(a, b, rad)
    w = z * z.conjugate()
    assert w.b == 0 and w.a == z.norm()


def test_quad_ext_division_round_trip():
    z = QuadExtRat.of(F(3, 2), -2, 5)
    w = QuadExtRat.of(1, F(1, 3), 5)
    assert (z / w) * w == z
    assert z ** 3 == z * z * z
    assert z ** -2 * z ** 2 == QuadExtRat.of(1, 0, 5)


def test_legendre_connection():
    assert verify_legendre_connection(0, TrinomialParams(1, 1)).holds
    with pytest.raises(NumberTheoryError):
        verify_legendre_connection(3, TrinomialParams(2, 1))
    for b, c in ((1, 1), (3, 2), (4, 1), (2, -1), (1, 0)):
        for n in range(26):
            assert verify_legendre_connection(n, TrinomialParams(b, c)), (b, c, n)


# --- modular lemmas -------------------------------------------------------

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]


def test_lemma5():
    for p in [q for q in PRIMES if q > 2]:
        if p != 3:
            assert verify_lemma5(p, 2)
        assert verify_lemma5(p, -1)
    with pytest.raises(NumberTheoryError):
        verify_lemma5(7, 1)
    with pytest.raises(NumberTheoryError):
        verify_lemma5(7, 8)


def test_lemma6():
    for p in PRIMES:
        r1 = verify_lemma6(p, 1)
        assert r1.holds and r1.lhs == "0"
        r0 = verify_lemma6(p, 0)
        assert r0.holds and r0.lhs == r0.rhs
        for x in range(10):
            assert verify_lemma6(p, x)
        assert verify_lemma6(p, F(2, 3) if p != 3 else F(1, 2))


def test_transition_examples():
    assert verify_transition_binomials(11, 3, 0).lhs.startswith("a: 1")
    r = verify_transition_binomials(7, 1, 1)
    # (a) applies at k=1 since 1 <= 7-2-1; (b) needs k <= l-1 = 0
    assert r.holds and "b:" not in r.lhs
    r = verify_transition_binomials(7, 2, 1)
    assert r.holds and "b: " in r.lhs
    # k = 1 is past the (b) range for l = 1, but the congruence still holds there:
    # C(8,2) = 28 and (7/2) * (+1) / C(1,1) = 7 * 25 = 28 (mod 49)
    assert comb(8, 2) % 49 == 7 * pow(2, -1, 49) % 49 == 28


def test_transition_ranges():
    with pytest.raises(OutOfRange):
        verify_transition_binomials(7, 4, 0)
    with pytest.raises(OutOfRange):
        verify_transition_binomials(7, 3, 3)
    with pytest.raises(OutOfRange):
        verify_transition_binomials(7, 0, 0)


def test_transition_b_direct():
    # p = 7, l = 1, k = 0: C(7,2) = 21 = 7 * 3 and (7/2)(-1)/C(1,0) = -7 * 25
    p = 7
    assert comb(p, 2) % 49 == (-7 * pow(2, -1, 49)) % 49
    r = verify_transition_binomials(p, 1, 0)
    assert r.holds


def test_sun_lemma31():
    r = verify_sun_lemma31(5, 1)
    assert r.holds and r.lhs == r.rhs == "19"
    assert verify_sun_lemma31(11, 0).lhs == "1"
    for p in PRIMES:
        for l in range((p - 1) // 2 + 1):
            assert verify_sun_lemma31(p, l)


def test_sun_lemma31_sign_must_depend_on_l():
    # a constant sign, the only sensible reading of an unbound (-1)^k, breaks at l = 1
    p = 5
    lhs = comb(2, 1) * comb(3, 1)
    rhs = comb(2, 1) ** 2 * pow(16, -1, 25) % 25
    assert lhs % 25 != rhs and -lhs % 25 == rhs


def test_wolstenholme():
    assert harmonic_exact(4) == F(25, 12)
    assert verify_wolstenholme(5)
    r = verify_wolstenholme(3)
    assert r.holds and r.params == (3, 1)
    assert harmonic_exact(2).numerator % 9 != 0
    for p in PRIMES[1:]:
        assert verify_wolstenholme(p)

"""Generalized central trinomial coefficients and their prime-power congruences.

``T_n(b, c)`` is the coefficient of ``x^n`` in ``(x^2 + bx + c)^n``.  The
package computes these and the auxiliary sums around them exactly and modulo
``p``, ``p^2`` and ``p^3``, and verifies the congruences for
``sum_{k<p} T_k(b,c)^2 / m^k`` together with the identities used to derive them.
"""

__version__ = "0.1.0"

from .modnt import (  # noqa: E402
    Modulus,
    Residue,
    ValuedResidue,
    cornacchia_x2_4y2,
    fermat_quotient,
    is_prime,
    legendre,
    make_modulus,
)
from .sequences import TrinomialParams, trinomial_exact  # noqa: E402
from .congruences import CHECKS, CheckVerdict, solve_m  # noqa: E402

__all__ = [
    "Modulus",
    "Residue",
    "ValuedResidue",
    "TrinomialParams",
    "CheckVerdict",
    "CHECKS",
    "cornacchia_x2_4y2",
    "fermat_quotient",
    "is_prime",
    "legendre",
    "make_modulus",
    "solve_m",
    "trinomial_exact",
]

"""Exact q-analogue counting and the closed-form bounds used by the checkers.

Everything here is integer or :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import PreconditionError


def gaussian(a: int, k: int, q: int) -> int:
    """Gaussian binomial coefficient; 0 when k < 0 or k > a."""
    if k < 0 or k > a or a < 0:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (a - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def bracket(a: int, q: int) -> int:
    """[a] = (q^a - 1)/(q - 1), the number of points of an a-space."""
    if a < 0:
        raise PreconditionError("bracket needs a >= 0")
    return (q**a - 1) // (q - 1)


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0:
        return 0
    return comb(n, k)


def check_q_pascal(a: int, k: int, q: int) -> bool:
    """Both forms of the q-Pascal recurrence at (a, k)."""
    if a < 1 or k < 1:
        raise PreconditionError("q-Pascal needs a, k >= 1")
    g = gaussian(a, k, q)
    first = q ** (a - k) * gaussian(a - 1, k - 1, q) + gaussian(a - 1, k, q) if k <= a else 0
    second = gaussian(a - 1, k - 1, q) + q**k * gaussian(a - 1, k, q)
    return g == first == second


def flag_count(n: int, i: int, f: int, e: int, q: int) -> int:
    """Number of e-subspaces containing a fixed i-space and meeting a fixed,
    disjoint f-space trivially."""
    if i > e or i + f > n or min(n, i, f, e) < 0:
        raise PreconditionError(f"invalid flag parameters n={n}, i={i}, f={f}, e={e}")
    return q ** (f * (e - i)) * gaussian(n - i - f, e - i, q)


def check_simple_inequalities(a: int, b: int, q: int) -> bool:
    """(a-1)/(b-1) < a/b when b > a, and [b]/[a] < q^(b-a+1)."""
    if a < 1 or b < a or q < 2:
        raise PreconditionError("need b >= a >= 1 and q >= 2")
    ok = Fraction(bracket(b, q), bracket(a, q)) < q ** (b - a + 1)
    if b > a:
        ok = ok and Fraction(a - 1, b - 1) < Fraction(a, b)
    return ok


def _inv_pow(q: int, e: int) -> Fraction:
    return Fraction(1, q**e) if e >= 0 else Fraction(q**-e)


def _need(cond: bool, name: str, msg: str):
    if not cond:
        raise PreconditionError(f"{name}: {msg}")


def bound_expression(name: str, n: int, k: int, q: int | None = None, a: int | None = None) -> Fraction:
    """Exact value of a named closed-form bound.

    Ids follow the lemma/equation labels.  Counting bounds come multiplied by
    gbin(n-1,k-1) (vector) or binomial(n-1,k-1) (set); the ``packing`` and
    ``packingset`` entries are the bare factor that multiplies b_A.
    """
    if name not in _BOUNDS:
        raise PreconditionError(f"unknown bound id {name!r}")
    vector, fn = _BOUNDS[name]
    _need(k >= 1, name, "k >= 1")
    if vector:
        _need(q is not None and q >= 2, name, "q >= 2 required")
        return fn(n, k, q, a)
    return fn(n, k, a)


def _usefulcomputation(n, k, q, a):
    _need(a is not None and k <= a <= n - k, "usefulcomputation", "k <= a <= n-k")
    return _inv_pow(q, (a - k) * (k - 1)) * (1 - _inv_pow(q, n - a - k)) * gaussian(n - 1, k - 1, q)


def _packing(n, k, q, a):
    _need(n >= 2 * k - 1, "packing", "n >= 2k-1")
    return 1 - Fraction(q + 1) * _inv_pow(q, n - 2 * k + 1)


def _small(n, k, q, a):
    _need(n >= 2 * k - 1, "small", "n >= 2k-1")
    return _inv_pow(q, n - 3 * k) * gaussian(n - 1, k - 1, q)


def _lotson1_factor(n, k, q):
    return (
        1
        - _inv_pow(q, n - 3 * k)
        - _inv_pow(q, n - 2 * k - 1)
        - _inv_pow(q, n - 2 * k)
        - _inv_pow(q, n - 2 * k + 1)
        + (q + 1) * _inv_pow(q, 2 * n - 4 * k + 1)
    )


def _lotson1(n, k, q, a):
    _need(n >= 2 * k - 1, "lotson1", "n >= 2k-1")
    return _lotson1_factor(n, k, q) * gaussian(n - 1, k - 1, q)


def _lotson1k2_factor(n, q):
    return 1 - _inv_pow(q, n - 6) - _inv_pow(q, n - 3) + (q + 1) * _inv_pow(q, 2 * n - 7)


def _lotson1k2(n, k, q, a):
    _need(k == 2 and n >= 3, "lotson1k2", "k == 2, n >= 3")
    return _lotson1k2_factor(n, q) * bracket(n - 1, q)


def _nonnegT(n, k, q, a):
    _need(n >= 3 * k, "nonnegT", "n >= 3k")
    return (1 - _inv_pow(q, n - 3 * k + 1)) * gaussian(n - 1, k - 1, q)


def _grandfinale(n, k, q, a):
    _need(n >= 3 * k, "grandfinale", "n >= 3k")
    factor = _lotson1_factor(n, k, q) + 1 - _inv_pow(q, n - 3 * k + 1)
    return factor * gaussian(n - 1, k - 1, q)


def _grandfinalek2(n, k, q, a):
    _need(k == 2 and n >= 6, "grandfinalek2", "k == 2, n >= 6")
    factor = 2 - _inv_pow(q, n - 6) - _inv_pow(q, n - 5) - _inv_pow(q, n - 3) + (q + 1) * _inv_pow(q, 2 * n - 7)
    return factor * bracket(n - 1, q)


def _set_ratio(c: int, n: int, k: int) -> Fraction:
    return 1 - Fraction(c * (k - 1), n - 2 * k + 1)


def _packingset(n, k, a):
    _need(n >= k * k and n >= 2 * k, "packingset", "n >= k^2, n >= 2k")
    return _set_ratio(2 * k - 1, n, k)


def _lotson1sets(n, k, a):
    _need(n >= k * k and n >= 2 * k, "lotson1sets", "n >= k^2, n >= 2k")
    return _set_ratio(6 * k - 3, n, k) * binomial(n - 1, k - 1)


def _nonnegTset(n, k, a):
    _need(n >= 2 * k, "nonnegTset", "n >= 2k")
    return _set_ratio(2 * k - 1, n, k) * binomial(n - 1, k - 1)


def _nonnegTset_exact(n, k, a):
    _need(n >= 2 * k, "nonnegTset_exact", "n >= 2k")
    return Fraction(binomial(n - 2 * k, k - 1))


def _grandfinaleset(n, k, a):
    _need(n >= 8 * k * k, "grandfinaleset", "n >= 8k^2")
    return (1 + _set_ratio(8 * k - 4, n, k)) * binomial(n - 1, k - 1)


# name -> (needs q, evaluator)
_BOUNDS = {
    "usefulcomputation": (True, _usefulcomputation),
    "packing": (True, _packing),
    "small": (True, _small),
    "lotson1": (True, _lotson1),
    "lotson1k2": (True, _lotson1k2),
    "nonnegT": (True, _nonnegT),
    "grandfinale": (True, _grandfinale),
    "grandfinalek2": (True, _grandfinalek2),
    "packingset": (False, _packingset),
    "lotson1sets": (False, _lotson1sets),
    "nonnegTset": (False, _nonnegTset),
    "nonnegTset_exact": (False, _nonnegTset_exact),
    "grandfinaleset": (False, _grandfinaleset),
}

BOUND_IDS = tuple(_BOUNDS)

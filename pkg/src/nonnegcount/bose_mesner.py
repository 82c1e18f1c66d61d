"""Inclusion, Kneser and Bose-Mesner matrices, and exact eigenvector checks.

Every builder takes ``q``; ``q=None`` selects the set case (subsets of
{0..n-1} in colex order) where Gaussian binomials become binomials and
powers of q become 1.  Rows/columns follow the canonical orders of
:mod:`nonnegcount.subspace` and :mod:`nonnegcount.subsets`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exact import exact_matmul
from .errors import CapExceeded, PreconditionError
from .qcount import binomial, gaussian
from .subsets import set_incidence
from .subspace import geometry
from .weights import BVector, SetWeighting, Weighting, b_vector, set_b_vector

MATRIX_CAP = 4 * 10**7
ROW_PATH_CAP = 2 * 10**5


def gb(a: int, k: int, q: int | None) -> int:
    return binomial(a, k) if q is None else gaussian(a, k, q)


def qpow(q: int | None, e: int) -> int:
    return 1 if q is None else q**e


def _count(n: int, k: int, q: int | None) -> int:
    return gb(n, k, q)


def _incidence(n: int, k: int, q: int | None) -> np.ndarray:
    return set_incidence(n, k) if q is None else geometry(n, q).incidence(k)


def _points_in(k: int, q: int | None) -> int:
    return k if q is None else gaussian(k, 1, q)


def _check(n, j, k, q, cap):
    if not 0 <= j <= k <= n:
        raise PreconditionError(f"need 0 <= j <= k <= n (got j={j}, k={k}, n={n})")
    size = _count(n, j, q) * _count(n, k, q)
    if size > cap:
        raise CapExceeded(f"{_count(n, j, q)} x {_count(n, k, q)} matrix exceeds cap {cap}")


def _shared(n, j, k, q) -> np.ndarray:
    return exact_matmul(_incidence(n, j, q), _incidence(n, k, q).T)


@lru_cache(maxsize=64)
def build_inclusion(n: int, j: int, k: int, q: int | None = None, cap: int = MATRIX_CAP) -> np.ndarray:
    """W_jk: rows j-objects, columns k-objects, 1 iff row ⊆ column."""
    _check(n, j, k, q, cap)
    M = _shared(n, j, k, q) == _points_in(j, q)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=64)
def build_kneser(n: int, j: int, k: int, q: int | None = None, cap: int = MATRIX_CAP) -> np.ndarray:
    """Kneser matrix: 1 iff row and column intersect trivially."""
    _check(n, j, k, q, cap)
    M = _shared(n, j, k, q) == 0
    M.setflags(write=False)
    return M


@lru_cache(maxsize=32)
def build_bose_mesner(n: int, j: int, k: int, q: int | None = None, cap: int = MATRIX_CAP) -> np.ndarray:
    """B_j = Kneser_jk^T @ W_jk as an exact integer matrix."""
    _check(n, k, k, q, cap)
    K = build_kneser(n, j, k, q, cap).astype(np.int64)
    W = build_inclusion(n, j, k, q, cap).astype(np.int64)
    B = exact_matmul(K.T, W)
    B.setflags(write=False)
    return B


def intersection_dims(n: int, k: int, q: int | None, rows: np.ndarray | None = None) -> np.ndarray:
    """dim(S ∩ T) (or |S ∩ T|) for k-objects S in ``rows`` and all T."""
    P = _incidence(n, k, q)
    R = P if rows is None else P[rows]
    shared = exact_matmul(R, P.T)
    return shared if q is None else geometry(n, q).dim_of_point_count[shared]


def bj_entry_table(k: int, j: int, q: int | None) -> np.ndarray:
    """Closed-form B_j entry as a function of d = dim(S ∩ T), d = 0..k."""
    return np.array([qpow(q, j * d) * gb(k - d, j, q) for d in range(k + 1)], dtype=np.int64)


def bose_mesner_closed_form(n: int, j: int, k: int, q: int | None = None, cap: int = MATRIX_CAP) -> np.ndarray:
    _check(n, k, k, q, cap)
    return bj_entry_table(k, j, q)[intersection_dims(n, k, q)]


def eigenvalue(n: int, k: int, j: int, q: int | None = None) -> int:
    """Eigenvalue of B_j on the induced-weight vector."""
    return -qpow(q, j * (k - 1)) * gb(k - 1, j - 1, q) * gb(n - j - 1, k - 1, q)


def _bj_times(n, j, k, q, b: np.ndarray, cap: int) -> tuple[np.ndarray, str]:
    N = _count(n, k, q)
    if N * N <= cap and _count(n, j, q) * N <= cap:
        return exact_matmul(build_bose_mesner(n, j, k, q, cap), b), "materialized"
    if N > ROW_PATH_CAP:
        raise CapExceeded(f"{N} columns exceed the row-by-row cap {ROW_PATH_CAP}")
    table = bj_entry_table(k, j, q)
    out = []
    step = max(1, cap // max(N, 1))
    for lo in range(0, N, step):
        rows = np.arange(lo, min(N, lo + step))
        out.append(exact_matmul(table[intersection_dims(n, k, q, rows)], b))
    return np.concatenate(out), "closed-form"


@dataclass
class EigenReport:
    n: int
    k: int
    j: int
    q: int | None
    eigenvalue: int
    lhs: np.ndarray = field(repr=False)  # numerators of B_j b
    rhs: np.ndarray = field(repr=False)  # numerators of lambda * b
    denominator: int
    method: str
    passed: bool


def _verify_many(n, k, j, q, bs: list[BVector], cap) -> list[EigenReport]:
    if not 0 <= j <= k <= n:
        raise PreconditionError(f"need 0 <= j <= k <= n (got j={j}, k={k}, n={n})")
    if not bs:
        return []
    lam = eigenvalue(n, k, j, q)
    nums = np.stack([b.numerators for b in bs], axis=1)
    if nums.dtype != object and lam and np.max(np.abs(nums)) >= 2**62 // abs(lam):
        nums = nums.astype(object)
    lhs, method = _bj_times(n, j, k, q, nums, cap)
    rhs = lam * nums
    ok = np.all(lhs == rhs, axis=0)
    return [
        EigenReport(n, k, j, q, lam, lhs[:, t], rhs[:, t], b.denominator, method, bool(ok[t]))
        for t, b in enumerate(bs)
    ]


def verify_eigenvector_vec(f: Weighting, k: int, j: int, cap: int = MATRIX_CAP) -> EigenReport:
    """Check B_j b = lambda b exactly for b the induced weights of f."""
    return _verify_many(f.n, k, j, f.q, [b_vector(f, k)], cap)[0]


def verify_eigenvector_set(x: SetWeighting, k: int, j: int, cap: int = MATRIX_CAP) -> EigenReport:
    return _verify_many(x.n, k, j, None, [set_b_vector(x, k)], cap)[0]


def verify_eigenvector_batch(weightings, k: int, j: int, cap: int = MATRIX_CAP) -> list[EigenReport]:
    """Eigenvector check for many weightings of one ambient, one product."""
    weightings = list(weightings)
    if not weightings:
        return []
    first = weightings[0]
    if isinstance(first, SetWeighting):
        n, q = first.n, None
        bs = [set_b_vector(x, k) for x in weightings]
    else:
        n, q = first.n, first.q
        bs = [b_vector(f, k) for f in weightings]
    if any((w.n, getattr(w, "q", None)) != (n, q) for w in weightings):
        raise ValueError("all weightings in a batch must share n and q")
    return _verify_many(n, k, j, q, bs, cap)


@dataclass
class IdentityReport:
    j_one: bool  # W_jk W_1k^T f = q^{k-j} gbin(n-j-1,k-j) W_1j^T f
    kneser: bool  # Kneser_jk^T W_1j^T f = -q^{k(j-1)} gbin(n-k-1,j-1) W_1k^T f
    union_rows: bool  # entries of W_jk W_1k^T

    @property
    def passed(self) -> bool:
        return self.j_one and self.kneser and self.union_rows


def verify_intermediate_identities(weights, k: int, j: int, cap: int = MATRIX_CAP) -> IdentityReport:
    """The two matrix identities that combine into the eigenvalue formula."""
    if isinstance(weights, SetWeighting):
        n, q = weights.n, None
        bk, bj = set_b_vector(weights, k), set_b_vector(weights, j)
    else:
        n, q = weights.n, weights.q
        bk, bj = b_vector(weights, k), b_vector(weights, j)
    if not 1 <= j <= k <= n:
        raise PreconditionError("need 1 <= j <= k <= n")
    W = build_inclusion(n, j, k, q, cap).astype(np.int64)
    K = build_kneser(n, j, k, q, cap).astype(np.int64)
    lhs1 = exact_matmul(W, bk.numerators)
    rhs1 = qpow(q, k - j) * gb(n - j - 1, k - j, q) * bj.numerators.astype(object)
    lhs2 = exact_matmul(K.T, bj.numerators)
    rhs2 = -qpow(q, k * (j - 1)) * gb(n - k - 1, j - 1, q) * bk.numerators.astype(object)
    # W_jk W_1k^T (S, T): k-objects through S and the point T
    W1 = build_inclusion(n, 1, k, q, cap).astype(np.int64)
    prod = exact_matmul(W, W1.T)
    inside = build_inclusion(n, 1, j, q, cap).T
    expected = np.where(inside, gb(n - j, k - j, q), gb(n - j - 1, k - j - 1, q))
    return IdentityReport(
        j_one=bool(np.all(lhs1.astype(object) == rhs1)),
        kneser=bool(np.all(lhs2.astype(object) == rhs2)),
        union_rows=bool(np.array_equal(prod, expected)),
    )

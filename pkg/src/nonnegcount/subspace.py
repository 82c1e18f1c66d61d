"""Subspaces of F_q^n in canonical reduced row-echelon form.

Vectors are row vectors; a :class:`LinearMap` acts by ``v -> v @ M``.
The canonical order on k-subspaces is lexicographic on the row-major
flattening of the RREF basis, which is also the order used to index
points, weightings and incidence matrices.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import gf
from .errors import CapExceeded
from .exact import exact_matmul
from .qcount import gaussian

MAX_SUBSPACES = 10**7


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n, stored by its unique RREF basis."""

    n: int
    q: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def field(self) -> gf.FieldTable:
        return gf.make_field(self.q)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) if self.q <= 10 else str(r) for r in self.basis)
        return f"<{rows or '0'}>_{self.q}^{self.n}"


@dataclass(frozen=True)
class LinearMap:
    n: int
    q: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not gf.is_invertible(self.matrix, gf.make_field(self.q)):
            raise ValueError("linear map is not invertible")

    def inverse(self) -> "LinearMap":
        return LinearMap(self.n, self.q, _freeze(gf.inverse(self.matrix, gf.make_field(self.q))))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """The map ``v -> other(self(v))``."""
        F = gf.make_field(self.q)
        return LinearMap(self.n, self.q, _freeze(gf.matmul(self.matrix, other.matrix, F)))

    @classmethod
    def identity(cls, n: int, q: int) -> "LinearMap":
        return cls(n, q, _freeze(gf.identity(n)))


def _freeze(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in rows)


def canonicalize(rows: Sequence[Sequence[int]], q: int, n: int | None = None) -> Subspace:
    """Row space of ``rows`` as a canonical :class:`Subspace`."""
    rows = [list(r) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("ambient dimension needed for an empty row list")
        n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise ValueError("rows do not lie in F_q^%d" % n)
    F = gf.make_field(q)
    if any(not 0 <= x < q for r in rows for x in r):
        raise ValueError("entries must be field elements 0..q-1")
    R, _ = gf.rref(rows, F)
    return Subspace(n, q, _freeze(R))


def zero_subspace(n: int, q: int) -> Subspace:
    return Subspace(n, q, ())


def whole_space(n: int, q: int) -> Subspace:
    return Subspace(n, q, _freeze(gf.identity(n)))


def coordinate_subspace(n: int, q: int, d: int) -> Subspace:
    """Span of the first ``d`` standard basis vectors."""
    return Subspace(n, q, _freeze(gf.identity(n)[:d]))


def is_rref(S: Subspace) -> bool:
    F = S.field
    return gf.rref(S.basis, F)[0] == [list(r) for r in S.basis]


# -- enumeration ------------------------------------------------------------


def _pivot_family(n: int, q: int, pivots: tuple[int, ...]) -> Iterator[Subspace]:
    """All RREF bases with the given pivot columns, in lexicographic order."""
    pivset = set(pivots)
    free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivset]
    template = [[0] * n for _ in pivots]
    for i, p in enumerate(pivots):
        template[i][p] = 1
    for values in itertools.product(range(q), repeat=len(free)):
        for (i, c), v in zip(free, values):
            template[i][c] = v
        yield Subspace(n, q, _freeze(template))


def enumerate_subspaces(n: int, k: int, q: int) -> Iterator[Subspace]:
    """Yield every k-subspace of F_q^n once, in canonical order."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    gf.make_field(q)
    if gaussian(n, k, q) > MAX_SUBSPACES:
        raise CapExceeded(f"gbin({n},{k})_{q} exceeds {MAX_SUBSPACES}")
    families = [_pivot_family(n, q, piv) for piv in itertools.combinations(range(n), k)]
    if len(families) == 1:
        yield from families[0]
    else:
        yield from heapq.merge(*families, key=lambda S: S.basis)


def subspace_range(n: int, k: int, q: int, start: int, stop: int) -> Iterator[Subspace]:
    """Positions ``start:stop`` of the canonical enumeration (for sharding)."""
    return itertools.islice(enumerate_subspaces(n, k, q), start, stop)


# -- lattice operations -----------------------------------------------------


def _check_ambient(A: Subspace, B: Subspace) -> None:
    if (A.n, A.q) != (B.n, B.q):
        raise ValueError(f"ambient mismatch: F_{A.q}^{A.n} vs F_{B.q}^{B.n}")


def join(A: Subspace, B: Subspace) -> Subspace:
    _check_ambient(A, B)
    return canonicalize(A.basis + B.basis, A.q, A.n)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B by the Zassenhaus algorithm."""
    _check_ambient(A, B)
    n, F = A.n, A.field
    if not A.basis or not B.basis:
        return zero_subspace(n, A.q)
    rows = [list(a) + list(a) for a in A.basis] + [list(b) + [0] * n for b in B.basis]
    R, piv = gf.rref(rows, F)
    inter = [r[n:] for r, p in zip(R, piv) if p >= n]
    return canonicalize(inter, A.q, n)


def reduce_vector(S: Subspace, v: Sequence[int]) -> list[int]:
    """Remainder of ``v`` after eliminating S's pivot coordinates."""
    F = S.field
    v = list(v)
    for row, p in zip(S.basis, S.pivots):
        c = v[p]
        if c:
            t = F.neg[c]
            v = [F.add[x][F.mul[t][y]] for x, y in zip(v, row)]
    return v


def contains(S: Subspace, v) -> bool:
    """Whether S contains the vector ``v`` or the subspace ``v``."""
    if isinstance(v, Subspace):
        _check_ambient(S, v)
        return all(contains(S, row) for row in v.basis)
    if len(v) != S.n:
        raise ValueError("ambient mismatch")
    return not any(reduce_vector(S, v))


@lru_cache(maxsize=None)
def monic_coefficients(d: int, q: int) -> tuple[tuple[int, ...], ...]:
    """Nonzero vectors of F_q^d whose first nonzero entry is 1, sorted."""
    return tuple(
        c for c in itertools.product(range(q), repeat=d) if any(c) and c[next(i for i, x in enumerate(c) if x)] == 1
    )


def point_vectors(S: Subspace) -> list[tuple[int, ...]]:
    """Monic representatives of the 1-subspaces of S."""
    F = S.field
    add, mul = F.add, F.mul
    out = []
    for coeffs in monic_coefficients(S.dim, S.q):
        v = [0] * S.n
        for c, row in zip(coeffs, S.basis):
            if c:
                v = [add[x][mul[c][y]] for x, y in zip(v, row)]
        out.append(tuple(v))
    return out


def points(S: Subspace) -> list[Subspace]:
    return [Subspace(S.n, S.q, (v,)) for v in sorted(point_vectors(S))]


def monic(v: Sequence[int], q: int) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    F = gf.make_field(q)
    lead = next((x for x in v if x), 0)
    if not lead:
        raise ValueError("zero vector has no projective point")
    s = F.inv[lead]
    return tuple(F.mul[s][x] for x in v)


def complete_basis(S: Subspace) -> list[list[int]]:
    """S's basis followed by standard vectors completing it to F_q^n."""
    rows = [list(r) for r in S.basis]
    used = set(S.pivots)
    rows += [[int(j == c) for j in range(S.n)] for c in range(S.n) if c not in used]
    return rows


# -- flags -------------------------------------------------------------------


def enumerate_flags(n: int, q: int, contain: Subspace, avoid: Subspace, e: int) -> Iterator[Subspace]:
    """All e-subspaces T with ``contain ⊆ T`` and ``T ∩ avoid = 0``.

    Built directly rather than by filtering: in a basis adapted to
    (contain, avoid, complement) such a T is ``contain`` plus the graph of
    a linear map from an (e-i)-subspace Y of the complement into ``avoid``.
    """
    for X in (contain, avoid):
        if (X.n, X.q) != (n, q):
            raise ValueError("ambient mismatch")
    i, f = contain.dim, avoid.dim
    if not 0 <= e <= n:
        raise ValueError(f"target dimension {e} outside 0..{n}")
    if intersect(contain, avoid).dim:
        raise ValueError("contain and avoid must intersect trivially")
    if e < i or e > n - f:
        return
    F = gf.make_field(q)
    stacked = [list(r) for r in contain.basis + avoid.basis]
    R, piv = gf.rref(stacked, F)
    extra = [[int(j == c) for j in range(n)] for c in range(n) if c not in set(piv)]
    P = stacked + extra  # rows: contain | avoid | complement (m = n-i-f rows)
    m = n - i - f
    d = e - i
    for Y in enumerate_subspaces(m, d, q):
        for phi in itertools.product(range(q), repeat=d * f):
            rows = []
            for r in range(d):
                coords = [0] * i + list(phi[r * f:(r + 1) * f]) + list(Y.basis[r])
                rows.append(gf.vecmat(coords, P, F))
            yield canonicalize(list(contain.basis) + rows, q, n)


# -- group actions -----------------------------------------------------------


def apply_map(pi: LinearMap, S: Subspace) -> Subspace:
    if (pi.n, pi.q) != (S.n, S.q):
        raise ValueError("ambient mismatch")
    if not S.basis:
        return S
    return canonicalize(gf.matmul(S.basis, pi.matrix, S.field), S.q, S.n)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_invertible(d: int, q: int, rng) -> list[list[int]]:
    """Uniform element of GL(d, q) by rejection sampling."""
    rng = _rng(rng)
    F = gf.make_field(q)
    if d == 0:
        return []
    while True:
        A = rng.integers(0, q, size=(d, d)).tolist()
        if gf.is_invertible(A, F):
            return A


def sample_stabilizer(U: Subspace, rng_seed=None) -> LinearMap:
    """Uniform random element of the setwise stabilizer of U in GL(n, q).

    In a basis whose first dim(U) rows span U, the stabilizer is the group
    of block lower-triangular matrices [[A, 0], [B, C]] (row-vector action);
    we draw A, C uniform invertible and B uniform, then conjugate back.
    """
    rng = _rng(rng_seed)
    n, q, d = U.n, U.q, U.dim
    F = gf.make_field(q)
    A = random_invertible(d, q, rng)
    C = random_invertible(n - d, q, rng)
    B = rng.integers(0, q, size=(n - d, d)).tolist()
    G = [A[r] + [0] * (n - d) for r in range(d)] + [B[r] + C[r] for r in range(n - d)]
    P = complete_basis(U)
    M = gf.matmul(gf.matmul(gf.inverse(P, F), G, F), P, F)
    return LinearMap(n, q, _freeze(M))


# -- cached geometry over one ambient space -----------------------------------


class Geometry:
    """Cached enumerations and point incidences of PG(n-1, q)."""

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.field = gf.make_field(q)

    @cached_property
    def points(self) -> list[Subspace]:
        return list(enumerate_subspaces(self.n, 1, self.q))

    @cached_property
    def _code_lut(self) -> np.ndarray:
        lut = np.full(self.q**self.n, -1, dtype=np.int64)
        for idx, P in enumerate(self.points):
            lut[self.encode(P.basis[0])] = idx
        return lut

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    def encode(self, v) -> int:
        return int(np.dot(np.asarray(v, dtype=np.int64), self._weights))

    def point_index(self, v) -> int:
        """Index of the point spanned by the nonzero vector ``v``."""
        return int(self._code_lut[self.encode(monic(v, self.q))])

    @lru_cache(maxsize=None)
    def subspaces(self, k: int) -> list[Subspace]:
        return list(enumerate_subspaces(self.n, k, self.q))

    @lru_cache(maxsize=None)
    def index(self, k: int) -> dict[Subspace, int]:
        return {S: i for i, S in enumerate(self.subspaces(k))}

    def point_sets_of(self, subspaces: Sequence[Subspace]) -> np.ndarray:
        """(len, [k]) array of point indices for equal-dimension subspaces."""
        if not subspaces:
            return np.zeros((0, 0), dtype=np.int64)
        k = subspaces[0].dim
        if k == 0:
            return np.zeros((len(subspaces), 0), dtype=np.int64)
        coeffs = np.array(monic_coefficients(k, self.q), dtype=np.int64)
        add = np.array(self.field.add, dtype=np.int64)
        mul = np.array(self.field.mul, dtype=np.int64)
        out = []
        chunk = max(1, 2_000_000 // (len(coeffs) * self.n))
        for lo in range(0, len(subspaces), chunk):
            B = np.array([S.basis for S in subspaces[lo:lo + chunk]], dtype=np.int64)
            V = np.zeros((B.shape[0], len(coeffs), self.n), dtype=np.int64)
            for r in range(k):
                V = add[V, mul[coeffs[None, :, r, None], B[:, None, r, :]]]
            out.append(self._code_lut[V @ self._weights])
        return np.concatenate(out)

    @lru_cache(maxsize=None)
    def point_sets(self, k: int) -> np.ndarray:
        return self.point_sets_of(self.subspaces(k))

    @lru_cache(maxsize=None)
    def incidence(self, k: int) -> np.ndarray:
        """0/1 matrix (gbin(n,k) x [n]) with entry 1 iff the point lies in S."""
        ps = self.point_sets(k)
        M = np.zeros((ps.shape[0], len(self.points)), dtype=np.int64)
        if ps.size:
            np.put_along_axis(M, ps, 1, axis=1)
        return M

    @lru_cache(maxsize=None)
    def masks(self, k: int) -> list[int]:
        """Point sets of the k-subspaces as Python int bitmasks."""
        return [sum(1 << int(p) for p in row) for row in self.point_sets(k)]

    def mask(self, S: Subspace) -> int:
        return sum(1 << self.point_index(v) for v in point_vectors(S))

    def incidence_row(self, S: Subspace) -> np.ndarray:
        row = np.zeros(len(self.points), dtype=np.int64)
        for v in point_vectors(S):
            row[self.point_index(v)] = 1
        return row

    @cached_property
    def dim_of_point_count(self) -> np.ndarray:
        """Lookup: number of points [d] -> d (entries -1 elsewhere)."""
        lut = np.full(int(gaussian(self.n, 1, self.q)) + 1, -1, dtype=np.int64)
        for d in range(self.n + 1):
            lut[int(gaussian(d, 1, self.q))] = d
        return lut

    def intersection_dims(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """dim(S ∩ T) for incidence rows S and T (via shared point counts)."""
        return self.dim_of_point_count[exact_matmul(rows, cols.T)]


@lru_cache(maxsize=None)
def geometry(n: int, q: int) -> Geometry:
    return Geometry(n, q)

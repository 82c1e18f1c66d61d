"""Desarguesian spreads and partial spreads avoiding a fixed subspace.

F_q^{2s} is identified with F_{q^s}^2 through a fixed F_q-basis
1, a, ..., a^{s-1} of F_{q^s}, where a is a root of the lexicographically
smallest monic irreducible of degree s.  Multiplication by beta in F_{q^s}
is then an s x s matrix M_beta over F_q, and the s-spread consists of the
row spaces of [I | M_beta] together with [0 | I].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from . import gf
from .errors import CapExceeded, PreconditionError
from .qcount import bracket
from .subspace import (
    LinearMap,
    Subspace,
    _freeze,
    apply_map,
    canonicalize,
    complete_basis,
    contains,
    coordinate_subspace,
    geometry,
    intersect,
)

MAX_EXTENSION_ORDER = 65536


@lru_cache(maxsize=None)
def multiplication_matrices(s: int, q: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """M_beta for every beta in F_{q^s}, beta listed by its coefficient vector
    (c_0, ..., c_{s-1}) in lexicographic order of (c_{s-1}, ..., c_0).

    Row i of M_beta holds the coordinates of beta * a^i, so coordinate row
    vectors multiply as x -> x @ M_beta.
    """
    if s < 1:
        raise PreconditionError("spread dimension s must be at least 1")
    if q**s > MAX_EXTENSION_ORDER:
        raise CapExceeded(f"F_{q}^{s} has {q**s} elements, above the cap {MAX_EXTENSION_ORDER}")
    F = gf.make_field(q)
    if s == 1:
        return tuple(((b,),) for b in range(q))
    modulus = gf.smallest_irreducible(F, s)
    # companion matrix: row i is a * a^i
    comp = [[int(j == i + 1) for j in range(s)] for i in range(s - 1)]
    comp.append([F.neg[c] for c in modulus[:s]])
    powers = [gf.identity(s)]
    for _ in range(s - 1):
        powers.append(gf.matmul(powers[-1], comp, F))
    out = []
    for high_first in itertools.product(range(q), repeat=s):
        coeffs = high_first[::-1]
        M = [[0] * s for _ in range(s)]
        for c, P in zip(coeffs, powers):
            if c:
                M = [[F.add[x][F.mul[c][y]] for x, y in zip(mr, pr)] for mr, pr in zip(M, P)]
        out.append(_freeze(M))
    return tuple(out)


def field_reduction_spread(s: int, q: int) -> list[Subspace]:
    """The q^s + 1 blocks of the Desarguesian s-spread of F_q^{2s}.

    Blocks come in the order beta = 0, 1, ..., followed by [0 | I]; the
    beta = 0 block is the span of the first s coordinates.
    """
    eye = gf.identity(s)
    blocks = [
        canonicalize([list(e) + list(m) for e, m in zip(eye, M)], q, 2 * s)
        for M in multiplication_matrices(s, q)
    ]
    blocks.append(canonicalize([[0] * s + e for e in eye], q, 2 * s))
    return blocks


def partial_spread_step(W: Subspace, U: Subspace, q: int | None = None) -> list[Subspace]:
    """t-subspaces of W avoiding U that cover each point of W outside U once.

    ``dim U = s`` and ``dim W = s + t`` with ``t <= s``.  W is identified with
    the first s + t coordinates of F_q^{2s} (U with the first s), so U is the
    beta = 0 spread block; every other block meets W in a t-subspace.
    """
    q = W.q if q is None else q
    if (U.n, U.q) != (W.n, W.q) or W.q != q:
        raise ValueError("ambient mismatch")
    s, t = U.dim, W.dim - U.dim
    if t < 0 or not contains(W, U):
        raise PreconditionError("U must be a subspace of W")
    if t > s:
        raise PreconditionError(f"need t <= s (got s={s}, t={t})")
    if t == 0:
        return []
    F = gf.make_field(q)
    # basis of W: U's basis, then vectors of W completing it
    basis = [list(r) for r in U.basis] + _complement_in(W, U)
    Wc = coordinate_subspace(2 * s, q, s + t)
    members = []
    for block in field_reduction_spread(s, q)[1:]:
        piece = intersect(block, Wc)
        if piece.dim != t:  # pragma: no cover - excluded by the dimension count
            raise AssertionError(f"spread block meets W in dimension {piece.dim}, expected {t}")
        rows = [gf.vecmat(list(r[: s + t]), basis, F) for r in piece.basis]
        members.append(canonicalize(rows, q, W.n))
    return members


def _complement_in(W: Subspace, U: Subspace) -> list[list[int]]:
    """Rows of W that extend U's basis to a basis of W."""
    F = W.field
    rows = [list(r) for r in U.basis]
    out = []
    for r in W.basis:
        if gf.rank(rows + [list(r)], F) > len(rows):
            rows.append(list(r))
            out.append(list(r))
    return out


@dataclass(frozen=True)
class PartialSpread:
    n: int
    q: int
    k: int
    avoided: Subspace
    blocks: tuple[Subspace, ...]

    @property
    def r(self) -> int:
        return self.avoided.dim - self.k

    def expected_size(self) -> int:
        """q^{k+r} [n-k-r] / [k]."""
        num = self.q ** (self.k + self.r) * bracket(self.n - self.k - self.r, self.q)
        return num // bracket(self.k, self.q)

    def mapped(self, pi: LinearMap) -> "PartialSpread":
        return PartialSpread(
            self.n, self.q, self.k, apply_map(pi, self.avoided), tuple(apply_map(pi, B) for B in self.blocks)
        )


def build_partial_spread(n: int, k: int, U: Subspace, q: int | None = None) -> PartialSpread:
    """Partial k-spread covering every point outside U, for dim U = k + r, n = mk + r.

    A chain U = X_1 < X_2 < ... < X_m = V with dim X_i = ik + r is fixed by
    completing U's basis with standard vectors; X_{i+1} minus X_i is covered
    by one :func:`partial_spread_step`, largest i first.
    """
    q = U.q if q is None else q
    if (U.n, U.q) != (n, q):
        raise ValueError("ambient mismatch")
    if k < 1:
        raise PreconditionError("block dimension k must be positive")
    m, r = divmod(n, k)
    if U.dim != k + r:
        raise PreconditionError(f"dim U must be k + r = {k + r} (got {U.dim})")
    if m < 2:
        raise PreconditionError(f"need n >= 2k (got n={n}, k={k})")
    P = complete_basis(U)
    chain = [canonicalize(P[: i * k + r], q, n) for i in range(1, m + 1)]
    blocks: list[Subspace] = []
    for i in range(m - 1, 0, -1):
        blocks.extend(partial_spread_step(chain[i], chain[i - 1], q))
    return PartialSpread(n, q, k, U, tuple(blocks))


@dataclass
class SpreadReport:
    passed: bool
    size: int
    expected_size: int
    violations: list[str] = field(default_factory=list)

    @property
    def first_violation(self) -> str | None:
        return self.violations[0] if self.violations else None


def verify_partial_spread(ps: PartialSpread) -> SpreadReport:
    """Check block dimensions, avoidance of U, the point partition and the size."""
    G = geometry(ps.n, ps.q)
    bad: list[str] = []
    U_mask = G.mask(ps.avoided)
    covered = 0
    for idx, B in enumerate(ps.blocks):
        if (B.n, B.q) != (ps.n, ps.q):
            bad.append(f"block {idx} lives in the wrong ambient space")
            continue
        if B.dim != ps.k:
            bad.append(f"block {idx} has dimension {B.dim}, expected {ps.k}")
        mB = G.mask(B)
        if mB & U_mask:
            bad.append(f"block {idx} meets the avoided subspace")
        if mB & covered:
            bad.append(f"block {idx} shares a point with an earlier block")
        covered |= mB
    everything = (1 << len(G.points)) - 1
    missing = everything & ~covered & ~U_mask
    if missing:
        bad.append(f"{bin(missing).count('1')} points outside the avoided subspace are uncovered")
    expected = ps.expected_size()
    if len(ps.blocks) != expected:
        bad.append(f"{len(ps.blocks)} blocks, expected {expected}")
    return SpreadReport(not bad, len(ps.blocks), expected, bad)


def spread_to_json(ps: PartialSpread) -> dict:
    return {
        "q": ps.q,
        "n": ps.n,
        "k": ps.k,
        "avoided": [list(r) for r in ps.avoided.basis],
        "blocks": [[list(r) for r in B.basis] for B in ps.blocks],
    }

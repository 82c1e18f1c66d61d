"""Vector-space checks: negative extension, spread averaging, lemma ledger
and the nonnegative-count theorem, all by exhaustive exact enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import PreconditionError
from .exact import exact_matmul
from .ledger import Check
from .qcount import bound_expression, bracket, gaussian
from .spread import PartialSpread, build_partial_spread
from .subspace import (
    LinearMap,
    Subspace,
    _rng,
    apply_map,
    contains,
    geometry,
    intersect,
    join,
    sample_stabilizer,
)
from .weights import (
    BVector,
    Weighting,
    b_vector,
    highest_weight_A,
    highest_weight_C,
    random_weighting,
    subspace_weight,
)

ROW_CHUNK = 4096


def _total(nums: np.ndarray) -> int:
    return int(np.sum(nums.astype(object))) if nums.size else 0


def _frac(b: BVector, mask: np.ndarray) -> Fraction:
    return Fraction(_total(b.numerators[mask]), b.denominator)


def _dims_against(n: int, q: int, k: int, X: Subspace) -> np.ndarray:
    """dim(S ∩ X) for every k-subspace S, canonical order."""
    G = geometry(n, q)
    return G.intersection_dims(G.incidence(k), G.incidence_row(X)[None, :])[:, 0]


def _contains_point(n: int, q: int, k: int, v: Subspace) -> np.ndarray:
    G = geometry(n, q)
    return G.incidence(k)[:, G.point_index(v.basis[0])].astype(bool)


# -- greedy negative extension ------------------------------------------------


def superspaces(W: Subspace) -> list[Subspace]:
    """All (dim W + 1)-subspaces containing W, canonical order."""
    G = geometry(W.n, W.q)
    ups = {join(W, P) for P in G.points if not contains(W, P.basis[0])}
    return sorted(ups, key=lambda S: S.basis)


def extend_negative(f: Weighting, T: Subspace, target_dim: int) -> Subspace:
    """A negative-weight subspace of ``target_dim`` containing T.

    Walks up one dimension at a time, taking the first negative superspace in
    canonical order.  One always exists below dimension n because the
    superspace weights of W sum to ([n - dim W] - 1) f(W).
    """
    if (T.n, T.q) != (f.n, f.q):
        raise ValueError("ambient mismatch")
    if subspace_weight(f, T) >= 0:
        raise PreconditionError("T must have negative weight")
    if not T.dim <= target_dim <= f.n - 1:
        raise PreconditionError(f"need dim T <= target_dim <= n-1 (got {target_dim})")
    W = T
    while W.dim < target_dim:
        W = next((S for S in superspaces(W) if subspace_weight(f, S) < 0), None)
        if W is None:  # pragma: no cover - excluded by the averaging identity
            raise AssertionError("no negative superspace found")
    return W


def negtoneg_check(f: Weighting, W: Subspace) -> Check:
    """Sum of f over the superspaces of W one dimension up equals ([n-d]-1) f(W)."""
    lhs = sum((subspace_weight(f, S) for S in superspaces(W)), Fraction(0))
    rhs = (bracket(f.n - W.dim, f.q) - 1) * subspace_weight(f, W)
    return Check("negtoneg", "eq:negtoneg", lhs, rhs, "==")


# -- spread averaging ------------------------------------------------------


@lru_cache(maxsize=256)
def _spread_for(n: int, k: int, U: Subspace) -> PartialSpread:
    return build_partial_spread(n, k, U)


@dataclass
class SpreadSearch:
    subspace: Subspace
    weight: Fraction
    U: Subspace
    pi: LinearMap = field(repr=False)
    block_total: Fraction
    minus_fU: Fraction

    @property
    def identity_holds(self) -> bool:
        return self.block_total == self.minus_fU


def find_nonneg_via_spread(f: Weighting, T: Subspace, seed=None) -> SpreadSearch:
    """A nonnegative k-subspace meeting T trivially, found in one random round.

    T (negative, dim k) is extended to a negative U of dim k + r (n = mk + r),
    a partial spread avoiding U is mapped by a random element of U's
    stabilizer, and the first nonnegative image block is returned.  The image
    blocks' weights add up to -f(U) > 0, so one exists.
    """
    n, k = f.n, T.dim
    if k < 1 or n < 3 * k:
        raise PreconditionError(f"need n >= 3k (got n={n}, k={k})")
    U = extend_negative(f, T, k + n % k)
    pi = sample_stabilizer(U, _rng(seed))
    images = [apply_map(pi, B) for B in _spread_for(n, k, U).blocks]
    weights = [subspace_weight(f, S) for S in images]
    total = sum(weights, Fraction(0))
    minus_fU = -subspace_weight(f, U)
    pick = next((i for i, w in enumerate(weights) if w >= 0), None)
    if pick is None:  # pragma: no cover - excluded by total = -f(U) > 0
        raise AssertionError("no nonnegative block in the mapped spread")
    S = images[pick]
    if intersect(S, T).dim:  # pragma: no cover
        raise AssertionError("block meets T")
    return SpreadSearch(S, weights[pick], U, pi, total, minus_fU)


# -- counts ------------------------------------------------------------------


def _trivial_counts(n: int, q: int, k: int, rows: np.ndarray, nonneg: np.ndarray) -> np.ndarray:
    """For each k-subspace index in ``rows``: nonnegative k-subspaces meeting it trivially."""
    P = geometry(n, q).incidence(k)
    out = np.empty(len(rows), dtype=np.int64)
    good = P[nonneg]
    for lo in range(0, len(rows), ROW_CHUNK):
        chunk = rows[lo : lo + ROW_CHUNK]
        shared = exact_matmul(P[chunk], good.T)
        out[lo : lo + len(chunk)] = (shared == 0).sum(axis=1)
    return out


@dataclass
class AvoidCount:
    count: int
    bound: Fraction
    passed: bool


def count_nonneg_avoiding(f: Weighting, T: Subspace) -> AvoidCount:
    """Nonnegative k-subspaces meeting the negative k-subspace T trivially."""
    n, q, k = f.n, f.q, T.dim
    if n < 3 * k:
        raise PreconditionError(f"need n >= 3k (got n={n}, k={k})")
    if subspace_weight(f, T) >= 0:
        raise PreconditionError("T must have negative weight")
    nonneg = b_vector(f, k).nonnegative
    count = int((_dims_against(n, q, k, T)[nonneg] == 0).sum())
    bound = bound_expression("nonnegT", n, k, q)
    return AvoidCount(count, bound, count >= bound)


def star_point(n: int, q: int, k: int, family_mask: np.ndarray) -> Subspace | None:
    """The point v if the family equals {S : v ⊂ S}, else None."""
    if family_mask.sum() != gaussian(n - 1, k - 1, q):
        return None
    G = geometry(n, q)
    common = np.flatnonzero(G.incidence(k)[family_mask].all(axis=0)) if family_mask.any() else []
    return G.points[int(common[0])] if len(common) else None


# -- lemma ledger ----------------------------------------------------------


def lemma_checks(f: Weighting, k: int) -> list[Check]:
    """Exhaustive ledger of the eigenvalue lemmas for one weighting."""
    n, q = f.n, f.q
    if not 1 <= k <= n - 1:
        raise PreconditionError("need 1 <= k <= n-1")
    b = b_vector(f, k)
    nonneg = b.nonnegative
    count = int(nonneg.sum())
    N1 = gaussian(n - 1, k - 1, q)
    A = highest_weight_A(f, k)
    bA = subspace_weight(f, A)
    dA = _dims_against(n, q, k, A)
    c0 = q ** (k * (k - 1)) * gaussian(n - k - 1, k - 1, q)
    out = [
        Check("bA_positive", "lem:highestweightintersection", bA, 0, ">"),
        # k = 1: only the top subspace meets it, so the bound is attained
        Check("highestweightintersection", "lem:highestweightintersection", int((nonneg & (dA > 0)).sum()), c0, ">" if k > 1 else ">="),
        Check("a0", "eq:a0", _frac(b, dA == 0), -c0 * bA, "=="),
        Check("flip", "eq:flip", _frac(b, dA > 0), c0 * bA, "=="),
    ]
    ck1 = q ** ((k - 1) ** 2) * bracket(k - 1, q) * gaussian(n - k, k - 1, q)
    bk1_lhs = bracket(k, q) * _frac(b, dA == 0) + q ** (k - 1) * _frac(b, dA == 1)
    out.append(Check("bk-1", "eq:bk-1", bk1_lhs, -ck1 * bA, "=="))
    a1_first = Fraction(q ** (k * (k - 1)) * bracket(k, q) * gaussian(n - k - 1, k - 1, q) - ck1, q ** (k - 1))
    a1 = c0 - q ** ((k - 1) * (k - 2)) * bracket(k - 1, q) * gaussian(n - k - 1, k - 2, q)
    out.append(Check("a1_forms", "eq:a1", a1_first, a1, "=="))
    out.append(Check("a1", "eq:a1", _frac(b, dA == 1), a1 * bA, "=="))
    if k < 2 or n < 2 * k - 1:
        return out

    hyp = count <= N1
    C = highest_weight_C(f, k, A)
    bC = subspace_weight(f, C)
    v = intersect(A, C)
    out.append(Check("packingweight", "eq:packingweight", bC, Fraction(a1, N1) * bA, ">=", hyp))
    out.append(Check("packing", "lem:packing", bC, bound_expression("packing", n, k, q) * bA, ">=", hyp))
    dC = _dims_against(n, q, k, C)
    out.append(Check("flipC", "eq:rinseandrepeat", _frac(b, dC > 0), c0 * bC, "=="))

    on_v = _contains_point(n, q, k, v)
    both = (dA > 0) & (dC > 0)
    small_count = int((both & ~on_v).sum())
    out.append(Check("small", "lem:small", small_count, bound_expression("small", n, k, q), "<="))
    if k == 2:
        out.append(Check("small_k2", "lem:small", small_count, q * q, "=="))
    pairs = _two_spaces_meeting_once(A, C, v)
    out.append(Check("additionalimprove", "eq:additionalimprove", pairs, (bracket(k, q) - 1) ** 2, "=="))
    alt = (bracket(k, q) - 1) * (bracket(2 * k - 2, q) - q**k * bracket(k - 2, q) - 1)
    out.append(Check("additionalimprove_forms", "eq:additionalimprove", alt, (bracket(k, q) - 1) ** 2, "=="))

    if n >= 3 * k:
        through_v = int((nonneg & on_v).sum())
        gen = bound_expression("lotson1", n, k, q)
        out.append(Check("improvonv", "eq:improvonv", _frac(b, on_v), gen / N1 * bA, ">=", hyp))
        out.append(Check("lotson1", "lem:lotson1", through_v, gen, ">=", hyp))
        if k == 2:
            out.append(Check("lotson1k2", "eq:lotson1k2", through_v, bound_expression("lotson1k2", n, k, q), ">=", hyp))
        out.append(nonnegT_check(f, k, b))
    return out


def _two_spaces_meeting_once(A: Subspace, C: Subspace, v: Subspace) -> int:
    """2-subspaces L of A ∨ C with L ∩ A and L ∩ C single points other than v."""
    G = geometry(A.n, A.q)
    span = join(A, C)
    pts = [P for P in G.points if contains(span, P.basis[0])]
    mA, mC, mv = G.mask(A), G.mask(C), G.mask(v)
    lines = {join(P, Q) for i, P in enumerate(pts) for Q in pts[i + 1 :]}
    hits = 0
    for L in lines:
        mL = G.mask(L)
        a, c = mL & mA, mL & mC
        if a.bit_count() == 1 and c.bit_count() == 1 and not (a | c) & mv:
            hits += 1
    return hits


def nonnegT_check(f: Weighting, k: int, b: BVector | None = None) -> Check:
    """Minimum over every negative T of the nonnegative subspaces meeting T trivially."""
    n, q = f.n, f.q
    b = b_vector(f, k) if b is None else b
    neg = np.flatnonzero(~b.nonnegative)
    bound = bound_expression("nonnegT", n, k, q)
    if not neg.size:
        return Check("nonnegT", "lem:nonnegT", 0, bound, ">=", False)
    counts = _trivial_counts(n, q, k, neg, b.nonnegative)
    return Check("nonnegT", "lem:nonnegT", int(counts.min()), bound, ">=", True)


# -- theorem -----------------------------------------------------------------


@dataclass
class TheoremReport:
    n: int
    q: int
    k: int
    count: int
    bound: int
    equality: bool
    star: Subspace | None
    ledger: list[Check]

    @property
    def passed(self) -> bool:
        return self.count >= self.bound and (not self.equality or self.star is not None) and all(
            c.passed for c in self.ledger
        )


def theorem_check_vec(f: Weighting, k: int, ledger: bool = True) -> TheoremReport:
    """Nonnegative count against gbin(n-1,k-1); star check at equality; proof ledger."""
    n, q = f.n, f.q
    if k < 1 or n < 3 * k:
        raise PreconditionError(f"the count theorem needs n >= 3k (got n={n}, k={k})")
    b = b_vector(f, k)
    nonneg = b.nonnegative
    count = int(nonneg.sum())
    N1 = gaussian(n - 1, k - 1, q)
    star = star_point(n, q, k, nonneg) if count == N1 else None
    checks = [Check("count", "thm:vecanalog", count, N1, ">=")]
    if count == N1:
        checks.append(Check("equality_star", "thm:vecanalog", int(star is not None), 1, "=="))
    if ledger:
        checks += _proof_ledger(f, k, b)
    return TheoremReport(n, q, k, count, N1, count == N1, star, checks)


def _proof_ledger(f: Weighting, k: int, b: BVector) -> list[Check]:
    n, q = f.n, f.q
    if k < 2:
        return []
    nonneg = b.nonnegative
    count = int(nonneg.sum())
    N1 = gaussian(n - 1, k - 1, q)
    A = highest_weight_A(f, k)
    v = intersect(A, highest_weight_C(f, k, A))
    on_v = _contains_point(n, q, k, v)
    negative_on_v = np.flatnonzero(on_v & ~nonneg)
    out = []
    # the final contradiction needs n >= 3k+1 (k >= 3) or n >= 7 (k = 2)
    if k == 2:
        out.append(Check("grandfinalek2", "eq:grandfinalek2", bound_expression("grandfinalek2", n, k, q), N1, ">", n >= 7))
    else:
        out.append(Check("grandfinale", "eq:grandfinale", bound_expression("grandfinale", n, k, q), N1, ">", n >= 3 * k + 1))
    if not negative_on_v.size:
        out.append(Check("all_on_v_nonneg", "sec:theproof", int(on_v.sum()), N1, "=="))
        return out
    hyp = count <= N1
    T_idx = int(negative_on_v[0])
    through_v = int((nonneg & on_v).sum())
    avoid_T = int(_trivial_counts(n, q, k, np.array([T_idx]), nonneg)[0])
    spacesonv = bound_expression("lotson1k2" if k == 2 else "lotson1", n, k, q)
    out += [
        Check("spacesonv", "eq:spacesonv", through_v, spacesonv, ">=", hyp),
        Check("disjointT", "eq:disjointT", avoid_T, bound_expression("nonnegT", n, k, q), ">="),
        Check("split", "sec:theproof", count, through_v + avoid_T, ">="),
    ]
    return out


# -- exploratory search --------------------------------------------------------


def two_value_weighting_vec(n: int, q: int, d: int) -> Weighting:
    """[n]-[d] on the points of the first d coordinates, -[d] elsewhere."""
    G = geometry(n, q)
    N, D = bracket(n, q), bracket(d, q)
    inside = [all(c == 0 for c in P.basis[0][d:]) for P in G.points]
    return Weighting(n, q, tuple(Fraction(N - D) if i else Fraction(-D) for i in inside))


def search_vec(n: int, q: int, k: int, trials: int = 100, seed=0) -> dict:
    """Nonnegative counts for the two-value weightings d = 1..n-1 and for
    ``trials`` random weightings; reports anything below gbin(n-1,k-1).

    Nothing is asserted: below the theorem's range the bound may fail.
    """
    if not 1 <= k <= n - 1:
        raise PreconditionError("need 1 <= k <= n-1")
    target = gaussian(n - 1, k - 1, q)
    rows = []
    for d in range(1, n):
        f = two_value_weighting_vec(n, q, d)
        rows.append({"kind": "two-value", "d": d, "count": int(b_vector(f, k).nonnegative.sum())})
    rng = _rng(seed)
    best = None
    for t in range(trials):
        f = random_weighting(n, q, rng)
        c = int(b_vector(f, k).nonnegative.sum())
        if best is None or c < best[0]:
            best = (c, t)
    if best is not None:
        rows.append({"kind": "random", "trial": best[1], "count": best[0]})
    return {
        "n": n,
        "q": q,
        "k": k,
        "target": target,
        "rows": rows,
        "below_target": [r for r in rows if r["count"] < target],
    }

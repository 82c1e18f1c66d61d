"""Zero-sum weightings on points (vector case) and on n numbers (set case).

Weights are exact rationals.  Internally every weighting is also kept as
an integer vector with a common positive denominator, so induced subspace
and subset sums are exact integer matrix-vector products.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .exact import exact_matmul
from .qcount import bracket
from .subsets import colex_subsets, set_incidence
from .subspace import Subspace, geometry, monic, point_vectors


def to_fraction(value) -> Fraction:
    """Parse an exact rational: int, Fraction, or a "num/den" string."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"inexact weight {value!r}; use an int or a 'num/den' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        if "." in value:
            raise ValueError(f"decimal weight {value!r} is inexact; use 'num/den'")
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {value!r}") from exc
    raise TypeError(f"unsupported weight type {type(value).__name__}")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _scale(values: Sequence[Fraction]) -> tuple[np.ndarray, int]:
    den = lcm(*(v.denominator for v in values)) if values else 1
    nums = [int(v * den) for v in values]
    if max((abs(x) for x in nums), default=0) < 2**40:
        return np.array(nums, dtype=np.int64), den
    return np.array(nums, dtype=object), den


def _validate_zero_sum(values: tuple[Fraction, ...]) -> None:
    if sum(values) != 0:
        raise ValueError(f"weights must sum to zero (sum is {sum(values)})")
    if not any(values):
        raise ValueError("weights must not all be zero")


@dataclass(frozen=True)
class Weighting:
    """Weights of the [n] points of F_q^n, indexed by canonical point order."""

    n: int
    q: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(to_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != bracket(self.n, self.q):
            raise ValueError(f"expected {bracket(self.n, self.q)} weights, got {len(vals)}")
        _validate_zero_sum(vals)

    @cached_property
    def scaled(self) -> tuple[np.ndarray, int]:
        return _scale(self.values)

    def __neg__(self) -> "Weighting":
        return Weighting(self.n, self.q, tuple(-v for v in self.values))

    def scale(self, c) -> "Weighting":
        c = to_fraction(c)
        return Weighting(self.n, self.q, tuple(c * v for v in self.values))

    def __getitem__(self, point) -> Fraction:
        G = geometry(self.n, self.q)
        if isinstance(point, Subspace):
            point = point.basis[0]
        return self.values[G.point_index(point)]


@dataclass(frozen=True)
class BVector:
    """Induced weights b_S of all k-subspaces (or k-subsets), canonical order.

    Exact value of entry i is ``numerators[i] / denominator``.
    """

    k: int
    numerators: np.ndarray
    denominator: int

    def __len__(self) -> int:
        return len(self.numerators)

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(int(self.numerators[i]), self.denominator)

    @property
    def values(self) -> list[Fraction]:
        return [Fraction(int(x), self.denominator) for x in self.numerators]

    @property
    def nonnegative(self) -> np.ndarray:
        return self.numerators >= 0


def subspace_weight(f: Weighting, S: Subspace) -> Fraction:
    if (S.n, S.q) != (f.n, f.q):
        raise ValueError("ambient mismatch between weighting and subspace")
    G = geometry(f.n, f.q)
    return sum((f.values[G.point_index(v)] for v in point_vectors(S)), Fraction(0))


def b_vector(f: Weighting, k: int) -> BVector:
    nums, den = f.scaled
    P = geometry(f.n, f.q).incidence(k)
    return BVector(k, exact_matmul(P, nums), den)


def star_weighting_vec(n: int, q: int, vhat) -> Weighting:
    """[n]-1 on the point ``vhat`` and -1 everywhere else."""
    G = geometry(n, q)
    v = vhat.basis[0] if isinstance(vhat, Subspace) else vhat
    idx = G.point_index(v)
    N = bracket(n, q)
    return Weighting(n, q, tuple(Fraction(N - 1) if i == idx else Fraction(-1) for i in range(N)))


def count_nonnegative_vec(f: Weighting, k: int, family: bool = False):
    """Number of k-subspaces with nonnegative weight (and the family)."""
    if not 0 <= k <= f.n:
        raise ValueError("need 0 <= k <= n")
    b = b_vector(f, k)
    mask = b.nonnegative
    count = int(mask.sum())
    if not family:
        return count
    subs = geometry(f.n, f.q).subspaces(k)
    return count, [subs[i] for i in np.flatnonzero(mask)]


def highest_weight_A(f: Weighting, k: int) -> Subspace:
    """A maximum-weight k-subspace, least canonical basis on ties."""
    b = b_vector(f, k)
    return geometry(f.n, f.q).subspaces(k)[int(np.argmax(b.numerators))]


def highest_weight_C(f: Weighting, k: int, A: Subspace) -> Subspace:
    """A maximum-weight k-subspace meeting A in exactly one point."""
    G = geometry(f.n, f.q)
    b = b_vector(f, k)
    dims = G.intersection_dims(G.incidence(k), G.incidence_row(A)[None, :])[:, 0]
    cand = np.flatnonzero(dims == 1)
    if not cand.size:
        raise ValueError(f"no {k}-subspace meets A in a single point (n={f.n} too small)")
    return G.subspaces(k)[int(cand[np.argmax(b.numerators[cand])])]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _random_zero_sum(length: int, rng, grid: int) -> list[Fraction]:
    rng = _rng(rng)
    while True:
        head = [Fraction(int(x), grid) for x in rng.integers(-grid, grid + 1, size=length - 1)]
        vals = head + [-sum(head, Fraction(0))]
        if any(vals):
            return vals


def random_weighting(n: int, q: int, rng=None, grid: int = 100) -> Weighting:
    """[n]-1 independent uniform values in {-1, ..., 1} on a 1/grid lattice,
    the last point balancing the sum."""
    return Weighting(n, q, tuple(_random_zero_sum(bracket(n, q), rng, grid)))


def perturbed_star_vec(n: int, q: int, vhat, rng=None, grid: int = 100) -> Weighting:
    """Star plus zero-sum noise small enough that no subspace changes sign."""
    star = star_weighting_vec(n, q, vhat)
    noise = _random_zero_sum(bracket(n, q), rng, grid)
    biggest = max(abs(x) for x in noise) or Fraction(1)
    # star weights are [n]-[k] or -[k]; each noisy sum moves by < [n]*eps
    eps = Fraction(1, 4 * bracket(n, q)) / biggest
    return Weighting(n, q, tuple(s + eps * e for s, e in zip(star.values, noise)))


# -- set case ------------------------------------------------------------------


@dataclass(frozen=True)
class SetWeighting:
    """n exact rationals, non-increasing, summing to zero."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(to_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        _validate_zero_sum(vals)
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("set weighting must be sorted non-increasing")

    @classmethod
    def from_values(cls, values: Iterable) -> "SetWeighting":
        return cls(tuple(sorted((to_fraction(v) for v in values), reverse=True)))

    @property
    def n(self) -> int:
        return len(self.values)

    @cached_property
    def scaled(self) -> tuple[np.ndarray, int]:
        return _scale(self.values)


def subset_sum(x: SetWeighting, subset: Iterable[int]) -> Fraction:
    return sum((x.values[i] for i in subset), Fraction(0))


def set_b_vector(x: SetWeighting, k: int) -> BVector:
    nums, den = x.scaled
    return BVector(k, exact_matmul(set_incidence(x.n, k), nums), den)


def star_weighting_set(n: int) -> SetWeighting:
    return SetWeighting((Fraction(n - 1),) + (Fraction(-1),) * (n - 1))


def count_nonnegative_set(x: SetWeighting, k: int, family: bool = False):
    if not 0 <= k <= x.n:
        raise ValueError("need 0 <= k <= n")
    mask = set_b_vector(x, k).nonnegative
    count = int(mask.sum())
    if not family:
        return count
    subs = colex_subsets(x.n, k)
    return count, [tuple(int(i) for i in subs[j]) for j in np.flatnonzero(mask)]


def A_set(k: int) -> tuple[int, ...]:
    """Indices of the k largest numbers, {x_1, ..., x_k}."""
    return tuple(range(k))


def C_set(k: int, n: int) -> tuple[int, ...]:
    """{x_1, x_{k+1}, ..., x_{2k-1}}: best k-subset meeting A_set in one element."""
    if n < 2 * k - 1:
        raise ValueError("C_set needs n >= 2k-1")
    return (0,) + tuple(range(k, 2 * k - 1))


def random_set_weighting(n: int, rng=None, grid: int = 100) -> SetWeighting:
    return SetWeighting.from_values(_random_zero_sum(n, rng, grid))


def perturbed_star_set(n: int, rng=None, grid: int = 100) -> SetWeighting:
    # star subset sums are n-k or -k; |noise| per subset < n*eps <= 1/4
    noise = _random_zero_sum(n, rng, grid)
    eps = Fraction(1, 4 * n) / (max(abs(e) for e in noise) or 1)
    star = star_weighting_set(n)
    return SetWeighting.from_values(s + eps * e for s, e in zip(star.values, noise))


# -- file formats -----------------------------------------------------------


def weighting_to_json(f: Weighting) -> dict:
    G = geometry(f.n, f.q)
    return {
        "q": f.q,
        "n": f.n,
        "weights": [{"point": list(P.basis[0]), "value": fraction_str(v)} for P, v in zip(G.points, f.values)],
    }


def weighting_from_json(doc: dict) -> Weighting:
    try:
        q, n, entries = int(doc["q"]), int(doc["n"]), doc["weights"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed weighting document: {exc}") from exc
    G = geometry(n, q)
    values: list[Fraction | None] = [None] * len(G.points)
    for entry in entries:
        pt = tuple(int(c) for c in entry["point"])
        if len(pt) != n or not any(pt) or any(not 0 <= c < q for c in pt):
            raise ValueError(f"bad point {list(pt)}")
        if monic(pt, q) != pt:
            raise ValueError(f"point {list(pt)} is not the monic representative")
        idx = G.point_index(pt)
        if values[idx] is not None:
            raise ValueError(f"point {list(pt)} listed twice")
        values[idx] = to_fraction(entry["value"])
    missing = [list(P.basis[0]) for P, v in zip(G.points, values) if v is None]
    if missing:
        raise ValueError(f"{len(missing)} points have no weight, e.g. {missing[0]}")
    return Weighting(n, q, tuple(values))


def set_weighting_to_json(x: SetWeighting) -> dict:
    return {"x": [fraction_str(v) for v in x.values]}


def set_weighting_from_json(doc: dict) -> SetWeighting:
    try:
        raw = doc["x"]
    except (KeyError, TypeError) as exc:
        raise ValueError("set weighting document needs an 'x' list") from exc
    return SetWeighting.from_values(raw)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

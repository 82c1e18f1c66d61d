"""k-subsets of {0, ..., n-1} in colexicographic order."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .qcount import binomial


@lru_cache(maxsize=None)
def colex_subsets(n: int, k: int) -> np.ndarray:
    """(binomial(n,k), k) array of sorted index tuples, colex order."""
    combos = sorted(itertools.combinations(range(n), k), key=lambda c: c[::-1])
    arr = np.array(combos, dtype=np.int64).reshape(len(combos), k)
    arr.setflags(write=False)
    return arr


def colex_rank(subset) -> int:
    return sum(binomial(int(c), i + 1) for i, c in enumerate(sorted(subset)))


def colex_ranks(arr: np.ndarray) -> np.ndarray:
    """Vectorised colex rank of each sorted row of ``arr``."""
    arr = np.asarray(arr, dtype=np.int64)
    if arr.shape[-1] == 0:
        return np.zeros(arr.shape[:-1], dtype=np.int64)
    top = int(arr.max()) + 1 if arr.size else 1
    table = np.array([[binomial(c, i + 1) for c in range(top)] for i in range(arr.shape[-1])], dtype=np.int64)
    return sum(table[i][arr[..., i]] for i in range(arr.shape[-1]))


@lru_cache(maxsize=None)
def set_incidence(n: int, k: int) -> np.ndarray:
    """0/1 matrix (binomial(n,k) x n): row S has ones on the elements of S."""
    subs = colex_subsets(n, k)
    M = np.zeros((len(subs), n), dtype=np.int64)
    if k:
        np.put_along_axis(M, subs, 1, axis=1)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def sub_ranks(n: int, k: int, j: int) -> np.ndarray:
    """For each k-subset (colex), the colex ranks of its j-subsets."""
    subs = colex_subsets(n, k)
    picks = list(itertools.combinations(range(k), j))
    if not picks:
        return np.zeros((len(subs), 0), dtype=np.int64)
    out = np.stack([colex_ranks(subs[:, list(p)]) for p in picks], axis=1)
    out.setflags(write=False)
    return out

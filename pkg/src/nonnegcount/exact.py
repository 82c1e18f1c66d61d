"""Overflow-free integer matrix products."""

from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


def _max_abs(a: np.ndarray) -> int:
    if a.dtype == object:
        return max((abs(int(x)) for x in np.ravel(a)), default=0)
    return int(np.max(np.abs(a))) if a.size else 0


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Integer ``A @ B``, computed exactly.

    Products whose partial sums provably stay below 2**53 go through
    float64 (BLAS); then int64 below 2**62; otherwise Python integers.
    """
    A, B = np.asarray(A), np.asarray(B)
    inner = A.shape[-1]
    if A.size == 0 or B.size == 0:
        return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    bound = _max_abs(A) * _max_abs(B) * inner
    if bound < _FLOAT_EXACT:
        return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
    if bound < _INT64_SAFE:
        return A.astype(np.int64) @ B.astype(np.int64)
    return A.astype(object) @ B.astype(object)

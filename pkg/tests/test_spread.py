import dataclasses
import itertools

import numpy as np
import pytest

from nonnegcount import gf
from nonnegcount.errors import CapExceeded, PreconditionError
from nonnegcount.qcount import bracket
from nonnegcount.spread import (
    PartialSpread,
    build_partial_spread,
    field_reduction_spread,
    multiplication_matrices,
    partial_spread_step,
    spread_to_json,
    verify_partial_spread,
)
from nonnegcount.subspace import (
    canonicalize,
    contains,
    coordinate_subspace,
    enumerate_subspaces,
    geometry,
    intersect,
    random_invertible,
    sample_stabilizer,
)


def _points_cover(n, q, blocks):
    G = geometry(n, q)
    seen = [0] * len(G.points)
    for B in blocks:
        for i, P in enumerate(G.points):
            if contains(B, P.basis[0]):
                seen[i] += 1
    return seen


@pytest.mark.parametrize("s,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (2, 4)])
def test_field_reduction_spread_partitions_points(s, q):
    blocks = field_reduction_spread(s, q)
    assert len(blocks) == q**s + 1
    assert all(B.dim == s for B in blocks)
    assert blocks[0] == coordinate_subspace(2 * s, q, s)
    assert _points_cover(2 * s, q, blocks) == [1] * bracket(2 * s, q)


def test_multiplication_matrices_form_a_field():
    s, q = 3, 2
    F = gf.make_field(q)
    Ms = multiplication_matrices(s, q)
    assert len(set(Ms)) == q**s
    assert Ms[0] == tuple((0,) * s for _ in range(s)) and Ms[1] == tuple(map(tuple, gf.identity(s)))
    as_lists = [list(map(list, M)) for M in Ms]
    for A, B in itertools.product(as_lists, repeat=2):
        prod = tuple(map(tuple, gf.matmul(A, B, F)))
        assert prod in Ms
        assert prod == tuple(map(tuple, gf.matmul(B, A, F)))
    assert all(gf.is_invertible(M, F) for M in as_lists[1:])


def test_extension_cap():
    with pytest.raises(CapExceeded):
        multiplication_matrices(17, 2)
    with pytest.raises(PreconditionError):
        multiplication_matrices(0, 2)


def test_step_with_w_the_whole_space():
    k, q = 2, 2
    U = coordinate_subspace(2 * k, q, k)
    W = coordinate_subspace(2 * k, q, 2 * k)
    got = partial_spread_step(W, U)
    assert set(got) == set(field_reduction_spread(k, q)[1:])


@pytest.mark.parametrize("n,q,s,t", [(5, 2, 3, 2), (6, 2, 3, 3), (7, 2, 4, 3), (5, 3, 3, 2), (8, 2, 5, 3), (6, 2, 4, 1)])
def test_step_partitions_w_minus_u(n, q, s, t):
    rng = np.random.default_rng(n * 10 + s)
    P = random_invertible(n, q, rng)
    U = canonicalize(P[:s], q, n)
    W = canonicalize(P[: s + t], q, n)
    members = partial_spread_step(W, U)
    assert len(members) == (bracket(s + t, q) - bracket(s, q)) // bracket(t, q)
    for S in members:
        assert S.dim == t and contains(W, S) and intersect(S, U).dim == 0
    G = geometry(n, q)
    cover = _points_cover(n, q, members)
    for i, pt in enumerate(G.points):
        v = pt.basis[0]
        want = 1 if contains(W, v) and not contains(U, v) else 0
        assert cover[i] == want


def test_step_example_s3_t2():
    U = coordinate_subspace(5, 2, 3)
    W = coordinate_subspace(5, 2, 5)
    assert len(partial_spread_step(W, U)) == 8


def test_step_errors():
    U = coordinate_subspace(6, 2, 2)
    with pytest.raises(PreconditionError):
        partial_spread_step(coordinate_subspace(6, 2, 5), U)
    other = canonicalize([[0, 0, 0, 0, 1, 0]], 2)
    with pytest.raises(PreconditionError):
        partial_spread_step(coordinate_subspace(6, 2, 3), other)
    assert partial_spread_step(U, U) == []


CONFIGS = [
    (q, n, k)
    for q in (2, 3)
    for n in (4, 5, 6, 7)
    for k in (2, 3)
    if n >= 2 * k
]


@pytest.mark.parametrize("q,n,k", CONFIGS)
def test_build_and_verify(q, n, k):
    r = n % k
    rng = np.random.default_rng(q * 100 + n * 10 + k)
    U = canonicalize(random_invertible(n, q, rng)[: k + r], q, n)
    ps = build_partial_spread(n, k, U)
    rep = verify_partial_spread(ps)
    assert rep.passed, rep.violations
    assert rep.size == ps.expected_size() == q ** (k + r) * bracket(n - k - r, q) // bracket(k, q)
    assert rep.size * bracket(k, q) == bracket(n, q) - bracket(k + r, q)


def test_size_examples():
    sizes = {}
    for n, k in [(4, 2), (5, 2), (6, 2)]:
        U = coordinate_subspace(n, 2, k + n % k)
        sizes[(n, k)] = len(build_partial_spread(n, k, U).blocks)
    assert sizes == {(4, 2): 4, (5, 2): 8, (6, 2): 20}


def test_build_errors():
    with pytest.raises(PreconditionError):
        build_partial_spread(6, 2, coordinate_subspace(6, 2, 3))
    with pytest.raises(PreconditionError):
        build_partial_spread(3, 2, coordinate_subspace(3, 2, 3))
    with pytest.raises(PreconditionError):
        build_partial_spread(4, 0, coordinate_subspace(4, 2, 0))


def test_verify_catches_mutations():
    n, k, q = 5, 2, 2
    U = coordinate_subspace(n, q, 3)
    ps = build_partial_spread(n, k, U)
    meets_u = next(S for S in enumerate_subspaces(n, k, q) if intersect(S, U).dim == 1)
    bad = dataclasses.replace(ps, blocks=(meets_u,) + ps.blocks[1:])
    rep = verify_partial_spread(bad)
    assert not rep.passed and "meets the avoided subspace" in rep.first_violation
    rep = verify_partial_spread(dataclasses.replace(ps, blocks=ps.blocks[1:]))
    assert not rep.passed and any("uncovered" in v for v in rep.violations)
    rep = verify_partial_spread(dataclasses.replace(ps, blocks=ps.blocks + ps.blocks[:1]))
    assert any("shares a point" in v for v in rep.violations)
    line = coordinate_subspace(n, q, 1)
    rep = verify_partial_spread(dataclasses.replace(ps, blocks=(line,) + ps.blocks[1:]))
    assert any("dimension" in v for v in rep.violations)


@pytest.mark.parametrize("q,n,k", [(2, 5, 2), (2, 6, 3), (3, 5, 2), (2, 7, 2)])
def test_stabilizer_images_are_partial_spreads(q, n, k):
    U = coordinate_subspace(n, q, k + n % k)
    ps = build_partial_spread(n, k, U)
    rng = np.random.default_rng(0)
    for _ in range(20):
        pi = sample_stabilizer(U, rng)
        moved = ps.mapped(pi)
        assert moved.avoided == U
        assert verify_partial_spread(moved).passed


def test_spread_json_shape():
    ps = build_partial_spread(4, 2, coordinate_subspace(4, 2, 2))
    doc = spread_to_json(ps)
    assert doc["avoided"] == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert len(doc["blocks"]) == 4 and all(len(b) == 2 for b in doc["blocks"])
    assert isinstance(ps, PartialSpread)

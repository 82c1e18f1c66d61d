import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from nonnegcount import gf
from nonnegcount.qcount import flag_count, gaussian
from nonnegcount.subspace import (
    LinearMap,
    apply_map,
    canonicalize,
    complete_basis,
    contains,
    coordinate_subspace,
    enumerate_flags,
    enumerate_subspaces,
    geometry,
    intersect,
    is_rref,
    join,
    points,
    random_invertible,
    sample_stabilizer,
    subspace_range,
    whole_space,
    zero_subspace,
)


def test_canonicalize_examples():
    S = canonicalize([[1, 0], [0, 1]], 2)
    assert S.dim == 2 and S.basis == ((1, 0), (0, 1))
    S = canonicalize([[1, 1, 0], [0, 0, 0]], 2)
    assert S.dim == 1 and S.basis == ((1, 1, 0),)
    assert canonicalize([[1, 1], [1, 0]], 2).basis == ((1, 0), (0, 1))
    assert canonicalize([[0, 0, 0]], 2).dim == 0


def test_canonicalize_rejects_bad_entries():
    with pytest.raises(ValueError):
        canonicalize([[2, 0]], 2)
    with pytest.raises(ValueError):
        canonicalize([[1, 0], [1]], 2)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 5), st.data())
def test_canonical_form_ignores_choice_of_basis(q, n, data):
    k = data.draw(st.integers(0, n))
    subs = list(enumerate_subspaces(n, k, q))
    S = subs[data.draw(st.integers(0, len(subs) - 1))]
    F = gf.make_field(q)
    mix = random_invertible(k, q, data.draw(st.integers(0, 10**6)))
    rows = gf.matmul(mix, S.basis, F) if k else []
    assert canonicalize(rows, q, n) == S
    assert is_rref(S)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_enumeration_counts(q):
    for n in range(0, 7 if q < 4 else 5):
        for k in range(n + 1):
            subs = list(enumerate_subspaces(n, k, q))
            assert len(subs) == gaussian(n, k, q)
            assert len(set(subs)) == len(subs)
            assert [S.basis for S in subs] == sorted(S.basis for S in subs)


def test_enumeration_examples_and_errors():
    assert len(list(enumerate_subspaces(2, 1, 2))) == 3
    assert len(list(enumerate_subspaces(4, 2, 2))) == 35
    assert list(enumerate_subspaces(3, 3, 2)) == [whole_space(3, 2)]
    with pytest.raises(ValueError):
        list(enumerate_subspaces(2, 3, 2))


def test_subspace_range_partitions_the_enumeration():
    full = list(enumerate_subspaces(5, 2, 2))
    shards = [list(subspace_range(5, 2, 2, a, a + 40)) for a in range(0, len(full), 40)]
    assert sum(shards, []) == full


def test_dimension_formula_on_all_pairs_of_f2_4():
    subs = [S for k in range(5) for S in enumerate_subspaces(4, k, 2)]
    for A in subs:
        for B in subs:
            I, J = intersect(A, B), join(A, B)
            assert I.dim + J.dim == A.dim + B.dim
            assert contains(A, I) and contains(B, I) and contains(J, A) and contains(J, B)


def test_meet_and_join_example():
    e = gf.identity(4)
    A, B = canonicalize([e[0], e[1]], 2), canonicalize([e[0], e[2]], 2)
    assert intersect(A, B) == canonicalize([e[0]], 2)
    assert join(A, B).dim == 3
    assert intersect(A, A) == A


def test_ambient_mismatch():
    with pytest.raises(ValueError):
        intersect(whole_space(3, 2), whole_space(4, 2))
    with pytest.raises(ValueError):
        join(whole_space(3, 2), whole_space(3, 3))


@pytest.mark.parametrize("q,d", [(2, 2), (3, 2), (2, 3), (4, 2)])
def test_points_count(q, d):
    S = coordinate_subspace(5, q, d)
    P = points(S)
    assert len(P) == (q**d - 1) // (q - 1)
    assert all(contains(S, p) for p in P)


def test_flag_examples():
    e = gf.identity(6)
    c4, a4 = canonicalize([e[0][:4]], 2), canonicalize([e[1][:4]], 2)
    assert len(list(enumerate_flags(4, 2, c4, a4, 2))) == 6
    c6, a6 = canonicalize([e[0]], 2), canonicalize([e[1], e[2]], 2)
    assert len(list(enumerate_flags(6, 2, c6, a6, 2))) == 28
    z = zero_subspace(4, 2)
    assert set(enumerate_flags(4, 2, z, z, 2)) == set(enumerate_subspaces(4, 2, 2))
    with pytest.raises(ValueError):
        list(enumerate_flags(4, 2, c4, c4, 2))


def test_flags_match_filtered_enumeration_q2():
    # contain/avoid are cut from a random frame, so the check is not coordinate-aligned
    rng = np.random.default_rng(3)
    for n in range(1, 6):
        P = random_invertible(n, 2, rng)
        for i, f in itertools.product(range(n + 1), repeat=2):
            if i + f > n:
                continue
            C = canonicalize(P[:i], 2, n)
            Av = canonicalize(P[i : i + f], 2, n)
            for e in range(n + 1):
                got = set(enumerate_flags(n, 2, C, Av, e))
                want = {T for T in enumerate_subspaces(n, e, 2) if contains(T, C) and intersect(T, Av).dim == 0}
                assert got == want
                if i <= e <= n - f:
                    assert len(got) == flag_count(n, i, f, e, 2)


def test_apply_map_examples():
    n, q = 3, 2
    S = coordinate_subspace(n, q, 2)
    assert apply_map(LinearMap.identity(n, q), S) == S
    swap = LinearMap(n, q, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
    e1 = canonicalize([[1, 0, 0]], q)
    assert apply_map(swap, e1) == canonicalize([[0, 1, 0]], q)
    pi = LinearMap(n, q, tuple(map(tuple, random_invertible(n, q, 0))))
    T = canonicalize([[1, 1, 0]], q)
    assert apply_map(pi.inverse(), apply_map(pi, T)) == T


def test_linear_map_must_be_invertible():
    with pytest.raises(ValueError):
        LinearMap(2, 2, ((1, 1), (1, 1)))


@pytest.mark.parametrize("n,q,k", [(3, 2, 1), (4, 2, 2), (3, 3, 1)])
def test_apply_map_is_a_bijection(n, q, k):
    subs = list(enumerate_subspaces(n, k, q))
    for seed in range(5):
        pi = sample_stabilizer(whole_space(n, q), seed)
        assert len({apply_map(pi, S) for S in subs}) == len(subs)


@pytest.mark.parametrize("n,q,d", [(3, 2, 1), (4, 2, 2), (4, 3, 1), (5, 2, 3), (4, 4, 2)])
def test_stabilizer_fixes_u(n, q, d):
    rng = np.random.default_rng(7)
    U = canonicalize(random_invertible(n, q, rng)[:d], q, n)
    for _ in range(20):
        pi = sample_stabilizer(U, rng)
        assert apply_map(pi, U) == U


def test_stabilizer_is_deterministic_for_a_seed():
    U = coordinate_subspace(4, 3, 2)
    assert sample_stabilizer(U, 11) == sample_stabilizer(U, 11)


def test_stabilizer_is_uniform_chi_square():
    # q=2, n=3, dim U = 1: |stabilizer| = |GL(1,2)| * |GL(2,2)| * 2^2 = 24
    q, n = 2, 3
    F = gf.make_field(q)
    U = canonicalize([[1, 1, 0]], q)
    group = []
    for entries in itertools.product(range(q), repeat=n * n):
        M = [list(entries[i * n : (i + 1) * n]) for i in range(n)]
        if gf.is_invertible(M, F) and apply_map(LinearMap(n, q, tuple(map(tuple, M))), U) == U:
            group.append(tuple(map(tuple, M)))
    assert len(group) == 24
    rng = np.random.default_rng(2024)
    draws = Counter(sample_stabilizer(U, rng).matrix for _ in range(10_000))
    assert set(draws) <= set(group)
    observed = [draws[g] for g in group]
    assert chisquare(observed).pvalue > 1e-3


def test_complete_basis_puts_u_first():
    U = canonicalize([[0, 1, 1, 0], [1, 0, 0, 1]], 2)
    P = complete_basis(U)
    assert canonicalize(P[: U.dim], 2) == U
    assert gf.is_invertible(P, gf.make_field(2))


def test_geometry_caches_and_masks():
    G = geometry(4, 2)
    assert G is geometry(4, 2)
    assert len(G.points) == 15
    S = coordinate_subspace(4, 2, 2)
    assert bin(G.mask(S)).count("1") == 3
    inc = G.incidence(2)
    assert inc.shape == (35, 15) and set(inc.sum(axis=1)) == {3}

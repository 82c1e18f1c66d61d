import numpy as np
import pytest

from nonnegcount import bose_mesner as bm
from nonnegcount.errors import CapExceeded, PreconditionError
from nonnegcount.qcount import flag_count, gaussian
from nonnegcount.subspace import geometry, intersect
from nonnegcount.weights import SetWeighting, random_set_weighting, random_weighting


def test_inclusion_and_kneser_examples():
    assert np.array_equal(bm.build_inclusion(4, 2, 2, 2), np.eye(35, dtype=bool))
    W12 = bm.build_inclusion(4, 1, 2, 2)
    assert W12.shape == (15, 35) and set(W12.sum(axis=0)) == {3}
    K = bm.build_kneser(4, 2, 2, 2)
    assert set(K.sum(axis=1)) == {flag_count(4, 0, 2, 2, 2)} == {16}
    assert np.array_equal(bm.build_inclusion(6, 2, 2), np.eye(15, dtype=bool))


def test_inclusion_against_direct_containment():
    G = geometry(4, 2)
    W = bm.build_inclusion(4, 1, 3, 2)
    for i, P in enumerate(G.subspaces(1)):
        for j, S in enumerate(G.subspaces(3)):
            assert W[i, j] == (intersect(P, S) == P)


@pytest.mark.parametrize("q", [2, 3, None])
def test_column_sums_of_inclusion(q):
    n = 5 if q else 8
    for k in range(1, 3):
        for j in range(0, k + 1):
            W = bm.build_inclusion(n, j, k, q)
            assert set(W.sum(axis=0)) == {bm.gb(k, j, q)}


def test_bose_mesner_examples():
    assert np.all(bm.build_bose_mesner(4, 0, 2, 2) == 1)
    B = bm.build_bose_mesner(4, 2, 2, 2)
    assert np.all(np.diag(B) == 0)
    dims = bm.intersection_dims(4, 2, 2)
    assert np.all(B[dims == 0] == 1)


@pytest.mark.parametrize("q,n,k", [(q, n, k) for q in (2, 3) for n in range(2, 6) for k in (1, 2) if k <= n])
def test_product_equals_closed_form_vector(q, n, k):
    for j in range(0, k + 1):
        assert np.array_equal(bm.build_bose_mesner(n, j, k, q), bm.bose_mesner_closed_form(n, j, k, q))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 11) for k in (1, 2, 3) if k <= n])
def test_product_equals_closed_form_set(n, k):
    for j in range(0, k + 1):
        assert np.array_equal(bm.build_bose_mesner(n, j, k), bm.bose_mesner_closed_form(n, j, k))


def test_bk_is_symmetric():
    for q, n, k in [(2, 4, 2), (3, 4, 2), (None, 8, 3), (2, 5, 2)]:
        B = bm.build_bose_mesner(n, k, k, q)
        assert np.array_equal(B, B.T)


def test_eigenvalue_examples():
    assert bm.eigenvalue(4, 2, 1, 2) == -6
    assert bm.eigenvalue(5, 2, 2, 2) == -12
    assert bm.eigenvalue(6, 2, 1) == -4
    assert bm.eigenvalue(6, 2, 2) == -3
    assert bm.eigenvalue(5, 2, 0, 2) == 0


def test_eigenvector_vector_and_set():
    f = random_weighting(4, 2, 1)
    rep = bm.verify_eigenvector_vec(f, 2, 1)
    assert rep.passed and rep.eigenvalue == -6
    x = SetWeighting.from_values([1, 0, 0, 0, 0, -1])
    assert bm.verify_eigenvector_set(x, 2, 1).passed
    assert bm.verify_eigenvector_vec(random_weighting(5, 2, 3), 2, 0).passed


def test_eigenvector_batch_and_mixed_batch():
    rng = np.random.default_rng(0)
    fs = [random_weighting(5, 2, rng) for _ in range(10)]
    assert all(r.passed for r in bm.verify_eigenvector_batch(fs, 2, 2))
    assert bm.verify_eigenvector_batch([], 2, 1) == []
    with pytest.raises(ValueError):
        bm.verify_eigenvector_batch([fs[0], random_weighting(4, 2, rng)], 2, 1)


def test_eigenvector_detects_a_wrong_vector():
    f = random_weighting(4, 2, 2)
    rep = bm.verify_eigenvector_vec(f, 2, 1)
    b = rep.rhs // rep.eigenvalue
    b2 = b.copy()
    b2[0] += 1
    lhs, _ = bm._bj_times(4, 1, 2, 2, b2, bm.MATRIX_CAP)
    assert not np.array_equal(lhs, rep.eigenvalue * b2)


def test_row_path_agrees_with_materialized():
    rng = np.random.default_rng(4)
    f = random_weighting(5, 2, rng)
    x = random_set_weighting(9, rng)
    for w, k in [(f, 2), (x, 3)]:
        for j in range(1, k + 1):
            full = bm.verify_eigenvector_batch([w], k, j)[0]
            small = bm.verify_eigenvector_batch([w], k, j, cap=500)[0]
            assert full.method == "materialized" and small.method == "closed-form"
            assert small.passed and np.array_equal(full.lhs, small.lhs)


def test_caps():
    with pytest.raises(CapExceeded):
        bm.build_bose_mesner(20, 2, 5, 2)
    with pytest.raises(CapExceeded):
        bm.verify_eigenvector_vec(random_weighting(8, 2, 0), 4, 1, cap=10)
    with pytest.raises(PreconditionError):
        bm.build_inclusion(4, 3, 2, 2)


def test_intermediate_identities():
    rng = np.random.default_rng(8)
    for _ in range(20):
        assert bm.verify_intermediate_identities(random_weighting(5, 2, rng), 2, 2).passed
    assert bm.verify_intermediate_identities(random_weighting(4, 2, rng), 2, 1).passed
    for k in (1, 2, 3):
        for j in range(1, k + 1):
            assert bm.verify_intermediate_identities(random_set_weighting(9, rng), k, j).passed


def test_union_rows_spot_check():
    # W_jk W_1k^T at q=2, n=4, j=1, k=2
    W = bm.build_inclusion(4, 1, 2, 2).astype(int)
    W1 = bm.build_inclusion(4, 1, 2, 2).astype(int)
    prod = W @ W1.T
    assert set(np.diag(prod)) == {gaussian(3, 1, 2)}
    off = prod[~np.eye(15, dtype=bool)]
    assert set(off) == {gaussian(2, 0, 2)}

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from wavecluster.cluster import (Dendrogram, DistanceMatrix, Merge, correlation_distance, cut,
                                 distance_matrix, pairing_purity, parse_variant, ward_linkage)
from wavecluster.prep import DataError

from oracles import pearson, ward_from_scratch


def random_matrix(rng, n, ties=False):
    a = rng.integers(1, 4, size=(n, n)).astype(float) if ties else rng.random((n, n)) * 2
    d = np.triu(a, 1)
    return d + d.T


def test_correlation_distance_examples():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert correlation_distance(x, x) == pytest.approx(0.0, abs=1e-15)
    assert correlation_distance(x, -x) == pytest.approx(2.0, abs=1e-15)
    y = [1.0, 3.0, 2.0, 4.0]
    assert 1 - pearson(list(x), y) == pytest.approx(0.2, abs=1e-15)
    assert correlation_distance(x, y) == pytest.approx(0.2, abs=1e-14)


def test_correlation_distance_errors():
    with pytest.raises(DataError):
        correlation_distance([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        correlation_distance([1, 2, 3], [1, 2])


@settings(max_examples=50, deadline=None)
# offsets far larger than the scaled signal cancel digits in any implementation
@given(seed=st.integers(0, 10**6), a=st.floats(0.1, 100), b=st.floats(-10, 10))
def test_correlation_distance_affine_invariant(seed, a, b):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=40), rng.normal(size=40)
    assert abs(correlation_distance(a * x + b, y) - correlation_distance(x, y)) < 1e-12


def test_distance_matrix_examples():
    s = np.array([1.0, 5.0, 2.0, 8.0])
    dm = distance_matrix([("a", s), ("b", s.copy())])
    assert_allclose(dm.d, np.zeros((2, 2)), atol=1e-15)
    dm = distance_matrix({"a": s, "b": s ** 2, "c": -s})
    assert dm.d[0, 2] == pytest.approx(2.0)
    assert dm.labels == ("a", "b", "c")


def test_distance_matrix_brute_force():
    rng = np.random.default_rng(3)
    series = [(i, rng.normal(size=30)) for i in range(10)]
    dm = distance_matrix(series)
    for i in range(10):
        for j in range(10):
            expected = 0.0 if i == j else 1 - pearson(list(series[i][1]), list(series[j][1]))
            assert dm.d[i, j] == pytest.approx(expected, abs=1e-12)
    assert np.all(dm.d >= 0) and np.all(dm.d <= 2)


def test_distance_matrix_validation():
    with pytest.raises(ValueError):
        distance_matrix([("a", [1, 2, 3])])
    with pytest.raises(ValueError):
        distance_matrix([("a", [1, 2, 3]), ("b", [1, 2])])
    with pytest.raises(ValueError):
        DistanceMatrix((0, 1), np.array([[0, 1], [2, 0]]))
    with pytest.raises(ValueError):
        DistanceMatrix((0, 1), np.array([[1, 1], [1, 0]]))


def test_ward_two_leaves():
    dend = ward_linkage(np.array([[0, 0.7], [0.7, 0]]))
    assert dend.merges == (Merge(0, 1, 0.7, 2),)


def test_ward_three_leaf_hand_example():
    d = np.array([[0, 1, 5], [1, 0, 5], [5, 5, 0]], dtype=float)
    dend = ward_linkage(d)
    assert dend.merges[0] == Merge(0, 1, 1.0, 2)
    m = dend.merges[1]
    assert (m.left, m.right, m.size) == (2, 3, 3)
    assert m.height == pytest.approx(math.sqrt(33), abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("ties", [False, True])
def test_ward_matches_naive_oracle(seed, ties):
    rng = np.random.default_rng(seed)
    d = random_matrix(rng, 8, ties)
    got = ward_linkage(d).merges
    want = ward_from_scratch(d)
    assert [(m.left, m.right, m.size) for m in got] == [(l, r, s) for l, r, _, s in want]
    assert_allclose([m.height for m in got], [h for _, _, h, _ in want], atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_ward_heights_match_scipy(seed):
    hierarchy = pytest.importorskip("scipy.cluster.hierarchy")
    from scipy.spatial.distance import squareform
    d = random_matrix(np.random.default_rng(100 + seed), 9)
    Z = hierarchy.linkage(squareform(d), method="ward")
    assert_allclose([m.height for m in ward_linkage(d).merges], Z[:, 2], atol=1e-12)


def test_ward_all_ties_lexicographic():
    d = np.ones((4, 4)) - np.eye(4)
    pairs = [(m.left, m.right) for m in ward_linkage(d).merges]
    assert pairs[0] == (0, 1)
    assert pairs[1] == (2, 3)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 12))
def test_dendrogram_invariants(seed, n):
    d = random_matrix(np.random.default_rng(seed), n)
    dend = ward_linkage(d)
    heights = [m.height for m in dend.merges]
    assert all(b >= a - 1e-12 for a, b in zip(heights, heights[1:]))
    sizes = {i: 1 for i in range(n)}
    used = []
    for k, m in enumerate(dend.merges):
        assert m.size == sizes[m.left] + sizes[m.right]
        sizes[n + k] = m.size
        used += [m.left, m.right]
    assert sorted(used) == list(range(2 * n - 2))
    for k in range(1, n + 1):
        assert len(set(cut(dend, k))) == k


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_ward_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    n = 10
    d = random_matrix(rng, n)
    perm = rng.permutation(n)
    a, b = ward_linkage(d), ward_linkage(d[np.ix_(perm, perm)])
    assert_allclose(sorted(m.height for m in a.merges), sorted(m.height for m in b.merges),
                    atol=1e-12)
    sites = [i // 2 for i in range(n)]
    assert pairing_purity(a, sites) == pairing_purity(b, [sites[p] for p in perm])


def test_cut_examples():
    d = np.array([[0, 1, 5], [1, 0, 5], [5, 5, 0]], dtype=float)
    dend = ward_linkage(d)
    assert cut(dend, 1).tolist() == [0, 0, 0]
    assert cut(dend, 3).tolist() == [0, 1, 2]
    assert cut(dend, 2).tolist() == [0, 0, 1]
    with pytest.raises(ValueError):
        cut(dend, 4)
    with pytest.raises(ValueError):
        cut(dend, 0)


def _dend(n, pairs):
    sizes = {i: 1 for i in range(n)}
    merges = []
    for k, (l, r) in enumerate(pairs):
        sizes[n + k] = sizes[l] + sizes[r]
        merges.append(Merge(l, r, float(k + 1), sizes[n + k]))
    return Dendrogram(n, tuple(merges))


SITES = ["a", "a", "b", "b", "c", "c", "d", "d", "e", "e"]


def test_purity_all_paired():
    dend = _dend(10, [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13), (14, 15),
                      (16, 17)])
    assert pairing_purity(dend, SITES) == 1.0


def test_purity_none_paired():
    dend = _dend(10, [(1, 2), (3, 4), (5, 6), (7, 8), (0, 9), (10, 11), (12, 13), (14, 15),
                      (16, 17)])
    assert pairing_purity(dend, SITES) == 0.0


def test_purity_three_of_five():
    # a, b, c pair first; d and e leaves cross over
    dend = _dend(10, [(0, 1), (2, 3), (4, 5), (6, 8), (7, 9), (10, 11), (12, 13), (14, 15),
                      (16, 17)])
    assert pairing_purity(dend, SITES) == pytest.approx(0.6)
    assert pairing_purity(dend, dict(enumerate(SITES))) == pytest.approx(0.6)


def test_purity_requires_pairs():
    dend = _dend(3, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        pairing_purity(dend, ["a", "a", "a"])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_purity_takes_fifths(seed):
    dend = ward_linkage(random_matrix(np.random.default_rng(seed), 10))
    p = pairing_purity(dend, SITES)
    assert any(abs(p - k / 5) < 1e-12 for k in range(6))


def test_dendrogram_exports():
    d = np.array([[0, 1, 5], [1, 0, 5], [5, 5, 0]], dtype=float)
    dend = ward_linkage(DistanceMatrix(("A(I)", "A(S)", "B(I)"), d))
    obj = json.loads(dend.to_json())
    assert obj["merges"][0] == {"left_id": 0, "right_id": 1, "height": 1.0, "size": 2}
    assert Dendrogram.from_dict(obj) == dend
    nwk = dend.to_newick()
    assert nwk == "('B(I)':{0!r},('A(I)':1.0,'A(S)':1.0):{1!r});".format(
        math.sqrt(33), math.sqrt(33) - 1.0)
    assert dend.leaf_order() == [2, 0, 1]


@pytest.mark.parametrize("variant, parsed", [("raw", ("smooth", 0)), ("S2", ("smooth", 2)),
                                             ("coeff:cD1", ("coeff", "cD1")),
                                             ("coeff:cA3", ("coeff", "cA3"))])
def test_parse_variant(variant, parsed):
    assert parse_variant(variant, 3) == parsed


@pytest.mark.parametrize("variant", ["S4", "S0", "coeff:cA2", "coeff:cD4", "smooth", ""])
def test_parse_variant_rejects(variant):
    with pytest.raises(ValueError):
        parse_variant(variant, 3)

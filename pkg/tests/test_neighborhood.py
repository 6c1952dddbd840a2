import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from loosmooth import (
    default_bandwidth,
    full_twohop,
    loo_neighborhood,
    loo_neighborhoods,
    loo_twohop,
    undersmooth_bandwidth,
    zlz_neighborhood,
)
from loosmooth.twohop import loo_distance_counts
from loosmooth.neighborhood import (
    check_bandwidth,
    loo_neighborhoods_for_column,
    loo_row_distance_counts,
    row_neighborhoods,
    select_smallest,
    zlz_neighborhoods,
)


def test_default_bandwidth_values():
    assert default_bandwidth(500) == 83
    assert default_bandwidth(100) == 32
    assert 2 <= default_bandwidth(8) <= 6
    with pytest.raises(ValueError):
        default_bandwidth(7)


def test_undersmooth_bandwidth():
    assert undersmooth_bandwidth(500) == int(np.floor(np.sqrt(500) / np.log(500)))
    assert undersmooth_bandwidth(8) == 2


def test_check_bandwidth():
    assert check_bandwidth(4, 10) == 4
    for bad in (1, 9, 2.5, True):
        with pytest.raises(ValueError):
            check_bandwidth(bad, 10)


def test_empty_graph_picks_smallest_indices():
    A = np.zeros((9, 9), dtype=np.int8)
    view = loo_twohop(A, full_twohop(A), 1)
    nb = loo_neighborhood(view, 3, 4)
    np.testing.assert_array_equal(nb.members, [0, 2, 4, 5])
    assert nb.anchor == 3 and nb.excluded == 1 and len(nb) == 4


def test_loo_neighborhood_matches_sort_oracle(rng):
    n = 10
    A = oracles.random_graph(n, 0.5, rng)
    TH = full_twohop(A)
    for j in range(n):
        view = loo_twohop(A, TH, j)
        for i in range(n):
            if i == j:
                continue
            for h in range(2, n - 1):
                got = loo_neighborhood(view, i, h).members
                assert list(got) == oracles.loo_neighborhood(A, i, j, h)


def test_batched_paths_agree(rng):
    n, h = 14, 5
    A = oracles.random_graph(n, 0.4, rng)
    TH = full_twohop(A)
    nbrs = loo_neighborhoods(A, TH, h)
    for j in range(n):
        col = loo_neighborhoods_for_column(A, TH, j, h)
        view = loo_twohop(A, TH, j)
        assert (col[j] == -1).all()
        assert (nbrs[j, j] == -1).all()
        for i in range(n):
            if i != j:
                single = loo_neighborhood(view, i, h).members
                np.testing.assert_array_equal(col[i], single)
                np.testing.assert_array_equal(nbrs[i, j], single)
    for i in range(n):
        rows = row_neighborhoods(loo_row_distance_counts(A, TH, i), i, h)
        np.testing.assert_array_equal(rows[np.arange(n) != i], nbrs[i][np.arange(n) != i])


@settings(max_examples=1000, deadline=None)
@given(st.integers(6, 16), st.floats(0, 1), st.integers(0, 2**32 - 1), st.data())
def test_loo_member_count_and_order(n, p, seed, data):
    A = oracles.random_graph(n, p, np.random.default_rng(seed))
    j = data.draw(st.integers(0, n - 1))
    i = data.draw(st.integers(0, n - 1).filter(lambda v: v != j))
    h = data.draw(st.integers(2, n - 2))
    view = loo_twohop(A, full_twohop(A), j)
    nb = loo_neighborhood(view, i, h)
    assert len(nb.members) == h
    assert i not in nb.members and j not in nb.members
    d = loo_distance_counts(view, i)
    keys = [(d[k], k) for k in nb.members]
    assert keys == sorted(keys)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-1, 6), min_size=3, max_size=40), st.data())
def test_select_smallest_matches_sort(d, data):
    d = np.array(d, dtype=np.int32)
    valid = np.flatnonzero(d >= 0)
    if len(valid) == 0:
        return
    h = data.draw(st.integers(1, len(valid)))
    out = np.empty(h, dtype=np.int64)
    select_smallest(d, h, out)
    ref = sorted(valid, key=lambda k: (d[k], k))[:h]
    np.testing.assert_array_equal(out, ref)


def test_zlz_matches_threshold_oracle(rng):
    n = 12
    A = oracles.random_graph(n, 0.5, rng)
    TH = full_twohop(A)
    batch = zlz_neighborhoods(TH, 4)
    for i in range(n):
        for h in range(1, n):
            nb = zlz_neighborhood(TH, i, h)
            assert list(nb.members) == oracles.zlz_neighborhood(A, i, h)
            assert len(nb.members) >= h
        np.testing.assert_array_equal(batch[i].members, zlz_neighborhood(TH, i, 4).members)


def test_zlz_all_equal_takes_everyone():
    A = np.zeros((7, 7), dtype=np.int8)
    nb = zlz_neighborhood(full_twohop(A), 2, 3)
    np.testing.assert_array_equal(nb.members, [0, 1, 3, 4, 5, 6])


def test_zlz_distinct_distances_gives_h_nearest():
    # random graphs almost never have all-distinct distances, so feed them in directly
    n = 7
    TH = full_twohop(np.zeros((n, n), dtype=np.int8))
    D = np.array([[abs(a * a - b * b) for b in range(n)] for a in range(n)])
    nb = zlz_neighborhood(TH, 3, 3, dist_counts=D)
    np.testing.assert_array_equal(nb.members, [2, 4, 1])


def test_poisoning_column_j_leaves_neighborhood():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        n = int(rng.integers(6, 20))
        A = oracles.random_graph(n, rng.uniform(0.1, 0.9), rng)
        j = int(rng.integers(n))
        i = int((j + 1 + rng.integers(n - 1)) % n)
        h = int(rng.integers(2, n - 1))
        before = loo_neighborhood(loo_twohop(A, full_twohop(A), j), i, h).members
        B = A.copy()
        flip = (rng.random(n) < 0.5).astype(np.int8)
        flip[j] = 0
        B[:, j] = flip
        B[j, :] = flip
        after = loo_neighborhood(loo_twohop(B, full_twohop(B), j), i, h).members
        np.testing.assert_array_equal(before, after)


def test_determinism_across_thread_counts(make_graph):
    import numba

    _, A = make_graph("block", n=60, seed=4)
    TH = full_twohop(A)
    base = loo_neighborhoods(A, TH, 9)
    old = numba.get_num_threads()
    try:
        numba.set_num_threads(1)
        again = loo_neighborhoods(A, TH, 9)
    finally:
        numba.set_num_threads(old)
    np.testing.assert_array_equal(base, again)

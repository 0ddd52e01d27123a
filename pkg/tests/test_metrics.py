import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcsda.inference import RankResult
from pcsda.metrics import average_precision, average_precision_from_distances, f1_score


def test_perfect_ranking():
    assert average_precision([0, 1, 2, 3], [True, True, False, False]) == 1.0


def test_interleaved_ranking_exact():
    # positives at ranks 1 and 3: (1 + 2/3) / 2
    truth = np.array([True, False, True, False])
    assert average_precision([0, 1, 2, 3], truth) == 5 / 6


def test_worst_ranking_exact():
    # positive only at rank 4
    assert average_precision([1, 2, 3, 0], [True, False, False, False]) == 0.25


def test_accepts_rank_result():
    res = RankResult(np.array([2, 0, 1]), np.array([0.5, 0.9, 0.1]))
    assert average_precision(res, [False, False, True]) == 1.0


def test_from_distances_ties_keep_input_order():
    assert average_precision_from_distances([1.0, 1.0], [False, True]) == 0.5


def test_ap_needs_a_positive():
    with pytest.raises(ValueError):
        average_precision([0, 1], [False, False])


def test_ap_loop_oracle():
    rng = np.random.default_rng(0)
    for _ in range(20):
        truth = rng.random(30) < 0.3
        truth[0] = True
        order = rng.permutation(30)
        hits, precs = 0, []
        for r, i in enumerate(order, 1):
            if truth[i]:
                hits += 1
                precs.append(hits / r)
        assert average_precision(order, truth) == pytest.approx(sum(precs) / len(precs), abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=2, max_size=40, unique=True),
       st.data())
def test_ap_invariant_to_monotone_transform(dist, data):
    dist = np.array(dist, dtype=float)
    truth = np.array(data.draw(st.lists(st.booleans(), min_size=len(dist), max_size=len(dist))))
    truth[0] = True
    a = average_precision_from_distances(dist, truth)
    b = average_precision_from_distances(dist ** 3 * 0.5 - 11, truth)
    assert a == b


def test_f1_examples():
    assert f1_score([1, 1, 0], [1, 1, 0]) == 1.0
    assert f1_score([1, 0, 0, 0], [1, 1, 1, 0]) == 0.5  # P=1, R=1/3
    assert f1_score([1, 1, 1, 0], [1, 1, 0, 0]) == pytest.approx(0.8)
    assert f1_score([1, 1, 0], [1, 0, 1]) == 0.5
    assert f1_score([1, 1, 0, 0], [1, 0, 0, 0]) == pytest.approx(2 / 3)


def test_f1_zero_cases():
    assert f1_score([0, 0], [1, 0]) == 0.0
    assert f1_score([0, 1], [1, 0]) == 0.0
    assert f1_score([0, 0], [0, 0]) == 0.0


def test_f1_swap_fp_fn_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p, t = rng.random((2, 25)) < 0.5
        assert f1_score(p, t) == f1_score(t, p)

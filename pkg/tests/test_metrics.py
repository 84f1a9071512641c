import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cacluster.errors import InvalidInput
from cacluster.metrics import accuracy, contingency, evaluate, nmi, purity


def acc_by_enumeration(pred, truth):
    size = max(max(pred), max(truth)) + 1
    return max(
        sum(perm[p] == t for p, t in zip(pred, truth)) for perm in itertools.permutations(range(size))
    ) / len(pred)


def purity_by_counting(pred, truth):
    total = 0
    for c in set(pred):
        total += max(Counter(t for p, t in zip(pred, truth) if p == c).values())
    return total / len(pred)


def test_identity():
    y = [0, 1, 2, 2, 1, 0]
    assert accuracy(y, y) == nmi(y, y) == purity(y, y) == 1.0


def test_relabeling_invariance():
    y = np.array([0, 0, 1, 1, 2, 2, 2])
    relabeled = np.array([2, 0, 1])[y]
    assert accuracy(relabeled, y) == 1.0
    assert nmi(relabeled, y) == pytest.approx(1.0)
    assert purity(relabeled, y) == 1.0


def test_accuracy_fixed_table():
    pred = [0, 0, 0, 1, 1, 1, 2, 2, 2]
    truth = [0, 0, 1, 1, 1, 2, 2, 0, 2]
    assert acc_by_enumeration(pred, truth) == pytest.approx(6 / 9)
    assert accuracy(pred, truth) == pytest.approx(6 / 9, abs=0)


def test_nmi_constant_prediction():
    assert nmi([0] * 6, [0, 0, 0, 1, 1, 1]) == 0.0


def test_nmi_plug_in_example():
    # joint counts {(0,0):2, (0,1):1, (1,0):1, (1,1):2}
    pred = [0, 0, 0, 1, 1, 1]
    truth = [0, 0, 1, 0, 1, 1]
    mi = (2 / 3) * np.log(4 / 3) + (1 / 3) * np.log(2 / 3)
    assert nmi(pred, truth) == pytest.approx(mi / np.log(2), abs=1e-12)
    # frozen from a 30-digit mpmath evaluation of the same formula
    assert nmi(pred, truth) == pytest.approx(0.0817041659455104852, abs=1e-12)


def test_nmi_both_trivial():
    assert nmi([1, 1, 1], [0, 0, 0]) == 1.0


def test_purity_uniform_confusion():
    pred = [0] * 6 + [1] * 6
    truth = [0, 1, 2] * 4
    assert purity(pred, truth) == pytest.approx(1 / 3)


def test_length_mismatch():
    for fn in (accuracy, nmi, purity):
        with pytest.raises(InvalidInput):
            fn([0, 1], [0, 1, 1])


def test_rejects_negative_or_fractional():
    with pytest.raises(InvalidInput):
        accuracy([0, -1], [0, 1])
    with pytest.raises(InvalidInput):
        accuracy([0, 0.5], [0, 1])


def test_contingency_counts():
    table = contingency([0, 1, 1, 2], [1, 1, 0, 0])
    np.testing.assert_array_equal(table, [[0, 1], [1, 1], [1, 0]])


def test_evaluate_keys():
    assert set(evaluate([0, 1], [1, 0])) == {"acc", "nmi", "purity"}


labels = st.integers(min_value=2, max_value=40).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
    )
)


@settings(max_examples=60, deadline=None)
@given(labels)
def test_against_oracles(pair):
    pred, truth = pair
    acc = accuracy(pred, truth)
    assert acc == acc_by_enumeration(pred, truth)
    assert purity(pred, truth) == pytest.approx(purity_by_counting(pred, truth), abs=1e-15)
    assert purity(pred, truth) >= acc
    assert 0.0 <= nmi(pred, truth) <= 1.0


@settings(max_examples=40, deadline=None)
@given(labels, st.permutations(range(6)), st.permutations(range(6)))
def test_relabel_either_side(pair, p1, p2):
    pred, truth = pair
    rp = [p1[v] for v in pred]
    rt = [p2[v] for v in truth]
    assert accuracy(rp, rt) == accuracy(pred, truth)
    assert purity(rp, rt) == pytest.approx(purity(pred, truth))
    assert nmi(rp, rt) == pytest.approx(nmi(pred, truth), abs=1e-12)

import random
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicecheck.errors import CountError, LabelError
from slicecheck.metrics import EmptyInputWarning, accuracy, classification_report, confusion_counts

from .oracles import report_oracle


def test_confusion_counts_examples():
    assert confusion_counts(["Y", "N"], ["Y", "N"]) == {("Y", "Y"): 1, ("N", "N"): 1}
    assert confusion_counts(["Y", "Y", "N"], ["N", "Y", "Y"]) == {("Y", "N"): 1, ("Y", "Y"): 1, ("N", "Y"): 1}
    assert confusion_counts([], []) == {}
    with pytest.raises(CountError):
        confusion_counts(["Y"], [])


def test_hand_counted_example():
    r = classification_report(list("YYYNN"), list("YNYNY"))
    assert r.per_class["Y"].precision == pytest.approx(2 / 3)
    assert r.per_class["N"].precision == pytest.approx(1 / 2)
    assert r.per_class["Y"].recall == pytest.approx(2 / 3)
    assert r.per_class["N"].recall == pytest.approx(1 / 2)
    assert r.macro_avg.precision == pytest.approx(0.583, abs=5e-4)
    assert r.weighted_avg.precision == pytest.approx(0.600, abs=5e-4)
    assert r.accuracy == pytest.approx(0.6)
    assert r.labels == ["N", "Y"]


def test_zero_support_class_from_predictions_only():
    r = classification_report(["a", "a"], ["a", "b"])
    b = r.per_class["b"]
    assert (b.precision, b.recall, b.f1, b.support) == (0.0, 0.0, 0.0, 0)
    assert b.degenerate and not r.per_class["a"].degenerate


def test_label_set_order_and_errors():
    r = classification_report(["x"], ["x"], label_set=["z", "x"])
    assert r.labels == ["z", "x"]
    assert r.per_class["z"].support == 0
    with pytest.raises(LabelError):
        classification_report(["x", "y"], ["x", "x"], label_set=["x"])
    with pytest.raises(CountError):
        classification_report(["x"], ["x", "y"])


def test_accuracy():
    assert accuracy([1] * 1431, [1] * 1004 + [0] * 427) == pytest.approx(0.702, abs=5e-4)
    assert accuracy([1] * 585, [1] * 292 + [0] * 293) == pytest.approx(0.499, abs=5e-4)
    assert accuracy("abc", "abc") == 1.0
    with pytest.warns(EmptyInputWarning):
        assert accuracy([], []) == 0.0


def test_empty_report():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        r = classification_report([], [])
    assert r.empty and r.total == 0 and r.per_class == {}


def test_report_serializations():
    r = classification_report(list("YYYNN"), list("YNYNY"))
    lines = r.to_csv().splitlines()
    assert lines[0] == ",precision,recall,f1-score,support"
    assert [line.split(",")[0] for line in lines[1:]] == ["N", "Y", "macro avg", "weighted avg"]
    assert lines[2] == "Y,0.667,0.667,0.667,3"
    d = r.to_dict()
    assert d["macro avg"]["support"] == 5 and d["accuracy"] == pytest.approx(0.6)


def _check_against_oracle(gold, pred):
    r = classification_report(gold, pred)
    rows, macro, weighted, total, acc = report_oracle(gold, pred, r.labels)
    assert set(rows) == set(gold) | set(pred)
    for label, (p, rc, f, s) in rows.items():
        m = r.per_class[label]
        assert abs(m.precision - float(p)) <= 1e-12
        assert abs(m.recall - float(rc)) <= 1e-12
        assert abs(m.f1 - float(f)) <= 1e-12
        assert m.support == s
    for avg, ref in ((r.macro_avg, macro), (r.weighted_avg, weighted)):
        assert abs(avg.precision - float(ref[0])) <= 1e-12
        assert abs(avg.recall - float(ref[1])) <= 1e-12
        assert abs(avg.f1 - float(ref[2])) <= 1e-12
        assert avg.support == total
    assert abs(r.accuracy - float(acc)) <= 1e-12
    return r


def test_randomized_oracle_smoke():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(1, 4)
        n = rng.randint(1, 200)
        gold = [rng.randrange(k) for _ in range(n)]
        pred = [rng.randrange(k) for _ in range(n)]
        _check_against_oracle(gold, pred)


pairs = st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from("abcd")), min_size=1, max_size=200)


@given(pairs)
def test_weighted_identity_and_accuracy(data):
    gold, pred = [g for g, _ in data], [p for _, p in data]
    r = classification_report(gold, pred)
    n = len(gold)
    assert r.weighted_avg.f1 * n == pytest.approx(sum(m.support * m.f1 for m in r.per_class.values()), abs=1e-9)
    tp = sum(sum(g == p == c for g, p in zip(gold, pred)) for c in r.labels)
    assert r.accuracy == tp / n


@given(pairs, st.randoms(use_true_random=False))
def test_joint_permutation_invariance(data, rnd):
    shuffled = list(data)
    rnd.shuffle(shuffled)
    a = classification_report([g for g, _ in data], [p for _, p in data])
    b = classification_report([g for g, _ in shuffled], [p for _, p in shuffled])
    assert a.per_class.keys() == b.per_class.keys()
    for label in a.labels:
        assert a.per_class[label] == b.per_class[label]


def test_matches_sklearn_when_available():
    metrics = pytest.importorskip("sklearn.metrics")
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 100)
        gold = [rng.choice("xyz") for _ in range(n)]
        pred = [rng.choice("xyz") for _ in range(n)]
        ours = classification_report(gold, pred)
        ref = metrics.classification_report(gold, pred, labels=ours.labels, output_dict=True, zero_division=0)
        for label in ours.labels:
            assert ours.per_class[label].f1 == pytest.approx(ref[label]["f1-score"], abs=1e-12)
        assert ours.macro_avg.recall == pytest.approx(ref["macro avg"]["recall"], abs=1e-12)
        assert ours.weighted_avg.precision == pytest.approx(ref["weighted avg"]["precision"], abs=1e-12)

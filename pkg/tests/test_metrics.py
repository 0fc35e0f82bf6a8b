"""Metric computations checked against a naive independent recomputation."""

import numpy as np
import pytest

from artlab.metrics import ConfusionMatrix, class_metrics, confusion


def naive_macro(counts):
    """Recompute macro P/R/F1 from first principles, one class at a time."""
    k = counts.shape[0]
    precs, recs, f1s = [], [], []
    for c in range(k):
        tp = counts[c, c]
        fp = counts[:, c].sum() - tp
        fn = counts[c, :].sum() - tp
        p = tp / (tp + fp) if tp + fp > 0 else 0.0
        r = tp / (tp + fn) if tp + fn > 0 else 0.0
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        precs.append(p)
        recs.append(r)
        f1s.append(f)
    return (
        sum(precs) / k,
        sum(recs) / k,
        sum(f1s) / k,
        np.trace(counts) / counts.sum(),
    )


def test_confusion_counts():
    cm = confusion([0, 0, 1, 2, 2, 2], [0, 1, 1, 2, 0, 2], 3)
    expected = np.array([[1, 1, 0], [0, 1, 0], [1, 0, 2]])
    assert (cm.counts == expected).all()
    assert cm.total == 6


def test_confusion_rejects_out_of_range():
    with pytest.raises(ValueError):
        confusion([0, 3], [0, 0], 3)
    with pytest.raises(ValueError):
        confusion([0, 0], [0, -1], 3)
    with pytest.raises(ValueError):
        confusion([0, 1], [0], 2)


def test_macro_f1_matches_naive_oracle():
    rng = np.random.default_rng(42)
    for _ in range(100):
        k = int(rng.integers(2, 7))
        counts = rng.integers(0, 30, size=(k, k))
        if counts.sum() == 0:
            counts[0, 0] = 1
        m = class_metrics(ConfusionMatrix(counts))
        p, r, f, acc = naive_macro(counts.astype(float))
        assert m.macro_precision == pytest.approx(p, abs=1e-12)
        assert m.macro_recall == pytest.approx(r, abs=1e-12)
        assert m.macro_f1 == pytest.approx(f, abs=1e-12)
        assert m.accuracy == pytest.approx(acc, abs=1e-12)


def test_zero_division_convention():
    # class 1 never predicted and never true -> P = R = F1 = 0 for it
    counts = np.array([[5, 0], [0, 0]])
    m = class_metrics(ConfusionMatrix(counts))
    assert m.precision[1] == 0.0 and m.recall[1] == 0.0 and m.f1[1] == 0.0
    assert m.macro_f1 == pytest.approx(0.5)


def test_perfect_predictions():
    m = class_metrics(confusion([0, 1, 2], [0, 1, 2], 3))
    assert m.macro_f1 == 1.0 and m.accuracy == 1.0


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        class_metrics(ConfusionMatrix(np.zeros((2, 2), dtype=np.int64)))

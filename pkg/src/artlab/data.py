"""Dataset container, CSV ingestion, normalization, splitting and imbalance synthesis."""

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus integer class labels in {0..num_classes-1}."""

    features: np.ndarray  # (N, d) float64
    labels: np.ndarray  # (N,) int64
    num_classes: int
    label_names: tuple = ()  # original label values, index = class id

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        labs = np.asarray(self.labels, dtype=np.int64)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if labs.ndim != 1 or labs.shape[0] != feats.shape[0]:
            raise ValueError("labels must be a vector with one entry per feature row")
        if labs.size and (labs.min() < 0 or labs.max() >= self.num_classes):
            raise ValueError("label outside [0, num_classes)")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_indices(self, c: int) -> np.ndarray:
        """Row indices belonging to class c."""
        return np.nonzero(self.labels == c)[0]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.num_classes, self.label_names)


@dataclass(frozen=True)
class SplitBundle:
    train: Dataset
    validation: Dataset
    test: Dataset


@dataclass(frozen=True)
class ZScoreStats:
    means: np.ndarray
    stds: np.ndarray


@dataclass(frozen=True)
class ClassPrior:
    """Empirical class frequencies; sums to 1 exactly under rational accumulation."""

    probs: np.ndarray
    exact: tuple = field(default=(), compare=False)  # Fractions, for audit


def load_csv(path, label_column: str) -> Dataset:
    """Parse a headered CSV into a Dataset.

    All non-label columns must be real numbers; labels may be integers or
    arbitrary strings, mapped to class ids in first-appearance order.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(f"dataset file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty dataset file: {path}") from None
        if label_column not in header:
            raise ValueError(f"label column {label_column!r} not present in {path}")
        label_idx = header.index(label_column)
        feat_names = [h for i, h in enumerate(header) if i != label_idx]

        rows, raw_labels = [], []
        for r, rec in enumerate(reader, start=2):
            vals = []
            for i, cell in enumerate(rec):
                if i == label_idx:
                    raw_labels.append(cell.strip())
                    continue
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ValueError(
                        f"non-numeric feature value {cell!r} at row {r}, column {header[i]!r}"
                    ) from None
            if len(vals) != len(feat_names):
                raise ValueError(f"row {r} has {len(rec)} cells, expected {len(header)}")
            rows.append(vals)

    if not rows:
        raise ValueError(f"dataset {path} has a header but no data rows")

    mapping: dict[str, int] = {}
    labels = []
    for lab in raw_labels:
        if lab not in mapping:
            mapping[lab] = len(mapping)
        labels.append(mapping[lab])
    return Dataset(
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        num_classes=len(mapping),
        label_names=tuple(mapping),
    )


def class_priors(ds: Dataset) -> ClassPrior:
    """probs[i] = count(i) / N."""
    n = len(ds)
    if n == 0:
        raise ValueError("cannot compute priors of an empty dataset")
    counts = ds.class_counts()
    exact = tuple(Fraction(int(c), n) for c in counts)
    assert sum(exact) == 1
    return ClassPrior(probs=counts / n, exact=exact)


def zscore_fit(ds: Dataset) -> ZScoreStats:
    """Column means and population stds, fitted on (training) rows only."""
    means = ds.features.mean(axis=0)
    stds = ds.features.std(axis=0)  # population std: divide by N
    return ZScoreStats(means=means, stds=stds)


def zscore_apply(stats: ZScoreStats, ds: Dataset) -> Dataset:
    """Standardize features; constant columns (std 0) map to 0."""
    if stats.means.shape[0] != ds.n_features:
        raise ValueError("z-score stats dimension does not match dataset")
    safe = np.where(stats.stds > 0, stats.stds, 1.0)
    out = (ds.features - stats.means) / safe
    out[:, stats.stds == 0] = 0.0
    return Dataset(out, ds.labels, ds.num_classes, ds.label_names)


def largest_remainder(weights, total: int) -> np.ndarray:
    """Apportion `total` units proportionally to `weights`, floors first,
    leftovers to the largest fractional parts (ties to lower index)."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.sum() <= 0:
        raise ValueError("weights must have positive sum")
    quota = weights / weights.sum() * total
    base = np.floor(quota).astype(np.int64)
    frac = quota - base
    leftover = total - int(base.sum())
    # stable sort on -frac keeps lower indices first among ties
    order = np.argsort(-frac, kind="stable")
    base[order[:leftover]] += 1
    return base


def stratified_split(ds: Dataset, fractions=(0.70, 0.15, 0.15), rng=None) -> SplitBundle:
    """Per-class largest-remainder allocation into train/validation/test.

    Any class with >= 3 source rows is guaranteed at least one row in each
    part (per-class validation F1 must be computable downstream).
    """
    fractions = tuple(float(f) for f in fractions)
    if any(not 0 < f < 1 for f in fractions):
        raise ValueError("each fraction must lie in (0, 1)")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    if rng is None:
        rng = np.random.default_rng(0)

    parts = [[], [], []]
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        n_c = idx.size
        if n_c == 0:
            continue
        targets = largest_remainder(fractions, n_c)
        if n_c >= 3:
            # move rows out of the fullest part until every part is covered
            while (targets == 0).any():
                targets[int(np.argmax(targets))] -= 1
                targets[int(np.argmin(targets))] += 1
        shuffled = idx[rng.permutation(n_c)]
        offs = np.cumsum(targets)
        parts[0].append(shuffled[: offs[0]])
        parts[1].append(shuffled[offs[0] : offs[1]])
        parts[2].append(shuffled[offs[1] :])

    picked = [np.sort(np.concatenate(p)) if p else np.array([], dtype=np.int64) for p in parts]
    return SplitBundle(*(ds.subset(p) for p in picked))


def make_imbalanced(ds: Dataset, ratio: float, majority_class: int, rng=None) -> Dataset:
    """Subsample every non-majority class to round(n_majority / ratio)."""
    if ratio < 1:
        raise ValueError("imbalance ratio must be >= 1")
    if rng is None:
        rng = np.random.default_rng(0)
    counts = ds.class_counts()
    n_maj = int(counts[majority_class])
    target = int(round(n_maj / ratio))
    if target < 1:
        raise ValueError(f"ratio {ratio} leaves the minority class empty")

    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        if c == majority_class or idx.size <= target:
            keep.append(idx)
        else:
            keep.append(rng.choice(idx, size=target, replace=False))
    all_idx = np.concatenate(keep)
    return ds.subset(all_idx[rng.permutation(all_idx.size)])

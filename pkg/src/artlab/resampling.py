"""Dataset-level resamplers: ROS, RUS, SMOTE, MSMOTE, NearMiss, and the
distribution-driven rebuild used by adaptive training."""

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset, largest_remainder


@dataclass(frozen=True)
class ResamplePlan:
    """Per-class row targets for a resampling pass."""

    target_counts: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.target_counts, dtype=np.int64)
        if t.sum() <= 0:
            raise ValueError("plan must request at least one row")
        object.__setattr__(self, "target_counts", t)


def balance_to_majority(ds: Dataset) -> ResamplePlan:
    counts = ds.class_counts()
    return ResamplePlan(np.full(ds.num_classes, counts.max()))


def balance_to_minority(ds: Dataset) -> ResamplePlan:
    counts = ds.class_counts()
    nonzero = counts[counts > 0]
    targets = np.where(counts > 0, nonzero.min(), 0)
    return ResamplePlan(targets)


def _finish(ds: Dataset, idx_per_class, rng, extra_rows=None, extra_labels=None):
    idx = np.concatenate([i for i in idx_per_class if len(i)]) if idx_per_class else np.array([], dtype=np.int64)
    feats = ds.features[idx]
    labs = ds.labels[idx]
    if extra_rows is not None and len(extra_rows):
        feats = np.vstack([feats, np.asarray(extra_rows)])
        labs = np.concatenate([labs, np.asarray(extra_labels, dtype=np.int64)])
    perm = rng.permutation(len(labs))
    return Dataset(feats[perm], labs[perm], ds.num_classes, ds.label_names)


def ros(ds: Dataset, plan: ResamplePlan, rng) -> Dataset:
    """Random oversampling by duplication; original rows are always retained."""
    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        target = int(plan.target_counts[c])
        if target > 0 and idx.size == 0:
            raise ValueError(f"cannot oversample empty class {c}")
        if target <= idx.size:
            keep.append(idx)
        else:
            extra = rng.choice(idx, size=target - idx.size, replace=True)
            keep.append(np.concatenate([idx, extra]))
    return _finish(ds, keep, rng)


def rus(ds: Dataset, plan: ResamplePlan, rng) -> Dataset:
    """Random undersampling without replacement."""
    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        target = int(plan.target_counts[c])
        if target > idx.size:
            raise ValueError(f"undersampling target {target} exceeds class {c} size {idx.size}")
        keep.append(rng.choice(idx, size=target, replace=False) if target < idx.size else idx)
    return _finish(ds, keep, rng)


def _pairwise_sq_dists(a, b):
    return ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)


def _nearest_same_class(x):
    """For each row, indices of all other rows ordered by distance (stable)."""
    d = _pairwise_sq_dists(x, x)
    np.fill_diagonal(d, np.inf)
    return np.argsort(d, axis=1, kind="stable")


def smote(ds: Dataset, k: int, plan: ResamplePlan, rng) -> Dataset:
    """Synthetic oversampling by interpolation between same-class neighbors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    extra_rows, extra_labels = [], []
    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        keep.append(idx)
        grow = int(plan.target_counts[c]) - idx.size
        if grow <= 0:
            continue
        x = ds.features[idx]
        if idx.size == 1:
            warnings.warn(f"class {c} has a single row; duplicating instead of interpolating")
            extra_rows.extend([x[0]] * grow)
            extra_labels.extend([c] * grow)
            continue
        kk = min(k, idx.size - 1)
        order = _nearest_same_class(x)
        seeds = rng.integers(0, idx.size, size=grow)
        picks = rng.integers(0, kk, size=grow)
        lams = rng.uniform(0.0, 1.0, size=grow)
        for s, pk, lam in zip(seeds, picks, lams):
            nb = order[s, pk]
            extra_rows.append(x[s] + lam * (x[nb] - x[s]))
            extra_labels.append(c)
    return _finish(ds, keep, rng, extra_rows, extra_labels)


def msmote(ds: Dataset, k: int, plan: ResamplePlan, rng) -> Dataset:
    """SMOTE variant gating seed rows into security / border / noise groups
    by the class makeup of their k nearest all-class neighbors."""
    if k < 1:
        raise ValueError("k must be >= 1")
    all_order = _nearest_same_class(ds.features)
    extra_rows, extra_labels = [], []
    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        keep.append(idx)
        grow = int(plan.target_counts[c]) - idx.size
        if grow <= 0:
            continue
        x = ds.features[idx]
        if idx.size == 1:
            warnings.warn(f"class {c} has a single row; duplicating instead of interpolating")
            extra_rows.extend([x[0]] * grow)
            extra_labels.extend([c] * grow)
            continue
        kk = min(k, len(ds) - 1)
        same_order = _nearest_same_class(x)
        same_k = min(k, idx.size - 1)

        # 0 = security, 1 = border, 2 = latent noise
        groups = np.empty(idx.size, dtype=np.int64)
        for j, row in enumerate(idx):
            neigh = ds.labels[all_order[row, :kk]]
            same = int((neigh == c).sum())
            groups[j] = 0 if same == kk else (2 if same == 0 else 1)

        eligible = np.nonzero(groups != 2)[0]
        if eligible.size == 0:
            warnings.warn(f"class {c} is all latent noise; duplicating source rows")
            dup = rng.integers(0, idx.size, size=grow)
            extra_rows.extend(x[dup])
            extra_labels.extend([c] * grow)
            continue
        seeds = eligible[rng.integers(0, eligible.size, size=grow)]
        lams = rng.uniform(0.0, 1.0, size=grow)
        picks = rng.integers(0, same_k, size=grow)
        for s, pk, lam in zip(seeds, picks, lams):
            nb = same_order[s, 0] if groups[s] == 1 else same_order[s, pk]
            extra_rows.append(x[s] + lam * (x[nb] - x[s]))
            extra_labels.append(c)
    return _finish(ds, keep, rng, extra_rows, extra_labels)


def nearmiss(ds: Dataset, version: int, plan: ResamplePlan, rng, m: int = 3) -> Dataset:
    """Distance-criterion undersampling; shrinks every class above its target.

    For the class being shrunk, every other class acts as the minority pool.
    v1 keeps rows closest on average to their 3 nearest pool rows; v2 uses the
    3 farthest pool rows; v3 pre-selects, per pool row, its m nearest rows of
    the shrinking class and keeps candidates farthest from the pool.
    """
    if version not in (1, 2, 3):
        raise ValueError("nearmiss version must be 1, 2 or 3")
    keep = []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        target = int(plan.target_counts[c])
        if target > idx.size:
            raise ValueError(f"undersampling target {target} exceeds class {c} size {idx.size}")
        if target == idx.size or idx.size == 0:
            keep.append(idx)
            continue
        pool = np.nonzero(ds.labels != c)[0]
        n_neighbors = min(3, pool.size)
        if pool.size < 3:
            warnings.warn(f"fewer than 3 rows outside class {c}; neighbor count capped")
        d = np.sqrt(_pairwise_sq_dists(ds.features[idx], ds.features[pool]))
        d_sorted = np.sort(d, axis=1)
        if version == 1:
            score = d_sorted[:, :n_neighbors].mean(axis=1)
            order = np.argsort(score, kind="stable")
        elif version == 2:
            score = d_sorted[:, -n_neighbors:].mean(axis=1)
            order = np.argsort(score, kind="stable")
        else:
            mm = min(m, idx.size)
            cand = np.unique(np.argsort(d.T, axis=1, kind="stable")[:, :mm].ravel())
            score = d_sorted[:, :n_neighbors].mean(axis=1)
            non_cand = np.setdiff1d(np.arange(idx.size), cand)
            # candidates first (farthest from pool), then the rest as filler
            order = np.concatenate(
                [cand[np.argsort(-score[cand], kind="stable")],
                 non_cand[np.argsort(-score[non_cand], kind="stable")]]
            )
        keep.append(idx[np.sort(order[:target])])
    return _finish(ds, keep, rng)


def resample_to_distribution(ds: Dataset, probs, total: int, rng) -> Dataset:
    """Rebuild the dataset at class proportions `probs` and exact size `total`.

    Targets come from largest-remainder rounding of total * p, with every
    class of nonzero probability floored at one row; classes above target are
    randomly deleted, classes below are randomly duplicated.
    """
    probs = np.asarray(getattr(probs, "probs", probs), dtype=np.float64)
    counts = ds.class_counts()
    if ((probs > 0) & (counts == 0)).any():
        raise ValueError("nonzero sampling probability for an empty class")
    targets = largest_remainder(probs, total)
    # floor-at-1 keeps every live class in the training set
    for c in np.nonzero((probs > 0) & (targets == 0))[0]:
        targets[int(np.argmax(targets))] -= 1
        targets[c] += 1

    keep = []
    extra_rows, extra_labels = [], []
    for c in range(ds.num_classes):
        idx = ds.class_indices(c)
        t = int(targets[c])
        if t <= idx.size:
            keep.append(rng.choice(idx, size=t, replace=False) if t < idx.size else idx)
        else:
            keep.append(idx)
            extra = rng.choice(idx, size=t - idx.size, replace=True)
            extra_rows.extend(ds.features[extra])
            extra_labels.extend([c] * (t - idx.size))
    return _finish(ds, keep, rng, extra_rows, extra_labels)

"""Classification losses: plain/weighted cross-entropy, focal, OHEM, LDAM+DRW."""

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("cross_entropy", "cost_sensitive", "focal", "ohem", "ldam_drw")


@dataclass(frozen=True)
class LossSpec:
    kind: str = "cross_entropy"
    class_weights: np.ndarray = None  # strictly positive, length K
    gamma: float = 2.0  # focal exponent
    ohem_fraction: float = 0.7
    ldam_margins: np.ndarray = None  # non-negative, length K
    drw_start_epoch: int = 100

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.class_weights is not None:
            w = np.asarray(self.class_weights, dtype=np.float64)
            if (w <= 0).any():
                raise ValueError("class weights must be strictly positive")
            object.__setattr__(self, "class_weights", w)
        if self.gamma < 0:
            raise ValueError("focal gamma must be >= 0")
        if not 0 < self.ohem_fraction <= 1:
            raise ValueError("ohem fraction must be in (0, 1]")
        if self.ldam_margins is not None:
            object.__setattr__(
                self, "ldam_margins", np.asarray(self.ldam_margins, dtype=np.float64)
            )


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _check_labels(logits, labels):
    if labels.min() < 0 or labels.max() >= logits.shape[1]:
        raise ValueError("label out of range for logit width")


def cross_entropy(logits, labels, class_weights=None):
    """Weight-normalized cross-entropy.

    Returns (mean, per_sample, dlogits) where mean = sum(w_y * nll) / sum(w_y)
    and dlogits is the gradient of the mean wrt logits.
    """
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _check_labels(logits, labels)
    n = logits.shape[0]
    p = softmax(logits)
    nll = -np.log(np.clip(p[np.arange(n), labels], 1e-300, None))
    w = np.ones(n) if class_weights is None else np.asarray(class_weights)[labels]
    per_sample = w * nll
    wsum = w.sum()
    grad = p.copy()
    grad[np.arange(n), labels] -= 1.0
    grad *= (w / wsum)[:, None]
    return per_sample.sum() / wsum, per_sample, grad


def cost_sensitive_weights(priors) -> np.ndarray:
    """Inverse-frequency weights w_i = 1 / (K * prior_i); mean weight 1 under the prior."""
    probs = np.asarray(getattr(priors, "probs", priors), dtype=np.float64)
    if (probs <= 0).any():
        raise ValueError("all class priors must be positive for inverse weighting")
    return 1.0 / (probs.size * probs)


def focal_loss(logits, labels, gamma, class_weights=None):
    """Focal loss -w_y (1 - p_y)^gamma log p_y, weight-normalized like CE."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _check_labels(logits, labels)
    n = logits.shape[0]
    p = softmax(logits)
    idx = np.arange(n)
    pt = np.clip(p[idx, labels], 1e-300, 1.0)
    logpt = np.log(pt)
    w = np.ones(n) if class_weights is None else np.asarray(class_weights)[labels]
    per_sample = -w * (1.0 - pt) ** gamma * logpt
    wsum = w.sum()
    mean = per_sample.sum() / wsum

    # d per-sample / d pt, then chain through softmax: dpt/dz_j = pt*(1[j=y] - p_j)
    if gamma == 0:
        dpt = -w / pt
    else:
        dpt = w * (gamma * (1.0 - pt) ** (gamma - 1) * logpt - (1.0 - pt) ** gamma / pt)
    onehot = np.zeros_like(p)
    onehot[idx, labels] = 1.0
    grad = (dpt * pt)[:, None] * (onehot - p) / wsum
    return mean, per_sample, grad


def ohem_select(per_sample_losses, fraction) -> np.ndarray:
    """Indices of the ceil(fraction * n) largest losses, ties to lower index."""
    losses = np.asarray(per_sample_losses, dtype=np.float64)
    if losses.size == 0:
        raise ValueError("cannot mine an empty batch")
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    k = math.ceil(fraction * losses.size)
    order = np.lexsort((np.arange(losses.size), -losses))
    return np.sort(order[:k])


def ldam_margins(class_counts, max_margin) -> np.ndarray:
    """Per-class margins proportional to count^(-1/4), scaled so max == max_margin."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if (counts < 1).any():
        raise ValueError("every class needs at least one sample for LDAM margins")
    if max_margin <= 0:
        raise ValueError("max_margin must be positive")
    raw = counts ** -0.25
    return max_margin * raw / raw.max()


def drw_weights(epoch, drw_start_epoch, priors) -> np.ndarray:
    """All-ones before the deferred epoch, inverse-frequency weights from it on."""
    probs = np.asarray(getattr(priors, "probs", priors), dtype=np.float64)
    if epoch < drw_start_epoch:
        return np.ones(probs.size)
    return cost_sensitive_weights(probs)


def loss_and_grad(logits, labels, spec: LossSpec, epoch: int = 1):
    """Dispatch a LossSpec to (mean loss, dlogits of the mean)."""
    if spec.kind in ("cross_entropy", "cost_sensitive"):
        mean, _, grad = cross_entropy(logits, labels, spec.class_weights)
        return mean, grad
    if spec.kind == "focal":
        mean, _, grad = focal_loss(logits, labels, spec.gamma, spec.class_weights)
        return mean, grad
    if spec.kind == "ohem":
        _, per_sample, _ = cross_entropy(logits, labels)
        keep = ohem_select(per_sample, spec.ohem_fraction)
        sub_mean, _, sub_grad = cross_entropy(
            np.asarray(logits)[keep], np.asarray(labels)[keep]
        )
        grad = np.zeros_like(np.asarray(logits, dtype=np.float64))
        grad[keep] = sub_grad
        return sub_mean, grad
    if spec.kind == "ldam_drw":
        if spec.ldam_margins is None:
            raise ValueError("ldam_drw needs precomputed margins")
        logits = np.asarray(logits, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64)
        _check_labels(logits, labels)
        shifted = logits.copy()
        shifted[np.arange(len(labels)), labels] -= spec.ldam_margins[labels]
        weights = None
        if spec.class_weights is not None and epoch >= spec.drw_start_epoch:
            weights = spec.class_weights
        mean, _, grad = cross_entropy(shifted, labels, weights)
        return mean, grad
    raise ValueError(f"unknown loss kind {spec.kind!r}")

"""Adaptive resampling training: class-difficulty scoring from validation F1,
prior blending, and the periodic dataset-rebuild loop."""

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, class_priors
from .losses import LossSpec
from .metrics import class_metrics, confusion
from .nn import TrainerConfig, fit, init_mlp
from .resampling import resample_to_distribution


@dataclass(frozen=True)
class AdaptiveWeights:
    f1_per_class: np.ndarray
    difficulty: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class SamplingDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if (p < 0).any() or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("sampling distribution must lie on the simplex")
        object.__setattr__(self, "probs", p)


@dataclass
class ArtConfig:
    blending_constant: float = 0.5
    boost_frequency: int = 4
    trainer: TrainerConfig = field(default_factory=TrainerConfig)

    def __post_init__(self):
        if not 0.0 <= self.blending_constant <= 1.0:
            raise ValueError("blending constant must be in [0, 1]")
        if self.boost_frequency < 1:
            raise ValueError("boost frequency must be a positive integer")


def difficulty_scores(f1_per_class) -> np.ndarray:
    """s_i = 1 - f_i."""
    f = np.asarray(f1_per_class, dtype=np.float64)
    if (f < 0).any() or (f > 1).any():
        raise ValueError("per-class F1 values must lie in [0, 1]")
    return 1.0 - f


def normalize_weights(difficulty) -> np.ndarray:
    """w_i = s_i / sum(s); uniform when every class is perfect."""
    s = np.asarray(difficulty, dtype=np.float64)
    if (s < 0).any():
        raise ValueError("difficulty scores must be non-negative")
    total = s.sum()
    if total == 0:
        return np.full(s.size, 1.0 / s.size)
    return s / total


def blend(priors, weights, c: float) -> SamplingDistribution:
    """Convex combination p = c * prior + (1 - c) * adaptive weight."""
    if not 0.0 <= c <= 1.0:
        raise ValueError("blending constant must be in [0, 1]")
    probs = np.asarray(getattr(priors, "probs", priors), dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    return SamplingDistribution(c * probs + (1.0 - c) * w)


def initial_distribution(priors, c: float, num_classes: int) -> SamplingDistribution:
    """First sampling distribution: priors blended with uniform weights."""
    return blend(priors, np.full(num_classes, 1.0 / num_classes), c)


@dataclass
class BoostRecord:
    epoch: int
    f1_per_class: np.ndarray  # NaN for the initial record (no model signal yet)
    difficulty: np.ndarray
    weights: np.ndarray
    probs: np.ndarray
    target_counts: np.ndarray


@dataclass
class ArtResult:
    model: object
    history: list
    boost_history: list
    epochs_trained: int


def art_fit(
    train: Dataset,
    val: Dataset,
    config: ArtConfig,
    rng_init: np.random.Generator,
    rng_shuffle: np.random.Generator,
    rng_resample: np.random.Generator,
    hidden_widths=(64,),
    model=None,
) -> ArtResult:
    """Run the full adaptive-resampling training loop.

    Every boost_frequency epochs the per-class validation F1 is turned into a
    difficulty-weighted sampling distribution, blended with the empirical
    priors, and the epoch training set is rebuilt from the original pool at
    its original size.
    """
    k = train.num_classes
    n = len(train)
    priors = class_priors(train)
    c = config.blending_constant
    bf = config.boost_frequency

    if model is None:
        widths = [train.n_features, *hidden_widths, k]
        model = init_mlp(widths, rng_init)

    boost_history: list[BoostRecord] = []
    p0 = initial_distribution(priors, c, k)
    initial = resample_to_distribution(train, p0, n, rng_resample)
    boost_history.append(
        BoostRecord(
            epoch=0,
            f1_per_class=np.full(k, np.nan),
            difficulty=np.full(k, np.nan),
            weights=np.full(k, 1.0 / k),
            probs=p0.probs,
            target_counts=initial.class_counts(),
        )
    )

    def hook(epoch, mdl, val_logits):
        if epoch % bf != 0:
            return None
        preds = np.argmax(val_logits, axis=1)
        cm = confusion(val.labels, preds, k)
        f1 = class_metrics(cm).f1
        s = difficulty_scores(f1)
        w = normalize_weights(s)
        p = blend(priors, w, c)
        rebuilt = resample_to_distribution(train, p, n, rng_resample)
        boost_history.append(
            BoostRecord(
                epoch=epoch,
                f1_per_class=f1,
                difficulty=s,
                weights=w,
                probs=p.probs,
                target_counts=rebuilt.class_counts(),
            )
        )
        return rebuilt

    result = fit(
        model,
        initial,
        val,
        LossSpec(kind="cross_entropy"),
        config.trainer,
        rng_shuffle,
        epoch_hook=hook,
    )
    return ArtResult(
        model=result.model,
        history=result.history,
        boost_history=boost_history,
        epochs_trained=result.epochs_trained,
    )

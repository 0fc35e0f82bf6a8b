"""Adaptive resampling training laboratory for imbalanced classification."""

from .art import (
    ArtConfig,
    art_fit,
    blend,
    difficulty_scores,
    initial_distribution,
    normalize_weights,
)
from .config import ALL_METHODS, DEFAULT_SEEDS, ExperimentConfig
from .data import (
    Dataset,
    SplitBundle,
    class_priors,
    load_csv,
    make_imbalanced,
    stratified_split,
    zscore_apply,
    zscore_fit,
)
from .metrics import class_metrics, confusion
from .nn import TrainerConfig, cosine_lr, fit, forward, init_mlp
from .runner import RunReport, run_ablation, run_experiment
from .stats import average_ranks, paired_t_test, wilcoxon_signed_rank

__version__ = "0.1.0"

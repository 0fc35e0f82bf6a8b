"""Batch experiment runner: (method x seed) grids, aggregation, significance, ablations."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .art import ArtConfig, art_fit
from .config import ExperimentConfig
from .data import (
    Dataset,
    class_priors,
    load_csv,
    make_imbalanced,
    stratified_split,
    zscore_apply,
    zscore_fit,
)
from .losses import LossSpec, cost_sensitive_weights, ldam_margins
from .metrics import class_metrics, confusion
from .nn import fit, forward, init_mlp
from .resampling import (
    balance_to_majority,
    balance_to_minority,
    msmote,
    nearmiss,
    ros,
    rus,
    smote,
)
from .stats import average_ranks, paired_t_test, wilcoxon_signed_rank

METRIC_NAMES = ("macro_f1", "macro_precision", "macro_recall", "accuracy")


@dataclass
class CellResult:
    method: str
    seed: int
    macro_f1: float = math.nan
    macro_precision: float = math.nan
    macro_recall: float = math.nan
    accuracy: float = math.nan
    epochs_trained: int = 0
    error: str = None
    history: list = field(default_factory=list)
    boost_history: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class RunReport:
    name: str
    methods: list
    seeds: list
    cells: list  # CellResult, method-major
    aggregates: dict  # method -> {metric: (mean, std)}
    significance: dict  # method -> {"t_test": SignificanceResult, "wilcoxon": ...}
    avg_ranks: dict  # method -> mean rank on macro-F1

    def cell(self, method, seed) -> CellResult:
        for c in self.cells:
            if c.method == method and c.seed == seed:
                return c
        raise KeyError((method, seed))

    def scores(self, method, metric="macro_f1"):
        return [getattr(c, metric) for c in self.cells if c.method == method and c.ok]


def _train_plain(model, train, val, spec, cfg: ExperimentConfig, shuffle_rng):
    return fit(model, train, val, spec, cfg.trainer, shuffle_rng)


def run_cell(method: str, seed: int, bundle, cfg: ExperimentConfig) -> CellResult:
    """Train and evaluate one (method, seed) cell on a pre-split, normalized bundle."""
    train, val, test = bundle.train, bundle.validation, bundle.test
    cell = CellResult(method=method, seed=seed)
    params = cfg.method_params.get(method, {})
    init_rng = rngmod.stream(seed, "init")
    shuffle_rng = rngmod.stream(seed, "shuffle")
    method_rng = rngmod.stream(seed, "method")

    try:
        boost_history = []
        if method == "art":
            art_cfg = ArtConfig(
                blending_constant=cfg.blending_constant,
                boost_frequency=cfg.boost_frequency,
                trainer=cfg.trainer,
            )
            result = art_fit(
                train,
                val,
                art_cfg,
                rng_init=init_rng,
                rng_shuffle=shuffle_rng,
                rng_resample=rngmod.stream(seed, "resample"),
                hidden_widths=cfg.hidden_widths,
            )
            model, history = result.model, result.history
            boost_history = result.boost_history
            epochs = result.epochs_trained
        else:
            fit_train = train
            spec = LossSpec(kind="cross_entropy")
            if method == "ros":
                fit_train = ros(train, balance_to_majority(train), method_rng)
            elif method == "rus":
                fit_train = rus(train, balance_to_minority(train), method_rng)
            elif method == "smote":
                fit_train = smote(train, params["k"], balance_to_majority(train), method_rng)
            elif method == "msmote":
                fit_train = msmote(train, params["k"], balance_to_majority(train), method_rng)
            elif method == "nearmiss":
                fit_train = nearmiss(
                    train, params["version"], balance_to_minority(train), method_rng
                )
            elif method == "cost_sensitive":
                spec = LossSpec(
                    kind="cost_sensitive",
                    class_weights=cost_sensitive_weights(class_priors(train)),
                )
            elif method == "focal":
                spec = LossSpec(kind="focal", gamma=params["gamma"])
            elif method == "ohem":
                spec = LossSpec(kind="ohem", ohem_fraction=params["fraction"])
            elif method == "ldam_drw":
                spec = LossSpec(
                    kind="ldam_drw",
                    ldam_margins=ldam_margins(train.class_counts(), params["max_margin"]),
                    class_weights=cost_sensitive_weights(class_priors(train)),
                    drw_start_epoch=params["drw_start_epoch"],
                )
            elif method != "baseline":
                raise ValueError(f"unknown method {method!r}")
            widths = [train.n_features, *cfg.hidden_widths, train.num_classes]
            model = init_mlp(widths, init_rng)
            result = _train_plain(model, fit_train, val, spec, cfg, shuffle_rng)
            history, epochs = result.history, result.epochs_trained

        preds = np.argmax(forward(model, test.features), axis=1)
        m = class_metrics(confusion(test.labels, preds, test.num_classes))
        cell.macro_f1 = m.macro_f1
        cell.macro_precision = m.macro_precision
        cell.macro_recall = m.macro_recall
        cell.accuracy = m.accuracy
        cell.epochs_trained = epochs
        cell.history = history
        cell.boost_history = boost_history
    except Exception as exc:  # cell failures must not sink the whole grid
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def prepare_bundle(ds: Dataset, seed: int):
    """Split and z-score a dataset the way every method sees it for one seed."""
    bundle = stratified_split(ds, rng=rngmod.stream(seed, "split"))
    stats = zscore_fit(bundle.train)
    return type(bundle)(
        train=zscore_apply(stats, bundle.train),
        validation=zscore_apply(stats, bundle.validation),
        test=zscore_apply(stats, bundle.test),
    )


def run_experiment(cfg: ExperimentConfig, dataset: Dataset = None) -> RunReport:
    """Execute the full (method x seed) grid and assemble the report."""
    if dataset is None:
        dataset = load_csv(cfg.dataset, cfg.label_column)

    bundles = {seed: prepare_bundle(dataset, seed) for seed in cfg.seeds}
    cells = [
        run_cell(method, seed, bundles[seed], cfg)
        for method in cfg.methods
        for seed in cfg.seeds
    ]

    aggregates = {}
    for method in cfg.methods:
        aggregates[method] = {}
        for metric in METRIC_NAMES:
            vals = [
                getattr(c, metric) for c in cells if c.method == method and c.ok
            ]
            if vals:
                arr = np.asarray(vals)
                std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
                aggregates[method][metric] = (float(arr.mean()), std)
            else:
                aggregates[method][metric] = (math.nan, math.nan)

    significance = {}
    if "art" in cfg.methods:
        art_by_seed = {
            c.seed: c.macro_f1 for c in cells if c.method == "art" and c.ok
        }
        for method in cfg.methods:
            if method == "art":
                continue
            pairs = [
                (art_by_seed[c.seed], c.macro_f1)
                for c in cells
                if c.method == method and c.ok and c.seed in art_by_seed
            ]
            if len(pairs) >= 2:
                a, b = zip(*pairs)
                significance[method] = {
                    "t_test": paired_t_test(a, b),
                    "wilcoxon": wilcoxon_signed_rank(a, b),
                }

    complete_seeds = [
        s
        for s in cfg.seeds
        if all(any(c.method == m and c.seed == s and c.ok for c in cells) for m in cfg.methods)
    ]
    ranks = {}
    if complete_seeds and len(cfg.methods) > 1:
        scores = {
            m: [
                next(c.macro_f1 for c in cells if c.method == m and c.seed == s)
                for s in complete_seeds
            ]
            for m in cfg.methods
        }
        ranks = average_ranks(scores)

    return RunReport(
        name=cfg.name,
        methods=list(cfg.methods),
        seeds=list(cfg.seeds),
        cells=cells,
        aggregates=aggregates,
        significance=significance,
        avg_ranks=ranks,
    )


DEFAULT_ABLATION_VALUES = {
    "blending_constant": [round(0.1 * i, 1) for i in range(11)],
    "boost_frequency": list(range(1, 11)),
    "model_width": [16, 32, 64, 128, 256, 512],
    "imbalance_ratio": [2, 5, 10, 20, 50],
}


def run_ablation(cfg: ExperimentConfig, dataset: Dataset = None) -> dict:
    """Run one ablation sweep; returns {series_label: {value: RunReport}}."""
    if not cfg.ablation:
        raise ValueError("config has no ablation block")
    var = cfg.ablation["variable"]
    values = cfg.ablation.get("values") or DEFAULT_ABLATION_VALUES[var]
    if dataset is None:
        dataset = load_csv(cfg.dataset, cfg.label_column)

    import copy

    out = {}
    if var == "blending_constant":
        for bf in cfg.ablation.get("boost_frequencies", [1, 4, 8]):
            series = {}
            for c in values:
                sub = copy.deepcopy(cfg)
                sub.methods = ["art"]
                sub.blending_constant = float(c)
                sub.boost_frequency = int(bf)
                series[c] = run_experiment(sub, dataset)
            out[f"bf={bf}"] = series
    elif var == "boost_frequency":
        for c in cfg.ablation.get("blending_constants", [0.25, 0.5, 0.75]):
            series = {}
            for bf in values:
                sub = copy.deepcopy(cfg)
                sub.methods = ["art"]
                sub.blending_constant = float(c)
                sub.boost_frequency = int(bf)
                series[bf] = run_experiment(sub, dataset)
            out[f"c={c}"] = series
    elif var == "model_width":
        series = {}
        for width in values:
            sub = copy.deepcopy(cfg)
            sub.methods = ["baseline", "art"]
            sub.hidden_widths = [int(width)]
            series[width] = run_experiment(sub, dataset)
        out["width"] = series
    elif var == "imbalance_ratio":
        majority = int(np.argmax(dataset.class_counts()))
        series = {}
        for ratio in values:
            sub = copy.deepcopy(cfg)
            sub.methods = ["baseline", "art"]
            variant = (
                dataset
                if ratio == 1
                else make_imbalanced(
                    dataset, float(ratio), majority, rngmod.stream(0, "imbalance")
                )
            )
            series[ratio] = run_experiment(sub, variant)
        out["imbalance"] = series
    return out

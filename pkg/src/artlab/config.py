"""Experiment configuration: YAML schema plus key=value CLI overrides."""

import copy
from dataclasses import dataclass, field

import yaml

from .nn import TrainerConfig

# 20-seed evaluation protocol used by every shipped experiment config.
DEFAULT_SEEDS = (
    1834, 8993, 412, 4523, 182, 41921, 53178, 4536, 89, 101172,
    3812, 76459, 21734, 5601, 14923, 32871, 982, 61435, 23490, 7711,
)

ALL_METHODS = (
    "baseline", "ros", "rus", "smote", "msmote", "nearmiss",
    "cost_sensitive", "focal", "ohem", "ldam_drw", "art",
)

DEFAULT_METHOD_PARAMS = {
    "smote": {"k": 5},
    "msmote": {"k": 5},
    "nearmiss": {"version": 1},
    "focal": {"gamma": 2.0},
    "ohem": {"fraction": 0.7},
    "ldam_drw": {"max_margin": 0.5, "drw_start_epoch": None},  # None -> epochs // 2
}

ABLATION_VARIABLES = ("blending_constant", "boost_frequency", "model_width", "imbalance_ratio")


@dataclass
class ExperimentConfig:
    dataset: str
    label_column: str
    name: str = "experiment"
    seeds: list = field(default_factory=lambda: list(DEFAULT_SEEDS))
    methods: list = field(default_factory=lambda: list(ALL_METHODS))
    hidden_widths: list = field(default_factory=lambda: [64])
    trainer: TrainerConfig = field(default_factory=TrainerConfig)
    blending_constant: float = 0.5
    boost_frequency: int = 4
    method_params: dict = field(default_factory=dict)
    ablation: dict = field(default_factory=dict)  # {"variable": ..., "values": [...]}
    emit_histories: bool = True

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("seed list must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be unique")
        unknown = [m for m in self.methods if m not in ALL_METHODS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        merged = copy.deepcopy(DEFAULT_METHOD_PARAMS)
        for k, v in self.method_params.items():
            merged.setdefault(k, {}).update(v or {})
        self.method_params = merged
        if self.method_params["ldam_drw"]["drw_start_epoch"] is None:
            self.method_params["ldam_drw"]["drw_start_epoch"] = self.trainer.epochs // 2
        if self.ablation:
            var = self.ablation.get("variable")
            if var not in ABLATION_VARIABLES:
                raise ValueError(f"unknown ablation variable {var!r}")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = copy.deepcopy(raw)
        trainer = TrainerConfig(**raw.pop("trainer", {}))
        art = raw.pop("art", {})
        return cls(
            trainer=trainer,
            blending_constant=art.get("blending_constant", 0.5),
            boost_frequency=art.get("boost_frequency", 4),
            **raw,
        )

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
        if not isinstance(raw, dict):
            raise ValueError(f"config file {path} must contain a mapping")
        return cls.from_dict(raw)


def apply_overrides(cfg: ExperimentConfig, overrides) -> ExperimentConfig:
    """Apply dotted key=value overrides, e.g. trainer.lr_max=0.001."""
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not of the form key=value")
        key, raw_val = item.split("=", 1)
        val = yaml.safe_load(raw_val)
        target = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            if isinstance(target, dict):
                if part not in target:
                    raise ValueError(f"unknown config key {key!r}")
                target = target[part]
            else:
                if not hasattr(target, part):
                    raise ValueError(f"unknown config key {key!r}")
                target = getattr(target, part)
        leaf = parts[-1]
        if isinstance(target, dict):
            target[leaf] = val
        elif hasattr(target, leaf):
            setattr(target, leaf, val)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return cfg

"""Feed-forward classifier with exact backprop, AdamW, cosine LR and early stopping."""

import math
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .losses import LossSpec, loss_and_grad


class MlpModel:
    """ReLU MLP producing logits; softmax is applied inside the losses."""

    def __init__(self, layer_widths, weights, biases):
        self.layer_widths = list(layer_widths)
        self.weights = weights  # list of (fan_in, fan_out) arrays
        self.biases = biases  # list of (fan_out,) arrays

    @property
    def num_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "MlpModel":
        return MlpModel(
            self.layer_widths,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )

    def load(self, other: "MlpModel"):
        for w, ow in zip(self.weights, other.weights):
            w[...] = ow
        for b, ob in zip(self.biases, other.biases):
            b[...] = ob


def init_mlp(layer_widths, seed_or_rng) -> MlpModel:
    """He-scaled normal weights, zero biases; bit-identical for a fixed seed."""
    widths = list(layer_widths)
    if len(widths) < 2:
        raise ValueError("need at least input and output widths")
    if any(w < 1 for w in widths):
        raise ValueError("layer widths must be positive")
    rng = (
        seed_or_rng
        if isinstance(seed_or_rng, np.random.Generator)
        else np.random.default_rng(seed_or_rng)
    )
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        scale = math.sqrt(2.0 / fan_in)
        weights.append(rng.standard_normal((fan_in, fan_out)) * scale)
        biases.append(np.zeros(fan_out))
    return MlpModel(widths, weights, biases)


def _forward_cached(model: MlpModel, x: np.ndarray):
    """Returns logits plus pre/post-activation caches for backprop."""
    if x.shape[1] != model.layer_widths[0]:
        raise ValueError(
            f"batch has {x.shape[1]} features, model expects {model.layer_widths[0]}"
        )
    acts = [x]
    pre = []
    h = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = h @ w + b
        pre.append(z)
        h = z if i == last else np.maximum(z, 0.0)
        acts.append(h)
    return acts[-1], acts, pre


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Logits for a batch; deterministic."""
    return _forward_cached(model, np.asarray(x, dtype=np.float64))[0]


def backward(model: MlpModel, x, labels, loss_spec: LossSpec, epoch: int = 1):
    """Mean loss and exact parameter gradients for one batch."""
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    logits, acts, pre = _forward_cached(model, x)
    loss, dlogits = loss_and_grad(logits, labels, loss_spec, epoch=epoch)

    grads_w = [None] * len(model.weights)
    grads_b = [None] * len(model.biases)
    delta = dlogits
    for i in range(len(model.weights) - 1, -1, -1):
        grads_w[i] = acts[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (pre[i - 1] > 0)
    return loss, list(zip(grads_w, grads_b))


@dataclass
class AdamWState:
    lr: float
    betas: tuple = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 0.0
    t: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    def _ensure(self, model: MlpModel):
        if not self.m:
            for w, b in zip(model.weights, model.biases):
                self.m.append((np.zeros_like(w), np.zeros_like(b)))
                self.v.append((np.zeros_like(w), np.zeros_like(b)))


def adamw_step(state: AdamWState, model: MlpModel, grads):
    """One AdamW update in place: bias-corrected moments, decoupled decay."""
    state._ensure(model)
    state.t += 1
    b1, b2 = state.betas
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for i, (gw, gb) in enumerate(grads):
        if not (np.isfinite(gw).all() and np.isfinite(gb).all()):
            raise FloatingPointError(f"non-finite gradient in layer {i}")
        for p, g, m, v in (
            (model.weights[i], gw, state.m[i][0], state.v[i][0]),
            (model.biases[i], gb, state.m[i][1], state.v[i][1]),
        ):
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * g * g
            p *= 1.0 - state.lr * state.weight_decay
            p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)


def cosine_lr(epoch: int, total: int, lr_max: float, lr_min: float) -> float:
    """Cosine anneal from lr_max (epoch 0) down to lr_min (epoch == total)."""
    if total < 1:
        raise ValueError("total epochs must be >= 1")
    if not 0 <= epoch <= total:
        raise ValueError(f"epoch {epoch} outside [0, {total}]")
    return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + math.cos(math.pi * epoch / total))


@dataclass
class EarlyStopState:
    patience: int = 10
    best_loss: float = math.inf
    since_improvement: int = 0
    best_params: MlpModel = None


def early_stop_observe(state: EarlyStopState, val_loss: float, model: MlpModel) -> bool:
    """Record one epoch's validation loss; True means stop (best params restored)."""
    if val_loss < state.best_loss:
        state.best_loss = val_loss
        state.since_improvement = 0
        state.best_params = model.copy()
        return False
    state.since_improvement += 1
    if state.since_improvement > state.patience:
        if state.best_params is not None:
            model.load(state.best_params)
        return True
    return False


@dataclass
class TrainerConfig:
    epochs: int = 200
    batch_size: int = 32
    lr_max: float = 3e-3
    lr_min: float = 1e-5
    betas: tuple = (0.9, 0.999)
    eps: float = 1e-8
    weight_decay: float = 1e-4
    patience: int = 10


@dataclass
class FitResult:
    model: MlpModel
    history: list  # rows of (epoch, lr, train_loss, val_loss)
    epochs_trained: int
    best_val_loss: float


def fit(
    model: MlpModel,
    train: Dataset,
    val: Dataset,
    loss_spec: LossSpec,
    cfg: TrainerConfig,
    rng: np.random.Generator,
    epoch_hook=None,
) -> FitResult:
    """Minibatch training loop with cosine LR and early stopping.

    epoch_hook(epoch, model, val_logits) may return a replacement training
    Dataset used from the next epoch on; this is the adaptive-resampling
    entry point. Validation loss for early stopping is plain cross-entropy,
    identical across methods.
    """
    if len(train) == 0:
        raise ValueError("empty training set")
    opt = AdamWState(
        lr=cfg.lr_max, betas=cfg.betas, eps=cfg.eps, weight_decay=cfg.weight_decay
    )
    stopper = EarlyStopState(patience=cfg.patience)
    val_spec = LossSpec(kind="cross_entropy")
    history = []
    current = train
    epochs_run = 0

    for epoch in range(1, cfg.epochs + 1):
        lr = cosine_lr(epoch - 1, cfg.epochs, cfg.lr_max, cfg.lr_min)
        opt.lr = lr
        order = rng.permutation(len(current))
        total_loss = 0.0
        for start in range(0, len(current), cfg.batch_size):
            sel = order[start : start + cfg.batch_size]
            loss, grads = backward(
                model, current.features[sel], current.labels[sel], loss_spec, epoch
            )
            adamw_step(opt, model, grads)
            total_loss += loss * sel.size
        train_loss = total_loss / len(current)

        val_logits = forward(model, val.features)
        val_loss, _ = loss_and_grad(val_logits, val.labels, val_spec)
        history.append((epoch, lr, train_loss, val_loss))
        epochs_run = epoch

        if epoch_hook is not None:
            replacement = epoch_hook(epoch, model, val_logits)
            if replacement is not None:
                current = replacement
        if early_stop_observe(stopper, val_loss, model):
            break
    else:
        if stopper.best_params is not None:
            model.load(stopper.best_params)

    return FitResult(
        model=model,
        history=history,
        epochs_trained=epochs_run,
        best_val_loss=stopper.best_loss,
    )

"""From-scratch fully connected network for quantum-number regression.

Nine scaled inputs, six linear outputs, tanh or relu hidden layers.  Loss is
the mean squared error over all output scalars (rows times six) and the
secondary metric is the matching mean absolute error.  Optimization is Adam
with bias-corrected moment estimates.

Everything is plain numpy; gradients are exact backpropagation and are
checked against central finite differences in the test suite.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadShape,
    Divergence,
    NonFiniteInput,
    ParseError,
    ShapeMismatch,
    VersionMismatch,
)

MODEL_HEADER = "mlpmodel v1"

INPUT_SIZE = 9
OUTPUT_SIZE = 6

# clamping bounds for rounded predictions, per target component
TARGET_BOUNDS = {
    "n2": (4, 13),
    "l2": (1, 10),
    "j2": (0.5, 10.5),
    "n3": (6, 14),
    "l3": (1, 11),
    "j3": (0.5, 11.5),
}

TARGET_LO = np.array([b[0] for b in TARGET_BOUNDS.values()], dtype=float)
TARGET_HI = np.array([b[1] for b in TARGET_BOUNDS.values()], dtype=float)

# the training pipeline regresses min-max normalized quantum numbers (the
# loss and MAE are then dimensionless, which is what makes reported MAE
# values comparable across components); "none" trains on raw targets
TARGET_SCALINGS = ("none", "minmax")

ACTIVATIONS = ("tanh", "relu")


def scale_targets(y: np.ndarray) -> np.ndarray:
    """Map raw quantum-number targets onto [0, 1] per component."""
    return (np.asarray(y, dtype=float) - TARGET_LO) / (TARGET_HI - TARGET_LO)


def unscale_targets(y: np.ndarray) -> np.ndarray:
    return np.asarray(y, dtype=float) * (TARGET_HI - TARGET_LO) + TARGET_LO

# training is declared divergent when an epoch loss is non-finite or runs
# away by this factor over the untrained baseline loss (with an absolute
# floor, so tiny baselines cannot trip it)
_RUNAWAY_FACTOR = 1e6
_RUNAWAY_FLOOR = 1e3


@dataclass
class MLPModel:
    layer_sizes: tuple[int, ...]
    activation: str
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    seed: int
    target_scaling: str = "none"

    def n_parameters(self) -> int:
        return sum(w.size for w in self.weights) + sum(b.size for b in self.biases)

    def copy(self) -> "MLPModel":
        return MLPModel(
            self.layer_sizes,
            self.activation,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.seed,
            self.target_scaling,
        )


def init_network(
    layer_sizes: tuple[int, ...] | list[int],
    activation: str = "tanh",
    seed: int = 0,
    target_scaling: str = "none",
) -> MLPModel:
    """Uniform fan-based initialization, zero biases, deterministic per seed."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise BadShape(f"invalid layer sizes {sizes}")
    if sizes[0] != INPUT_SIZE or sizes[-1] != OUTPUT_SIZE:
        raise BadShape(
            f"network must map {INPUT_SIZE} inputs to {OUTPUT_SIZE} outputs, "
            f"got {sizes}"
        )
    if activation not in ACTIVATIONS:
        raise BadShape(f"activation must be one of {ACTIVATIONS}, got {activation!r}")
    if target_scaling not in TARGET_SCALINGS:
        raise BadShape(f"unknown target scaling {target_scaling!r}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MLPModel(sizes, activation, weights, biases, seed, target_scaling)


def _act(z: np.ndarray, kind: str) -> np.ndarray:
    return np.tanh(z) if kind == "tanh" else np.maximum(z, 0.0)


def _act_prime_from_output(a: np.ndarray, z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "tanh":
        return 1.0 - a * a
    return (z > 0.0).astype(z.dtype)


def _forward_cached(model: MLPModel, x: np.ndarray):
    activations = [x]
    zs = []
    a = x
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w.T + b
        zs.append(z)
        a = z if k == last else _act(z, model.activation)
        activations.append(a)
    return zs, activations


def forward(model: MLPModel, x: np.ndarray) -> np.ndarray:
    """Network output for a single 9-vector or an (N, 9) batch."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput("input contains non-finite values")
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.shape[1] != model.layer_sizes[0]:
        raise ShapeMismatch(
            f"expected {model.layer_sizes[0]} features, got {arr.shape[1]}"
        )
    _, activations = _forward_cached(model, arr)
    out = activations[-1]
    return out[0] if single else out


def loss_and_mae(pred: np.ndarray, target: np.ndarray) -> tuple[float, float]:
    """MSE and MAE over all output scalars (N counts rows times components)."""
    p = np.asarray(pred, dtype=float)
    t = np.asarray(target, dtype=float)
    if p.shape != t.shape or p.size == 0:
        raise ShapeMismatch(f"shape mismatch or empty batch: {p.shape} vs {t.shape}")
    diff = p - t
    return float(np.mean(diff * diff)), float(np.mean(np.abs(diff)))


def backward(
    model: MLPModel, x: np.ndarray, y: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact gradients of the MSE loss for one batch."""
    xb = np.atleast_2d(np.asarray(x, dtype=float))
    yb = np.atleast_2d(np.asarray(y, dtype=float))
    if xb.shape[0] != yb.shape[0] or xb.shape[0] == 0:
        raise ShapeMismatch("batch sizes differ or batch is empty")
    if yb.shape[1] != model.layer_sizes[-1]:
        raise ShapeMismatch(
            f"expected {model.layer_sizes[-1]} targets, got {yb.shape[1]}"
        )
    zs, activations = _forward_cached(model, xb)
    n_total = yb.size
    delta = 2.0 * (activations[-1] - yb) / n_total
    grad_w = [np.empty(0)] * len(model.weights)
    grad_b = [np.empty(0)] * len(model.biases)
    for k in range(len(model.weights) - 1, -1, -1):
        grad_w[k] = delta.T @ activations[k]
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ model.weights[k]) * _act_prime_from_output(
                activations[k], zs[k - 1], model.activation
            )
    return grad_w, grad_b


@dataclass
class AdamState:
    """First/second moment accumulators and step counter."""

    lr: float
    m_w: list[np.ndarray]
    v_w: list[np.ndarray]
    m_b: list[np.ndarray]
    v_b: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_model(cls, model: MLPModel, lr: float) -> "AdamState":
        return cls(
            lr=lr,
            m_w=[np.zeros_like(w) for w in model.weights],
            v_w=[np.zeros_like(w) for w in model.weights],
            m_b=[np.zeros_like(b) for b in model.biases],
            v_b=[np.zeros_like(b) for b in model.biases],
        )


def adam_step(
    state: AdamState,
    model: MLPModel,
    grad_w: list[np.ndarray],
    grad_b: list[np.ndarray],
) -> None:
    """One in-place Adam update: theta -= lr * m_hat / (sqrt(v_hat) + eps)."""
    if len(grad_w) != len(model.weights) or len(grad_b) != len(model.biases):
        raise ShapeMismatch("gradient structure does not match the model")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for params, grads, ms, vs in (
        (model.weights, grad_w, state.m_w, state.v_w),
        (model.biases, grad_b, state.m_b, state.v_b),
    ):
        for p, g, m, v in zip(params, grads, ms, vs):
            if g.shape != p.shape:
                raise ShapeMismatch(f"gradient shape {g.shape} != param {p.shape}")
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.eps)


@dataclass
class TrainHistory:
    """Per-epoch metrics plus the pinned run configuration."""

    epochs: list[int] = field(default_factory=list)
    train_loss: list[float] = field(default_factory=list)
    train_mae: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    val_mae: list[float] = field(default_factory=list)
    wall_time_s: list[float] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for key in sorted(self.meta):
                fh.write(f"# {key}={self.meta[key]}\n")
            fh.write("epoch,train_loss,train_mae,val_loss,val_mae,wall_time_s\n")
            for row in zip(
                self.epochs, self.train_loss, self.train_mae,
                self.val_loss, self.val_mae, self.wall_time_s,
            ):
                fh.write(",".join(repr(v) if isinstance(v, float) else str(v)
                                  for v in row) + "\n")

    def final(self) -> dict:
        return {
            "train_loss": self.train_loss[-1],
            "train_mae": self.train_mae[-1],
            "val_loss": self.val_loss[-1],
            "val_mae": self.val_mae[-1],
        }


def train(
    model: MLPModel,
    train_xy: tuple[np.ndarray, np.ndarray],
    val_xy: tuple[np.ndarray, np.ndarray],
    epochs: int = 100,
    batch_size: int = 256,
    lr: float = 0.01,
    seed: int = 0,
    patience: int = 10,
) -> tuple[MLPModel, TrainHistory]:
    """Mini-batch Adam training with per-epoch metrics and early stopping.

    Batch order is drawn from a dedicated RNG seeded by ``seed``, so runs are
    reproducible.  Training stops early when the validation loss has not
    improved for ``patience`` consecutive epochs (set patience <= 0 to
    disable).  Raises Divergence when the loss becomes non-finite or exceeds
    a large runaway factor of the first epoch's loss.
    """
    x_train, y_train = (np.asarray(a, dtype=float) for a in train_xy)
    x_val, y_val = (np.asarray(a, dtype=float) for a in val_xy)
    if x_train.shape[0] == 0 or x_val.shape[0] == 0:
        raise ShapeMismatch("training and validation sets must be non-empty")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    rng = np.random.default_rng(seed)
    state = AdamState.for_model(model, lr)
    history = TrainHistory(
        meta={
            "layers": "x".join(str(s) for s in model.layer_sizes),
            "activation": model.activation,
            "lr": lr,
            "batch_size": batch_size,
            "seed": seed,
            "init": "uniform_fan",
            "beta1": state.beta1,
            "beta2": state.beta2,
            "eps_adam": state.eps,
            "patience": patience,
        }
    )
    n = x_train.shape[0]
    # untrained baseline anchors the runaway guard
    baseline, _ = loss_and_mae(forward(model, x_train), y_train)
    runaway = max(_RUNAWAY_FLOOR, _RUNAWAY_FACTOR * baseline)
    best_val = np.inf
    stale = 0
    t_start = time.perf_counter()
    for epoch in range(1, epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            grad_w, grad_b = backward(model, x_train[idx], y_train[idx])
            adam_step(state, model, grad_w, grad_b)
        tr_loss, tr_mae = loss_and_mae(forward(model, x_train), y_train)
        vl_loss, vl_mae = loss_and_mae(forward(model, x_val), y_val)
        history.epochs.append(epoch)
        history.train_loss.append(tr_loss)
        history.train_mae.append(tr_mae)
        history.val_loss.append(vl_loss)
        history.val_mae.append(vl_mae)
        history.wall_time_s.append(time.perf_counter() - t_start)
        if not (np.isfinite(tr_loss) and np.isfinite(vl_loss)) or tr_loss > runaway:
            raise Divergence(
                f"loss diverged at epoch {epoch}: train={tr_loss}, val={vl_loss}"
            )
        if patience > 0:
            if vl_loss < best_val * (1.0 - 1e-12):
                best_val = vl_loss
                stale = 0
            else:
                stale += 1
                if stale >= patience:
                    break
    return model, history


@dataclass
class SweepConfig:
    layout: tuple[int, ...]
    lr: float
    activation: str

    @property
    def depth(self) -> int:
        return len(self.layout)

    def tag(self) -> str:
        return (
            f"{self.depth}HL[" + ",".join(str(w) for w in self.layout) + "]"
            f"-{self.activation}-lr{self.lr}"
        )


@dataclass
class SweepRow:
    config: SweepConfig
    seed: int
    train_loss: float
    train_mae: float
    val_loss: float
    val_mae: float
    diverged: bool

    @property
    def ratio_loss(self) -> float:
        return self.val_loss / self.train_loss if self.train_loss else float("nan")

    @property
    def ratio_mae(self) -> float:
        return self.val_mae / self.train_mae if self.train_mae else float("nan")


@dataclass
class SweepResult:
    rows: list[SweepRow]
    best_index: int
    size_study: list[dict]

    @property
    def best(self) -> SweepRow:
        return self.rows[self.best_index]

    def two_hidden_layers_best_mae(self) -> bool:
        """Whether the 2-hidden-layer family attains the lowest val MAE."""
        by_family: dict[int, float] = {}
        for row in self.rows:
            if row.diverged:
                continue
            d = row.config.depth
            by_family[d] = min(by_family.get(d, np.inf), row.val_mae)
        if not by_family:
            return False
        return min(by_family, key=by_family.get) == 2

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(
                "depth,layout,lr,activation,seed,train_loss,train_mae,"
                "val_loss,val_mae,ratio_loss,ratio_mae,diverged,best\n"
            )
            for i, row in enumerate(self.rows):
                fh.write(
                    f"{row.config.depth},{'x'.join(str(w) for w in row.config.layout)},"
                    f"{row.config.lr!r},{row.config.activation},{row.seed},"
                    f"{row.train_loss!r},{row.train_mae!r},"
                    f"{row.val_loss!r},{row.val_mae!r},"
                    f"{row.ratio_loss!r},{row.ratio_mae!r},"
                    f"{int(row.diverged)},{int(i == self.best_index)}\n"
                )

    def write_size_study_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(
                "family_depth,layout,lr,activation,size,train_loss,train_mae,"
                "val_loss,val_mae,ratio_loss,ratio_mae\n"
            )
            for row in self.size_study:
                fh.write(
                    f"{row['depth']},{row['layout']},{row['lr']!r},{row['activation']},"
                    f"{row['size']},{row['train_loss']!r},{row['train_mae']!r},"
                    f"{row['val_loss']!r},{row['val_mae']!r},"
                    f"{row['ratio_loss']!r},{row['ratio_mae']!r}\n"
                )


@dataclass(frozen=True)
class SweepSpace:
    """Grid searched by :func:`hyperparameter_sweep`.

    ``widths`` build uniform layouts (width repeated depth times); explicit
    mixed layouts can be appended through ``extra_layouts``.
    """

    depths: tuple[int, ...] = (2, 3, 4)
    widths: tuple[int, ...] = (32, 64, 128)
    lrs: tuple[float, ...] = (0.01, 0.1)
    activations: tuple[str, ...] = ("relu", "tanh")
    extra_layouts: tuple[tuple[int, ...], ...] = ()

    def configs(self) -> list[SweepConfig]:
        out = []
        for depth in self.depths:
            for width in self.widths:
                for lr in self.lrs:
                    for act in self.activations:
                        out.append(SweepConfig((width,) * depth, lr, act))
        for layout in self.extra_layouts:
            for lr in self.lrs:
                for act in self.activations:
                    out.append(SweepConfig(tuple(layout), lr, act))
        if not out:
            raise ValueError("sweep space is empty")
        return out


def hyperparameter_sweep(
    train_xy: tuple[np.ndarray, np.ndarray],
    val_xy: tuple[np.ndarray, np.ndarray],
    space: SweepSpace,
    sizes: tuple[int, ...] = (),
    epochs: int = 20,
    batch_size: int = 256,
    base_seed: int = 0,
    patience: int = 10,
) -> SweepResult:
    """Train every configuration (fixed per-config seed) and study sizes.

    Divergent configurations are recorded with NaN metrics and the sweep
    continues.  The size study trains the per-depth best configuration on
    nested subsets of the training data.
    """
    x_train, y_train = train_xy
    configs = space.configs()
    rows: list[SweepRow] = []
    for i, cfg in enumerate(configs):
        seed = base_seed + i
        rows.append(
            _train_row(cfg, seed, (x_train, y_train), val_xy, epochs, batch_size,
                       patience)
        )
    finite = [i for i, r in enumerate(rows) if not r.diverged]
    if not finite:
        raise Divergence("every sweep configuration diverged")
    best_index = min(finite, key=lambda i: rows[i].val_loss)

    size_study: list[dict] = []
    if sizes:
        for size in sizes:
            if size > x_train.shape[0]:
                raise ShapeMismatch(
                    f"size {size} exceeds available training rows {x_train.shape[0]}"
                )
        families: dict[int, SweepRow] = {}
        for i in finite:
            d = rows[i].config.depth
            if d not in families or rows[i].val_loss < families[d].val_loss:
                families[d] = rows[i]
        for depth in sorted(families):
            rep = families[depth]
            for size in sizes:
                sub = (x_train[:size], y_train[:size])
                row = _train_row(
                    rep.config, rep.seed, sub, val_xy, epochs, batch_size, patience
                )
                size_study.append(
                    {
                        "depth": depth,
                        "layout": "x".join(str(w) for w in rep.config.layout),
                        "lr": rep.config.lr,
                        "activation": rep.config.activation,
                        "size": size,
                        "train_loss": row.train_loss,
                        "train_mae": row.train_mae,
                        "val_loss": row.val_loss,
                        "val_mae": row.val_mae,
                        "ratio_loss": row.ratio_loss,
                        "ratio_mae": row.ratio_mae,
                    }
                )
    return SweepResult(rows=rows, best_index=best_index, size_study=size_study)


def _train_row(cfg, seed, train_xy, val_xy, epochs, batch_size, patience) -> SweepRow:
    model = init_network((INPUT_SIZE, *cfg.layout, OUTPUT_SIZE), cfg.activation, seed)
    try:
        _, hist = train(
            model, train_xy, val_xy, epochs=epochs, batch_size=batch_size,
            lr=cfg.lr, seed=seed, patience=patience,
        )
        final = hist.final()
        return SweepRow(cfg, seed, final["train_loss"], final["train_mae"],
                        final["val_loss"], final["val_mae"], diverged=False)
    except Divergence:
        nan = float("nan")
        return SweepRow(cfg, seed, nan, nan, nan, nan, diverged=True)


def _round_half_integer(x: float) -> float:
    return np.floor(x) + 0.5


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def predict_states(
    model: MLPModel, x: np.ndarray
) -> tuple[np.ndarray, tuple[int, int, float, int, int, float]]:
    """Raw 6-vector (in quantum-number units) plus rounded quantum numbers.

    Models trained on normalized targets are mapped back to quantum-number
    units first.  n and l round to nearest integers, j to the nearest
    half-odd-integer; all are clamped to the generation ranges.  Validity
    repair then enforces l < n first and j in {l - 1/2, l + 1/2} second, by
    minimal adjustment.
    """
    raw = forward(model, np.asarray(x, dtype=float))
    if raw.ndim != 1:
        raise ShapeMismatch("predict_states expects a single input vector")
    if model.target_scaling == "minmax":
        raw = unscale_targets(raw)
    out = []
    for (name, value) in zip(("n2", "l2", "j2", "n3", "l3", "j3"), raw):
        lo, hi = TARGET_BOUNDS[name]
        if name.startswith("j"):
            out.append(_clamp(_round_half_integer(float(value)), lo, hi))
        else:
            out.append(int(_clamp(np.floor(float(value) + 0.5), lo, hi)))
    n2, l2, j2, n3, l3, j3 = out
    l2 = int(min(l2, n2 - 1))
    l3 = int(min(l3, n3 - 1))
    j2 = l2 - 0.5 if abs(j2 - (l2 - 0.5)) <= abs(j2 - (l2 + 0.5)) else l2 + 0.5
    j3 = l3 - 0.5 if abs(j3 - (l3 - 0.5)) <= abs(j3 - (l3 + 0.5)) else l3 + 0.5
    return raw, (n2, l2, j2, n3, l3, j3)


def save_model(model: MLPModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(MODEL_HEADER + "\n")
        fh.write("layers," + ",".join(str(s) for s in model.layer_sizes) + "\n")
        fh.write(f"activation,{model.activation}\n")
        fh.write(f"seed,{model.seed}\n")
        fh.write(f"target_scaling,{model.target_scaling}\n")
        for k, (w, b) in enumerate(zip(model.weights, model.biases)):
            fh.write(f"layer,{k},{w.shape[0]},{w.shape[1]}\n")
            for row in w:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
            fh.write("bias," + ",".join(repr(float(v)) for v in b) + "\n")


def load_model(path: str) -> MLPModel:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines:
        raise ParseError(f"{path}: empty model file")
    if lines[0] != MODEL_HEADER:
        if lines[0].startswith("mlpmodel"):
            raise VersionMismatch(f"{path}: unsupported version {lines[0]!r}")
        raise ParseError(f"{path}: bad header {lines[0]!r}")
    try:
        sizes = tuple(int(s) for s in lines[1].split(",")[1:])
        activation = lines[2].split(",", 1)[1]
        seed = int(lines[3].split(",", 1)[1])
        if not lines[4].startswith("target_scaling,"):
            raise ParseError(f"{path}: missing target_scaling header line")
        target_scaling = lines[4].split(",", 1)[1]
        weights, biases = [], []
        i = 5
        for k in range(len(sizes) - 1):
            tag, idx, rows, cols = lines[i].split(",")
            if tag != "layer" or int(idx) != k:
                raise ParseError(f"{path}: line {i + 1}: expected layer {k} marker")
            rows, cols = int(rows), int(cols)
            w = np.array(
                [[float(v) for v in lines[i + 1 + r].split(",")] for r in range(rows)]
            )
            if w.shape != (rows, cols):
                raise ParseError(f"{path}: layer {k} has inconsistent row widths")
            bias_line = lines[i + 1 + rows]
            if not bias_line.startswith("bias,"):
                raise ParseError(f"{path}: layer {k} missing bias row")
            b = np.array([float(v) for v in bias_line.split(",")[1:]])
            if b.shape != (rows,):
                raise ParseError(f"{path}: layer {k} bias has wrong length")
            weights.append(w)
            biases.append(b)
            i += rows + 2
    except (IndexError, ValueError) as exc:
        raise ParseError(f"{path}: truncated or malformed model file ({exc})") from None
    model = MLPModel(sizes, activation, weights, biases, seed, target_scaling)
    expected = [(sizes[k + 1], sizes[k]) for k in range(len(sizes) - 1)]
    if [w.shape for w in weights] != expected:
        raise ParseError(f"{path}: weight shapes do not chain with the header")
    if activation not in ACTIVATIONS:
        raise ParseError(f"{path}: unknown activation {activation!r}")
    if target_scaling not in TARGET_SCALINGS:
        raise ParseError(f"{path}: unknown target scaling {target_scaling!r}")
    return model

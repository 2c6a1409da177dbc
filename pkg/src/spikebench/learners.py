"""The two evaluated branches and the static-feature control readout.

Hybrid branch: a linear softmax readout over per-channel spike counts,
trained by a local per-class delta rule with a choice of reward shaping
(signed ``target - p`` or positive-only ``target * (1 - p)``) and a
post-epoch class-row normalization schedule.  Spike counts are regenerated
per sample presentation (per epoch) from per-sample streams.

Competitive proxy branch: a bank of bounded, unit-norm prototype vectors
competing for each encoded sample.  The winner moves toward the input and
(under signed shaping) the runner-up is pushed away, both followed by
clip-to-bounds and L2 renormalization; a per-winner threshold bump with
global multiplicative decay discourages single-prototype dominance, and
classification reads the winner's accumulated label votes.

Control readout: the same delta rule on static feature vectors (pixels,
a fixed encoding, or temporal-task counts), with no re-encoding.

All trainers are pure functions of (config, split seed, model seed): the
stream for every stochastic choice is addressed by a seed path

    (experiment, 0) -> ("split", s) -> ("model", m)
      -> purpose ("train-order" | "encode-train" | "encode-test" | "init")
      -> ("epoch", e) -> ("sample", dataset_index)

with test encodings drawn once per model seed at epoch index 0.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import Dataset, SplitIndices
from .detrng import Stream, derive_child_states, hash_label, resolve_path
from .encoding import EncoderConfig, encode_counts_batch

SIGNED = "signed"
POSITIVE_ONLY = "positive_only"
SHAPING_MODES = (SIGNED, POSITIVE_ONLY)


# ---------------------------------------------------------------------------
# seed-path helpers

def _root_path(seed_label: str, split_seed: int, model_seed: int):
    return [(seed_label, 0), ("split", split_seed), ("model", model_seed)]


def order_stream(
    seed_label: str, split_seed: int, model_seed: int, epoch: int
) -> Stream:
    return resolve_path(
        _root_path(seed_label, split_seed, model_seed)
        + [("train-order", 0), ("epoch", epoch)]
    )


def init_stream(seed_label: str, split_seed: int, model_seed: int) -> Stream:
    return resolve_path(
        _root_path(seed_label, split_seed, model_seed) + [("init", 0)]
    )


def sample_encode_states(
    seed_label: str,
    split_seed: int,
    model_seed: int,
    purpose: str,
    epoch: int,
    sample_indices: np.ndarray,
) -> np.ndarray:
    """Initial stream states for encoding the given dataset indices."""
    prefix = resolve_path(
        _root_path(seed_label, split_seed, model_seed)
        + [(purpose, 0), ("epoch", epoch)]
    )
    return derive_child_states(
        prefix.state ^ hash_label("sample"), sample_indices.astype(np.uint64)
    )


def encode_counts_for(
    ds: Dataset,
    indices: np.ndarray,
    cfg: EncoderConfig,
    seed_label: str,
    split_seed: int,
    model_seed: int,
    purpose: str,
    epoch: int,
) -> np.ndarray:
    """Spike-count features for ds[indices] under the seed-path contract."""
    states = sample_encode_states(
        seed_label, split_seed, model_seed, purpose, epoch, indices
    )
    return encode_counts_batch(ds.features[indices], cfg, states)


# ---------------------------------------------------------------------------
# linear softmax readout with local delta rule

@dataclass
class ReadoutModel:
    weights: np.ndarray  # (classes, features)
    bias: np.ndarray     # (classes,)

    @classmethod
    def zeros(cls, classes: int, features: int) -> "ReadoutModel":
        return cls(np.zeros((classes, features)), np.zeros(classes))

    @property
    def class_count(self) -> int:
        return self.weights.shape[0]

    @property
    def param_count(self) -> int:
        return self.weights.size + self.bias.size


def readout_forward(model: ReadoutModel, features: np.ndarray) -> np.ndarray:
    """Class probabilities: softmax of W f + b with max subtraction."""
    logits = model.weights @ features + model.bias
    logits -= logits.max()
    e = np.exp(logits)
    return e / e.sum()


def one_hot(label: int, classes: int) -> np.ndarray:
    y = np.zeros(classes)
    y[label] = 1.0
    return y


def shaped_delta(probs: np.ndarray, target: np.ndarray, shaping: str) -> np.ndarray:
    """Per-class update direction under the chosen reward shaping.

    Signed shaping reinforces the target and depresses competitors
    (target - p); positive-only reinforces only the target component.
    """
    if not _is_one_hot(target):
        raise ValueError("target must be a one-hot vector")
    if shaping == SIGNED:
        return target - probs
    if shaping == POSITIVE_ONLY:
        return target * (1.0 - probs)
    raise ValueError(f"unknown shaping mode {shaping!r}")


def _is_one_hot(y: np.ndarray) -> bool:
    return (
        y.ndim == 1
        and np.all((y == 0.0) | (y == 1.0))
        and int(np.count_nonzero(y)) == 1
    )


def readout_update(
    model: ReadoutModel,
    features: np.ndarray,
    target: np.ndarray,
    shaping: str,
    learning_rate: float = 0.003,
) -> ReadoutModel:
    """One local delta-rule step; mutates and returns the model."""
    probs = readout_forward(model, features)
    delta = shaped_delta(probs, target, shaping)
    model.weights += (learning_rate * delta)[:, None] * features[None, :]
    model.bias += learning_rate * delta
    return model


@dataclass(frozen=True)
class NormSchedule:
    """Post-epoch class-row rescaling: W_row <- scale * row / (|row| + eps)."""

    mode: str            # 'on' | 'gentle' | 'off'
    scale: float = 0.98
    interval_epochs: int = 1
    epsilon: float = 1e-8

    @classmethod
    def on(cls) -> "NormSchedule":
        return cls("on", 0.98, 1)

    @classmethod
    def gentle(cls) -> "NormSchedule":
        return cls("gentle", 0.995, 5)

    @classmethod
    def off(cls) -> "NormSchedule":
        return cls("off", 1.0, 1)

    @classmethod
    def from_mode(cls, mode: str) -> "NormSchedule":
        try:
            return {"on": cls.on, "gentle": cls.gentle, "off": cls.off}[mode]()
        except KeyError:
            raise ValueError(f"unknown normalization mode {mode!r}") from None


def apply_normalization(
    model: ReadoutModel, schedule: NormSchedule, epoch_just_finished: int
) -> ReadoutModel:
    """Apply the schedule after the given 1-based epoch; off is a no-op."""
    if schedule.mode == "off":
        return model
    if epoch_just_finished % schedule.interval_epochs != 0:
        return model
    norms = np.linalg.norm(model.weights, axis=1, keepdims=True)
    model.weights *= schedule.scale / (norms + schedule.epsilon)
    return model


@dataclass
class TrainTrajectory:
    """Per-epoch test accuracy and mean class-row weight norm."""

    test_accuracy_pct: list[float] = field(default_factory=list)
    mean_row_norm: list[float] = field(default_factory=list)


def predict_batch(model: ReadoutModel, features: np.ndarray) -> np.ndarray:
    """Argmax class per row; softmax is monotone so logits suffice."""
    return np.argmax(features @ model.weights.T + model.bias, axis=1)


# ---------------------------------------------------------------------------
# hybrid branch: per-epoch re-encoded spike counts

@dataclass(frozen=True)
class HybridConfig:
    epochs: int = 18
    learning_rate: float = 0.003
    shaping: str = SIGNED
    norm_mode: str = "on"
    encoder: EncoderConfig = EncoderConfig()


@dataclass
class HybridResult:
    model: ReadoutModel
    trajectory: TrainTrajectory
    test_predictions: np.ndarray
    test_labels: np.ndarray
    mean_spikes_per_sample: float


def train_hybrid(
    ds: Dataset,
    split: SplitIndices,
    cfg: HybridConfig,
    seed_label: str,
    split_seed: int,
    model_seed: int,
) -> HybridResult:
    """Train the hybrid readout; deterministic in all arguments.

    Training order is reshuffled and training encodings are redrawn every
    epoch; the test encoding is drawn once and reused for the per-epoch
    trajectory and the final evaluation.
    """
    if split.train.size == 0:
        raise ValueError("empty training split")
    schedule = NormSchedule.from_mode(cfg.norm_mode)
    channels = cfg.encoder.channels(ds.feature_count)
    model = ReadoutModel.zeros(ds.class_count, channels)
    train_idx = split.train
    train_labels = ds.labels[train_idx]
    test_counts = encode_counts_for(
        ds, split.test, cfg.encoder, seed_label, split_seed, model_seed,
        "encode-test", 0,
    ).astype(np.float64)
    test_labels = ds.labels[split.test]
    traj = TrainTrajectory()
    spike_sum = 0
    for epoch in range(1, cfg.epochs + 1):
        counts = encode_counts_for(
            ds, train_idx, cfg.encoder, seed_label, split_seed, model_seed,
            "encode-train", epoch,
        )
        spike_sum += int(counts.sum())
        order = order_stream(seed_label, split_seed, model_seed, epoch).shuffle(
            train_idx.size
        )
        for pos in order:
            readout_update(
                model,
                counts[pos].astype(np.float64),
                one_hot(int(train_labels[pos]), ds.class_count),
                cfg.shaping,
                cfg.learning_rate,
            )
        apply_normalization(model, schedule, epoch)
        preds = predict_batch(model, test_counts)
        traj.test_accuracy_pct.append(100.0 * float(np.mean(preds == test_labels)))
        traj.mean_row_norm.append(
            float(np.linalg.norm(model.weights, axis=1).mean())
        )
    presentations = cfg.epochs * train_idx.size
    return HybridResult(
        model=model,
        trajectory=traj,
        test_predictions=predict_batch(model, test_counts),
        test_labels=test_labels,
        mean_spikes_per_sample=spike_sum / presentations if presentations else 0.0,
    )


# ---------------------------------------------------------------------------
# static-feature control readout (pixels / fixed encodings / temporal counts)

@dataclass(frozen=True)
class BaselineConfig:
    epochs: int = 60
    learning_rate: float = 0.01
    shaping: str = SIGNED
    norm_mode: str = "off"


def train_delta_readout(
    features: np.ndarray,
    labels: np.ndarray,
    train_indices: np.ndarray,
    classes: int,
    cfg: BaselineConfig,
    seed_label: str,
    split_seed: int,
    model_seed: int,
) -> ReadoutModel:
    """Delta-rule training on static features (no re-encoding)."""
    schedule = NormSchedule.from_mode(cfg.norm_mode)
    model = ReadoutModel.zeros(classes, features.shape[1])
    train_feats = features[train_indices]
    train_labels = labels[train_indices]
    for epoch in range(1, cfg.epochs + 1):
        order = order_stream(seed_label, split_seed, model_seed, epoch).shuffle(
            train_indices.size
        )
        for pos in order:
            readout_update(
                model,
                train_feats[pos],
                one_hot(int(train_labels[pos]), classes),
                cfg.shaping,
                cfg.learning_rate,
            )
        apply_normalization(model, schedule, epoch)
    return model


# ---------------------------------------------------------------------------
# competitive prototype proxy

@dataclass(frozen=True)
class ProxyConfig:
    neurons: int = 96
    epochs: int = 9
    shaping: str = SIGNED
    lr_potentiate: float = 0.08   # winner pull toward the input
    lr_depress: float = 0.01      # runner-up push away (signed shaping only)
    w_min: float = 0.0
    w_max: float = 1.0
    threshold_step: float = 0.05
    threshold_decay: float = 0.995
    norm_epsilon: float = 1e-8
    encoder: EncoderConfig = EncoderConfig()


@dataclass
class ProxyModel:
    prototypes: np.ndarray   # (neurons, features), unit L2 rows in [w_min, w_max]
    thresholds: np.ndarray   # (neurons,)
    votes: np.ndarray        # (neurons, classes) presentation counts
    config: ProxyConfig

    @classmethod
    def init(
        cls, features: int, classes: int, cfg: ProxyConfig, stream: Stream
    ) -> "ProxyModel":
        if cfg.neurons < 2:
            raise ValueError("competitive proxy needs at least 2 prototypes")
        prototypes = stream.uniform_block(cfg.neurons * features).reshape(
            cfg.neurons, features
        )
        prototypes /= (
            np.linalg.norm(prototypes, axis=1, keepdims=True) + cfg.norm_epsilon
        )
        return cls(
            prototypes=prototypes,
            thresholds=np.zeros(cfg.neurons),
            votes=np.zeros((cfg.neurons, classes), dtype=np.int64),
            config=cfg,
        )

    @property
    def param_count(self) -> int:
        return self.prototypes.size + self.thresholds.size


def _unit(x: np.ndarray) -> np.ndarray:
    # zero vectors pass through: degenerate but reachable at zero peak rate
    n = np.linalg.norm(x)
    return x / n if n > 0.0 else x


def proxy_score(model: ProxyModel, x: np.ndarray) -> np.ndarray:
    """Prototype similarity minus thresholds, input L2-normalized."""
    return model.prototypes @ _unit(np.asarray(x, dtype=np.float64)) - model.thresholds


def proxy_step(model: ProxyModel, x: np.ndarray, label: int, shaping: str) -> ProxyModel:
    """One competitive update; mutates and returns the model."""
    cfg = model.config
    xh = _unit(np.asarray(x, dtype=np.float64))
    scores = model.prototypes @ xh - model.thresholds
    winner = int(np.argmax(scores))
    masked = scores.copy()
    masked[winner] = -np.inf
    runner_up = int(np.argmax(masked))
    p = model.prototypes
    p[winner] += cfg.lr_potentiate * (xh - p[winner])
    if shaping == SIGNED:
        p[runner_up] -= cfg.lr_depress * xh
        _clip_renorm(p, runner_up, cfg)
    elif shaping != POSITIVE_ONLY:
        raise ValueError(f"unknown shaping mode {shaping!r}")
    _clip_renorm(p, winner, cfg)
    model.thresholds[winner] += cfg.threshold_step
    model.thresholds *= cfg.threshold_decay
    model.votes[winner, label] += 1
    return model


def _clip_renorm(prototypes: np.ndarray, row: int, cfg: ProxyConfig) -> None:
    np.clip(prototypes[row], cfg.w_min, cfg.w_max, out=prototypes[row])
    prototypes[row] /= np.linalg.norm(prototypes[row]) + cfg.norm_epsilon


def _neuron_classes(model: ProxyModel) -> np.ndarray:
    """Class lookup per prototype; vote-less prototypes fall back to the
    globally most voted class."""
    totals = model.votes.sum(axis=1)
    if int(totals.sum()) == 0:
        raise ValueError("untrained proxy model: no votes recorded")
    fallback = int(np.argmax(model.votes.sum(axis=0)))
    classes = np.argmax(model.votes, axis=1)
    classes[totals == 0] = fallback
    return classes


def proxy_predict(model: ProxyModel, x: np.ndarray) -> int:
    """Class of the winning prototype via vote lookup."""
    winner = int(np.argmax(proxy_score(model, x)))
    return int(_neuron_classes(model)[winner])


def proxy_predict_batch(model: ProxyModel, features: np.ndarray) -> np.ndarray:
    scores = _batch_scores(model, features)
    return _neuron_classes(model)[np.argmax(scores, axis=1)]


def _batch_scores(model: ProxyModel, features: np.ndarray) -> np.ndarray:
    feats = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(feats, axis=1, keepdims=True)
    unit = np.divide(feats, norms, out=feats.copy(), where=norms > 0.0)
    return unit @ model.prototypes.T - model.thresholds


def winner_margin(model: ProxyModel, features: np.ndarray) -> float:
    """Mean top-minus-second activation over a feature batch."""
    scores = _batch_scores(model, features)
    top2 = np.partition(scores, scores.shape[1] - 2, axis=1)[:, -2:]
    return float((top2[:, 1] - top2[:, 0]).mean())


@dataclass
class ProxyResult:
    model: ProxyModel
    test_predictions: np.ndarray
    test_labels: np.ndarray
    mean_spikes_per_sample: float
    winner_margin_mean: float


def proxy_fit(
    ds: Dataset,
    split: SplitIndices,
    cfg: ProxyConfig,
    seed_label: str,
    split_seed: int,
    model_seed: int,
) -> ProxyResult:
    """Epoch loop of competitive updates with per-epoch re-encoding."""
    channels = cfg.encoder.channels(ds.feature_count)
    model = ProxyModel.init(
        channels, ds.class_count, cfg,
        init_stream(seed_label, split_seed, model_seed),
    )
    train_idx = split.train
    train_labels = ds.labels[train_idx]
    spike_sum = 0
    for epoch in range(1, cfg.epochs + 1):
        counts = encode_counts_for(
            ds, train_idx, cfg.encoder, seed_label, split_seed, model_seed,
            "encode-train", epoch,
        )
        spike_sum += int(counts.sum())
        order = order_stream(seed_label, split_seed, model_seed, epoch).shuffle(
            train_idx.size
        )
        for pos in order:
            proxy_step(
                model, counts[pos].astype(np.float64),
                int(train_labels[pos]), cfg.shaping,
            )
    test_counts = encode_counts_for(
        ds, split.test, cfg.encoder, seed_label, split_seed, model_seed,
        "encode-test", 0,
    ).astype(np.float64)
    presentations = cfg.epochs * train_idx.size
    return ProxyResult(
        model=model,
        test_predictions=proxy_predict_batch(model, test_counts),
        test_labels=ds.labels[split.test],
        mean_spikes_per_sample=spike_sum / presentations if presentations else 0.0,
        winner_margin_mean=winner_margin(model, test_counts),
    )


# ---------------------------------------------------------------------------
# flat binary model snapshots

_READOUT_MAGIC = b"SBR1"
_PROXY_MAGIC = b"SBP1"


def save_readout(model: ReadoutModel, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(_READOUT_MAGIC)
        fh.write(struct.pack("<II", *model.weights.shape))
        fh.write(np.ascontiguousarray(model.weights, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.bias, dtype="<f8").tobytes())


def load_readout(path: str | Path) -> ReadoutModel:
    raw = Path(path).read_bytes()
    if raw[:4] != _READOUT_MAGIC:
        raise ValueError(f"{path}: not a readout snapshot")
    classes, feats = struct.unpack("<II", raw[4:12])
    body = np.frombuffer(raw[12:], dtype="<f8")
    if body.size != classes * feats + classes:
        raise ValueError(f"{path}: truncated readout snapshot")
    return ReadoutModel(
        weights=body[: classes * feats].reshape(classes, feats).copy(),
        bias=body[classes * feats :].copy(),
    )


def save_proxy(model: ProxyModel, path: str | Path) -> None:
    neurons, feats = model.prototypes.shape
    classes = model.votes.shape[1]
    with open(path, "wb") as fh:
        fh.write(_PROXY_MAGIC)
        fh.write(struct.pack("<III", neurons, feats, classes))
        fh.write(np.ascontiguousarray(model.prototypes, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.thresholds, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.votes, dtype="<i8").tobytes())


def load_proxy(path: str | Path, cfg: ProxyConfig | None = None) -> ProxyModel:
    raw = Path(path).read_bytes()
    if raw[:4] != _PROXY_MAGIC:
        raise ValueError(f"{path}: not a proxy snapshot")
    neurons, feats, classes = struct.unpack("<III", raw[4:16])
    offset = 16
    w_end = offset + neurons * feats * 8
    t_end = w_end + neurons * 8
    v_end = t_end + neurons * classes * 8
    if len(raw) != v_end:
        raise ValueError(f"{path}: truncated proxy snapshot")
    return ProxyModel(
        prototypes=np.frombuffer(raw[offset:w_end], dtype="<f8")
        .reshape(neurons, feats).copy(),
        thresholds=np.frombuffer(raw[w_end:t_end], dtype="<f8").copy(),
        votes=np.frombuffer(raw[t_end:v_end], dtype="<i8")
        .reshape(neurons, classes).copy(),
        config=cfg or ProxyConfig(neurons=neurons),
    )

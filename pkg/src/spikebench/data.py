"""Dataset ingestion, stratified splitting, and the temporal-order task.

The benchmark's primary dataset is the 8x8 optical digits set (1797 samples,
integer intensities 0..16, ten classes), read from a headerless CSV of 64
feature columns plus one label column.  Data files are not bundled; see
``export_digits_csv`` for materializing the canonical file offline and
``KNOWN_FILE_DIGESTS`` for its checksum.

Splitting is stratified 64/16/20 train/val/test, driven only by the split
seed (never by model seed or experiment), with per-class apportionment by
largest remainder so the digits test partition has exactly 360 samples.

The synthetic temporal-order task emits spike rasters directly: two channel
groups each fire one fixed-length burst per sample, and only the burst
ORDER carries the class, so per-channel spike counts are class-independent
by construction.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detrng import Stream, resolve_path


class DataError(Exception):
    """Malformed, missing, or out-of-contract input data."""


DIGITS_FILENAME = "digits_8x8.csv"

#: sha256 digests of known canonical data files (offline registry)
KNOWN_FILE_DIGESTS: dict[str, str] = {
    DIGITS_FILENAME: "6ebb3d2fee246a4e99363262ddf8a00a3c41bee6014c373ed9d9216ba7f651b8",
}

_DIGITS_MISSING_MSG = (
    "digits dataset not found at {path}.\n"
    "The benchmark reads the 8x8 optical digits as a headerless CSV with 64 "
    "integer feature columns (0..16) and one label column (0..9), 1797 rows.\n"
    "To materialize it offline from an existing scikit-learn installation:\n"
    "    python -c \"import spikebench.data as d; d.export_digits_csv('{path}')\"\n"
    "or download the UCI 'Optical Recognition of Handwritten Digits' test "
    "file (optdigits.tes), which holds the same 1797 samples in this format."
)


@dataclass
class Dataset:
    features: np.ndarray   # (n, F) float64 in [0, 1]
    labels: np.ndarray     # (n,) int64
    class_count: int
    provenance: str

    @property
    def sample_count(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]


@dataclass
class SplitIndices:
    """Disjoint, exhaustive train/val/test index lists (each sorted)."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def export_digits_csv(path: str | Path) -> Path:
    """Write the canonical digits CSV from scikit-learn's bundled copy."""
    try:
        from sklearn.datasets import load_digits as _sk_load
    except ImportError as exc:
        raise DataError(
            "scikit-learn is not installed; install it or fetch the UCI "
            "optical-digits file instead"
        ) from exc
    bunch = _sk_load()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for row, label in zip(bunch.data, bunch.target):
            cells = [str(int(v)) for v in row] + [str(int(label))]
            fh.write(",".join(cells) + "\n")
    return path


def _parse_int_csv(path: str | Path) -> list[list[int]]:
    rows: list[list[int]] = []
    try:
        fh = open(path, "r")
    except OSError as exc:
        raise DataError(_DIGITS_MISSING_MSG.format(path=path)) from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([int(cell) for cell in line.split(",")])
            except ValueError as exc:
                raise DataError(f"{path}: malformed row {lineno}: {line!r}") from exc
    return rows


def load_csv_generic(
    path: str | Path, feature_count: int, max_value: int
) -> Dataset:
    """Load a headerless integer CSV of features plus a trailing label column."""
    rows = _parse_int_csv(path)
    if not rows:
        raise DataError(f"{path}: no samples")
    width = feature_count + 1
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DataError(
                f"{path}: row {i} has {len(row)} columns, expected {width}"
            )
        for v in row[:-1]:
            if not 0 <= v <= max_value:
                raise DataError(
                    f"{path}: row {i} intensity {v} outside 0..{max_value}"
                )
        if row[-1] < 0:
            raise DataError(f"{path}: row {i} has negative label")
    arr = np.asarray(rows, dtype=np.int64)
    features = arr[:, :-1].astype(np.float64) / float(max_value)
    labels = arr[:, -1]
    return Dataset(
        features=features,
        labels=labels,
        class_count=int(labels.max()) + 1,
        provenance=str(path),
    )


def load_digits(path: str | Path) -> Dataset:
    """Load the 8x8 optical digits CSV (intensities 0..16, labels 0..9)."""
    ds = load_csv_generic(path, feature_count=64, max_value=16)
    present = np.unique(ds.labels)
    if ds.class_count != 10 or present.size != 10:
        raise DataError(
            f"{path}: expected exactly 10 digit classes, found {present.size}"
        )
    return ds


def load_idx(
    images_path: str | Path, labels_path: str | Path, max_value: int = 255
) -> Dataset:
    """Load an IDX image/label pair (big-endian magic + dims + ubyte data)."""
    images, idims = _read_idx(images_path)
    labels, ldims = _read_idx(labels_path)
    if len(idims) != 3:
        raise DataError(f"{images_path}: expected 3-d image tensor, got {idims}")
    if len(ldims) != 1:
        raise DataError(f"{labels_path}: expected 1-d label vector, got {ldims}")
    if idims[0] != ldims[0]:
        raise DataError(
            f"image/label count mismatch: {idims[0]} images vs {ldims[0]} labels"
        )
    if idims[0] == 0:
        raise DataError(f"{images_path}: no samples")
    features = images.reshape(idims[0], -1).astype(np.float64) / float(max_value)
    labels64 = labels.astype(np.int64)
    return Dataset(
        features=features,
        labels=labels64,
        class_count=int(labels64.max()) + 1,
        provenance=f"{images_path}+{labels_path}",
    )


def _read_idx(path: str | Path) -> tuple[np.ndarray, tuple[int, ...]]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read IDX file {path}") from exc
    if len(raw) < 4 or raw[0] != 0 or raw[1] != 0:
        raise DataError(f"{path}: bad IDX magic")
    dtype_code, ndim = raw[2], raw[3]
    if dtype_code != 0x08:
        raise DataError(f"{path}: only ubyte IDX payloads supported")
    header = 4 + 4 * ndim
    if len(raw) < header:
        raise DataError(f"{path}: truncated IDX header")
    dims = struct.unpack(f">{ndim}I", raw[4:header])
    count = int(np.prod(dims)) if ndim else 0
    body = raw[header:]
    if len(body) != count:
        raise DataError(f"{path}: IDX payload size {len(body)} != {count}")
    return np.frombuffer(body, dtype=np.uint8).reshape(dims), dims


def _apportion(class_sizes: np.ndarray, fraction: float) -> np.ndarray:
    """Per-class counts totalling ceil(fraction * total), largest remainder."""
    total = int(np.ceil(fraction * class_sizes.sum()))
    exact = fraction * class_sizes
    base = np.floor(exact).astype(np.int64)
    remainder = total - int(base.sum())
    order = sorted(
        range(class_sizes.size), key=lambda c: (-(exact[c] - base[c]), c)
    )
    for c in order[:remainder]:
        base[c] += 1
    return base


def stratified_split(ds, split_seed: int) -> SplitIndices:
    """64/16/20 stratified split, a pure function of (labels, split seed).

    Per class the indices are shuffled by a stream derived from
    ("split", seed, class); 20% go to test, then 20% of the remainder to
    validation.  Counts use largest-remainder apportionment at each stage,
    so proportions hold per class within one sample.
    """
    labels = np.asarray(ds.labels)
    class_count = ds.class_count
    class_sizes = np.bincount(labels, minlength=class_count)
    small = np.nonzero(class_sizes < 5)[0]
    if small.size:
        raise DataError(
            f"stratified split needs >= 5 samples per class; class(es) "
            f"{small.tolist()} too small"
        )
    n_test = _apportion(class_sizes, 0.20)
    n_val = _apportion(class_sizes - n_test, 0.20)
    train_parts, val_parts, test_parts = [], [], []
    for c in range(class_count):
        idx = np.nonzero(labels == c)[0]
        stream = resolve_path([("split", split_seed), ("class", c)])
        shuffled = idx[stream.shuffle(idx.size)]
        t, v = int(n_test[c]), int(n_val[c])
        test_parts.append(shuffled[:t])
        val_parts.append(shuffled[t : t + v])
        train_parts.append(shuffled[t + v :])
    return SplitIndices(
        train=np.sort(np.concatenate(train_parts)),
        val=np.sort(np.concatenate(val_parts)),
        test=np.sort(np.concatenate(test_parts)),
    )


@dataclass(frozen=True)
class TemporalConfig:
    """Two-group burst-order task; class information is order-only.

    Every channel fires exactly one burst per sample, so expected counts
    are identical across classes; which group bursts first is the label.
    """

    channels: int = 16
    window_bins: int = 120
    burst_bins: int = 10
    burst_prob: float = 0.6
    background_prob: float = 0.02
    min_gap_bins: int = 15
    samples: int = 1200

    def __post_init__(self) -> None:
        if self.channels % 2 != 0:
            raise ValueError("channels must split into two equal groups")
        if self.burst_bins + self.min_gap_bins > self.window_bins:
            raise ValueError("burst windows do not fit inside the sample window")

    @property
    def group_size(self) -> int:
        return self.channels // 2


@dataclass
class TemporalDataset:
    rasters: np.ndarray      # (n, channels, bins) uint8
    labels: np.ndarray       # (n,) int64, 0 = group A first, 1 = group B first
    onset_early: np.ndarray  # first burst onset bin per sample
    onset_late: np.ndarray

    class_count: int = 2

    @property
    def sample_count(self) -> int:
        return self.rasters.shape[0]


def gen_temporal(cfg: TemporalConfig, stream: Stream) -> TemporalDataset:
    """Generate the temporal-order dataset from per-sample child streams."""
    n = cfg.samples
    rasters = np.empty((n, cfg.channels, cfg.window_bins), dtype=np.uint8)
    labels = np.empty(n, dtype=np.int64)
    early = np.empty(n, dtype=np.int64)
    late = np.empty(n, dtype=np.int64)
    for i in range(n):
        s = stream.child("sample", i)
        label = 1 if s.bernoulli(0.5) else 0
        o1 = s.randint(cfg.window_bins - cfg.burst_bins - cfg.min_gap_bins + 1)
        o2 = o1 + cfg.min_gap_bins + s.randint(
            cfg.window_bins - cfg.burst_bins - cfg.min_gap_bins - o1 + 1
        )
        probs = np.full((cfg.channels, cfg.window_bins), cfg.background_prob)
        a_onset, b_onset = (o1, o2) if label == 0 else (o2, o1)
        probs[: cfg.group_size, a_onset : a_onset + cfg.burst_bins] = cfg.burst_prob
        probs[cfg.group_size :, b_onset : b_onset + cfg.burst_bins] = cfg.burst_prob
        draws = s.uniform_block(probs.size).reshape(probs.shape)
        rasters[i] = draws < probs
        labels[i] = label
        early[i], late[i] = o1, o2
    return TemporalDataset(rasters=rasters, labels=labels, onset_early=early, onset_late=late)

"""Experiment orchestration under the fixed-seed contract.

A run is identified by (branch, hyperparameters, split seed, model seed)
and is a pure function of that identity, so the orchestrator caches runs by
key and families that share cells (the default configuration appears in the
baseline table, three ablation rows, the 2x2 interaction and the split
table) compute them once.  Runs are independent and may execute on worker
processes; results are identical regardless of scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import stats
from .data import (
    DIGITS_FILENAME,
    Dataset,
    SplitIndices,
    TemporalConfig,
    TemporalDataset,
    gen_temporal,
    load_digits,
    stratified_split,
)
from .detrng import resolve_path
from .encoding import EncoderConfig, expected_spike_count
from .learners import (
    BaselineConfig,
    HybridConfig,
    ProxyConfig,
    TrainTrajectory,
    encode_counts_for,
    predict_batch,
    proxy_fit,
    proxy_predict_batch,
    train_delta_readout,
    train_hybrid,
)

PRIMARY_SPLIT_SEED = 2026
ROBUSTNESS_SPLIT_SEEDS = (2026, 2027, 2028)
DEFAULT_MODEL_SEEDS = (11, 23, 37, 41, 53)
EXTENDED_MODEL_SEEDS = (11, 23, 37, 41, 53, 67, 79, 83, 97)
REPRESENTATIVE_MODEL_SEED = 23

BRANCH_HYBRID = "hybrid"
BRANCH_PROXY = "proxy"
BRANCH_PIXELS = "softmax-pixels"
BRANCH_RATES = "softmax-rates"
BRANCH_TEMPORAL_COUNT = "temporal-count"
BRANCH_TEMPORAL_BINNED = "temporal-binned"

# seed-path labels are canonical per branch (never per display row), so two
# rows with identical configurations reproduce each other record-for-record
_SEED_LABELS = {
    BRANCH_HYBRID: "digits-hybrid",
    BRANCH_PROXY: "digits-proxy",
    BRANCH_PIXELS: "digits-logreg-pixels",
    BRANCH_RATES: "digits-logreg-rates",
    BRANCH_TEMPORAL_COUNT: "temporal-readout",
    BRANCH_TEMPORAL_BINNED: "temporal-readout",
}

TEMPORAL_TIME_BINS = 10


@dataclass(frozen=True)
class RunKey:
    branch: str
    split_seed: int
    model_seed: int
    params: tuple  # canonical, sorted (name, value) pairs


def _params(**kwargs) -> tuple:
    return tuple(sorted(kwargs.items()))


@dataclass(frozen=True)
class HybridDefaults:
    """The pinned default hybrid configuration; ablations vary one factor."""

    shaping: str = "signed"
    norm_mode: str = "on"
    neurons_per_feature: int = 4
    tuning_width: float = 0.25
    peak_rate_hz: float = 200.0
    epochs: int = 18
    learning_rate: float = 0.003


def hybrid_key(
    split_seed: int,
    model_seed: int,
    *,
    defaults: HybridDefaults = HybridDefaults(),
    **overrides,
) -> RunKey:
    base = {
        "shaping": defaults.shaping,
        "norm_mode": defaults.norm_mode,
        "neurons_per_feature": defaults.neurons_per_feature,
        "tuning_width": defaults.tuning_width,
        "peak_rate_hz": defaults.peak_rate_hz,
        "epochs": defaults.epochs,
        "learning_rate": defaults.learning_rate,
    }
    unknown = set(overrides) - set(base)
    if unknown:
        raise ValueError(f"unknown hybrid parameters: {sorted(unknown)}")
    base.update(overrides)
    return RunKey(BRANCH_HYBRID, split_seed, model_seed, _params(**base))


def proxy_key(split_seed: int, model_seed: int, *, shaping: str = "signed") -> RunKey:
    return RunKey(BRANCH_PROXY, split_seed, model_seed, _params(shaping=shaping))


def pixels_key(split_seed: int, model_seed: int) -> RunKey:
    return RunKey(BRANCH_PIXELS, split_seed, model_seed, _params())


def rates_key(split_seed: int, model_seed: int) -> RunKey:
    return RunKey(BRANCH_RATES, split_seed, model_seed, _params())


def temporal_key(kind: str, split_seed: int, model_seed: int) -> RunKey:
    branch = BRANCH_TEMPORAL_COUNT if kind == "count" else BRANCH_TEMPORAL_BINNED
    return RunKey(branch, split_seed, model_seed, _params())


@dataclass
class RunOutcome:
    """Numeric results of one run, independent of any display label."""

    accuracy_pct: float
    macro_f1: float
    per_class_f1: tuple
    spikes_per_sample: float
    epochs: int
    saturation_lo_pct: float
    saturation_hi_pct: float
    winner_margin: float
    param_count: int
    test_predictions: np.ndarray
    test_labels: np.ndarray
    trajectory: TrainTrajectory | None = None
    model: object = None


@dataclass
class RunRecord:
    """One (experiment, split seed, model seed) result row."""

    experiment: str
    split_seed: int
    model_seed: int
    outcome: RunOutcome

    @property
    def accuracy_pct(self) -> float:
        return self.outcome.accuracy_pct

    @property
    def macro_f1(self) -> float:
        return self.outcome.macro_f1


class DatasetBundle:
    """Shared datasets plus memoized splits and temporal feature views."""

    def __init__(self, digits: Dataset):
        self.digits = digits
        self._digit_splits: dict[int, SplitIndices] = {}
        self._temporal: TemporalDataset | None = None
        self._temporal_splits: dict[int, SplitIndices] = {}
        self._temporal_features: dict[str, np.ndarray] = {}

    def digits_split(self, split_seed: int) -> SplitIndices:
        if split_seed not in self._digit_splits:
            self._digit_splits[split_seed] = stratified_split(self.digits, split_seed)
        return self._digit_splits[split_seed]

    def temporal(self) -> TemporalDataset:
        if self._temporal is None:
            self._temporal = gen_temporal(
                TemporalConfig(), resolve_path([("temporal-data", 0)])
            )
        return self._temporal

    def temporal_split(self, split_seed: int) -> SplitIndices:
        if split_seed not in self._temporal_splits:
            self._temporal_splits[split_seed] = stratified_split(
                self.temporal(), split_seed
            )
        return self._temporal_splits[split_seed]

    def temporal_features(self, kind: str) -> np.ndarray:
        if kind not in self._temporal_features:
            rasters = self.temporal().rasters
            n, channels, bins = rasters.shape
            if kind == "count":
                feats = rasters.sum(axis=2, dtype=np.int64)
            else:
                width = bins // TEMPORAL_TIME_BINS
                feats = rasters.reshape(
                    n, channels, TEMPORAL_TIME_BINS, width
                ).sum(axis=3, dtype=np.int64).reshape(n, channels * TEMPORAL_TIME_BINS)
            self._temporal_features[kind] = feats.astype(np.float64)
        return self._temporal_features[kind]


def load_bundle(data_dir: str | Path) -> DatasetBundle:
    return DatasetBundle(load_digits(Path(data_dir) / DIGITS_FILENAME))


def _hybrid_config(params: dict) -> HybridConfig:
    return HybridConfig(
        epochs=params["epochs"],
        learning_rate=params["learning_rate"],
        shaping=params["shaping"],
        norm_mode=params["norm_mode"],
        encoder=EncoderConfig(
            neurons_per_feature=params["neurons_per_feature"],
            tuning_width=params["tuning_width"],
            peak_rate_hz=params["peak_rate_hz"],
        ),
    )


def execute_run(key: RunKey, bundle: DatasetBundle) -> RunOutcome:
    """Compute one run from scratch; pure function of the key."""
    params = dict(key.params)
    label = _SEED_LABELS[key.branch]
    if key.branch == BRANCH_HYBRID:
        cfg = _hybrid_config(params)
        split = bundle.digits_split(key.split_seed)
        res = train_hybrid(
            bundle.digits, split, cfg, label, key.split_seed, key.model_seed
        )
        return _outcome_from_predictions(
            res.test_predictions,
            res.test_labels,
            bundle.digits.class_count,
            spikes=res.mean_spikes_per_sample,
            epochs=cfg.epochs,
            param_count=res.model.param_count,
            trajectory=res.trajectory,
            model=res.model,
        )
    if key.branch == BRANCH_PROXY:
        cfg = ProxyConfig(shaping=params["shaping"])
        split = bundle.digits_split(key.split_seed)
        res = proxy_fit(
            bundle.digits, split, cfg, label, key.split_seed, key.model_seed
        )
        proto = res.model.prototypes
        return _outcome_from_predictions(
            res.test_predictions,
            res.test_labels,
            bundle.digits.class_count,
            spikes=res.mean_spikes_per_sample,
            epochs=cfg.epochs,
            param_count=res.model.param_count,
            saturation_lo=100.0 * float(np.mean(proto == cfg.w_min)),
            saturation_hi=100.0 * float(np.mean(proto == cfg.w_max)),
            margin=res.winner_margin_mean,
            model=res.model,
        )
    if key.branch == BRANCH_PIXELS:
        ds = bundle.digits
        split = bundle.digits_split(key.split_seed)
        cfg = BaselineConfig()
        model = train_delta_readout(
            ds.features, ds.labels, split.train, ds.class_count, cfg,
            label, key.split_seed, key.model_seed,
        )
        preds = predict_batch(model, ds.features[split.test])
        return _outcome_from_predictions(
            preds, ds.labels[split.test], ds.class_count,
            spikes=float("nan"), epochs=cfg.epochs,
            param_count=model.param_count, model=model,
        )
    if key.branch == BRANCH_RATES:
        ds = bundle.digits
        split = bundle.digits_split(key.split_seed)
        cfg = BaselineConfig()
        enc = EncoderConfig()
        train_feats = encode_counts_for(
            ds, split.train, enc, label, key.split_seed, key.model_seed,
            "encode-train", 0,
        ).astype(np.float64)
        test_feats = encode_counts_for(
            ds, split.test, enc, label, key.split_seed, key.model_seed,
            "encode-test", 0,
        ).astype(np.float64)
        model = train_delta_readout(
            train_feats, ds.labels[split.train], np.arange(split.train.size),
            ds.class_count, cfg, label, key.split_seed, key.model_seed,
        )
        preds = predict_batch(model, test_feats)
        return _outcome_from_predictions(
            preds, ds.labels[split.test], ds.class_count,
            spikes=float(train_feats.sum() / split.train.size),
            epochs=cfg.epochs, param_count=model.param_count, model=model,
        )
    if key.branch in (BRANCH_TEMPORAL_COUNT, BRANCH_TEMPORAL_BINNED):
        kind = "count" if key.branch == BRANCH_TEMPORAL_COUNT else "binned"
        tds = bundle.temporal()
        split = bundle.temporal_split(key.split_seed)
        feats = bundle.temporal_features(kind)
        cfg = BaselineConfig()
        model = train_delta_readout(
            feats, tds.labels, split.train, tds.class_count, cfg,
            label, key.split_seed, key.model_seed,
        )
        preds = predict_batch(model, feats[split.test])
        counts = bundle.temporal_features("count")
        return _outcome_from_predictions(
            preds, tds.labels[split.test], tds.class_count,
            spikes=float(counts[split.train].sum() / split.train.size),
            epochs=cfg.epochs, param_count=model.param_count, model=model,
        )
    raise ValueError(f"unknown branch {key.branch!r}")


def _outcome_from_predictions(
    predictions: np.ndarray,
    labels: np.ndarray,
    classes: int,
    *,
    spikes: float,
    epochs: int,
    param_count: int,
    saturation_lo: float = float("nan"),
    saturation_hi: float = float("nan"),
    margin: float = float("nan"),
    trajectory: TrainTrajectory | None = None,
    model: object = None,
) -> RunOutcome:
    accuracy = 100.0 * float(np.mean(predictions == labels))
    f1_mean, f1_vec = stats.macro_f1(labels, predictions, classes)
    return RunOutcome(
        accuracy_pct=accuracy,
        macro_f1=f1_mean,
        per_class_f1=tuple(float(v) for v in f1_vec),
        spikes_per_sample=spikes,
        epochs=epochs,
        saturation_lo_pct=saturation_lo,
        saturation_hi_pct=saturation_hi,
        winner_margin=margin,
        param_count=param_count,
        test_predictions=predictions,
        test_labels=labels,
        trajectory=trajectory,
        model=model,
    )


# ---------------------------------------------------------------------------
# parallel run execution with per-process dataset loading

_WORKER_BUNDLE: DatasetBundle | None = None


def _worker_init(data_dir: str) -> None:
    global _WORKER_BUNDLE
    _WORKER_BUNDLE = load_bundle(data_dir)


def _worker_run(key: RunKey) -> tuple[RunKey, RunOutcome, float]:
    assert _WORKER_BUNDLE is not None
    t0 = time.perf_counter()
    outcome = execute_run(key, _WORKER_BUNDLE)
    return key, outcome, time.perf_counter() - t0


class Runner:
    """Caching run executor; results are scheduling-invariant."""

    def __init__(self, bundle: DatasetBundle, data_dir: str | Path, jobs: int = 1):
        self.bundle = bundle
        self.data_dir = str(data_dir)
        self.jobs = max(1, jobs)
        self.cache: dict[RunKey, RunOutcome] = {}
        self.run_seconds: dict[RunKey, float] = {}

    def _run_local(self, key: RunKey) -> None:
        t0 = time.perf_counter()
        self.cache[key] = execute_run(key, self.bundle)
        self.run_seconds[key] = time.perf_counter() - t0

    def run_many(self, keys: Iterable[RunKey]) -> None:
        missing = sorted(
            {k for k in keys if k not in self.cache},
            key=lambda k: (k.branch, k.params, k.split_seed, k.model_seed),
        )
        if not missing:
            return
        if self.jobs == 1:
            for key in missing:
                self._run_local(key)
            return
        with ProcessPoolExecutor(
            max_workers=self.jobs,
            initializer=_worker_init,
            initargs=(self.data_dir,),
        ) as pool:
            for key, outcome, seconds in pool.map(_worker_run, missing, chunksize=1):
                self.cache[key] = outcome
                self.run_seconds[key] = seconds

    def get(self, key: RunKey) -> RunOutcome:
        if key not in self.cache:
            self._run_local(key)
        return self.cache[key]


def _records(
    runner: Runner, labeled_keys: Sequence[tuple[str, RunKey]]
) -> list[RunRecord]:
    runner.run_many([k for _, k in labeled_keys])
    return [
        RunRecord(label, key.split_seed, key.model_seed, runner.get(key))
        for label, key in labeled_keys
    ]


# ---------------------------------------------------------------------------
# experiment families

def baseline_keys(
    seeds: Sequence[int], defaults: HybridDefaults = HybridDefaults()
) -> list[tuple[str, RunKey]]:
    out: list[tuple[str, RunKey]] = []
    out += [("softmax-pixels", pixels_key(PRIMARY_SPLIT_SEED, m)) for m in seeds]
    out += [("softmax-rates", rates_key(PRIMARY_SPLIT_SEED, m)) for m in seeds]
    out += [
        ("hybrid-default", hybrid_key(PRIMARY_SPLIT_SEED, m, defaults=defaults))
        for m in seeds
    ]
    out += [("proxy-default", proxy_key(PRIMARY_SPLIT_SEED, m)) for m in seeds]
    return out


def ablation_keys(
    seeds: Sequence[int],
    extended_seeds: Sequence[int],
    defaults: HybridDefaults = HybridDefaults(),
) -> list[tuple[str, RunKey]]:
    def key(m: int, **ov: object) -> RunKey:
        return hybrid_key(PRIMARY_SPLIT_SEED, m, defaults=defaults, **ov)

    rows: list[tuple[str, RunKey]] = []
    for k in (1, 2, 4, 6):
        rows += [(f"K={k}", key(m, neurons_per_feature=k)) for m in seeds]
    for sigma in (0.15, 0.25, 0.35):
        rows += [(f"sigma={sigma}", key(m, tuning_width=sigma)) for m in seeds]
    for rate in (100.0, 150.0, 200.0, 250.0):
        rows += [(f"rate={rate:g}", key(m, peak_rate_hz=rate)) for m in seeds]
    for mode in ("on", "gentle", "off"):
        rows += [(f"norm={mode}", key(m, norm_mode=mode)) for m in extended_seeds]
    for shaping, name in (("signed", "signed"), ("positive_only", "pos-only")):
        rows += [(f"reward={name}", key(m, shaping=shaping)) for m in extended_seeds]
    return rows


def interaction_keys(
    extended_seeds: Sequence[int], defaults: HybridDefaults = HybridDefaults()
) -> list[tuple[str, RunKey]]:
    rows: list[tuple[str, RunKey]] = []
    for norm in ("on", "off"):
        for shaping, name in (("signed", "signed"), ("positive_only", "pos-only")):
            rows += [
                (
                    f"norm-{norm}+{name}",
                    hybrid_key(
                        PRIMARY_SPLIT_SEED, m, defaults=defaults,
                        shaping=shaping, norm_mode=norm,
                    ),
                )
                for m in extended_seeds
            ]
    return rows


def split_robustness_keys(
    seeds: Sequence[int],
    split_seeds: Sequence[int] = ROBUSTNESS_SPLIT_SEEDS,
    defaults: HybridDefaults = HybridDefaults(),
) -> list[tuple[str, RunKey]]:
    rows: list[tuple[str, RunKey]] = []
    for split_seed in split_seeds:
        rows += [
            (f"split-{split_seed}-default",
             hybrid_key(split_seed, m, defaults=defaults))
            for m in seeds
        ]
        rows += [
            (f"split-{split_seed}-norm-off",
             hybrid_key(split_seed, m, defaults=defaults, norm_mode="off"))
            for m in seeds
        ]
    return rows


def temporal_keys(seeds: Sequence[int]) -> list[tuple[str, RunKey]]:
    rows = [("count-readout", temporal_key("count", PRIMARY_SPLIT_SEED, m)) for m in seeds]
    rows += [("timebin-readout", temporal_key("binned", PRIMARY_SPLIT_SEED, m)) for m in seeds]
    return rows


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a single configuration over seed sets."""

    label: str
    branch: str
    split_seeds: tuple = (PRIMARY_SPLIT_SEED,)
    model_seeds: tuple = DEFAULT_MODEL_SEEDS
    shaping: str = "signed"
    norm_mode: str = "on"
    neurons_per_feature: int = 4
    tuning_width: float = 0.25
    peak_rate_hz: float = 200.0
    epochs: int = 18
    learning_rate: float = 0.003

    def keys(self) -> list[tuple[str, RunKey]]:
        out = []
        for s in self.split_seeds:
            for m in self.model_seeds:
                if self.branch == BRANCH_HYBRID:
                    key = hybrid_key(
                        s, m,
                        shaping=self.shaping,
                        norm_mode=self.norm_mode,
                        neurons_per_feature=self.neurons_per_feature,
                        tuning_width=self.tuning_width,
                        peak_rate_hz=self.peak_rate_hz,
                        epochs=self.epochs,
                        learning_rate=self.learning_rate,
                    )
                elif self.branch == BRANCH_PROXY:
                    key = proxy_key(s, m, shaping=self.shaping)
                elif self.branch == BRANCH_PIXELS:
                    key = pixels_key(s, m)
                elif self.branch == BRANCH_RATES:
                    key = rates_key(s, m)
                elif self.branch == BRANCH_TEMPORAL_COUNT:
                    key = temporal_key("count", s, m)
                elif self.branch == BRANCH_TEMPORAL_BINNED:
                    key = temporal_key("binned", s, m)
                else:
                    raise ValueError(f"unknown branch {self.branch!r}")
                out.append((self.label, key))
        return out


def run_experiment(spec: ExperimentSpec, runner: Runner) -> list[RunRecord]:
    """All (split seed, model seed) records for one experiment spec."""
    return _records(runner, spec.keys())


# ---------------------------------------------------------------------------
# diagnostics and timing

@dataclass
class DiagnosticsBundle:
    confusion: np.ndarray           # hybrid default, representative seed
    confusion_seed: int
    per_class_f1_mean: tuple        # hybrid default, mean over seeds
    spikes_mean: float
    spikes_std: float
    spikes_analytic: float          # expected-count oracle over the train set
    proxy_saturation_lo: stats.Summary
    proxy_saturation_hi: stats.Summary
    proxy_winner_margin: stats.Summary
    hybrid_param_count: int
    proxy_param_count: int
    hybrid_model: object = None     # representative-seed snapshots
    proxy_model: object = None


def run_diagnostics(
    runner: Runner,
    seeds: Sequence[int],
    defaults: HybridDefaults = HybridDefaults(),
) -> DiagnosticsBundle:
    hybrid = {
        m: runner.get(hybrid_key(PRIMARY_SPLIT_SEED, m, defaults=defaults))
        for m in seeds
    }
    proxy = {m: runner.get(proxy_key(PRIMARY_SPLIT_SEED, m)) for m in seeds}
    rep_seed = (
        REPRESENTATIVE_MODEL_SEED
        if REPRESENTATIVE_MODEL_SEED in hybrid
        else sorted(hybrid)[0]
    )
    rep = hybrid[rep_seed]
    ds = runner.bundle.digits
    split = runner.bundle.digits_split(PRIMARY_SPLIT_SEED)
    enc = EncoderConfig(
        neurons_per_feature=defaults.neurons_per_feature,
        tuning_width=defaults.tuning_width,
        peak_rate_hz=defaults.peak_rate_hz,
    )
    analytic = float(
        np.mean([expected_spike_count(ds.features[i], enc) for i in split.train])
    )
    spikes = [hybrid[m].spikes_per_sample for m in sorted(hybrid)]
    f1_matrix = np.array([hybrid[m].per_class_f1 for m in sorted(hybrid)])
    return DiagnosticsBundle(
        confusion=stats.confusion_matrix(
            rep.test_labels, rep.test_predictions, ds.class_count
        ),
        confusion_seed=rep_seed,
        per_class_f1_mean=tuple(float(v) for v in f1_matrix.mean(axis=0)),
        spikes_mean=float(np.mean(spikes)),
        spikes_std=float(np.std(spikes, ddof=1)) if len(spikes) > 1 else 0.0,
        spikes_analytic=analytic,
        proxy_saturation_lo=stats.summarize(
            [proxy[m].saturation_lo_pct for m in sorted(proxy)]
        ),
        proxy_saturation_hi=stats.summarize(
            [proxy[m].saturation_hi_pct for m in sorted(proxy)]
        ),
        proxy_winner_margin=stats.summarize(
            [proxy[m].winner_margin for m in sorted(proxy)]
        ),
        hybrid_param_count=hybrid[rep_seed].param_count,
        proxy_param_count=proxy[rep_seed].param_count,
        hybrid_model=hybrid[rep_seed].model,
        proxy_model=proxy[rep_seed].model,
    )


@dataclass
class TimingRow:
    branch: str
    metric: str       # 'forward-only' | 'end-to-end'
    median_us_per_sample: float


@dataclass
class TimingReport:
    rows: list
    repeats: int
    batch_size: int
    hardware: str


def run_timing(runner: Runner, repeats: int = 100) -> TimingReport:
    """Amortized per-sample inference timing on the full test batch.

    Forward-only excludes encoding; end-to-end includes it.  Values are
    medians over the given number of repeats and are hardware-dependent
    (reported, never gated).
    """
    import platform

    ds = runner.bundle.digits
    split = runner.bundle.digits_split(PRIMARY_SPLIT_SEED)
    n = split.test.size
    enc = EncoderConfig()
    hybrid = runner.get(hybrid_key(PRIMARY_SPLIT_SEED, REPRESENTATIVE_MODEL_SEED))
    proxy = runner.get(proxy_key(PRIMARY_SPLIT_SEED, REPRESENTATIVE_MODEL_SEED))
    test_counts = encode_counts_for(
        ds, split.test, enc, _SEED_LABELS[BRANCH_HYBRID], PRIMARY_SPLIT_SEED,
        REPRESENTATIVE_MODEL_SEED, "encode-test", 0,
    ).astype(np.float64)

    def encode_batch() -> np.ndarray:
        return encode_counts_for(
            ds, split.test, enc, _SEED_LABELS[BRANCH_HYBRID], PRIMARY_SPLIT_SEED,
            REPRESENTATIVE_MODEL_SEED, "encode-test", 0,
        ).astype(np.float64)

    def median_us(fn) -> float:
        samples = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            fn()
            samples.append(time.perf_counter() - t0)
        return float(np.median(samples)) / n * 1e6

    rows = [
        TimingRow(
            BRANCH_HYBRID, "forward-only",
            median_us(lambda: predict_batch(hybrid.model, test_counts)),
        ),
        TimingRow(
            BRANCH_HYBRID, "end-to-end",
            median_us(lambda: predict_batch(hybrid.model, encode_batch())),
        ),
        TimingRow(
            BRANCH_PROXY, "forward-only",
            median_us(lambda: proxy_predict_batch(proxy.model, test_counts)),
        ),
        TimingRow(
            BRANCH_PROXY, "end-to-end",
            median_us(lambda: proxy_predict_batch(proxy.model, encode_batch())),
        ),
    ]
    return TimingReport(
        rows=rows,
        repeats=repeats,
        batch_size=n,
        hardware=f"{platform.platform()} / {platform.processor() or 'unknown-cpu'}"
        f" / python {platform.python_version()} / numpy {np.__version__}",
    )


# ---------------------------------------------------------------------------
# full suite

@dataclass
class PairedPanel:
    name: str
    n: int
    result: stats.PairedResult


@dataclass
class SuiteResult:
    families: dict          # family name -> list[RunRecord]
    diagnostics: DiagnosticsBundle
    paired: list
    durations_s: dict


def _accuracies(records: list[RunRecord], label: str, seeds: Sequence[int]) -> list[float]:
    by_seed = {
        r.model_seed: r.accuracy_pct
        for r in records
        if r.experiment == label and r.split_seed == PRIMARY_SPLIT_SEED
    }
    return [by_seed[m] for m in seeds]


def run_suite(
    runner: Runner,
    seeds: Sequence[int] = DEFAULT_MODEL_SEEDS,
    extended_seeds: Sequence[int] = EXTENDED_MODEL_SEEDS,
    split_seeds: Sequence[int] = ROBUSTNESS_SPLIT_SEEDS,
    defaults: HybridDefaults = HybridDefaults(),
) -> SuiteResult:
    """Everything deterministic: baselines, ablations, the 2x2 interaction,
    split robustness, the temporal benchmark, and diagnostics.

    Timing is excluded here (it is hardware-dependent and would break the
    run-twice byte-identity contract); use ``run_timing`` for it.
    """
    families: dict[str, list[RunRecord]] = {}
    durations: dict[str, float] = {}

    plan = [
        ("baselines", baseline_keys(seeds, defaults)),
        ("ablations", ablation_keys(seeds, extended_seeds, defaults)),
        ("interaction", interaction_keys(extended_seeds, defaults)),
        ("splits", split_robustness_keys(seeds, split_seeds, defaults)),
        ("temporal", temporal_keys(seeds)),
    ]
    for name, labeled in plan:
        t0 = time.perf_counter()
        families[name] = _records(runner, labeled)
        durations[name] = time.perf_counter() - t0

    t0 = time.perf_counter()
    diagnostics = run_diagnostics(runner, seeds, defaults)
    durations["diagnostics"] = time.perf_counter() - t0

    abl = families["ablations"]
    base = families["baselines"]
    paired = [
        PairedPanel(
            "hybrid-vs-proxy",
            len(seeds),
            stats.paired_compare(
                _accuracies(base, "hybrid-default", seeds),
                _accuracies(base, "proxy-default", seeds),
            ),
        ),
        PairedPanel(
            "norm-off-vs-on",
            len(extended_seeds),
            stats.paired_compare(
                _accuracies(abl, "norm=off", extended_seeds),
                _accuracies(abl, "norm=on", extended_seeds),
            ),
        ),
        PairedPanel(
            "pos-only-vs-signed-norm-on",
            len(extended_seeds),
            stats.paired_compare(
                _accuracies(abl, "reward=pos-only", extended_seeds),
                _accuracies(abl, "reward=signed", extended_seeds),
            ),
        ),
    ]
    return SuiteResult(
        families=families,
        diagnostics=diagnostics,
        paired=paired,
        durations_s=durations,
    )

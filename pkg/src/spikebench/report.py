"""Persistence and presentation of benchmark results.

Raw per-seed CSVs are the single source of truth: rendered tables and SVG
figures are derived by re-reading them, never from in-memory state, so
every printed number is recomputable from the raw files.  All output is
byte-deterministic (fixed six-decimal formatting, LF newlines, sorted
rows); a manifest of sha256 digests ties the artifact set together, with
only its timestamp header excluded from comparisons.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__, stats, svg
from .protocol import (
    PRIMARY_SPLIT_SEED,
    REPRESENTATIVE_MODEL_SEED,
    RunRecord,
    SuiteResult,
    TimingReport,
)

RAW_DIR = "raw"
TABLES_DIR = "tables"
FIGURES_DIR = "figures"
MANIFEST_NAME = "manifest.txt"

_FAMILY_FILES = {
    "baselines": "baselines_raw.csv",
    "ablations": "ablations_raw.csv",
    "interaction": "interaction_raw.csv",
    "splits": "splits_raw.csv",
    "temporal": "temporal_raw.csv",
}

_BASELINE_ORDER = ("softmax-pixels", "softmax-rates", "hybrid-default", "proxy-default")
_NORM_TRAJECTORY_EXPERIMENTS = ("norm=on", "norm=gentle", "norm=off")


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def _record_sort_key(record: RunRecord):
    return (record.experiment, record.split_seed, record.model_seed)


def _family_csv(records: Sequence[RunRecord]) -> str:
    classes = len(records[0].outcome.per_class_f1)
    header = (
        ["experiment", "split_seed", "model_seed", "accuracy_pct", "macro_f1"]
        + [f"f1_class_{c}" for c in range(classes)]
        + [
            "spikes_per_sample",
            "epochs",
            "saturation_lo_pct",
            "saturation_hi_pct",
            "winner_margin",
            "param_count",
        ]
    )
    lines = [",".join(header)]
    for r in sorted(records, key=_record_sort_key):
        o = r.outcome
        cells = (
            [r.experiment, str(r.split_seed), str(r.model_seed),
             _fmt(o.accuracy_pct), _fmt(o.macro_f1)]
            + [_fmt(v) for v in o.per_class_f1]
            + [_fmt(o.spikes_per_sample), str(o.epochs),
               _fmt(o.saturation_lo_pct), _fmt(o.saturation_hi_pct),
               _fmt(o.winner_margin), str(o.param_count)]
        )
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_raw_csvs(suite: SuiteResult, out_dir: Path) -> list[Path]:
    """Write one raw per-seed CSV per experiment family, plus trajectories,
    diagnostics, confusion matrix and paired statistics."""
    out: list[Path] = []
    for family, filename in _FAMILY_FILES.items():
        records = suite.families[family]
        if not records:
            raise ValueError(f"no records for family {family!r}; nothing to emit")
        out.append(_write_text(out_dir / RAW_DIR / filename, _family_csv(records)))
    out.append(_emit_trajectories(suite, out_dir))
    out.append(_emit_diagnostics(suite, out_dir))
    out.append(_emit_confusion(suite, out_dir))
    out.append(_emit_per_class_f1(suite, out_dir))
    out.append(_emit_paired(suite, out_dir))
    out.extend(_emit_model_snapshots(suite, out_dir))
    return out


def _emit_trajectories(suite: SuiteResult, out_dir: Path) -> Path:
    lines = ["experiment,split_seed,model_seed,epoch,test_accuracy_pct,mean_row_norm"]
    for r in sorted(suite.families["ablations"], key=_record_sort_key):
        if r.experiment not in _NORM_TRAJECTORY_EXPERIMENTS:
            continue
        traj = r.outcome.trajectory
        for epoch, (acc, norm) in enumerate(
            zip(traj.test_accuracy_pct, traj.mean_row_norm), start=1
        ):
            lines.append(
                f"{r.experiment},{r.split_seed},{r.model_seed},{epoch},"
                f"{_fmt(acc)},{_fmt(norm)}"
            )
    return _write_text(
        out_dir / RAW_DIR / "trajectories_raw.csv", "\n".join(lines) + "\n"
    )


def _emit_diagnostics(suite: SuiteResult, out_dir: Path) -> Path:
    d = suite.diagnostics
    rows = [
        ("hybrid_param_count", float(d.hybrid_param_count)),
        ("proxy_param_count", float(d.proxy_param_count)),
        ("spikes_per_sample_mean", d.spikes_mean),
        ("spikes_per_sample_std", d.spikes_std),
        ("spikes_per_sample_analytic", d.spikes_analytic),
        ("proxy_saturation_lo_pct_mean", d.proxy_saturation_lo.mean),
        ("proxy_saturation_lo_pct_std", d.proxy_saturation_lo.std),
        ("proxy_saturation_hi_pct_mean", d.proxy_saturation_hi.mean),
        ("proxy_saturation_hi_pct_std", d.proxy_saturation_hi.std),
        ("proxy_winner_margin_mean", d.proxy_winner_margin.mean),
        ("proxy_winner_margin_std", d.proxy_winner_margin.std),
        ("confusion_model_seed", float(d.confusion_seed)),
    ]
    lines = ["metric,value"] + [f"{k},{_fmt(v)}" for k, v in rows]
    return _write_text(
        out_dir / RAW_DIR / "diagnostics.csv", "\n".join(lines) + "\n"
    )


def _emit_confusion(suite: SuiteResult, out_dir: Path) -> Path:
    m = suite.diagnostics.confusion
    lines = [",".join(f"pred_{j}" for j in range(m.shape[1]))]
    for i in range(m.shape[0]):
        lines.append(",".join(_fmt(float(v)) for v in m[i]))
    return _write_text(
        out_dir / RAW_DIR / "confusion_matrix.csv", "\n".join(lines) + "\n"
    )


def _emit_per_class_f1(suite: SuiteResult, out_dir: Path) -> Path:
    lines = ["class,f1_mean"]
    for c, v in enumerate(suite.diagnostics.per_class_f1_mean):
        lines.append(f"{c},{_fmt(v)}")
    return _write_text(
        out_dir / RAW_DIR / "per_class_f1.csv", "\n".join(lines) + "\n"
    )


def _emit_model_snapshots(suite: SuiteResult, out_dir: Path) -> list[Path]:
    """Representative-seed model snapshots in the flat binary layout."""
    from .learners import save_proxy, save_readout

    d = suite.diagnostics
    models_dir = out_dir / "models"
    models_dir.mkdir(parents=True, exist_ok=True)
    out = []
    if d.hybrid_model is not None:
        path = models_dir / f"hybrid_default_seed{d.confusion_seed}.bin"
        save_readout(d.hybrid_model, path)
        out.append(path)
    if d.proxy_model is not None:
        path = models_dir / f"proxy_default_seed{d.confusion_seed}.bin"
        save_proxy(d.proxy_model, path)
        out.append(path)
    return out


def _emit_paired(suite: SuiteResult, out_dir: Path) -> Path:
    lines = ["comparison,n_pairs,n_nonties,mean_diff,sign_p,dz,cliffs_delta,ci_half"]
    for panel in suite.paired:
        r = panel.result
        lines.append(
            f"{panel.name},{r.n_pairs},{r.n_nonties},{_fmt(r.mean_diff)},"
            f"{_fmt(r.sign_p)},{_fmt(r.dz)},{_fmt(r.cliffs)},{_fmt(r.ci_half)}"
        )
    return _write_text(
        out_dir / RAW_DIR / "paired_stats.csv", "\n".join(lines) + "\n"
    )


def emit_timing(report: TimingReport, out_dir: Path) -> Path:
    """Timing goes to its own file, outside the deterministic artifact set."""
    lines = [
        f"# repeats: {report.repeats}",
        f"# batch_size: {report.batch_size}",
        f"# hardware: {report.hardware}",
        "branch,metric,median_us_per_sample",
    ]
    for row in report.rows:
        lines.append(f"{row.branch},{row.metric},{_fmt(row.median_us_per_sample)}")
    return _write_text(out_dir / "timing.csv", "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# reading raw CSVs back (tables/figures are derived strictly from files)

def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, "r") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]


def _experiment_accuracies(rows: list[dict[str, str]], experiment: str,
                           split_seed: int | None = None) -> list[float]:
    out = []
    for row in rows:
        if row["experiment"] != experiment:
            continue
        if split_seed is not None and int(row["split_seed"]) != split_seed:
            continue
        out.append(float(row["accuracy_pct"]))
    return out


def _experiment_f1s(rows, experiment: str) -> list[float]:
    return [float(r["macro_f1"]) for r in rows if r["experiment"] == experiment]


def _seed_aligned(rows, experiment: str, split_seed: int) -> dict[int, float]:
    return {
        int(r["model_seed"]): float(r["accuracy_pct"])
        for r in rows
        if r["experiment"] == experiment and int(r["split_seed"]) == split_seed
    }


# ---------------------------------------------------------------------------
# tables

def _ms(values: Sequence[float]) -> str:
    s = stats.summarize(values)
    return f"{s.mean:.2f} ± {s.std:.2f}"


def _ci(values: Sequence[float]) -> str:
    return f"{stats.summarize(values).ci_half:.2f}"


@dataclass
class _Table:
    title: str
    header: list
    rows: list
    footnote: str = ""

    def markdown(self) -> str:
        out = [f"### {self.title}", ""]
        out.append("| " + " | ".join(self.header) + " |")
        out.append("|" + "|".join(" --- " for _ in self.header) + "|")
        for row in self.rows:
            out.append("| " + " | ".join(row) + " |")
        if self.footnote:
            out.append("")
            out.append(f"*{self.footnote}*")
        return "\n".join(out) + "\n"

    def latex(self) -> str:
        cols = "l" * len(self.header)
        out = [
            f"% {self.title}",
            f"\\begin{{tabular}}{{{cols}}}",
            "\\toprule",
            " & ".join(self.header) + " \\\\",
            "\\midrule",
        ]
        for row in self.rows:
            out.append(" & ".join(row) + " \\\\")
        out.append("\\bottomrule")
        out.append("\\end{tabular}")
        if self.footnote:
            out.append(f"% {self.footnote}")
        return "\n".join(out) + "\n"


def build_tables(out_dir: Path) -> list[_Table]:
    raw = out_dir / RAW_DIR
    baselines = read_csv(raw / "baselines_raw.csv")
    ablations = read_csv(raw / "ablations_raw.csv")
    interaction = read_csv(raw / "interaction_raw.csv")
    splits = read_csv(raw / "splits_raw.csv")
    temporal = read_csv(raw / "temporal_raw.csv")
    paired = read_csv(raw / "paired_stats.csv")

    tables = []

    rows = []
    for exp in _BASELINE_ORDER:
        accs = _experiment_accuracies(baselines, exp)
        f1s = _experiment_f1s(baselines, exp)
        rows.append([exp, _ms(accs), _ci(accs), _ms(f1s), str(len(accs))])
    tables.append(
        _Table(
            "Baselines",
            ["method", "accuracy (mean ± std, %)", "95% CI half-width (%)",
             "macro F1 (mean ± std)", "n"],
            rows,
            "Per-seed values aggregated over model seeds at the primary split.",
        )
    )

    seen: list[str] = []
    for row in ablations:
        if row["experiment"] not in seen:
            seen.append(row["experiment"])
    rows = []
    for exp in seen:
        accs = _experiment_accuracies(ablations, exp)
        factor, setting = exp.split("=", 1)
        rows.append([factor, setting, _ms(accs), _ci(accs), f"n={len(accs)}"])
    tables.append(
        _Table(
            "Ablations",
            ["factor", "setting", "accuracy (mean ± std, %)",
             "95% CI half-width (%)", "seeds"],
            rows,
            "Each row varies exactly one factor from the default configuration; "
            "normalization and reward rows use the extended seed set. The "
            "reward=signed row is the default configuration, so it matches norm=on.",
        )
    )

    cell_order = [
        ("norm-on+signed", "norm on + signed"),
        ("norm-on+pos-only", "norm on + pos-only"),
        ("norm-off+signed", "norm off + signed"),
        ("norm-off+pos-only", "norm off + pos-only"),
    ]
    rows = []
    for exp, label in cell_order:
        accs = _experiment_accuracies(interaction, exp)
        rows.append([label, _ms(accs), _ci(accs)])
    for norm in ("on", "off"):
        pos = _seed_aligned(interaction, f"norm-{norm}+pos-only", PRIMARY_SPLIT_SEED)
        sig = _seed_aligned(interaction, f"norm-{norm}+signed", PRIMARY_SPLIT_SEED)
        diffs = [pos[m] - sig[m] for m in sorted(pos)]
        rows.append([f"Δ pos-only − signed (norm {norm})",
                     f"{float(np.mean(diffs)):.2f}", "--"])
    tables.append(
        _Table(
            "Normalization x reward interaction (2x2)",
            ["condition", "accuracy (mean ± std, %)", "95% CI half-width (%)"],
            rows,
            "Descriptive interaction context; all cells share the extended seed set.",
        )
    )

    split_seeds = sorted({int(r["split_seed"]) for r in splits})
    rows = []
    default_means, off_means, deltas = [], [], []
    positive = 0
    for s in split_seeds:
        d = _experiment_accuracies(splits, f"split-{s}-default", s)
        o = _experiment_accuracies(splits, f"split-{s}-norm-off", s)
        delta = float(np.mean(o) - np.mean(d))
        default_means.append(float(np.mean(d)))
        off_means.append(float(np.mean(o)))
        deltas.append(delta)
        positive += int(delta > 0.0)
        rows.append([str(s), _ms(d), _ms(o), f"{delta:+.2f}"])
    rows.append([
        "across splits", _ms(default_means), _ms(off_means),
        f"{float(np.mean(deltas)):+.2f} ± {float(np.std(deltas, ddof=1)):.2f} "
        f"(Δ>0 in {positive}/{len(split_seeds)})",
    ])
    tables.append(
        _Table(
            "Split robustness",
            ["split seed", "default acc (mean ± std, %)",
             "norm-off acc (mean ± std, %)", "Δ (pp)"],
            rows,
            "Same hyperparameters and model seeds on every split; no retuning. "
            "Across-split summaries aggregate the per-split means.",
        )
    )

    rows = []
    for exp, label in (
        ("count-readout", "count readout (timing-agnostic)"),
        ("timebin-readout", "time-bin readout (timing-aware)"),
    ):
        accs = _experiment_accuracies(temporal, exp)
        f1s = _experiment_f1s(temporal, exp)
        rows.append([label, _ms(accs), _ci(accs), _ms(f1s), str(len(accs))])
    tables.append(
        _Table(
            "Temporal synthetic benchmark",
            ["condition", "accuracy (mean ± std, %)", "95% CI half-width (%)",
             "macro F1 (mean ± std)", "n"],
            rows,
            "Two-class burst-order task; per-channel counts carry no class "
            "information by construction.",
        )
    )

    rows = []
    for r in paired:
        rows.append([
            r["comparison"], r["n_pairs"], r["n_nonties"],
            f"{float(r['mean_diff']):+.2f}", f"{float(r['sign_p']):.4f}",
            f"{float(r['dz']):.2f}", f"{float(r['cliffs_delta']):.2f}",
            f"{float(r['ci_half']):.2f}",
        ])
    tables.append(
        _Table(
            "Paired seed-matched comparisons",
            ["comparison", "n", "non-ties", "mean Δ (pp)", "exact sign p",
             "dz", "Cliff's δ", "CI half-width"],
            rows,
            "Two-sided exact sign tests; ties dropped. Reported descriptively.",
        )
    )
    return tables


def render_tables(out_dir: Path) -> list[Path]:
    """Render markdown and LaTeX-style tables from the raw CSVs."""
    tables = build_tables(out_dir)
    md = "\n".join(t.markdown() for t in tables)
    tex = "\n".join(t.latex() for t in tables)
    return [
        _write_text(out_dir / TABLES_DIR / "tables.md", md),
        _write_text(out_dir / TABLES_DIR / "tables.tex", tex),
    ]


# ---------------------------------------------------------------------------
# figures

def render_figures(out_dir: Path) -> list[Path]:
    """Render the four diagnostic SVGs from the raw CSVs."""
    raw = out_dir / RAW_DIR
    traj = read_csv(raw / "trajectories_raw.csv")
    ablations = read_csv(raw / "ablations_raw.csv")
    out: list[Path] = []

    def traj_series(experiment: str, seed: int, column: str) -> list[float]:
        rows = [
            r for r in traj
            if r["experiment"] == experiment and int(r["model_seed"]) == seed
            and int(r["split_seed"]) == PRIMARY_SPLIT_SEED
        ]
        rows.sort(key=lambda r: int(r["epoch"]))
        return [float(r[column]) for r in rows]

    overlay = svg.trajectory_overlay_svg(
        [
            ("norm on (default)", traj_series("norm=on", REPRESENTATIVE_MODEL_SEED,
                                              "test_accuracy_pct")),
            ("norm off", traj_series("norm=off", REPRESENTATIVE_MODEL_SEED,
                                     "test_accuracy_pct")),
        ],
        f"Hybrid accuracy trajectories (model seed {REPRESENTATIVE_MODEL_SEED}, "
        f"split {PRIMARY_SPLIT_SEED})",
    )
    out.append(_write_text(out_dir / FIGURES_DIR / "fig_trajectory_overlay.svg", overlay))

    groups = []
    for exp in ("norm=on", "norm=gentle", "norm=off", "reward=signed", "reward=pos-only"):
        groups.append((exp, _experiment_accuracies(ablations, exp)))
    bars = svg.bars_with_points_svg(
        groups, "Seed-level accuracy for the dominant ablation axes"
    )
    out.append(_write_text(out_dir / FIGURES_DIR / "fig_ablation_bars.svg", bars))

    series = []
    for exp in _NORM_TRAJECTORY_EXPERIMENTS:
        seeds = sorted({
            int(r["model_seed"]) for r in traj if r["experiment"] == exp
        })
        per_seed = np.array([
            traj_series(exp, s, "mean_row_norm") for s in seeds
        ])
        series.append((
            exp,
            per_seed.mean(axis=0).tolist(),
            per_seed.std(axis=0, ddof=1).tolist(),
        ))
    norm_fig = svg.band_trajectories_svg(
        series, "Mean class-row weight norm across training",
        "mean class-row L2 norm",
    )
    out.append(_write_text(out_dir / FIGURES_DIR / "fig_norm_schedules.svg", norm_fig))

    confusion_rows = read_csv(raw / "confusion_matrix.csv")
    matrix = [[float(v) for v in row.values()] for row in confusion_rows]
    heat = svg.confusion_heatmap_svg(
        matrix,
        f"Normalized confusion matrix (hybrid default, seed "
        f"{REPRESENTATIVE_MODEL_SEED})",
    )
    out.append(_write_text(out_dir / FIGURES_DIR / "fig_confusion.svg", heat))
    return out


# ---------------------------------------------------------------------------
# manifest

@dataclass
class VerifyResult:
    ok: bool
    problems: list


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(
    out_dir: Path,
    files: Iterable[Path],
    config_digest: str,
    hardware: str,
    timestamp: str,
) -> Path:
    """List every emitted file with size and sha256; the manifest itself is
    excluded from its own listing and the timestamp is excluded from any
    identity comparison."""
    entries = []
    for f in sorted(set(Path(p) for p in files)):
        rel = f.relative_to(out_dir).as_posix()
        entries.append(f"{_sha256(f)}  {f.stat().st_size}  {rel}")
    lines = [
        "# spikebench manifest v1",
        f"# version: {__version__}",
        f"# config: {config_digest}",
        f"# hardware: {hardware}",
        f"# timestamp: {timestamp}",
    ] + entries
    return _write_text(out_dir / MANIFEST_NAME, "\n".join(lines) + "\n")


def manifest_identity(path: Path) -> str:
    """Manifest content minus the excluded timestamp line."""
    with open(path, "r") as fh:
        lines = [ln for ln in fh if not ln.startswith("# timestamp:")]
    return "".join(lines)


def verify_manifest(path: Path) -> VerifyResult:
    """Recompute digests for every listed file; name each offender."""
    path = Path(path)
    base = path.parent
    problems: list[str] = []
    try:
        with open(path, "r") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError:
        return VerifyResult(False, [f"manifest not readable: {path}"])
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        try:
            digest, size_s, rel = ln.split(maxsplit=2)
        except ValueError:
            problems.append(f"malformed manifest line: {ln!r}")
            continue
        target = base / rel
        if not target.is_file():
            problems.append(f"missing file: {rel}")
            continue
        if target.stat().st_size != int(size_s):
            problems.append(f"size mismatch: {rel}")
            continue
        if _sha256(target) != digest:
            problems.append(f"digest mismatch: {rel}")
    return VerifyResult(ok=not problems, problems=problems)

"""Command-line interface.

Subcommands cover the experiment families (``baselines``, ``ablations``,
``interaction``, ``splits``, ``temporal``), the diagnostics and timing
reports, rendering (``report``), the full deterministic suite (``all``),
manifest checking (``verify``) and a kernel demonstration
(``demo-kernels``).

Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, report
from .data import DataError
from .protocol import (
    DEFAULT_MODEL_SEEDS,
    EXTENDED_MODEL_SEEDS,
    ROBUSTNESS_SPLIT_SEEDS,
    HybridDefaults,
    Runner,
    SuiteResult,
    ablation_keys,
    baseline_keys,
    interaction_keys,
    load_bundle,
    run_diagnostics,
    run_suite,
    run_timing,
    split_robustness_keys,
    temporal_keys,
    _records,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3

DATA_DIR_ENV = "SPIKEBENCH_DATA_DIR"


class UsageError(Exception):
    """Bad arguments or configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with code 2
        raise UsageError(message)


@dataclass
class Settings:
    data_dir: Path
    out_dir: Path
    jobs: int
    seeds: tuple
    extended_seeds: tuple
    split_seeds: tuple
    defaults: HybridDefaults

    def digest(self) -> str:
        text = "\n".join(
            [
                f"seeds = {','.join(map(str, self.seeds))}",
                f"extended_seeds = {','.join(map(str, self.extended_seeds))}",
                f"split_seeds = {','.join(map(str, self.split_seeds))}",
                f"shaping = {self.defaults.shaping}",
                f"norm_mode = {self.defaults.norm_mode}",
                f"neurons_per_feature = {self.defaults.neurons_per_feature}",
                f"tuning_width = {self.defaults.tuning_width}",
                f"peak_rate_hz = {self.defaults.peak_rate_hz}",
                f"epochs = {self.defaults.epochs}",
                f"learning_rate = {self.defaults.learning_rate}",
            ]
        )
        return hashlib.sha256(text.encode()).hexdigest()


_CONFIG_KEYS = {
    "seeds": str,
    "split_seeds": str,
    "jobs": int,
    "shaping": str,
    "norm_mode": str,
    "neurons_per_feature": int,
    "tuning_width": float,
    "peak_rate_hz": float,
    "epochs": int,
    "learning_rate": float,
}


def parse_config_file(path: Path) -> dict:
    """Plain-text ``key = value`` lines; unknown keys are errors."""
    values: dict[str, object] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_KEYS[key](raw)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from exc
    return values


def _parse_int_list(text: str, what: str) -> tuple:
    try:
        items = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"bad {what} list: {text!r}") from exc
    if not items:
        raise UsageError(f"empty {what} list")
    return items


_SHAPING_ALIASES = {
    "signed": "signed",
    "positive_only": "positive_only",
    "pos-only": "positive_only",
}


def build_settings(args: argparse.Namespace) -> Settings:
    config = parse_config_file(args.config) if args.config else {}
    data_dir = Path(
        args.data_dir
        or os.environ.get(DATA_DIR_ENV)
        or "data"
    )
    out_dir = Path(args.out_dir or "results")
    jobs = args.jobs if args.jobs is not None else int(config.get("jobs", 1))
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")

    seeds_text = args.seeds or config.get("seeds")
    if seeds_text:
        seeds = _parse_int_list(str(seeds_text), "seed")
        extended = seeds
    else:
        seeds = DEFAULT_MODEL_SEEDS
        extended = EXTENDED_MODEL_SEEDS
    splits_text = args.split_seeds or config.get("split_seeds")
    split_seeds = (
        _parse_int_list(str(splits_text), "split seed")
        if splits_text
        else ROBUSTNESS_SPLIT_SEEDS
    )

    defaults = HybridDefaults()
    for key in ("norm_mode", "neurons_per_feature", "tuning_width",
                "peak_rate_hz", "epochs", "learning_rate"):
        if key in config:
            defaults = replace(defaults, **{key: config[key]})
    if "shaping" in config:
        shaping = _SHAPING_ALIASES.get(str(config["shaping"]))
        if shaping is None:
            raise UsageError(f"unknown shaping {config['shaping']!r}")
        defaults = replace(defaults, shaping=shaping)
    if defaults.norm_mode not in ("on", "gentle", "off"):
        raise UsageError(f"unknown norm_mode {defaults.norm_mode!r}")
    return Settings(
        data_dir=data_dir,
        out_dir=out_dir,
        jobs=jobs,
        seeds=seeds,
        extended_seeds=extended,
        split_seeds=split_seeds,
        defaults=defaults,
    )


def _make_runner(settings: Settings) -> Runner:
    bundle = load_bundle(settings.data_dir)
    return Runner(bundle, settings.data_dir, jobs=settings.jobs)


def _print_family(records) -> None:
    from . import stats

    by_exp: dict[str, list[float]] = {}
    order: list[str] = []
    for r in records:
        if r.experiment not in by_exp:
            by_exp[r.experiment] = []
            order.append(r.experiment)
        by_exp[r.experiment].append(r.accuracy_pct)
    for exp in order:
        s = stats.summarize(by_exp[exp])
        print(f"  {exp:28s} {s.mean:6.2f} ± {s.std:5.2f} %  (n={s.n})")


def _family_command(name: str, settings: Settings) -> int:
    runner = _make_runner(settings)
    keys = {
        "baselines": lambda: baseline_keys(settings.seeds, settings.defaults),
        "ablations": lambda: ablation_keys(
            settings.seeds, settings.extended_seeds, settings.defaults
        ),
        "interaction": lambda: interaction_keys(
            settings.extended_seeds, settings.defaults
        ),
        "splits": lambda: split_robustness_keys(
            settings.seeds, settings.split_seeds, settings.defaults
        ),
        "temporal": lambda: temporal_keys(settings.seeds),
    }[name]()
    records = _records(runner, keys)
    path = report._write_text(
        settings.out_dir / report.RAW_DIR / report._FAMILY_FILES[name],
        report._family_csv(records),
    )
    print(f"{name}: {len(records)} records -> {path}")
    _print_family(records)
    return EXIT_OK


def _diagnostics_command(settings: Settings) -> int:
    runner = _make_runner(settings)
    bundle_diag = run_diagnostics(runner, settings.seeds, settings.defaults)
    suite = SuiteResult(
        families={}, diagnostics=bundle_diag, paired=[], durations_s={}
    )
    paths = [
        report._emit_diagnostics(suite, settings.out_dir),
        report._emit_confusion(suite, settings.out_dir),
        report._emit_per_class_f1(suite, settings.out_dir),
    ] + report._emit_model_snapshots(suite, settings.out_dir)
    d = bundle_diag
    print(f"hybrid parameters : {d.hybrid_param_count}")
    print(f"proxy parameters  : {d.proxy_param_count}")
    print(f"spikes/sample     : {d.spikes_mean:.1f} ± {d.spikes_std:.1f} "
          f"(analytic {d.spikes_analytic:.1f})")
    print(f"proxy saturation  : lo {d.proxy_saturation_lo.mean:.2f}% "
          f"hi {d.proxy_saturation_hi.mean:.2f}%")
    print(f"winner margin     : {d.proxy_winner_margin.mean:.4f}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def _timing_command(settings: Settings) -> int:
    runner = _make_runner(settings)
    timing = run_timing(runner)
    path = report.emit_timing(timing, settings.out_dir)
    print(f"timing over {timing.repeats} repeats, batch {timing.batch_size} "
          f"({timing.hardware})")
    for row in timing.rows:
        print(f"  {row.branch:8s} {row.metric:12s} "
              f"{row.median_us_per_sample:10.3f} us/sample")
    print(f"wrote {path}")
    return EXIT_OK


def _report_command(settings: Settings) -> int:
    raw = settings.out_dir / report.RAW_DIR
    if not raw.is_dir():
        raise DataError(f"no raw results under {raw}; run the suite first")
    try:
        paths = report.render_tables(settings.out_dir)
        paths += report.render_figures(settings.out_dir)
    except OSError as exc:
        raise DataError(f"missing raw CSV for rendering: {exc}") from exc
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def hardware_string() -> str:
    import platform

    import numpy as np

    return (
        f"{platform.platform()} / {platform.processor() or 'unknown-cpu'}"
        f" / python {platform.python_version()} / numpy {np.__version__}"
    )


def run_all(settings: Settings):
    """The full deterministic suite plus artifact emission; returns
    (suite, runner, manifest path).  Timing is deliberately excluded so two
    invocations produce byte-identical artifacts."""
    runner = _make_runner(settings)
    suite = run_suite(
        runner,
        seeds=settings.seeds,
        extended_seeds=settings.extended_seeds,
        split_seeds=settings.split_seeds,
        defaults=settings.defaults,
    )
    paths = report.emit_raw_csvs(suite, settings.out_dir)
    paths += report.render_tables(settings.out_dir)
    paths += report.render_figures(settings.out_dir)
    manifest = report.write_manifest(
        settings.out_dir,
        paths,
        config_digest=settings.digest(),
        hardware=hardware_string(),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    return suite, runner, manifest


def _all_command(settings: Settings) -> int:
    suite, _, manifest = run_all(settings)
    for family, records in suite.families.items():
        print(f"{family} ({suite.durations_s[family]:.1f}s):")
        _print_family(records)
    print(f"manifest: {manifest}")
    return EXIT_OK


def _verify_command(settings: Settings) -> int:
    manifest = settings.out_dir / report.MANIFEST_NAME
    result = report.verify_manifest(manifest)
    if result.ok:
        print(f"verify: OK ({manifest})")
        return EXIT_OK
    for problem in result.problems:
        print(f"verify: {problem}", file=sys.stderr)
    return EXIT_VERIFY


def _demo_kernels_command() -> int:
    from .plasticity import run_kernel_demo

    res = run_kernel_demo()
    print("kernel demo: one LIF neuron, Poisson input, delayed reward")
    print(f"  pre spikes        : {res.pre_spike_total}")
    print(f"  post spikes       : {res.post_spike_total}")
    print(f"  final potential   : {res.final_potential:.6f}")
    print(f"  eligibility range : [{res.eligibility_min:.6f}, "
          f"{res.eligibility_max:.6f}]")
    print(f"  weights in bounds : [{res.weight_min:.6f}, {res.weight_max:.6f}]")
    print(f"  mean weight change: {res.mean_weight_change:+.6f}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="spikebench",
        description="Deterministic local-learning benchmarks on spiking encoders.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--data-dir", help=f"dataset directory (or ${DATA_DIR_ENV})")
    parser.add_argument("--out-dir", help="output directory (default ./results)")
    parser.add_argument("--seeds", help="comma-separated model seeds")
    parser.add_argument("--split-seeds", help="comma-separated split seeds")
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--jobs", type=int, help="parallel run workers")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (
        "baselines", "ablations", "interaction", "splits", "temporal",
        "diagnostics", "timing", "report", "all", "verify", "demo-kernels",
    ):
        sub.add_parser(name)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = build_settings(args)
        if args.command in report._FAMILY_FILES:
            return _family_command(args.command, settings)
        if args.command == "diagnostics":
            return _diagnostics_command(settings)
        if args.command == "timing":
            return _timing_command(settings)
        if args.command == "report":
            return _report_command(settings)
        if args.command == "all":
            return _all_command(settings)
        if args.command == "verify":
            return _verify_command(settings)
        if args.command == "demo-kernels":
            return _demo_kernels_command()
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

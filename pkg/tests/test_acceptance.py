"""Acceptance gate: every criterion at its stated tolerance, full scale.

The deterministic suite is executed twice into clean directories (the
second pass through the CLI entry point); criteria 1-7 are evaluated from
the first run's raw CSV artifacts, 8-9 against independent oracles, and 10
from the two manifests.  Each criterion prints one PASS/FAIL line; run with
``pytest tests/test_acceptance.py -s`` to stream them.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from spikebench import stats
from spikebench.cli import Settings, main as cli_main, run_all
from spikebench.protocol import (
    DEFAULT_MODEL_SEEDS,
    EXTENDED_MODEL_SEEDS,
    PRIMARY_SPLIT_SEED,
    ROBUSTNESS_SPLIT_SEEDS,
    HybridDefaults,
    hybrid_key,
)
from spikebench.report import manifest_identity, read_csv, verify_manifest
from tests.test_stats import CI_REGRESSION_FIXTURE

JOBS = 2


@pytest.fixture(scope="module")
def first_run(data_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance_run1")
    settings = Settings(
        data_dir=data_dir,
        out_dir=out,
        jobs=JOBS,
        seeds=DEFAULT_MODEL_SEEDS,
        extended_seeds=EXTENDED_MODEL_SEEDS,
        split_seeds=ROBUSTNESS_SPLIT_SEEDS,
        defaults=HybridDefaults(),
    )
    t0 = time.perf_counter()
    suite, runner, manifest = run_all(settings)
    wall = time.perf_counter() - t0
    return {
        "out": out,
        "suite": suite,
        "runner": runner,
        "manifest": manifest,
        "wall_s": wall,
    }


@pytest.fixture(scope="module")
def second_run(data_dir, tmp_path_factory, first_run):
    out = tmp_path_factory.mktemp("acceptance_run2")
    code = cli_main([
        "--data-dir", str(data_dir),
        "--out-dir", str(out),
        "--jobs", str(JOBS),
        "all",
    ])
    assert code == 0
    return out


def _raw(first_run, name: str):
    return read_csv(first_run["out"] / "raw" / name)


def _seed_accs(rows, experiment, split_seed=PRIMARY_SPLIT_SEED):
    return {
        int(r["model_seed"]): float(r["accuracy_pct"])
        for r in rows
        if r["experiment"] == experiment and int(r["split_seed"]) == split_seed
    }


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"[acceptance] criterion {number:2d} {'PASS' if ok else 'FAIL'}: {detail}")


def test_criterion_1_normalization_dominance(first_run):
    rows = _raw(first_run, "ablations_raw.csv")
    off = _seed_accs(rows, "norm=off")
    on = _seed_accs(rows, "norm=on")
    assert sorted(off) == sorted(on) == sorted(EXTENDED_MODEL_SEEDS)
    off_vals = [off[m] for m in EXTENDED_MODEL_SEEDS]
    diffs = [off[m] - on[m] for m in EXTENDED_MODEL_SEEDS]
    summary = stats.summarize(off_vals)
    p = stats.sign_test_exact(diffs)
    runner = first_run["runner"]
    norm_axis_keys = [
        hybrid_key(PRIMARY_SPLIT_SEED, m, norm_mode=mode)
        for mode in ("on", "off")
        for m in EXTENDED_MODEL_SEEDS
    ]
    compute_s = sum(runner.run_seconds[k] for k in norm_axis_keys)
    ok = (
        summary.mean >= 92.0
        and summary.std <= 3.0
        and float(np.mean(diffs)) >= 5.0
        and p <= 0.05
        and compute_s <= 300.0
    )
    _report(
        1, ok,
        f"norm-off {summary.mean:.2f}±{summary.std:.2f}%, Δ "
        f"{float(np.mean(diffs)):+.2f}pp, sign p={p:.5f}, "
        f"compute {compute_s:.0f}s",
    )
    assert ok


def test_criterion_2_baseline_ranges(first_run):
    rows = _raw(first_run, "baselines_raw.csv")
    hybrid = _seed_accs(rows, "hybrid-default")
    proxy = _seed_accs(rows, "proxy-default")
    hybrid_mean = float(np.mean(list(hybrid.values())))
    proxy_mean = float(np.mean(list(proxy.values())))
    diffs = [hybrid[m] - proxy[m] for m in DEFAULT_MODEL_SEEDS]
    p = stats.sign_test_exact(diffs)
    ok = (
        78.0 <= hybrid_mean <= 94.0
        and 80.0 <= proxy_mean <= 93.0
        and abs(float(np.mean(diffs))) <= 6.0
        and p > 0.1
    )
    _report(
        2, ok,
        f"hybrid {hybrid_mean:.2f}%, proxy {proxy_mean:.2f}%, "
        f"|Δ| {abs(float(np.mean(diffs))):.2f}pp, sign p={p:.4f}",
    )
    assert ok


def test_criterion_3_interaction_reversal(first_run):
    rows = _raw(first_run, "interaction_raw.csv")
    deltas = {}
    for norm in ("on", "off"):
        pos = _seed_accs(rows, f"norm-{norm}+pos-only")
        sig = _seed_accs(rows, f"norm-{norm}+signed")
        deltas[norm] = float(
            np.mean([pos[m] - sig[m] for m in EXTENDED_MODEL_SEEDS])
        )
    contrast = deltas["on"] - deltas["off"]
    ok = deltas["on"] >= 3.0 and contrast >= 5.0
    _report(
        3, ok,
        f"Δ(norm on) {deltas['on']:+.2f}pp, Δ(norm off) {deltas['off']:+.2f}pp, "
        f"contrast {contrast:+.2f}pp",
    )
    assert ok


def test_criterion_4_split_robustness(first_run):
    rows = _raw(first_run, "splits_raw.csv")
    deltas = []
    for s in ROBUSTNESS_SPLIT_SEEDS:
        default = _seed_accs(rows, f"split-{s}-default", split_seed=s)
        off = _seed_accs(rows, f"split-{s}-norm-off", split_seed=s)
        deltas.append(
            float(np.mean(list(off.values()))) - float(np.mean(list(default.values())))
        )
    ok = all(d > 0.0 for d in deltas) and float(np.mean(deltas)) >= 5.0
    _report(
        4, ok,
        "per-split Δ " + ", ".join(f"{d:+.2f}" for d in deltas)
        + f"; mean {float(np.mean(deltas)):+.2f}pp",
    )
    assert ok


def test_criterion_5_temporal_benchmark(first_run):
    rows = _raw(first_run, "temporal_raw.csv")
    count = list(_seed_accs(rows, "count-readout").values())
    binned = list(_seed_accs(rows, "timebin-readout").values())
    count_mean = float(np.mean(count))
    binned_mean = float(np.mean(binned))
    gap = binned_mean - count_mean
    family_s = first_run["suite"].durations_s["temporal"]
    ok = (
        45.0 <= count_mean <= 55.0
        and binned_mean >= 75.0
        and gap >= 25.0
        and family_s <= 120.0
    )
    _report(
        5, ok,
        f"count {count_mean:.2f}%, time-bin {binned_mean:.2f}%, gap "
        f"{gap:.2f}pp, family {family_s:.0f}s",
    )
    assert ok


def test_criterion_6_controls(first_run):
    rows = _raw(first_run, "baselines_raw.csv")
    pixels = float(np.mean(list(_seed_accs(rows, "softmax-pixels").values())))
    rates = float(np.mean(list(_seed_accs(rows, "softmax-rates").values())))
    ok = pixels >= 93.0 and rates >= 92.0
    _report(6, ok, f"pixels {pixels:.2f}%, encoded rates {rates:.2f}%")
    assert ok


def test_criterion_7_diagnostics(first_run):
    rows = _raw(first_run, "diagnostics.csv")
    values = {r["metric"]: float(r["value"]) for r in rows}
    spikes = values["spikes_per_sample_mean"]
    analytic = values["spikes_per_sample_analytic"]
    ok = (
        values["hybrid_param_count"] == 2570.0
        and values["proxy_param_count"] == 24672.0
        and values["proxy_saturation_hi_pct_mean"] <= 0.1
        and values["proxy_saturation_lo_pct_mean"] > 0.0
        and abs(spikes - 2420.7) / 2420.7 <= 0.15
        and abs(spikes - analytic) / analytic <= 0.01
    )
    _report(
        7, ok,
        f"params 2570/24672 ok, saturation lo "
        f"{values['proxy_saturation_lo_pct_mean']:.2f}% hi "
        f"{values['proxy_saturation_hi_pct_mean']:.2f}%, spikes {spikes:.1f} "
        f"(analytic {analytic:.1f})",
    )
    assert ok


def test_criterion_8_statistics_exactness():
    p = stats.sign_test_exact([1.0] * 9)
    sign_ok = abs(p - 0.00390625) <= 1e-8
    ci_ok = all(
        abs(1.96 * std / math.sqrt(n) - printed) <= 0.02
        for std, n, printed in CI_REGRESSION_FIXTURE
    )
    rng = np.random.default_rng(80)
    oracle_ok = True
    for _ in range(20):
        diffs = rng.normal(1.0, 2.0, size=rng.integers(3, 15)).tolist()
        mean = sum(diffs) / len(diffs)
        var = sum((d - mean) ** 2 for d in diffs) / (len(diffs) - 1)
        if var > 0 and abs(stats.cohens_dz(diffs) - mean / math.sqrt(var)) > 1e-12:
            oracle_ok = False
        a = rng.normal(size=rng.integers(3, 12)).tolist()
        b = rng.normal(size=rng.integers(3, 12)).tolist()
        gt = sum(1 for x in a for y in b if x > y)
        lt = sum(1 for x in a for y in b if x < y)
        if abs(stats.cliffs_delta(a, b) - (gt - lt) / (len(a) * len(b))) > 1e-12:
            oracle_ok = False
    ok = sign_ok and ci_ok and oracle_ok
    _report(
        8, ok,
        f"sign(9/9)={p:.8f}, CI fixture {len(CI_REGRESSION_FIXTURE)} rows ok, "
        f"dz/cliffs oracles 1e-12 ok",
    )
    assert ok


def test_criterion_9_kernel_correctness():
    from spikebench.plasticity import (
        LifConfig, LifState, PlasticityConfig, PlasticityState,
        apply_reward, lif_step, step_eligibility, step_traces,
    )

    lif_cfg = LifConfig()
    pl_cfg = PlasticityConfig()
    rng = np.random.default_rng(81)
    steps, n_pre, n_post = 200, 6, 4
    pre = (rng.random((steps, n_pre)) < 0.2).astype(float)
    currents = rng.uniform(0.0, 1.4, size=(steps, n_post))
    rewards = rng.normal(size=steps) * (rng.random(steps) < 0.15)

    st_ = PlasticityState.zeros(n_pre, n_post)
    lif = [LifState() for _ in range(n_post)]
    weights = np.full((n_pre, n_post), 0.5)
    bounds_ok = True
    for t in range(steps):
        post = np.zeros(n_post)
        for j in range(n_post):
            lif[j], spiked = lif_step(lif[j], currents[t, j], lif_cfg)
            post[j] = float(spiked)
        step_eligibility(st_, pre[t], post, pl_cfg)
        step_traces(st_, pre[t], post, pl_cfg)
        weights = apply_reward(weights, st_, float(rewards[t]), pl_cfg)
        if weights.min() < pl_cfg.w_min or weights.max() > pl_cfg.w_max:
            bounds_ok = False

    # naive scalar reference, written independently of the kernels
    alpha = math.exp(-lif_cfg.dt_s / lif_cfg.membrane_tau_s)
    beta = math.exp(-pl_cfg.dt_s / pl_cfg.pre_tau_s)
    gamma = math.exp(-pl_cfg.dt_s / pl_cfg.post_tau_s)
    delta = math.exp(-pl_cfg.dt_s / pl_cfg.eligibility_tau_s)
    v = [0.0] * n_post
    refrac = [0] * n_post
    xt, yt = [0.0] * n_pre, [0.0] * n_post
    elig = [[0.0] * n_post for _ in range(n_pre)]
    w_ref = [[0.5] * n_post for _ in range(n_pre)]
    for t in range(steps):
        post_ref = [0.0] * n_post
        for j in range(n_post):
            if refrac[j] > 0:
                refrac[j] -= 1
                v[j] = lif_cfg.reset_potential
                continue
            v[j] = alpha * v[j] + (1 - alpha) * currents[t, j]
            if v[j] >= lif_cfg.threshold:
                post_ref[j] = 1.0
                v[j] = lif_cfg.reset_potential
                refrac[j] = lif_cfg.refractory_bins
        for i in range(n_pre):
            for j in range(n_post):
                elig[i][j] = (
                    delta * elig[i][j]
                    + pl_cfg.potentiation * xt[i] * post_ref[j]
                    - pl_cfg.depression * pre[t, i] * yt[j]
                )
        for i in range(n_pre):
            xt[i] = beta * xt[i] + pre[t, i]
        for j in range(n_post):
            yt[j] = gamma * yt[j] + post_ref[j]
        for i in range(n_pre):
            for j in range(n_post):
                raw = w_ref[i][j] + pl_cfg.learning_rate * rewards[t] * elig[i][j]
                w_ref[i][j] = min(max(raw, pl_cfg.w_min), pl_cfg.w_max)

    elig_err = float(np.max(np.abs(st_.eligibility - np.array(elig))))
    w_err = float(np.max(np.abs(weights - np.array(w_ref))))
    v_err = float(
        np.max(np.abs(np.array([s.potential for s in lif]) - np.array(v)))
    )

    # closed-form trace check
    trace_cfg = PlasticityConfig()
    tr = PlasticityState.zeros(1, 1)
    step_traces(tr, np.array([1.0]), np.array([0.0]), trace_cfg)
    closed_ok = True
    for t in range(60):
        if abs(tr.pre_trace[0] - trace_cfg.pre_decay**t) > 1e-12:
            closed_ok = False
        step_traces(tr, np.array([0.0]), np.array([0.0]), trace_cfg)

    ok = (
        elig_err < 1e-12 and w_err < 1e-12 and v_err < 1e-12
        and bounds_ok and closed_ok
    )
    _report(
        9, ok,
        f"200-step max errors: eligibility {elig_err:.2e}, weights {w_err:.2e}, "
        f"membrane {v_err:.2e}; bounds and closed form ok",
    )
    assert ok


def test_criterion_10_reproducibility(first_run, second_run):
    m1 = first_run["manifest"]
    m2 = Path(second_run) / "manifest.txt"
    identity_ok = manifest_identity(m1) == manifest_identity(m2)
    verify1 = verify_manifest(m1)
    verify2 = verify_manifest(m2)
    byte_ok = True
    for sub in ("raw", "figures", "tables", "models"):
        for f1 in sorted((first_run["out"] / sub).iterdir()):
            f2 = Path(second_run) / sub / f1.name
            if not f2.is_file() or f1.read_bytes() != f2.read_bytes():
                byte_ok = False
    wall = first_run["wall_s"]
    ok = identity_ok and verify1.ok and verify2.ok and byte_ok and wall <= 1800.0
    _report(
        10, ok,
        f"manifests identical={identity_ok}, verify pass={verify1.ok and verify2.ok}, "
        f"artifacts byte-identical={byte_ok}, suite wall {wall:.0f}s",
    )
    assert ok

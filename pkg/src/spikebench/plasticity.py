"""Leaky integrate-and-fire and three-factor plasticity kernels.

These kernels model the biological target the benchmark abstracts from: a
LIF membrane with refractory reset, exponentially decaying pre/post spike
traces, a synaptic eligibility trace built from trace-spike pairings, and a
reward-gated weight update with hard bounds.  They are exercised by unit
and property tests and the ``demo-kernels`` command; the benchmark results
themselves come from the readout and proxy learners.

Per-bin update order is fixed for reproducibility: eligibility first (using
the traces and spikes of the current bin), then traces, then any reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LifConfig:
    membrane_tau_s: float = 0.020
    threshold: float = 1.0
    reset_potential: float = 0.0
    bias_current: float = 0.0
    refractory_bins: int = 2
    dt_s: float = 0.001

    def __post_init__(self) -> None:
        if self.membrane_tau_s <= 0.0:
            raise ValueError("membrane_tau_s must be positive")

    @property
    def leak(self) -> float:
        """Per-bin membrane retention factor exp(-dt/tau), in (0, 1)."""
        return math.exp(-self.dt_s / self.membrane_tau_s)


@dataclass
class LifState:
    potential: float = 0.0
    refractory_remaining: int = 0


def lif_step(
    state: LifState, input_current: float, cfg: LifConfig
) -> tuple[LifState, bool]:
    """Advance the membrane one bin; returns (new state, spiked).

    During refractory bins the potential is held at the reset value and the
    counter counts down; otherwise v <- leak*v + (1-leak)*I + bias, spiking
    (and resetting, and entering refractory) when v reaches threshold.
    """
    if state.refractory_remaining > 0:
        return LifState(cfg.reset_potential, state.refractory_remaining - 1), False
    a = cfg.leak
    v = a * state.potential + (1.0 - a) * input_current + cfg.bias_current
    if v >= cfg.threshold:
        return LifState(cfg.reset_potential, cfg.refractory_bins), True
    return LifState(v, 0), False


@dataclass(frozen=True)
class PlasticityConfig:
    """Decay constants, pairing amplitudes and bounds for the 3-factor rule.

    The trace and eligibility time constants and the pairing amplitudes are
    modeling defaults (config-exposed), chosen from common practice for
    this family of rules.
    """

    pre_tau_s: float = 0.020
    post_tau_s: float = 0.020
    eligibility_tau_s: float = 1.0
    dt_s: float = 0.001
    potentiation: float = 0.01    # gain on pre-trace x post-spike pairings
    depression: float = 0.012     # gain on pre-spike x post-trace pairings
    learning_rate: float = 0.05
    w_min: float = 0.0
    w_max: float = 1.0

    @property
    def pre_decay(self) -> float:
        return math.exp(-self.dt_s / self.pre_tau_s)

    @property
    def post_decay(self) -> float:
        return math.exp(-self.dt_s / self.post_tau_s)

    @property
    def eligibility_decay(self) -> float:
        return math.exp(-self.dt_s / self.eligibility_tau_s)


@dataclass
class PlasticityState:
    """Pre/post traces and the pre x post eligibility matrix."""

    pre_trace: np.ndarray
    post_trace: np.ndarray
    eligibility: np.ndarray

    @classmethod
    def zeros(cls, n_pre: int, n_post: int) -> "PlasticityState":
        return cls(
            pre_trace=np.zeros(n_pre),
            post_trace=np.zeros(n_post),
            eligibility=np.zeros((n_pre, n_post)),
        )


def step_traces(
    state: PlasticityState,
    pre_spikes: np.ndarray,
    post_spikes: np.ndarray,
    cfg: PlasticityConfig,
) -> PlasticityState:
    """Decay-and-accumulate both spike traces for one bin."""
    pre_spikes = np.asarray(pre_spikes, dtype=np.float64)
    post_spikes = np.asarray(post_spikes, dtype=np.float64)
    if pre_spikes.shape != state.pre_trace.shape:
        raise ValueError("pre spike vector length mismatch")
    if post_spikes.shape != state.post_trace.shape:
        raise ValueError("post spike vector length mismatch")
    state.pre_trace = cfg.pre_decay * state.pre_trace + pre_spikes
    state.post_trace = cfg.post_decay * state.post_trace + post_spikes
    return state


def step_eligibility(
    state: PlasticityState,
    pre_spikes: np.ndarray,
    post_spikes: np.ndarray,
    cfg: PlasticityConfig,
) -> PlasticityState:
    """Accumulate timing-ordered pairings into the eligibility matrix.

    Pre-trace paired with a post spike potentiates (pre-then-post order);
    a pre spike paired with the post-trace depresses (post-then-pre).
    Call before ``step_traces`` for the same bin.
    """
    pre_spikes = np.asarray(pre_spikes, dtype=np.float64)
    post_spikes = np.asarray(post_spikes, dtype=np.float64)
    state.eligibility = (
        cfg.eligibility_decay * state.eligibility
        + cfg.potentiation * np.outer(state.pre_trace, post_spikes)
        - cfg.depression * np.outer(pre_spikes, state.post_trace)
    )
    return state


def apply_reward(
    weights: np.ndarray, state: PlasticityState, reward: float, cfg: PlasticityConfig
) -> np.ndarray:
    """Convert eligibility into bounded persistent weight change."""
    if weights.shape != state.eligibility.shape:
        raise ValueError("weights shape must match eligibility matrix")
    return np.clip(
        weights + cfg.learning_rate * reward * state.eligibility,
        cfg.w_min,
        cfg.w_max,
    )


@dataclass
class KernelDemoResult:
    pre_spike_total: int
    post_spike_total: int
    final_potential: float
    eligibility_min: float
    eligibility_max: float
    weight_min: float
    weight_max: float
    mean_weight_change: float


def run_kernel_demo(
    n_pre: int = 8,
    bins: int = 200,
    input_rate_hz: float = 80.0,
    reward: float = 1.0,
    seed_label: str = "kernel-demo",
) -> KernelDemoResult:
    """Drive one LIF neuron with Poisson input and apply a delayed reward.

    Deterministic end to end; used by the ``demo-kernels`` command and as a
    smoke test that the kernels compose in the documented order.
    """
    from .detrng import resolve_path

    lif_cfg = LifConfig()
    pl_cfg = PlasticityConfig()
    stream = resolve_path([(seed_label, 0)])
    weights = 0.25 * np.ones((n_pre, 1))
    state = PlasticityState.zeros(n_pre, 1)
    lif = LifState()
    p_in = input_rate_hz * lif_cfg.dt_s
    pre_total = 0
    post_total = 0
    for _ in range(bins):
        pre = np.array([stream.bernoulli(p_in) for _ in range(n_pre)], dtype=float)
        current = float(weights[:, 0] @ pre) * 40.0
        lif, spiked = lif_step(lif, current, lif_cfg)
        post = np.array([1.0 if spiked else 0.0])
        step_eligibility(state, pre, post, pl_cfg)
        step_traces(state, pre, post, pl_cfg)
        pre_total += int(pre.sum())
        post_total += int(post.sum())
    updated = apply_reward(weights, state, reward, pl_cfg)
    return KernelDemoResult(
        pre_spike_total=pre_total,
        post_spike_total=post_total,
        final_potential=lif.potential,
        eligibility_min=float(state.eligibility.min()),
        eligibility_max=float(state.eligibility.max()),
        weight_min=float(updated.min()),
        weight_max=float(updated.max()),
        mean_weight_change=float((updated - weights).mean()),
    )

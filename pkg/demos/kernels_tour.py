"""Tour of the LIF and three-factor plasticity kernels.

Steps a single LIF neuron bin by bin, shows the membrane trajectory around
a spike, then builds pre/post traces and an eligibility trace from a
pre-then-post pairing and converts it to a bounded weight change with a
delayed reward.

Run:  python demos/kernels_tour.py
"""

import numpy as np

from spikebench.plasticity import (
    LifConfig,
    LifState,
    PlasticityConfig,
    PlasticityState,
    apply_reward,
    lif_step,
    step_eligibility,
    step_traces,
)


def membrane_walk() -> None:
    cfg = LifConfig()
    print(f"LIF: leak per bin = {cfg.leak:.6f}, threshold = {cfg.threshold}")
    state = LifState()
    current = 1.6  # suprathreshold drive
    print("bin   v_before  spike")
    for t in range(12):
        state, spiked = lif_step(state, current, cfg)
        marker = "  <- spike, reset + refractory" if spiked else ""
        print(f"{t:3d}   {state.potential:8.4f}  {str(spiked):5s}{marker}")


def pairing_and_reward() -> None:
    cfg = PlasticityConfig()
    state = PlasticityState.zeros(1, 1)
    print("\nPre spike at bin 0, post spike at bin 3 (pre-then-post pairing):")
    schedule = [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0), (0.0, 0.0)]
    for t, (pre, post) in enumerate(schedule):
        step_eligibility(state, np.array([pre]), np.array([post]), cfg)
        step_traces(state, np.array([pre]), np.array([post]), cfg)
        print(f"  bin {t}: pre-trace {state.pre_trace[0]:.4f}  "
              f"eligibility {state.eligibility[0, 0]:+.6f}")
    weights = np.array([[0.5]])
    for reward in (0.0, 1.0, -1.0):
        updated = apply_reward(weights, state, reward, cfg)
        print(f"  reward {reward:+.0f}: weight 0.5 -> {updated[0, 0]:.6f}")
    print("  (positive eligibility: pre-then-post order was potentiating)")


if __name__ == "__main__":
    membrane_walk()
    pairing_and_reward()

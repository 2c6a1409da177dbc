"""Tour of the hybrid local readout.

Trains the delta-rule softmax readout on spike-count features with the
default normalization schedule and with it disabled, printing the
per-epoch test-accuracy trajectories side by side.  The run is shortened
to six epochs to stay quick; the full protocol uses eighteen.

Run:  python demos/hybrid_readout_tour.py
"""

import numpy as np

from spikebench.data import stratified_split
from spikebench.learners import HybridConfig, train_hybrid

from encoding_tour import ensure_digits
from spikebench.data import load_digits


def main() -> None:
    ds = load_digits(ensure_digits())
    split = stratified_split(ds, 2026)
    print(f"digits split: train {split.train.size}, val {split.val.size}, "
          f"test {split.test.size}")

    results = {}
    for mode in ("on", "off"):
        cfg = HybridConfig(epochs=6, norm_mode=mode)
        res = train_hybrid(ds, split, cfg, "digits-hybrid", 2026, 23)
        results[mode] = res
        acc = 100.0 * np.mean(res.test_predictions == res.test_labels)
        print(f"\nnorm={mode}: final accuracy {acc:.2f}%, "
              f"spikes/sample {res.mean_spikes_per_sample:.1f}")

    print("\nepoch   acc(norm on)  acc(norm off)  row-norm(on)  row-norm(off)")
    on, off = results["on"].trajectory, results["off"].trajectory
    for e in range(6):
        print(f"{e + 1:5d}   {on.test_accuracy_pct[e]:11.2f}%  "
              f"{off.test_accuracy_pct[e]:12.2f}%  "
              f"{on.mean_row_norm[e]:12.4f}  {off.mean_row_norm[e]:13.4f}")
    print("\nWith the schedule on, class rows are rescaled to norm 0.98 after "
          "every epoch; with it off the rows keep growing.")


if __name__ == "__main__":
    main()

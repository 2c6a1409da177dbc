"""Tour of the competitive prototype learner.

Fits the 96-prototype winner-take-all model on encoded digits and inspects
what training produced: the vote table that maps prototypes to classes,
weight saturation at the bounds, and the winner margin on test samples.

Run:  python demos/competitive_proxy_tour.py
"""

import numpy as np

from spikebench.data import load_digits, stratified_split
from spikebench.learners import ProxyConfig, proxy_fit

from encoding_tour import ensure_digits


def main() -> None:
    ds = load_digits(ensure_digits())
    split = stratified_split(ds, 2026)
    cfg = ProxyConfig(epochs=3)  # full protocol uses 9
    res = proxy_fit(ds, split, cfg, "digits-proxy", 2026, 23)
    model = res.model

    acc = 100.0 * np.mean(res.test_predictions == res.test_labels)
    print(f"proxy after {cfg.epochs} epochs: accuracy {acc:.2f}%, "
          f"parameters {model.param_count}")

    votes = model.votes
    owners = np.argmax(votes, axis=1)
    active = votes.sum(axis=1) > 0
    print(f"prototypes with votes: {int(active.sum())}/{cfg.neurons}")
    print("prototypes per class:",
          np.bincount(owners[active], minlength=10).tolist())

    saturated_lo = 100.0 * float(np.mean(model.prototypes == cfg.w_min))
    saturated_hi = 100.0 * float(np.mean(model.prototypes == cfg.w_max))
    print(f"weight saturation: {saturated_lo:.2f}% at the lower bound, "
          f"{saturated_hi:.2f}% at the upper bound")
    print("(runner-up depression clips entries to exactly 0; renormalization "
          "keeps anything from sitting at exactly 1)")

    print(f"winner margin on test: {res.winner_margin_mean:.4f}")
    print(f"threshold range: [{model.thresholds.min():.4f}, "
          f"{model.thresholds.max():.4f}] after homeostatic adaptation")


if __name__ == "__main__":
    main()

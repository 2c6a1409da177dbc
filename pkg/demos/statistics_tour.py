"""Tour of the seed-level statistics layer.

Feeds two seed-matched accuracy lists through the summary and paired
machinery: mean/std with the z-based CI half-width, the exact two-sided
sign test, Cohen's dz and Cliff's delta, plus a confusion matrix and
macro F1 on a toy prediction set.

Run:  python demos/statistics_tour.py
"""

import numpy as np

from spikebench.stats import (
    cliffs_delta,
    cohens_dz,
    confusion_matrix,
    macro_f1,
    paired_compare,
    sign_test_exact,
    summarize,
)


def main() -> None:
    condition_a = [95.0, 96.1, 94.4, 95.8, 96.9, 95.3, 94.9, 96.4, 95.1]
    condition_b = [84.2, 91.5, 79.0, 88.7, 83.1, 90.2, 77.9, 86.0, 81.4]

    for name, vals in (("condition A", condition_a), ("condition B", condition_b)):
        s = summarize(vals)
        print(f"{name}: {s.mean:.2f} ± {s.std:.2f} "
              f"(95% CI half-width {s.ci_half:.2f}, n={s.n})")

    panel = paired_compare(condition_a, condition_b)
    print(f"\npaired A-B over {panel.n_pairs} seeds "
          f"({panel.n_nonties} non-ties):")
    print(f"  mean difference : {panel.mean_diff:+.2f} pp "
          f"(CI half-width {panel.ci_half:.2f})")
    print(f"  exact sign test : p = {panel.sign_p:.5f}")
    print(f"  Cohen's dz      : {panel.dz:.2f}")
    print(f"  Cliff's delta   : {panel.cliffs:.2f}")

    print("\nsign-test tail behavior (9 pairs, k positives):")
    for k in range(4, 10):
        diffs = [1.0] * k + [-1.0] * (9 - k)
        print(f"  k={k}: p = {sign_test_exact(diffs):.5f}")

    print(f"\ndz of [2, 4, 6]        : {cohens_dz([2.0, 4.0, 6.0]):.2f}")
    print(f"delta, full dominance  : {cliffs_delta([4, 5, 6], [1, 2, 3]):+.2f}")

    true_labels = [0, 0, 1, 1, 2, 2, 2]
    predicted = [0, 1, 1, 1, 2, 2, 0]
    m = confusion_matrix(true_labels, predicted, 3)
    score, per_class = macro_f1(true_labels, predicted, 3)
    print("\nconfusion matrix (rows = true class):")
    print(np.round(m, 3))
    print(f"macro F1 {score:.3f}, per class "
          + ", ".join(f"{v:.3f}" for v in per_class))


if __name__ == "__main__":
    main()

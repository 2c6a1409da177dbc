"""Tour of the population Poisson encoder.

Walks one digit image through the full encoding path: Gaussian tuning
curves per pixel, per-bin spike probabilities, a raster draw, and the
match between empirical spike counts and the analytic expectation.

Run from the repository root:  python demos/encoding_tour.py
"""

import numpy as np

from spikebench.data import DIGITS_FILENAME, export_digits_csv, load_digits
from spikebench.detrng import resolve_path
from spikebench.encoding import (
    EncoderConfig,
    encode_sample,
    expected_spike_count,
    rate_features,
    tuning_rates,
)
from pathlib import Path


def ensure_digits() -> Path:
    path = Path("data") / DIGITS_FILENAME
    if not path.is_file():
        export_digits_csv(path)
    return path


def main() -> None:
    cfg = EncoderConfig()
    print("Tuning centers:", np.round(cfg.centers, 4).tolist())
    print("\nRates (Hz) across the feature range for the 4-neuron population:")
    for x in (0.0, 0.25, 0.5, 0.75, 1.0):
        rates = tuning_rates(x, cfg)
        print(f"  x={x:4.2f} -> " + "  ".join(f"{r:7.2f}" for r in rates))

    ds = load_digits(ensure_digits())
    sample = ds.features[0]
    print(f"\nEncoding digit '{ds.labels[0]}' "
          f"({cfg.channels(ds.feature_count)} channels x {cfg.window_bins} bins)")
    expectation = expected_spike_count(sample, cfg)

    stream = resolve_path([("encoding-tour", 0)])
    totals = []
    for draw in range(200):
        raster = encode_sample(sample, cfg, stream.child("draw", draw))
        totals.append(int(rate_features(raster).sum()))
    print(f"analytic expectation : {expectation:8.2f} spikes")
    print(f"empirical mean (200x): {np.mean(totals):8.2f} spikes "
          f"(std {np.std(totals):.2f})")

    raster = encode_sample(sample, cfg, stream.child("display", 0))
    print("\nRaster strip (channels 96..111, '#' = spike, 60 of 120 bins):")
    for c in range(96, 112):
        row = "".join("#" if v else "." for v in raster.spikes[c, :60])
        print(f"  ch{c:3d} {row}")


if __name__ == "__main__":
    main()

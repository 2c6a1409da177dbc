"""spikebench: deterministic benchmarks for local spiking-network learning.

Library layout:

- ``detrng``      seed-path addressed splitmix64 streams
- ``encoding``    Gaussian-tuned Poisson population encoder
- ``plasticity``  LIF / trace / eligibility / reward kernels
- ``learners``    hybrid delta-rule readout and competitive prototype proxy
- ``data``        dataset loading, stratified splits, temporal-order generator
- ``protocol``    experiment orchestration under the fixed-seed contract
- ``stats``       seed-level summaries and paired nonparametric statistics
- ``report``      CSV/table/SVG/manifest emission
- ``cli``         command-line entry point
"""

__version__ = "0.1.0"

import pytest

from spikebench.data import (
    DIGITS_FILENAME,
    export_digits_csv,
    load_digits,
    stratified_split,
)
from spikebench.protocol import HybridDefaults, Runner, load_bundle, run_suite

REDUCED_SEEDS = (11, 23)
REDUCED_EXTENDED = (11, 23, 37)
REDUCED_SPLITS = (2026, 2027)
REDUCED_DEFAULTS = HybridDefaults(epochs=2)


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("data")
    export_digits_csv(d / DIGITS_FILENAME)
    return d


@pytest.fixture(scope="session")
def reduced_runner(data_dir):
    return Runner(load_bundle(data_dir), data_dir, jobs=1)


@pytest.fixture(scope="session")
def reduced_suite(reduced_runner):
    """A structurally complete suite at a fraction of the full cost:
    two base seeds, three extended seeds, two splits, two hybrid epochs."""
    return run_suite(
        reduced_runner,
        seeds=REDUCED_SEEDS,
        extended_seeds=REDUCED_EXTENDED,
        split_seeds=REDUCED_SPLITS,
        defaults=REDUCED_DEFAULTS,
    )


@pytest.fixture(scope="session")
def digits_csv(data_dir):
    return data_dir / DIGITS_FILENAME


@pytest.fixture(scope="session")
def digits(digits_csv):
    return load_digits(digits_csv)


@pytest.fixture(scope="session")
def split2026(digits):
    return stratified_split(digits, 2026)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikebench.detrng import (
    GOLDEN_GAMMA,
    MASK64,
    Stream,
    derive_child_state,
    derive_child_states,
    hash_label,
    mix64,
    resolve_path,
)


def _fnv1a_reference(data: bytes) -> int:
    """Independent FNV-1a oracle, written straight from the published spec."""
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) % 2**64
    return h


class _SplitMix64Reference:
    """Independent splitmix64 oracle (published algorithm, plain ints)."""

    def __init__(self, seed: int):
        self.x = seed % 2**64

    def next(self) -> int:
        self.x = (self.x + 0x9E3779B97F4A7C15) % 2**64
        z = self.x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % 2**64
        return z ^ (z >> 31)


class TestHashLabel:
    def test_empty_string_is_offset_basis(self):
        assert hash_label("") == 0xCBF29CE484222325

    def test_matches_reference_oracle(self):
        for text in ("a", "split", "digits-hybrid", "encode-train", "Ünïcode"):
            assert hash_label(text) == _fnv1a_reference(text.encode("utf-8"))

    def test_deterministic(self):
        assert hash_label("sample") == hash_label("sample")


class TestSplitMix64:
    def test_sequence_matches_reference(self):
        ref = _SplitMix64Reference(0)
        stream = Stream(0)
        for _ in range(32):
            assert stream.next_u64() == ref.next()

    def test_sequence_matches_reference_nonzero_seed(self):
        seed = hash_label("test-seed")
        ref = _SplitMix64Reference(seed)
        stream = Stream(seed)
        for _ in range(32):
            assert stream.next_u64() == ref.next()

    def test_block_equals_scalar_draws(self):
        a = Stream(hash_label("block"))
        b = Stream(hash_label("block"))
        block = a.u64_block(257)
        scalars = [b.next_u64() for _ in range(257)]
        assert block.tolist() == scalars
        assert a.state == b.state

    def test_uniform_block_equals_scalar_draws(self):
        a = Stream(123)
        b = Stream(123)
        assert a.uniform_block(100).tolist() == [b.next_uniform() for _ in range(100)]


class TestDeriveChild:
    def test_distinct_indices(self):
        p = hash_label("test")
        assert derive_child_state(p, 0) != derive_child_state(p, 1)

    def test_stable_across_calls(self):
        p = hash_label("test")
        assert derive_child_state(p, 7) == derive_child_state(p, 7)

    def test_vectorized_matches_scalar(self):
        p = hash_label("vec")
        idx = np.arange(1000, dtype=np.uint64)
        vec = derive_child_states(p, idx)
        assert vec.tolist() == [derive_child_state(p, i) for i in range(1000)]

    def test_no_collisions_over_a_million_indices(self):
        p = hash_label("collision-check")
        children = derive_child_states(p, np.arange(10**6, dtype=np.uint64))
        assert np.unique(children).size == 10**6

    def test_definition(self):
        p = 0xDEADBEEF
        expected = mix64(p ^ ((5 + 1) * GOLDEN_GAMMA & MASK64))
        assert derive_child_state(p, 5) == expected


class TestUniform:
    def test_range_and_mean(self):
        draws = Stream(hash_label("uniform")).uniform_block(10**6)
        assert draws.min() >= 0.0 and draws.max() < 1.0
        assert abs(draws.mean() - 0.5) < 0.002

    def test_same_state_same_value(self):
        assert Stream(42).next_uniform() == Stream(42).next_uniform()


class TestBernoulli:
    def test_p_zero_always_false(self):
        s = Stream(1)
        assert not any(s.bernoulli(0.0) for _ in range(1000))

    def test_p_one_always_true(self):
        s = Stream(1)
        assert all(s.bernoulli(1.0) for _ in range(1000))

    def test_empirical_rate(self):
        s = Stream(hash_label("bernoulli"))
        n = 10**6
        hits = sum(s.bernoulli(0.2) for _ in range(n))
        assert abs(hits / n - 0.2) < 0.0012  # 3 sigma binomial bound

    @pytest.mark.parametrize("p", [-0.1, 1.5, 2.0])
    def test_rejects_out_of_range(self, p):
        with pytest.raises(ValueError):
            Stream(0).bernoulli(p)

    def test_frequency_converges_at_several_probabilities(self):
        for p in (0.05, 0.5, 0.9):
            s = Stream(hash_label(f"freq-{p}"))
            n = 10**5
            hits = sum((s.uniform_block(n) < p))
            bound = 3.0 * np.sqrt(p * (1 - p) / n)
            assert abs(hits / n - p) < bound


class TestShuffle:
    def test_empty(self):
        assert Stream(0).shuffle(0).tolist() == []

    def test_single(self):
        assert Stream(0).shuffle(1).tolist() == [0]

    def test_deterministic(self):
        assert Stream(99).shuffle(10).tolist() == Stream(99).shuffle(10).tolist()

    @settings(deadline=None, max_examples=50)
    @given(n=st.integers(0, 200), seed=st.integers(0, 2**64 - 1))
    def test_always_a_permutation(self, n, seed):
        perm = Stream(seed).shuffle(n)
        assert sorted(perm.tolist()) == list(range(n))


class TestSeedPaths:
    def test_resolution_is_pure(self):
        path = [("digits-hybrid", 0), ("split", 2026), ("model", 23),
                ("epoch", 4), ("sample", 911)]
        a, b = resolve_path(path), resolve_path(path)
        assert a.state == b.state
        assert a.uniform_block(16).tolist() == b.uniform_block(16).tolist()

    def test_labels_and_indices_distinguish(self):
        base = resolve_path([("exp", 0), ("split", 2026)])
        assert base.state != resolve_path([("exp", 0), ("split", 2027)]).state
        assert base.state != resolve_path([("exp", 1), ("split", 2026)]).state
        assert base.state != resolve_path([("other", 0), ("split", 2026)]).state

    def test_child_matches_path_extension(self):
        parent = resolve_path([("exp", 0)])
        assert parent.child("model", 23).state == resolve_path(
            [("exp", 0), ("model", 23)]
        ).state

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subjrand import generator
from subjrand.bitseq import BitSeq, decode, encode, parse, windows
from subjrand.generator import (
    BitSource, ConfigError, GenConfig, SeedError, SinkError, generate, generate_bounds,
    generate_walk, stream_stats, validate_seed, window_codes,
)
from subjrand.rating import SRValue, exact_value
from subjrand.reference import C1_53
from subjrand.seqgraph import main_component, threshold_set

V = SRValue.of
C44 = main_component(V(4, 4))


def in_component(x, comp):
    return all(encode(w) in comp for w in windows(x, 8))


@pytest.mark.parametrize("seed, valid", [("OOOXOOO", False), ("OOOOOXX", False), ("OOXOXXO", True)])
def test_seed_examples(seed, valid):
    assert validate_seed(parse(seed)).valid is valid


def test_seed_rules_agree_with_brute_force():
    for code in range(128):
        check = validate_seed(decode(code, 7))
        assert check.valid == check.brute_force, decode(code, 7)


def test_seed_rule_reasons():
    assert "run" in validate_seed(parse("XXXXXOX")).reason
    assert "alpha" in validate_seed(parse("OXOXOXO")).reason
    assert exact_value(parse("OXOXOXO")).i <= 2


def test_seed_length_checked():
    with pytest.raises(ValueError):
        validate_seed(parse("OXOXOX"))
    with pytest.raises(SeedError):
        GenConfig(seed=parse("OXOXOX"))


def test_config_checks():
    with pytest.raises(ConfigError):
        GenConfig(method="teleport")
    with pytest.raises(ConfigError):
        GenConfig(target_length=7)
    with pytest.raises(ConfigError):
        generate_bounds(GenConfig(method="bounds", threshold=V(5, 3)))


def test_bit_source_is_reproducible_and_fair():
    a, b, c = BitSource(42), BitSource(42), BitSource(43)
    bits = [a.bit() for _ in range(20000)]
    assert bits == [b.bit() for _ in range(20000)]
    assert abs(np.mean(bits) - 0.5) < 0.02
    assert bits != [c.bit() for _ in range(20000)]


def test_bit_source_below_is_uniform():
    src = BitSource(1)
    counts = np.bincount([src.below(5) for _ in range(10000)], minlength=5)
    assert counts.min() > 1800 and counts.max() < 2200


def test_walk_on_six_cycle_is_periodic():
    x = generate_walk(GenConfig("walk", V(5, 3), parse("00101100"), 20, 0))
    assert x.to_ox() == "OOXOXXOOXOXXOOXOXXOO"
    assert all(x[k] == x[k + 6] for k in range(len(x) - 6))
    assert {encode(w) for w in windows(x, 8)} == C1_53


def test_length_eight_returns_seed():
    seed = decode(sorted(C44)[10], 8)
    assert generate_walk(GenConfig("walk", V(4, 4), seed, 8, 3)) == seed


def test_seed_outside_component_is_rejected():
    with pytest.raises(SeedError, match="C\\(\\[4,4\\]\\)"):
        generate_walk(GenConfig("walk", V(4, 4), decode(190, 8), 20, 0))
    with pytest.raises(SeedError):
        generate_walk(GenConfig("walk", V(4, 4), parse("OOOXOOO"), 20, 0))


@pytest.mark.parametrize("method", ["walk", "bounds"])
@pytest.mark.parametrize("t", [V(4, 4), V(4, 4.5), V(3, 5), V(1, 7)], ids=str)
def test_windows_stay_in_component(method, t):
    comp = main_component(t)
    for rng_seed in range(5):
        x = generate(GenConfig(method, t, None, 2000, rng_seed))
        assert len(x) == 2000
        assert in_component(x, comp)


def test_seven_bit_seed_is_extended():
    x = generate(GenConfig("bounds", V(4, 4), parse("OOXOXXO"), 100, 5))
    assert x[:7] == parse("OOXOXXO")
    assert in_component(x, C44)


def test_no_long_runs_at_4_4():
    x = generate_walk(GenConfig("walk", V(4, 4), None, 20000, 9))
    assert "OOOOO" not in x.to_ox() and "XXXXX" not in x.to_ox()


def test_walk_visits_every_vertex():
    x = generate_walk(GenConfig("walk", V(4, 4), None, 100000, 1))
    assert set(window_codes(x).tolist()) == C44


@given(st.integers(0, 2 ** 64 - 1), st.sampled_from(["walk", "bounds"]))
def test_generation_is_deterministic(rng_seed, method):
    cfg = GenConfig(method, V(4, 4), None, 200, rng_seed)
    assert generate(cfg) == generate(cfg)


def test_bounds_reports_sink_above_the_limit(monkeypatch):
    # the limit exists because [5,3] has windows with no qualifying extension
    monkeypatch.setattr(generator, "BOUNDS_LIMIT", V(5, 6))
    with pytest.raises(SinkError, match="no extension"):
        generate_bounds(GenConfig("bounds", V(5, 3), None, 200, 0))


def test_bounds_never_sinks_at_permitted_thresholds():
    for t in (V(4, 4.5), V(4, 4), V(3, 7), V(2, 6)):
        for rng_seed in range(20):
            generate_bounds(GenConfig("bounds", t, None, 1000, rng_seed))


@pytest.mark.parametrize("text, alt, imb", [("OXOXOX", 1.0, 0.0), ("OOOOOO", 0.0, 3.0)])
def test_stream_stats_examples(text, alt, imb):
    s = stream_stats(parse(text))
    assert s.alternation == alt
    assert s.imbalance == imb


@given(st.lists(st.integers(0, 1), min_size=2, max_size=200))
def test_stream_stats_against_direct_counts(bits):
    x = BitSeq(tuple(bits))
    s = stream_stats(x)
    changes = sum(a != b for a, b in zip(bits, bits[1:]))
    assert s.alternation == changes / (len(bits) - 1)
    assert s.x_count == sum(bits)
    runs = [len(list(g)) for _, g in itertools.groupby(bits)]
    assert sum(k * v for k, v in s.run_lengths.items()) == len(bits)
    assert sum(s.run_lengths.values()) == len(runs)


def test_stream_stats_needs_two_bits():
    with pytest.raises(ValueError):
        stream_stats(parse("X"))

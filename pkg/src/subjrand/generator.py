"""Arbitrarily long bit streams whose every 8-bit window rates as random.

Two creation methods share one seed/threshold contract:

* ``walk``   -- a uniform random walk on the strongly connected component
  C(t) of the shift digraph (forced when a vertex has one out-arc);
* ``bounds`` -- append whichever symbol keeps the newest window at or above
  the threshold, choosing at random when both do.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bitseq import BitSeq, decode, encode, shift_append
from .rating import Order, SRValue, compare, exact_value, least
from .seqgraph import build_graph, main_component, threshold_set, window_ratings

__all__ = [
    "GenConfig",
    "BitSource",
    "SeedCheck",
    "SeedError",
    "ConfigError",
    "SinkError",
    "validate_seed",
    "generate",
    "generate_walk",
    "generate_bounds",
    "StreamStats",
    "stream_stats",
    "window_codes",
    "BOUNDS_LIMIT",
    "DEFAULT_THRESHOLD",
]

DEFAULT_THRESHOLD = SRValue.of(4, 4)
BOUNDS_LIMIT = SRValue.of(4, 4.5)
_SEED_EXCEPTIONS = {"OOOXOOO", "XXXOXXX"}


class SeedError(ValueError):
    """The seed cannot start a stream inside C(threshold)."""


class ConfigError(ValueError):
    """Method and threshold do not go together."""


class SinkError(RuntimeError):
    """Neither extension of the current window meets the threshold."""


@dataclass(frozen=True)
class GenConfig:
    method: str = "walk"
    threshold: SRValue = DEFAULT_THRESHOLD
    seed: BitSeq | None = None
    target_length: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        if self.method not in ("walk", "bounds"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.target_length < 8:
            raise ConfigError("target length must be at least 8")
        if self.seed is not None:
            if len(self.seed) not in (7, 8):
                raise SeedError("seed must have 7 or 8 bits")
            if self.target_length < len(self.seed):
                raise ConfigError("target length is shorter than the seed")


class BitSource:
    """Deterministic fair bits from PCG64.

    Raw 64-bit outputs of ``numpy.random.PCG64(rng_seed)`` are consumed
    least significant bit first; the raw PCG64 stream is stable across numpy
    releases, so streams reproduce across builds.
    """

    ALGORITHM = "PCG64 raw uint64, LSB first"
    _BLOCK = 1024

    def __init__(self, rng_seed: int):
        self._gen = np.random.PCG64(rng_seed & ((1 << 64) - 1))
        self._bits: list[int] = []
        self._pos = 0

    def bit(self) -> int:
        if self._pos >= len(self._bits):
            raw = self._gen.random_raw(self._BLOCK).astype(np.uint64)
            unpacked = np.unpackbits(raw.view(np.uint8), bitorder="little")
            self._bits = unpacked.tolist()
            self._pos = 0
        b = self._bits[self._pos]
        self._pos += 1
        return b

    def choice(self, options: list[int]) -> int:
        if len(options) == 1:
            return options[0]
        if len(options) == 2:
            return options[self.bit()]
        raise ValueError("at most two options in a shift digraph")

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling on whole bits."""
        if n < 1:
            raise ValueError("n must be positive")
        width = max(1, (n - 1).bit_length())
        while True:
            v = 0
            for _ in range(width):
                v = (v << 1) | self.bit()
            if v < n:
                return v


# -- seeds ---------------------------------------------------------------------

@dataclass(frozen=True)
class SeedCheck:
    valid: bool
    reason: str
    brute_force: bool | None = None  # some extension lies in C(t)


def _longest_run(bits) -> int:
    best = run = 1
    for a, b in zip(bits, bits[1:]):
        run = run + 1 if a == b else 1
        best = max(best, run)
    return best


def _extensions_in(seed: BitSeq, comp: frozenset[int]) -> list[int]:
    return [code for code in (encode(seed) << 1, (encode(seed) << 1) | 1) if code in comp]


def validate_seed(seed: BitSeq, t: SRValue = DEFAULT_THRESHOLD) -> SeedCheck:
    """Can ``seed`` (7 bits) be the first seven bits of a vertex of C(t)?"""
    if len(seed) != 7:
        raise ValueError("seed validation takes a 7-bit sequence")
    comp = main_component(t)
    brute = bool(_extensions_in(seed, comp))
    if t != DEFAULT_THRESHOLD:
        return SeedCheck(brute, "extends into C(t)" if brute else "no extension lies in C(t)", brute)
    if _longest_run(tuple(seed)) >= 5:
        return SeedCheck(False, "contains a run of 5 or more", brute)
    if exact_value(seed).i <= 2:
        return SeedCheck(False, "rating has alpha exponent <= 2", brute)
    if seed.to_ox() in _SEED_EXCEPTIONS:
        return SeedCheck(False, "isolated exception OOOXOOO / XXXOXXX", brute)
    return SeedCheck(True, "ok", brute)


def _start_window(cfg: GenConfig, comp: frozenset[int], src: BitSource) -> int:
    if cfg.seed is None:
        verts = sorted(comp)
        return verts[src.below(len(verts))]
    if len(cfg.seed) == 8:
        code = encode(cfg.seed)
        if code not in comp:
            raise SeedError(f"seed {cfg.seed} (code {code}) is not a vertex of C({cfg.threshold})")
        return code
    options = _extensions_in(cfg.seed, comp)
    if not options:
        check = validate_seed(cfg.seed, cfg.threshold)
        raise SeedError(f"7-bit seed {cfg.seed} cannot start C({cfg.threshold}): {check.reason}")
    return src.choice(options)


# -- creation methods ---------------------------------------------------------------

def _assemble(first: int, steps: list[int]) -> BitSeq:
    return BitSeq(tuple(decode(first, 8)) + tuple(steps))


def generate_walk(cfg: GenConfig) -> BitSeq:
    """Random walk on C(threshold), uniform over out-arcs."""
    comp = main_component(cfg.threshold)
    graph = build_graph(comp)
    succ = {u: graph.successors(u) for u in comp}
    src = BitSource(cfg.rng_seed)
    first = x = _start_window(cfg, comp, src)
    steps = []
    for _ in range(cfg.target_length - 8):
        x = src.choice(succ[x])
        steps.append(x & 1)
    return _assemble(first, steps)


def generate_bounds(cfg: GenConfig) -> BitSeq:
    """Append X or O by the threshold test on the newest 8-bit window."""
    t = cfg.threshold
    if compare(t, BOUNDS_LIMIT) is not Order.LESS_RANDOM and t != BOUNDS_LIMIT:
        raise ConfigError(f"the bounds method needs a threshold at most {BOUNDS_LIMIT}, got {t}")
    comp = main_component(t)
    ok = threshold_set(t)
    src = BitSource(cfg.rng_seed)
    first = x = _start_window(cfg, comp, src)
    steps = []
    for pos in range(8, cfg.target_length):
        with_x, with_o = shift_append(x, 1), shift_append(x, 0)
        good_x, good_o = with_x in ok, with_o in ok
        if good_x and not good_o:
            x = with_x
        elif good_o and not good_x:
            x = with_o
        elif good_x and good_o:
            x = src.choice([with_o, with_x])
        else:
            raise SinkError(f"window {x} at position {pos} has no extension meeting {t}")
        steps.append(x & 1)
    return _assemble(first, steps)


def generate(cfg: GenConfig) -> BitSeq:
    if cfg.method == "walk":
        return generate_walk(cfg)
    return generate_bounds(cfg)


# -- statistics ---------------------------------------------------------------------

def window_codes(x: BitSeq, k: int = 8) -> np.ndarray:
    """Codes of all k-bit windows of ``x``."""
    bits = np.fromiter(x.bits, dtype=np.int64, count=len(x))
    if len(bits) < k:
        return np.zeros(0, dtype=np.int64)
    codes = np.zeros(len(bits) - k + 1, dtype=np.int64)
    for off in range(k):
        codes = (codes << 1) | bits[off:len(bits) - k + 1 + off]
    return codes


@dataclass
class StreamStats:
    length: int
    x_count: int
    alternation: float
    imbalance: float
    run_lengths: dict[int, int] = field(default_factory=dict)
    window_min: SRValue | None = None
    window_mean: tuple[float, float] | None = None  # mean alpha, delta exponents

    def as_dict(self) -> dict:
        return {
            "length": self.length,
            "x_count": self.x_count,
            "alternation": self.alternation,
            "imbalance": self.imbalance,
            "run_lengths": {str(k): v for k, v in sorted(self.run_lengths.items())},
            "window_min": str(self.window_min) if self.window_min else None,
            "window_mean_i": self.window_mean[0] if self.window_mean else None,
            "window_mean_j": self.window_mean[1] if self.window_mean else None,
        }


def stream_stats(x: BitSeq) -> StreamStats:
    n = len(x)
    if n < 2:
        raise ValueError("stream statistics need at least two bits")
    bits = np.fromiter(x.bits, dtype=np.int8, count=n)
    changes = np.flatnonzero(bits[1:] != bits[:-1])
    bounds = np.concatenate(([0], changes + 1, [n]))
    runs = Counter(np.diff(bounds).tolist())
    x_count = int(bits.sum())
    stats = StreamStats(
        length=n,
        x_count=x_count,
        alternation=len(changes) / (n - 1),
        imbalance=abs(n / 2 - x_count),
        run_lengths=dict(runs),
    )
    if n >= 8:
        ratings = window_ratings()
        codes = np.unique(window_codes(x), return_counts=True)
        stats.window_min = least([ratings[c] for c in codes[0]], "window ratings")
        total = codes[1].sum()
        stats.window_mean = (
            float(sum(ratings[c].i * m for c, m in zip(*codes)) / total),
            float(sum(ratings[c].j * m for c, m in zip(*codes)) / total),
        )
    return stats

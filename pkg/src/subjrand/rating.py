"""Subjective randomness ratings of binary sequences.

Ratings are exponent pairs ``[i, j]`` standing for the formal monomial
alpha^i * delta^j, where alpha and delta are only known to satisfy
0 < alpha < delta^4 < 1.  A smaller monomial (a less probable "regular"
explanation) means a more random sequence.
"""
from __future__ import annotations

import enum
import functools
import itertools
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .bitseq import BitSeq

__all__ = [
    "SRValue",
    "Order",
    "compare",
    "least",
    "sort_descending",
    "log_probability",
    "motif_set",
    "is_primitive",
    "dp",
    "exact_value",
    "value_frontier",
    "dp_plus",
    "dp_plus_short",
    "sr_rating",
    "is_duplication",
    "meets_threshold",
    "DUPLICATION",
    "ALPHA",
    "DELTA",
    "IncomparableError",
]

log = logging.getLogger(__name__)

# Sequential-presentation parameters; only used to break formal ties.
ALPHA = 0.11
DELTA = 0.70
_TIE_RATIO = math.log(ALPHA) / math.log(DELTA)

_VALUE_TEXT = re.compile(r"\s*\[?\s*(\d+)\s*,\s*(\d+(?:\.5|\.0)?)\s*\]?\s*")


class IncomparableError(ValueError):
    pass


@dataclass(frozen=True)
class SRValue:
    """Exponent pair ``[i, j]``; ``j`` is stored in half units."""

    i: int
    j_halves: int

    def __post_init__(self):
        if self.i < 0 or self.j_halves < 0:
            raise ValueError(f"exponents must be non-negative: {self!r}")

    @classmethod
    def of(cls, i: int, j: float | int | Fraction) -> "SRValue":
        halves = Fraction(j) * 2
        if halves.denominator != 1:
            raise ValueError(f"delta exponent {j} is not a multiple of 1/2")
        return cls(int(i), int(halves))

    @classmethod
    def parse(cls, text: str) -> "SRValue":
        m = _VALUE_TEXT.fullmatch(text)
        if not m:
            raise ValueError(f"malformed rating {text!r}: expected 'i,j' or '[i,j]'")
        return cls.of(int(m.group(1)), Fraction(m.group(2)))

    @property
    def j(self) -> float:
        return self.j_halves / 2

    def __add__(self, other: "SRValue") -> "SRValue":
        return SRValue(self.i + other.i, self.j_halves + other.j_halves)

    def _j_text(self) -> str:
        if self.j_halves % 2 == 0:
            return str(self.j_halves // 2)
        return f"{self.j_halves / 2:.1f}"

    def __str__(self) -> str:
        return f"[{self.i},{self._j_text()}]"

    def monomial(self) -> str:
        return f"a^{self.i} d^{self._j_text()}"


DUPLICATION = SRValue.of(1, 3.5)
_ZERO = SRValue(0, 0)


class Order(enum.Enum):
    MORE_RANDOM = "MoreRandom"
    EQUAL = "Equal"
    LESS_RANDOM = "LessRandom"
    INCOMPARABLE = "Incomparable"


def _dominates(di: int, dj_halves: int) -> bool:
    # alpha^di * delta^dj < 1 for every 0 < alpha < delta^4 < 1
    return (di > 0 and dj_halves >= -8 * di) or (di == 0 and dj_halves > 0)


def compare(a: SRValue, b: SRValue) -> Order:
    """How ``a`` ranks against ``b`` in subjective randomness."""
    di = a.i - b.i
    dj = a.j_halves - b.j_halves
    if di == 0 and dj == 0:
        return Order.EQUAL
    if _dominates(di, dj):
        return Order.MORE_RANDOM
    if _dominates(-di, -dj):
        return Order.LESS_RANDOM
    return Order.INCOMPARABLE


def log_probability(v: SRValue, alpha: float = ALPHA, delta: float = DELTA) -> float:
    return v.i * math.log(alpha) + v.j * math.log(delta)


def _tie_key(v: SRValue) -> float:
    # Monotone in randomness; a linear extension of ``compare``.
    return v.i * _TIE_RATIO + v.j_halves / 2


def least(values: Iterable[SRValue], what: str = "candidates") -> SRValue:
    """Least random element (largest formal probability) of ``values``.

    When the formal order has no least element the numeric order at
    (ALPHA, DELTA) decides and a diagnostic is logged.
    """
    distinct = sorted(set(values), key=_tie_key)
    if not distinct:
        raise ValueError("least() of an empty collection")
    best = distinct[0]
    for other in distinct[1:]:
        if compare(best, other) is not Order.LESS_RANDOM:
            log.info("no formal minimum among %s %s; numeric tie-break picked %s",
                     what, [str(v) for v in distinct], best)
            break
    return best


def sort_descending(values: Sequence[SRValue]) -> list[SRValue]:
    """Sort from most to least random; raises if two values are incomparable."""

    def cmp(a: SRValue, b: SRValue) -> int:
        order = compare(a, b)
        if order is Order.INCOMPARABLE:
            raise IncomparableError(f"{a} and {b} are incomparable")
        return {Order.MORE_RANDOM: -1, Order.EQUAL: 0, Order.LESS_RANDOM: 1}[order]

    return sorted(values, key=functools.cmp_to_key(cmp))


# -- motifs -------------------------------------------------------------------

def is_primitive(pattern: Sequence[int]) -> bool:
    """True unless ``pattern`` is a repetition of a strictly shorter pattern."""
    n = len(pattern)
    pat = tuple(pattern)
    for d in range(1, n):
        if n % d == 0 and pat == pat[:d] * (n // d):
            return False
    return n > 0


@functools.lru_cache(maxsize=None)
def motif_set(max_len: int = 4) -> tuple[BitSeq, ...]:
    """All primitive binary patterns of length 1..max_len (22 for max_len=4)."""
    out = []
    for k in range(1, max_len + 1):
        for bits in itertools.product((0, 1), repeat=k):
            if is_primitive(bits):
                out.append(BitSeq(bits))
    return tuple(out)


# -- difficulty predictor -------------------------------------------------------

def _is_pure(bits: Sequence[int]) -> bool:
    return all(b == bits[0] for b in bits)


def _is_alternating(bits: Sequence[int]) -> bool:
    return all(bits[k] != bits[k + 1] for k in range(len(bits) - 1))


def dp(x: BitSeq) -> int:
    """#pure runs + 2 * #alternating runs, minimised over decompositions.

    Alternating runs must span at least three symbols.
    """
    bits = tuple(x)
    n = len(bits)
    if n == 0:
        raise ValueError("dp is undefined for the empty sequence")
    best = [0] + [n + 1] * n
    for end in range(1, n + 1):
        for start in range(end):
            block = bits[start:end]
            if _is_pure(block):
                cost = 1
            elif len(block) >= 3 and _is_alternating(block):
                cost = 2
            else:
                continue
            best[end] = min(best[end], best[start] + cost)
    return best[n]


# -- exact segmentation value -------------------------------------------------

def _run_length(bits: tuple[int, ...], start: int, m: tuple[int, ...]) -> int:
    """Length of the longest block at ``start`` read as a repetition of ``m``."""
    n, k = len(bits), len(m)
    length = 0
    while start + length < n and bits[start + length] == m[length % k]:
        length += 1
    return length


def _segmentation_dp(bits: tuple[int, ...], motifs: Sequence[tuple[int, ...]]):
    """Best (key, i, j_halves) per (end position, last motif).

    Every block is a truncated repetition of one motif.  Two neighbouring
    blocks never use the same motif: the motif machine can only restart a
    motif after completing it, and a restart at a full repeat is just a
    longer block.
    """
    n = len(bits)
    by_first = [[(idx, m, len(m) * _TIE_RATIO) for idx, m in enumerate(motifs) if m[0] == b]
                for b in (0, 1)]
    best: list[dict[int, tuple[float, int, int]]] = [dict() for _ in range(n + 1)]
    best[0][-1] = (0.0, 0, 0)
    for start in range(n):
        here = best[start]
        if not here:
            continue
        top_m, top, run = -2, None, None
        for m, v in here.items():
            if top is None or v < top:
                top_m, top, run = m, v, top
            elif run is None or v < run:
                run = v
        for idx, m, step in by_first[bits[start]]:
            prev = top if top_m != idx else run
            if prev is None:
                continue
            k = len(m)
            key, i = prev[0] + step, prev[1] + k
            for stays in range(_run_length(bits, start, m)):
                cand = (key + stays, i, prev[2] + 2 * stays)
                slot = best[start + stays + 1]
                cur = slot.get(idx)
                if cur is None or cand < cur:
                    slot[idx] = cand
    return best


def _motif_tuples(motifs: Sequence[BitSeq] | None) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(m) for m in (motif_set() if motifs is None else motifs))


def exact_value(x: BitSeq, motifs: Sequence[BitSeq] | None = None) -> SRValue:
    """Least random reading of ``x`` over all segmentations into motif blocks.

    A block of length L read as repetitions of a length-k motif costs
    ``[k, L-1]``.  The empty sequence rates ``[0,0]``.
    """
    bits = tuple(x)
    if not bits:
        return _ZERO
    final = _segmentation_dp(bits, _motif_tuples(motifs))[len(bits)]
    if not final:
        raise ValueError(f"{x} cannot be segmented with the given motifs")
    _, i, jh = min(final.values())
    return SRValue(i, jh)


def value_frontier(x: BitSeq, motifs: Sequence[BitSeq] | None = None) -> list[SRValue]:
    """Formally minimal values over all segmentations (an antichain).

    A single element means the formal order has a least element and
    :func:`exact_value` needs no numeric tie-break.
    """
    bits = tuple(x)
    if not bits:
        return [_ZERO]
    mt = _motif_tuples(motifs)
    n = len(bits)
    fronts: list[dict[int, set[SRValue]]] = [dict() for _ in range(n + 1)]
    fronts[0][-1] = {_ZERO}
    for start in range(n):
        for idx, m in enumerate(mt):
            prev = set().union(*(vs for p, vs in fronts[start].items() if p != idx))
            if not prev:
                continue
            for length in range(1, _run_length(bits, start, m) + 1):
                step = SRValue(len(m), 2 * (length - 1))
                slot = fronts[start + length].setdefault(idx, set())
                slot.update(v + step for v in prev)
                fronts[start + length][idx] = _minimal(slot)
    return sorted(_minimal(set().union(*fronts[n].values())), key=_tie_key)


def _minimal(values: set[SRValue]) -> set[SRValue]:
    return {v for v in values
            if not any(compare(w, v) is Order.LESS_RANDOM for w in values)}


# -- dp+ ----------------------------------------------------------------------

def dp_plus(x: BitSeq) -> SRValue:
    """Fast rating that reads the sequence like the difficulty predictor.

    Agrees with :func:`exact_value` on every sequence of 8 bits or fewer.
    """
    return _dp_plus(tuple(x), 4)


def dp_plus_short(x: BitSeq) -> SRValue:
    """dp+ restricted to motifs of length 1 and 2 (no block improvements)."""
    return _dp_plus(tuple(x), 2)


def _leading_split(bits: tuple[int, ...]) -> int:
    n = len(bits)
    run = 1
    while run < n and bits[run] == bits[0]:
        run += 1
    if run > 1:
        return run
    # bits[1] != bits[0]: count whole repeats of the leading pair
    pairs = 1
    while 2 * pairs + 1 < n and bits[2 * pairs] == bits[0] and bits[2 * pairs + 1] == bits[1]:
        pairs += 1
    return 1 if pairs == 1 else 2 * pairs


# (motif length, minimum block length, required i of the running value)
_BLOCK_PASSES = ((3, 4, 4), (4, 7, 5))


@functools.lru_cache(maxsize=65536)
def _dp_plus(bits: tuple[int, ...], max_motif: int) -> SRValue:
    n = len(bits)
    if n == 0:
        return _ZERO
    if _is_pure(bits):
        return SRValue(1, 2 * (n - 1))
    if n >= 3 and _is_alternating(bits):
        return SRValue(2, 2 * (n - 1))

    cut = _leading_split(bits)
    value = _dp_plus(bits[:cut], max_motif) + _dp_plus(bits[cut:], max_motif)

    for k, min_block, min_i in _BLOCK_PASSES:
        if k > max_motif or value.i < min_i:
            continue
        dset = [value]
        for start in range(n - min_block + 1):
            end = start + k
            while end < n and bits[end] == bits[start + (end - start) % k]:
                end += 1
            length = end - start
            if length >= min_block:
                dset.append(_dp_plus(bits[:start], max_motif)
                            + SRValue(k, 2 * (length - 1))
                            + _dp_plus(bits[end:], max_motif))
        value = least(dset, "dp+ candidates")
    return value


# -- context-sensitive rating -------------------------------------------------

def is_duplication(x: BitSeq) -> bool:
    n = len(x)
    return n > 0 and n % 2 == 0 and x[: n // 2] == x[n // 2:]


def sr_rating(x: BitSeq, base: Callable[[BitSeq], SRValue] = dp_plus) -> SRValue:
    """Rating that also admits a perfect duplication of the first half."""
    if len(x) == 0:
        raise ValueError("sr is undefined for the empty sequence")
    value = base(x)
    if is_duplication(x):
        value = least([value, base(x[: len(x) // 2]) + DUPLICATION], "duplication")
    return value


def meets_threshold(x: BitSeq, t: SRValue) -> bool:
    if len(x) != 8:
        raise ValueError("thresholds apply to 8-bit windows")
    order = compare(sr_rating(x), t)
    if order is Order.INCOMPARABLE:
        raise IncomparableError(f"sr({x}) = {sr_rating(x)} is incomparable with {t}")
    return order in (Order.MORE_RANDOM, Order.EQUAL)

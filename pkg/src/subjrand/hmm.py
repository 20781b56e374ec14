"""Motif hidden Markov models scored by Viterbi maximisation.

The abstract machine has one emitting state per (motif, offset): 72 states
for the 22 motifs.  Weights are formal monomials alpha^a * delta^d with the
normaliser fixed to 1.  Staying inside a motif (including wrapping around to
repeat it) costs delta; entering a different motif of length k costs
alpha^k, as does starting the sequence in it.

The numeric six-state model uses the motifs X, O, XO and OX with the
normalised six-state transition matrix, entry by entry.
"""
from __future__ import annotations

import itertools
import math
import time
import tracemalloc
from dataclasses import dataclass
from typing import Callable, Sequence

from .bitseq import BitSeq, decode
from .rating import (
    ALPHA,
    DELTA,
    Order,
    SRValue,
    _dp_plus,
    compare,
    dp_plus,
    motif_set as _motif_set,
)

__all__ = [
    "HmmState",
    "AbstractWeight",
    "MotifMachine",
    "motif_set",
    "transitions",
    "initial_weight",
    "viterbi_abstract",
    "SixStateModel",
    "viterbi_numeric6",
    "path_probability6",
    "path_exponents6",
    "enumerate_paths6",
    "BenchReport",
    "bench_ratings",
]


def motif_set() -> list[BitSeq]:
    return list(_motif_set(4))


@dataclass(frozen=True)
class HmmState:
    motif: BitSeq
    offset: int  # 1-based position inside the motif

    @property
    def emits(self) -> int:
        return self.motif[self.offset - 1]

    def __str__(self) -> str:
        return f"{self.motif}@{self.offset}"


@dataclass(frozen=True)
class AbstractWeight:
    a_exp: int
    d_exp: int

    def __mul__(self, other: "AbstractWeight") -> "AbstractWeight":
        return AbstractWeight(self.a_exp + other.a_exp, self.d_exp + other.d_exp)

    def as_value(self) -> SRValue:
        return SRValue(self.a_exp, 2 * self.d_exp)


ONE = AbstractWeight(0, 0)
STAY = AbstractWeight(0, 1)


def initial_weight(state: HmmState) -> AbstractWeight | None:
    if state.offset != 1:
        return None
    return AbstractWeight(len(state.motif), 0)


def transitions(state: HmmState, motifs: Sequence[BitSeq] | None = None
                ) -> list[tuple[HmmState, AbstractWeight]]:
    """Outgoing arcs with non-zero weight."""
    motifs = motif_set() if motifs is None else motifs
    k = len(state.motif)
    out = [(HmmState(state.motif, state.offset % k + 1), STAY)]
    for m in motifs:
        if m != state.motif:
            out.append((HmmState(m, 1), AbstractWeight(len(m), 0)))
    return out


class MotifMachine:
    """The abstract motif HMM, built once and scored many times."""

    def __init__(self, motifs: Sequence[BitSeq] | None = None):
        self.motifs = list(motif_set() if motifs is None else motifs)
        self.states = [HmmState(m, p) for m in self.motifs for p in range(1, len(m) + 1)]
        index = {s: n for n, s in enumerate(self.states)}
        self._emit = [s.emits for s in self.states]
        self._motif_of = [self.motifs.index(s.motif) for s in self.states]
        self._entry = [len(s.motif) if s.offset == 1 else None for s in self.states]
        # the only delta predecessor of each state
        self._stay_from = [0] * len(self.states)
        for n, s in enumerate(self.states):
            nxt, _ = transitions(s, self.motifs)[0]
            self._stay_from[index[nxt]] = n

    def __len__(self) -> int:
        return len(self.states)

    def frontier(self, x: BitSeq) -> list[SRValue]:
        """Formally maximal path weights (the Viterbi optimum as an antichain)."""
        bits = tuple(x)
        if not bits:
            raise ValueError("viterbi is undefined for the empty sequence")
        n_states = len(self.states)
        cur: list[set[SRValue]] = [set() for _ in range(n_states)]
        for s in range(n_states):
            if self._entry[s] is not None and self._emit[s] == bits[0]:
                cur[s] = {SRValue(self._entry[s], 0)}
        for sym in bits[1:]:
            nxt: list[set[SRValue]] = [set() for _ in range(n_states)]
            by_motif: dict[int, set[SRValue]] = {}
            for s in range(n_states):
                if cur[s]:
                    by_motif.setdefault(self._motif_of[s], set()).update(cur[s])
            for s in range(n_states):
                if self._emit[s] != sym:
                    continue
                cands = {v + SRValue(0, 2) for v in cur[self._stay_from[s]]}
                if self._entry[s] is not None:
                    step = SRValue(self._entry[s], 0)
                    for m, vs in by_motif.items():
                        if m != self._motif_of[s]:
                            cands.update(v + step for v in vs)
                nxt[s] = _maximal(cands)
            cur = nxt
        return _maximal(set().union(*cur))

    def score(self, x: BitSeq) -> SRValue:
        bits = tuple(x)
        if not bits:
            raise ValueError("viterbi is undefined for the empty sequence")
        n_states = len(self.states)
        neg = -math.inf
        # log-weights at the tie-break point; exponents carried alongside
        la, ld = math.log(ALPHA), math.log(DELTA)
        cur = [(neg, 0, 0)] * n_states
        for s in range(n_states):
            if self._entry[s] is not None and self._emit[s] == bits[0]:
                k = self._entry[s]
                cur[s] = (k * la, k, 0)
        motif_of, entry, emit, stay_from = self._motif_of, self._entry, self._emit, self._stay_from
        for sym in bits[1:]:
            per_motif: dict[int, tuple[float, int, int]] = {}
            for s in range(n_states):
                w = cur[s]
                if w[0] > neg and (motif_of[s] not in per_motif or w > per_motif[motif_of[s]]):
                    per_motif[motif_of[s]] = w
            top_m, top, runner = -1, None, None
            for m, w in per_motif.items():
                if top is None or w > top:
                    top_m, top, runner = m, w, top
                elif runner is None or w > runner:
                    runner = w
            nxt = [(neg, 0, 0)] * n_states
            for s in range(n_states):
                if emit[s] != sym:
                    continue
                p = cur[stay_from[s]]
                cand = (p[0] + ld, p[1], p[2] + 1) if p[0] > neg else (neg, 0, 0)
                k = entry[s]
                if k is not None:
                    src = top if top_m != motif_of[s] else runner
                    if src is not None:
                        alt = (src[0] + k * la, src[1] + k, src[2])
                        if alt > cand:
                            cand = alt
                nxt[s] = cand
            cur = nxt
        w = max(cur)
        if w[0] == neg:
            raise ValueError(f"{x} cannot be emitted by the machine")
        return SRValue(w[1], 2 * w[2])


def _maximal(values: set[SRValue]) -> set[SRValue]:
    # most probable = least random
    return {v for v in values
            if not any(compare(w, v) is Order.LESS_RANDOM for w in values)}


_DEFAULT_MACHINE: MotifMachine | None = None


def _machine() -> MotifMachine:
    global _DEFAULT_MACHINE
    if _DEFAULT_MACHINE is None:
        _DEFAULT_MACHINE = MotifMachine()
    return _DEFAULT_MACHINE


def viterbi_abstract(x: BitSeq, machine: MotifMachine | None = None) -> SRValue:
    """Exponent pair of the most probable emitting path for ``x``."""
    return (machine or _machine()).score(x)


# -- numeric six-state model ----------------------------------------------------

@dataclass(frozen=True)
class SixStateModel:
    """States 1..6: X, O, X of XO, O of XO, X of OX, O of OX."""

    alpha: float
    delta: float

    EMITS = (1, 0, 1, 0, 1, 0)
    # motif length of the motif each state starts, or 0 if it is mid-motif
    STARTS = (1, 1, 2, 0, 0, 2)

    def __post_init__(self):
        if not (self.alpha > 0 and 0 < self.delta < 1):
            raise ValueError(f"need alpha > 0 and 0 < delta < 1, got {self.alpha}, {self.delta}")

    @property
    def normaliser(self) -> float:
        return (1 - self.delta) / (2 * self.alpha + 2 * self.alpha ** 2)

    def matrix(self) -> list[list[float]]:
        """Row i gives P(next = j | current = i), written out entry by entry."""
        a, d, c = self.alpha, self.delta, self.normaliser
        ca, ca2 = c * a, c * a * a
        return [
            [d, ca, ca2, 0.0, 0.0, ca2],
            [ca, d, ca2, 0.0, 0.0, ca2],
            [ca, ca, 0.0, d, 0.0, ca2],
            [ca, ca, d, 0.0, 0.0, ca2],
            [ca, ca, ca2, 0.0, 0.0, d],
            [ca, ca, ca2, 0.0, d, 0.0],
        ]

    def initial(self) -> list[float]:
        a, c = self.alpha, self.normaliser
        return [c * a ** k if k else 0.0 for k in self.STARTS]


def path_probability6(x: BitSeq, path: Sequence[int], alpha: float, delta: float) -> float:
    """Probability of emitting ``x`` along ``path`` (states numbered 1..6)."""
    model = SixStateModel(alpha, delta)
    if len(path) != len(x) or not path:
        raise ValueError("path and sequence lengths differ")
    mat, init = model.matrix(), model.initial()
    prob = init[path[0] - 1]
    for prev, nxt in zip(path, path[1:]):
        prob *= mat[prev - 1][nxt - 1]
    for sym, s in zip(x, path):
        if model.EMITS[s - 1] != sym:
            return 0.0
    return prob


def viterbi_numeric6(x: BitSeq, alpha: float, delta: float) -> tuple[float, list[int]]:
    """Most probable path through the six-state model, computed in log space."""
    model = SixStateModel(alpha, delta)
    bits = tuple(x)
    if not bits:
        raise ValueError("viterbi is undefined for the empty sequence")
    mat = [[math.log(p) if p > 0 else -math.inf for p in row] for row in model.matrix()]
    init = [math.log(p) if p > 0 else -math.inf for p in model.initial()]
    emit = model.EMITS
    score = [init[s] if emit[s] == bits[0] else -math.inf for s in range(6)]
    back: list[list[int]] = []
    for sym in bits[1:]:
        new, ptr = [], []
        for t in range(6):
            if emit[t] != sym:
                new.append(-math.inf)
                ptr.append(0)
                continue
            src = max(range(6), key=lambda s: score[s] + mat[s][t])
            new.append(score[src] + mat[src][t])
            ptr.append(src)
        back.append(ptr)
        score = new
    last = max(range(6), key=lambda s: score[s])
    path = [last]
    for ptr in reversed(back):
        path.append(ptr[path[-1]])
    path.reverse()
    return math.exp(score[last]), [s + 1 for s in path]


def path_exponents6(path: Sequence[int]) -> SRValue:
    """Formal alpha/delta exponents of a six-state path with C = 1."""
    i = SixStateModel.STARTS[path[0] - 1]
    j = 0
    for prev, nxt in zip(path, path[1:]):
        if SixStateModel.STARTS[nxt - 1] and not _continues(prev, nxt):
            i += SixStateModel.STARTS[nxt - 1]
        else:
            j += 1
    return SRValue(i, 2 * j)


def _continues(prev: int, nxt: int) -> bool:
    # delta arcs of the six-state matrix
    return (prev, nxt) in {(1, 1), (2, 2), (3, 4), (4, 3), (5, 6), (6, 5)}


# -- benchmark ------------------------------------------------------------------

@dataclass
class BenchReport:
    repetitions: int
    dp_plus_seconds: float
    viterbi_seconds: float
    dp_plus_peak_bytes: int
    viterbi_peak_bytes: int
    identical: bool

    @property
    def time_ratio(self) -> float:
        return self.viterbi_seconds / self.dp_plus_seconds if self.dp_plus_seconds else math.inf

    @property
    def space_ratio(self) -> float:
        return self.viterbi_peak_bytes / self.dp_plus_peak_bytes if self.dp_plus_peak_bytes else math.inf

    def rows(self) -> list[dict]:
        return [
            {"method": "dp_plus", "total_seconds": self.dp_plus_seconds,
             "peak_bytes": self.dp_plus_peak_bytes},
            {"method": "viterbi_abstract", "total_seconds": self.viterbi_seconds,
             "peak_bytes": self.viterbi_peak_bytes},
        ]


def _timed(fn: Callable[[BitSeq], SRValue], seqs: list[BitSeq], reps: int):
    out = []
    start = time.perf_counter()
    for _ in range(reps):
        out = [fn(x) for x in seqs]
    elapsed = time.perf_counter() - start
    tracemalloc.start()
    for x in seqs:
        fn(x)
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    return out, elapsed, peak


def bench_ratings(repetitions: int = 1) -> BenchReport:
    """Time dp+ against the 72-state Viterbi over all 256 8-bit sequences."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    seqs = [decode(c, 8) for c in range(256)]
    machine = _machine()

    def dp_uncached(x: BitSeq) -> SRValue:
        _dp_plus.cache_clear()
        return dp_plus(x)

    fast, t_fast, m_fast = _timed(dp_uncached, seqs, repetitions)
    slow, t_slow, m_slow = _timed(machine.score, seqs, repetitions)
    return BenchReport(repetitions, t_fast, t_slow, m_fast, m_slow, fast == slow)


def enumerate_paths6(x: BitSeq) -> list[list[int]]:
    """Every state path (1..6) whose emissions spell ``x``."""
    options = [[s + 1 for s in range(6) if SixStateModel.EMITS[s] == b] for b in x]
    return [list(p) for p in itertools.product(*options)]

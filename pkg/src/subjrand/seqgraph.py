"""Shift digraphs over 8-bit windows and their components.

For a set S of windows, x -> y is an arc when y is x shifted left by one
symbol with O or X appended and both ends lie in S.  Walks along the arcs
are exactly the bit streams whose every 8-bit window lies in S.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable

from .bitseq import decode, shift_append
from .rating import Order, SRValue, compare, sr_rating
from .reference import TABLE2_THRESHOLDS

__all__ = [
    "ShiftDigraph",
    "ComponentStats",
    "ComponentReport",
    "window_ratings",
    "achievable_values",
    "threshold_set",
    "build_graph",
    "tarjan_scc",
    "weak_components",
    "component_stats",
    "strong_components",
    "main_component",
    "Table2Result",
    "reproduce_table2",
    "Theorem1Verdict",
    "verify_theorem1",
]


@functools.lru_cache(maxsize=None)
def window_ratings() -> tuple[SRValue, ...]:
    """sr rating of every 8-bit window, indexed by code."""
    return tuple(sr_rating(decode(code, 8)) for code in range(256))


def achievable_values() -> list[SRValue]:
    return sorted(set(window_ratings()), key=lambda v: (v.i, v.j_halves))


def _meets(value: SRValue, t: SRValue) -> bool:
    order = compare(value, t)
    if order is Order.INCOMPARABLE:
        raise ValueError(f"rating {value} is incomparable with threshold {t}")
    return order in (Order.MORE_RANDOM, Order.EQUAL)


@functools.lru_cache(maxsize=None)
def threshold_set(t: SRValue) -> frozenset[int]:
    """All 8-bit windows rated at least as random as ``t``."""
    return frozenset(c for c, v in enumerate(window_ratings()) if _meets(v, t))


@dataclass(frozen=True)
class ShiftDigraph:
    vertices: frozenset[int]
    arcs: frozenset[tuple[int, int]]

    def successors(self, u: int) -> list[int]:
        return [v for v in (shift_append(u, 0), shift_append(u, 1)) if (u, v) in self.arcs]

    def predecessors(self, v: int) -> list[int]:
        # u and u + 128 are the only windows that shift onto v
        base = v >> 1
        return [u for u in (base, base | 0x80) if (u, v) in self.arcs]

    def subgraph(self, keep: Iterable[int]) -> "ShiftDigraph":
        keep = frozenset(keep) & self.vertices
        return ShiftDigraph(keep, frozenset((u, v) for u, v in self.arcs
                                            if u in keep and v in keep))


def build_graph(vertices: Iterable[int]) -> ShiftDigraph:
    verts = frozenset(vertices)
    arcs = set()
    for u in verts:
        for sym in (0, 1):
            v = shift_append(u, sym)
            if v in verts:
                arcs.add((u, v))
    return ShiftDigraph(verts, frozenset(arcs))


def tarjan_scc(graph: ShiftDigraph, order: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Strongly connected components, iterative Tarjan."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out: list[frozenset[int]] = []
    counter = 0
    roots = sorted(graph.vertices) if order is None else list(order)
    for root in roots:
        if root in index:
            continue
        work = [(root, iter(graph.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                out.append(frozenset(comp))
    return out


def weak_components(graph: ShiftDigraph) -> list[frozenset[int]]:
    parent = {v: v for v in graph.vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in graph.arcs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, set[int]] = {}
    for v in graph.vertices:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(g) for g in groups.values()]


@dataclass(frozen=True)
class ComponentStats:
    vertices: int
    arcs: int
    cycle_basis: int  # arcs - vertices + weak components
    simple_edges: int  # edges of the underlying simple undirected graph
    simple_cycle_basis: int


def component_stats(graph: ShiftDigraph) -> ComponentStats:
    c = len(weak_components(graph))
    v, a = len(graph.vertices), len(graph.arcs)
    simple = {frozenset(arc) for arc in graph.arcs if arc[0] != arc[1]}
    return ComponentStats(v, a, a - v + c, len(simple), len(simple) - v + c)


def _nontrivial(graph: ShiftDigraph, comp: frozenset[int]) -> bool:
    if len(comp) > 1:
        return True
    (v,) = comp
    return (v, v) in graph.arcs


@dataclass
class ComponentReport:
    graph: ShiftDigraph
    strong: list[frozenset[int]]
    weak: list[frozenset[int]]
    nontrivial: list[frozenset[int]] = field(default_factory=list)
    stats: list[ComponentStats] = field(default_factory=list)


def strong_components(graph: ShiftDigraph, order: Iterable[int] | None = None) -> ComponentReport:
    strong = tarjan_scc(graph, order)
    nontrivial = sorted((c for c in strong if _nontrivial(graph, c)), key=lambda c: (-len(c), min(c)))
    stats = [component_stats(graph.subgraph(c)) for c in nontrivial]
    return ComponentReport(graph, strong, weak_components(graph), nontrivial, stats)


def main_component(t: SRValue) -> frozenset[int]:
    """C(t): the largest non-trivial strongly connected component of G(S(t))."""
    report = strong_components(build_graph(threshold_set(t)))
    if not report.nontrivial:
        raise ValueError(f"G(S({t})) has no non-trivial strongly connected component")
    return report.nontrivial[0]


# -- Table 2 --------------------------------------------------------------------

@dataclass
class Table2Result:
    threshold: SRValue
    set_size: int
    components: list[frozenset[int]]
    stats: list[ComponentStats]
    excluded: frozenset[int]  # S minus the union of the components

    def as_rows(self) -> list[dict]:
        rows = []
        for k, (comp, st) in enumerate(zip(self.components, self.stats), start=1):
            rows.append({
                "threshold": str(self.threshold),
                "component": k,
                "set_size": self.set_size,
                "vertices": st.vertices,
                "arcs": st.arcs,
                "cycle_basis": st.cycle_basis,
                "simple_edges": st.simple_edges,
                "simple_cycle_basis": st.simple_cycle_basis,
                "excluded": " ".join(map(str, sorted(self.excluded))),
                "members": " ".join(map(str, sorted(comp))),
            })
        return rows


def reproduce_table2() -> list[Table2Result]:
    out = []
    for t in TABLE2_THRESHOLDS:
        s = threshold_set(t)
        report = strong_components(build_graph(s))
        comps = sorted(report.nontrivial, key=lambda c: (-len(c), min(c)))
        union = frozenset().union(*comps) if comps else frozenset()
        out.append(Table2Result(t, len(s), comps, report.stats, s - union))
    return out


# -- nesting of components --------------------------------------------------------------------

@dataclass
class Theorem1Verdict:
    clauses: dict[str, bool]
    witnesses: dict[str, list[str]]

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())


_SPLIT = SRValue.of(5, 3)
_WEAK_LIMIT = SRValue.of(4, 4.5)


def verify_theorem1() -> Theorem1Verdict:
    """Brute-force check of the component structure across thresholds.

    (a) one non-trivial SCC below [5,3], two at [5,3];
    (b) the SCCs are strictly nested from [1,7] up to the two [5,3] cycles;
    (c) no non-trivial SCC for achievable thresholds above [5,3];
    (d) for thresholds up to [4,4.5] the SCC is also a weak component.
    """
    wit: dict[str, list[str]] = {k: [] for k in "abcd"}
    reports = {t: strong_components(build_graph(threshold_set(t))) for t in TABLE2_THRESHOLDS}

    for t, rep in reports.items():
        want = 2 if t == _SPLIT else 1
        if compare(t, _SPLIT) is Order.MORE_RANDOM:
            want = 0
        if len(rep.nontrivial) != want:
            wit["a"].append(f"{t}: {len(rep.nontrivial)} non-trivial SCCs, expected {want}")

    # least random threshold first
    chain = sorted((t for t in TABLE2_THRESHOLDS if t != _SPLIT),
                   key=lambda t: len(threshold_set(t)), reverse=True)
    for lo, hi in zip(chain, chain[1:]):
        if compare(hi, lo) is not Order.MORE_RANDOM:
            wit["b"].append(f"thresholds {lo} and {hi} are not ordered")
        outer, inner = reports[lo].nontrivial, reports[hi].nontrivial
        if not outer or not inner or not inner[0] < outer[0]:
            wit["b"].append(f"C({hi}) is not strictly inside C({lo})")
    top = reports[chain[-1]].nontrivial[0] if reports[chain[-1]].nontrivial else frozenset()
    for k, comp in enumerate(reports[_SPLIT].nontrivial, start=1):
        if not comp < top:
            wit["b"].append(f"C_{k}({_SPLIT}) is not strictly inside C({chain[-1]})")

    above = [v for v in achievable_values() if compare(v, _SPLIT) is Order.MORE_RANDOM]
    for t in above:
        rep = strong_components(build_graph(threshold_set(t)))
        if rep.nontrivial:
            wit["c"].append(f"{t}: {len(rep.nontrivial)} non-trivial SCCs")
    if not above:
        wit["c"].append("no achievable threshold above [5,3]")

    for t, rep in reports.items():
        if compare(t, _WEAK_LIMIT) in (Order.LESS_RANDOM, Order.EQUAL):
            if not rep.nontrivial or rep.nontrivial[0] not in rep.weak:
                wit["d"].append(f"C({t}) is not a weak component of G(S({t}))")

    return Theorem1Verdict({k: not v for k, v in wit.items()}, wit)


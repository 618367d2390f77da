"""Replaceability graphs over the pairs of a special decomposition.

Vertex ``i`` stands for swapping pair ``i``. Studying a vertex whose
``alpha``-component holds elements found in no other ``alpha``-component
(its *single* elements) produces one edge per place that element can be
restored from, i.e. per pair whose ``1 - alpha`` component contains it.
An element with exactly one such place gives an obligatory edge (``&e``),
several places give possible edges (``∨e``), none marks the vertex dead.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, NamedTuple

from .decomposition import (
    SpecialDecomposition,
    bits_of,
    element_locations,
    multiplicity_masks,
    to_mask,
)


class EmptyMissingSet(ValueError):
    pass


class NotAMainVertex(ValueError):
    pass


class EdgeKind(str, Enum):
    OBLIGATORY = "&"
    POSSIBLE = "∨"


class Edge(NamedTuple):
    src: int
    dst: int
    element: int
    kind: EdgeKind

    @property
    def label(self) -> str:
        return f"{self.kind.value}c{self.element}"

    @property
    def obligatory(self) -> bool:
        return self.kind is EdgeKind.OBLIGATORY


@dataclass(frozen=True)
class ReplGraph:
    alpha: int
    vertices: frozenset[int]
    edges: tuple[Edge, ...]
    mains: frozenset[int]
    finals: frozenset[int]
    main_assoc: Mapping[int, frozenset[int]]
    dead: frozenset[int] = frozenset()
    decomposition: SpecialDecomposition | None = field(default=None, compare=False, repr=False)

    @property
    def missing(self) -> frozenset[int]:
        return frozenset(self.main_assoc)

    def successors(self) -> dict[int, set[int]]:
        succ: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            succ[e.src].add(e.dst)
        return succ

    def out_edges(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def in_edges(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.dst == v]

    def restricted(self, keep: Iterable[int], edges: Iterable[Edge] | None = None) -> ReplGraph:
        """Copy with only ``keep`` vertices (and, if given, only ``edges``)."""
        keep = frozenset(keep)
        pool = self.edges if edges is None else edges
        kept = tuple(sorted(e for e in pool if e.src in keep and e.dst in keep))
        return replace(
            self,
            vertices=keep,
            edges=kept,
            mains=self.mains & keep,
            finals=self.finals & keep,
            dead=self.dead & keep,
        )


def build_graph(d: SpecialDecomposition, alpha: int, missing: Iterable[int]) -> ReplGraph:
    missing = frozenset(missing)
    if not missing:
        raise EmptyMissingSet("no missing elements; the alpha-domain already covers S")
    other = 1 - alpha
    _, twice = multiplicity_masks(d, alpha)
    miss_mask = to_mask(missing)

    main_assoc = {e: element_locations(d, other, e) for e in sorted(missing)}
    mains = frozenset(
        i for i, p in enumerate(d.pairs, start=1) if p.component(other) & miss_mask
    )

    locations: dict[int, frozenset[int]] = {}
    edges: list[Edge] = []
    finals: set[int] = set()
    dead: set[int] = set()
    seen = set(mains)
    heap = sorted(mains)
    while heap:
        i = heapq.heappop(heap)
        singles = d.component(i, alpha) & ~twice
        if not singles:
            finals.add(i)
            continue
        for e in bits_of(singles):
            if e not in locations:
                locations[e] = element_locations(d, other, e)
            where = locations[e]
            if not where:
                dead.add(i)
                continue
            kind = EdgeKind.OBLIGATORY if len(where) == 1 else EdgeKind.POSSIBLE
            for j in where:
                edges.append(Edge(i, j, e, kind))
                if j not in seen:
                    seen.add(j)
                    heapq.heappush(heap, j)
    return ReplGraph(
        alpha=alpha,
        vertices=frozenset(seen),
        edges=tuple(sorted(edges)),
        mains=mains,
        finals=frozenset(finals),
        main_assoc=main_assoc,
        dead=frozenset(dead),
        decomposition=d,
    )


def reachable_from(succ: Mapping[int, Iterable[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def build_subgraph_from(g: ReplGraph, v: int) -> ReplGraph:
    if v not in g.mains:
        raise NotAMainVertex(f"v{v} is not a main vertex")
    keep = reachable_from(g.successors(), v)
    sub = g.restricted(keep)
    assoc = {e: frozenset({v}) for e, where in g.main_assoc.items() if v in where}
    return replace(sub, mains=frozenset({v}), main_assoc=assoc)


# Cycles ----------------------------------------------------------------------


def strongly_connected_components(succ: Mapping[int, Iterable[int]]) -> list[set[int]]:
    """Tarjan's algorithm, iterative."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[set[int]] = []
    counter = 0
    for root in sorted(succ):
        if root in index:
            continue
        work = [(root, iter(sorted(succ[root])))]
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
                    work.append((w, iter(sorted(succ[w]))))
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
                comps.append(comp)
    return comps


def simple_cycles(succ: Mapping[int, Iterable[int]]) -> list[list[int]]:
    """All elementary cycles (Johnson 1975), each starting at its least vertex, sorted."""
    succ = {v: set(ws) for v, ws in succ.items()}
    cycles: list[list[int]] = []
    for s in sorted(succ):
        sub = {v: {w for w in ws if w >= s} for v, ws in succ.items() if v >= s}
        comp = next(c for c in strongly_connected_components(sub) if s in c)
        if len(comp) == 1 and s not in sub[s]:
            continue
        blocked: set[int] = set()
        blocked_by: dict[int, set[int]] = defaultdict(set)
        path: list[int] = []

        def unblock(u: int) -> None:
            pending = [u]
            while pending:
                x = pending.pop()
                if x in blocked:
                    blocked.discard(x)
                    pending.extend(blocked_by.pop(x, ()))

        def circuit(v: int) -> bool:
            found = False
            path.append(v)
            blocked.add(v)
            for w in sorted(sub[v] & comp):
                if w == s:
                    cycles.append(list(path))
                    found = True
                elif w not in blocked and circuit(w):
                    found = True
            if found:
                unblock(v)
            else:
                for w in sub[v] & comp:
                    blocked_by[w].add(v)
            path.pop()
            return found

        circuit(s)
    return sorted(cycles)


def enumerate_cycles(g: ReplGraph) -> list[list[int]]:
    return simple_cycles(g.successors())


def first_cycle(succ: Mapping[int, Iterable[int]]) -> list[int] | None:
    """The lexicographically least elementary cycle, found without enumerating all.

    Equals ``simple_cycles(succ)[0]`` (or ``None``). Walks greedily from the
    least vertex lying on any cycle, always taking the least successor that
    can still return to the start while avoiding the current path.
    """
    succ = {v: set(ws) for v, ws in succ.items()}
    comps = [c for c in strongly_connected_components(succ) if len(c) > 1]
    comps += [{v} for v, ws in succ.items() if v in ws]
    if not comps:
        return None
    s = min(min(c) for c in comps)
    comp = next(c for c in comps if s in c)
    path = [s]
    on_path = {s}
    cur = s
    while True:
        nbrs = succ[cur] & comp
        if s in nbrs:
            return path
        for w in sorted(nbrs):
            if w in on_path:
                continue
            if _returns(succ, comp, w, s, on_path):
                path.append(w)
                on_path.add(w)
                cur = w
                break
        else:  # pragma: no cover - the component guarantees a way back
            raise AssertionError("greedy cycle walk got stuck")


def _returns(succ, comp, start, target, avoid) -> bool:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w == target:
                return True
            if w in comp and w not in avoid and w not in seen:
                seen.add(w)
                queue.append(w)
    return False


# Export ----------------------------------------------------------------------


def to_dot(g: ReplGraph, name: str = "replaceability") -> str:
    lines = [f"digraph {name} {{", f'  label="alpha={g.alpha}";']
    for v in sorted(g.vertices):
        attrs = []
        styles = []
        if v in g.mains:
            attrs.append("shape=doublecircle")
        if v in g.finals:
            styles.append("filled")
            attrs.append("fillcolor=lightgray")
        if v in g.dead:
            styles.append("dashed")
        if styles:
            attrs.append(f'style="{",".join(styles)}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  v{v}{suffix};")
    for e in g.edges:
        lines.append(f'  v{e.src} -> v{e.dst} [label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

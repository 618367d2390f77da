"""Cleaning and compatibility procedures on replaceability graphs.

Both procedures are built on one removal cascade. Removing a vertex drops
its out-edges, which may leave non-main vertices with no in-edges (they go
too), and then looks at every in-edge: a source that needed the removed
vertex (obligatory edge, or last surviving possible edge for that element)
is removed as well; a source with a surviving alternative keeps going with
the edge deleted. A cascade fails as soon as some missing element has lost
every main vertex that could bring it in.

Every attempt runs on a scratch copy. Only successful attempts are committed,
so a failed attempt leaves no trace in the working graph.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

from .decomposition import SpecialDecomposition, bits_of, swapped_domain_mask, to_set
from .graph import Edge, ReplGraph, first_cycle, simple_cycles


class SeedAbsent(ValueError):
    pass


class VertexSeed(NamedTuple):
    vertex: int


class ArcSeed(NamedTuple):
    """All edges from ``src`` to ``dst``, treated as one bundle."""

    src: int
    dst: int


@dataclass(frozen=True)
class Event:
    kind: str
    vertex: int | None = None
    src: int | None = None
    dst: int | None = None
    label: str | None = None
    element: int | None = None
    reason: str | None = None
    domain: tuple[int, ...] | None = None

    def to_record(self) -> dict:
        rec = {"event": self.kind}
        for key in ("vertex", "src", "dst", "label", "element", "reason", "domain"):
            value = getattr(self, key)
            if value is not None:
                rec[key] = list(value) if key == "domain" else value
        return rec


@dataclass
class RemovalTrace:
    procedure: str
    seed: VertexSeed | ArcSeed
    events: list[Event] = field(default_factory=list)
    committed: bool = False
    exhausted: int | None = None
    before: frozenset[int] = frozenset()
    after: frozenset[int] = frozenset()

    @property
    def ok(self) -> bool:
        return self.exhausted is None

    def removed_vertices(self) -> list[int]:
        return [e.vertex for e in self.events if e.kind == "VertexRemoved"]


class WorkGraph:
    """Mutable copy of a :class:`ReplGraph` used by the cascades."""

    def __init__(self, g: ReplGraph):
        self.base = g
        self.alive: set[int] = set(g.vertices)
        self.out: dict[int, set[Edge]] = {v: set() for v in g.vertices}
        self.inn: dict[int, set[Edge]] = {v: set() for v in g.vertices}
        for e in g.edges:
            self.out[e.src].add(e)
            self.inn[e.dst].add(e)

    def copy(self) -> WorkGraph:
        clone = WorkGraph.__new__(WorkGraph)
        clone.base = self.base
        clone.alive = set(self.alive)
        clone.out = {v: set(es) for v, es in self.out.items()}
        clone.inn = {v: set(es) for v, es in self.inn.items()}
        return clone

    def remove_edge(self, e: Edge) -> None:
        self.out[e.src].discard(e)
        self.inn[e.dst].discard(e)

    def bundle(self, src: int, dst: int) -> list[Edge]:
        return sorted(e for e in self.out.get(src, ()) if e.dst == dst)

    def edges(self) -> list[Edge]:
        return sorted(e for v in self.alive for e in self.out[v])

    def successors(self) -> dict[int, set[int]]:
        return {v: {e.dst for e in self.out[v]} for v in self.alive}

    def freeze(self) -> ReplGraph:
        return self.base.restricted(self.alive, self.edges())


class _Cascade:
    def __init__(self, work: WorkGraph, missing: Iterable[int], events: list[Event]):
        self.work = work
        self.missing = sorted(missing)
        self.events = events
        self.queue: deque[tuple[int, str]] = deque()
        self.pending: set[int] = set()
        self.mains = work.base.mains
        self.assoc = work.base.main_assoc

    def schedule(self, v: int, reason: str) -> None:
        if v in self.work.alive and v not in self.pending:
            self.pending.add(v)
            self.queue.append((v, reason))

    def drop_edge(self, e: Edge) -> None:
        work = self.work
        work.remove_edge(e)
        self.events.append(Event("EdgeRemoved", src=e.src, dst=e.dst, label=e.label))
        dst = e.dst
        if dst in work.alive and dst not in self.mains and not work.inn[dst]:
            self.schedule(dst, "zero-indegree")

    def has_alternative(self, e: Edge, avoid: int) -> bool:
        alive, pending = self.work.alive, self.pending
        return any(
            o.element == e.element and o.dst != avoid and o.dst in alive and o.dst not in pending
            for o in self.work.out[e.src]
        )

    def bundle_deletable(self, bundle: list[Edge], avoid: int) -> bool:
        return all(not e.obligatory and self.has_alternative(e, avoid) for e in bundle)

    def run(self) -> int | None:
        work = self.work
        while self.queue:
            v, reason = self.queue.popleft()
            for e in sorted(work.out[v]):
                self.drop_edge(e)
            incoming = sorted(work.inn[v])
            work.alive.discard(v)
            self.pending.discard(v)
            self.events.append(Event("VertexRemoved", vertex=v, reason=reason))
            if v in self.mains:
                for elem in self.missing:
                    where = self.assoc.get(elem, frozenset())
                    if v in where and not (where & work.alive):
                        self.events.append(Event("MainLost", element=elem))
                        return elem
            by_src: dict[int, list[Edge]] = {}
            for e in incoming:
                by_src.setdefault(e.src, []).append(e)
            for src in sorted(by_src):
                bundle = by_src[src]
                if src in self.pending or src not in work.alive:
                    for e in bundle:
                        self.drop_edge(e)
                    continue
                deletable = self.bundle_deletable(bundle, v)
                for e in bundle:
                    self.drop_edge(e)
                if not deletable:
                    why = "obligatory" if any(e.obligatory for e in bundle) else "last-possible"
                    self.schedule(src, why)
        return None


def removal_cascade(
    work: WorkGraph,
    seed: VertexSeed | ArcSeed,
    missing: Iterable[int] | None = None,
    procedure: str = "cascade",
) -> RemovalTrace:
    """Run one cascade in place on ``work`` and return its trace.

    ``trace.exhausted`` is the element whose main vertices were all removed,
    or ``None`` when the cascade completed.
    """
    if missing is None:
        missing = work.base.main_assoc
    trace = RemovalTrace(procedure, seed, before=frozenset(work.alive))
    cascade = _Cascade(work, missing, trace.events)
    if isinstance(seed, ArcSeed):
        bundle = work.bundle(seed.src, seed.dst)
        if seed.src not in work.alive or not bundle:
            raise SeedAbsent(f"no edge v{seed.src} -> v{seed.dst}")
        trace.events.append(Event("SeedEdge", src=seed.src, dst=seed.dst))
        if cascade.bundle_deletable(bundle, seed.dst):
            for e in bundle:
                cascade.drop_edge(e)
        else:
            why = "obligatory" if any(e.obligatory for e in bundle) else "last-possible"
            cascade.schedule(seed.src, why)
    else:
        if seed.vertex not in work.alive:
            raise SeedAbsent(f"v{seed.vertex} is not in the graph")
        trace.events.append(Event("SeedVertex", vertex=seed.vertex))
        cascade.schedule(seed.vertex, "seed")
    trace.exhausted = cascade.run()
    trace.after = frozenset(work.alive)
    return trace


def _snapshot(trace: RemovalTrace, g: ReplGraph) -> None:
    d = g.decomposition
    if d is not None:
        mask = swapped_domain_mask(d, g.alpha, trace.after)
        trace.events.append(Event("DomainSnapshot", domain=tuple(bits_of(mask))))


def _attempt(work: WorkGraph, seed, procedure: str, traces: list[RemovalTrace]):
    """Try ``seed`` on a copy; return the copy when the cascade succeeded."""
    scratch = work.copy()
    trace = removal_cascade(scratch, seed, procedure=procedure)
    traces.append(trace)
    if trace.ok:
        trace.committed = True
        _snapshot(trace, work.base)
        return scratch
    return None


def _guarding(g: ReplGraph, missing: Iterable[int] | None) -> ReplGraph:
    if missing is None or frozenset(missing) == g.missing:
        return g
    return replace(g, main_assoc={e: g.main_assoc[e] for e in sorted(missing)})


def _unguarded(g: ReplGraph) -> int | None:
    for elem, where in sorted(g.main_assoc.items()):
        if not where & g.vertices:
            return elem
    return None


@dataclass
class CleanOutcome:
    stable: bool
    graph: ReplGraph
    traces: list[RemovalTrace]
    cycles: list[list[int]] = field(default_factory=list)
    exhausted: int | None = None
    stage: str | None = None


def remove_dead_vertices(work: WorkGraph, traces: list[RemovalTrace]) -> WorkGraph | int:
    """Seed a cascade from every dead vertex; return the new graph or the lost element."""
    for v in sorted(work.base.dead):
        if v not in work.alive:
            continue
        committed = _attempt(work, VertexSeed(v), "dead", traces)
        if committed is None:
            return traces[-1].exhausted
        work = committed
    return work


def clean_graph(
    g: ReplGraph, missing: Iterable[int] | None = None, *, rng: random.Random | None = None
) -> CleanOutcome:
    """Remove dead vertices, then break every cycle.

    Cycles are taken lexicographically first unless ``rng`` is given, in which
    case one is drawn at random from all current cycles. The arcs of a cycle are
    tried in ascending ``(src, dst)`` order and the first successful cascade is
    committed; if none succeeds the graph is unstable.
    """
    g = _guarding(g, missing)
    traces: list[RemovalTrace] = []
    lost = _unguarded(g)
    if lost is not None:
        return CleanOutcome(False, g, traces, exhausted=lost, stage="mains")
    work = WorkGraph(g)
    result = remove_dead_vertices(work, traces)
    if not isinstance(result, WorkGraph):
        return CleanOutcome(False, work.freeze(), traces, exhausted=result, stage="dead")
    work = result
    cycles: list[list[int]] = []
    while True:
        if rng is None:
            cycle = first_cycle(work.successors())
        else:
            found = simple_cycles(work.successors())
            cycle = rng.choice(found) if found else None
        if cycle is None:
            break
        cycles.append(cycle)
        arcs = sorted({(cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))})
        for src, dst in arcs:
            committed = _attempt(work, ArcSeed(src, dst), "clean", traces)
            if committed is not None:
                work = committed
                break
        else:
            return CleanOutcome(
                False, work.freeze(), traces, cycles, traces[-1].exhausted, stage="clean"
            )
    return CleanOutcome(True, work.freeze(), traces, cycles)


@dataclass(frozen=True)
class IncompatibleSet:
    vertices: frozenset[int]
    element: int

    @property
    def structural_anomaly(self) -> bool:
        """A lost element held by one vertex only; outside the usual ``k > 1`` case."""
        return len(self.vertices) < 2


def _incompatible(d: SpecialDecomposition, alpha: int, vertices: Iterable[int]):
    vertices = set(vertices)
    own = 0
    for p in d.pairs:
        own |= p.component(alpha)
    lost = own & ~swapped_domain_mask(d, alpha, vertices)
    sets = []
    for e in bits_of(lost):
        bit = 1 << (e - 1)
        holders = frozenset(
            i for i, p in enumerate(d.pairs, start=1) if p.component(alpha) & bit
        )
        sets.append(IncompatibleSet(holders, e))
    return sets


def find_incompatible_sets(
    d: SpecialDecomposition, alpha: int, g: ReplGraph
) -> list[IncompatibleSet]:
    """Sets of swapped vertices that jointly and exclusively hold a lost element.

    Ordered by element id. Entries with a single vertex are structural
    anomalies (see :attr:`IncompatibleSet.structural_anomaly`).
    """
    return _incompatible(d, alpha, g.vertices)


@dataclass
class StabilityVerdict:
    stable: bool
    surviving: frozenset[int]
    graph: ReplGraph
    traces: list[RemovalTrace]
    sets: list[IncompatibleSet] = field(default_factory=list)
    exhausted: int | None = None
    reason: str | None = None


def eliminate_incompatibilities(
    d: SpecialDecomposition,
    alpha: int,
    g: ReplGraph,
    missing: Iterable[int] | None = None,
    *,
    rng: random.Random | None = None,
) -> StabilityVerdict:
    g = _guarding(g, missing)
    work = WorkGraph(g)
    traces: list[RemovalTrace] = []
    handled: list[IncompatibleSet] = []
    while True:
        sets = _incompatible(d, alpha, work.alive)
        if not sets:
            return StabilityVerdict(True, frozenset(work.alive), work.freeze(), traces, handled)
        chosen = sets[0] if rng is None else rng.choice(sets)
        handled.append(chosen)
        if chosen.structural_anomaly:
            return StabilityVerdict(
                False, frozenset(work.alive), work.freeze(), traces, handled,
                exhausted=chosen.element, reason="structural-anomaly",
            )
        for v in sorted(chosen.vertices):
            committed = _attempt(work, VertexSeed(v), "compat", traces)
            if committed is not None:
                work = committed
                break
        else:
            return StabilityVerdict(
                False, frozenset(work.alive), work.freeze(), traces, handled,
                exhausted=traces[-1].exhausted, reason="main-exhausted",
            )


def check_domain_preservation(
    d: SpecialDecomposition, alpha: int, before: Iterable[int], after: Iterable[int]
) -> bool:
    was = swapped_domain_mask(d, alpha, before)
    now = swapped_domain_mask(d, alpha, after)
    return was & ~now == 0


def lost_elements(
    d: SpecialDecomposition, alpha: int, before: Iterable[int], after: Iterable[int]
) -> frozenset[int]:
    was = swapped_domain_mask(d, alpha, before)
    now = swapped_domain_mask(d, alpha, after)
    return to_set(was & ~now)


def trace_records(traces: Iterable[RemovalTrace], alpha: int) -> list[dict]:
    """Flatten traces into one record per event (the ``--trace`` line format)."""
    records = []
    for n, t in enumerate(traces):
        head = {"alpha": alpha, "attempt": n, "procedure": t.procedure, "committed": t.committed}
        for ev in t.events:
            records.append({**head, **ev.to_record()})
    return records

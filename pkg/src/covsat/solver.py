"""End-to-end decision pipeline and the proportional-form transformation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .cnf import CnfFormula, evaluate, invert_literals, is_proportional, preprocess
from .decomposition import (
    SpecialDecomposition,
    decomposition_of_cnf,
    is_special_covering,
    missing_elements,
)
from .graph import ReplGraph, build_graph
from .procedures import (
    CleanOutcome,
    RemovalTrace,
    StabilityVerdict,
    clean_graph,
    eliminate_incompatibilities,
    trace_records,
)

VERDICT_FORMAT = "covsat.verdict/1"


class VerdictKind(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    ANOMALY = "anomaly"


@dataclass
class AlphaOutcome:
    """What the procedures concluded for one choice of ``alpha``.

    ``status`` is one of ``covered`` (nothing missing), ``stable``,
    ``unstable`` or ``anomaly`` (stable but the extracted covering failed
    verification).
    """

    alpha: int
    status: str
    missing: frozenset[int]
    graph: ReplGraph | None = None
    clean: CleanOutcome | None = None
    compat: StabilityVerdict | None = None
    selection: tuple[int, ...] | None = None

    @property
    def stable(self) -> bool:
        return self.status in ("covered", "stable")

    @property
    def traces(self) -> list[RemovalTrace]:
        out = []
        if self.clean is not None:
            out += self.clean.traces
        if self.compat is not None:
            out += self.compat.traces
        return out

    @property
    def stage(self) -> str | None:
        """Where an unstable run stopped: ``mains``, ``dead``, ``clean`` or ``compat``."""
        if self.status != "unstable":
            return None
        if self.clean is not None and not self.clean.stable:
            return self.clean.stage
        return "compat"

    @property
    def exhausted(self) -> int | None:
        if self.clean is not None and not self.clean.stable:
            return self.clean.exhausted
        if self.compat is not None and not self.compat.stable:
            return self.compat.exhausted
        return None

    def summary(self) -> dict:
        rec = {"status": self.status, "missing": sorted(self.missing)}
        if self.status == "unstable":
            rec["stage"] = self.stage
            rec["exhausted"] = self.exhausted
            if self.compat is not None and self.compat.reason:
                rec["reason"] = self.compat.reason
        if self.compat is not None and self.compat.stable:
            rec["surviving"] = sorted(self.compat.surviving)
        if self.clean is not None:
            rec["cycles"] = self.clean.cycles
        return rec


@dataclass
class Verdict:
    kind: VerdictKind
    assignment: tuple[int, ...] | None = None
    selection: tuple[int, ...] | None = None
    alpha: int | None = None
    outcomes: dict[int, AlphaOutcome] = field(default_factory=dict)
    reason: str | None = None

    @property
    def is_sat(self) -> bool:
        return self.kind is VerdictKind.SAT

    def traces(self) -> list[dict]:
        recs = []
        for alpha, out in self.outcomes.items():
            recs += trace_records(out.traces, alpha)
        return recs

    def to_record(self) -> dict:
        return {
            "format": VERDICT_FORMAT,
            "kind": self.kind.value,
            "alpha": self.alpha,
            "assignment": list(self.assignment) if self.assignment is not None else None,
            "selection": list(self.selection) if self.selection is not None else None,
            "reason": self.reason,
            "per_alpha": {str(a): o.summary() for a, o in self.outcomes.items()},
        }


def extract_assignment(
    alpha: int, n: int, surviving: Iterable[int], graph_vertices: Iterable[int] = ()
) -> tuple[int, ...]:
    """Swapped pairs select their ``1 - alpha`` component, all others ``alpha``."""
    swapped = set(surviving)
    return tuple(1 - alpha if i in swapped else alpha for i in range(1, n + 1))


def run_alpha(
    d: SpecialDecomposition, alpha: int, *, rng: random.Random | None = None
) -> AlphaOutcome:
    """Build, clean and make compatible the graph for one ``alpha``."""
    missing = missing_elements(d, alpha)
    if not missing:
        return AlphaOutcome(alpha, "covered", missing, selection=(alpha,) * d.n)
    g = build_graph(d, alpha, missing)
    clean = clean_graph(g, rng=rng)
    if not clean.stable:
        return AlphaOutcome(alpha, "unstable", missing, g, clean)
    compat = eliminate_incompatibilities(d, alpha, clean.graph, rng=rng)
    if not compat.stable:
        return AlphaOutcome(alpha, "unstable", missing, g, clean, compat)
    selection = extract_assignment(alpha, d.n, compat.surviving, g.vertices)
    return AlphaOutcome(alpha, "stable", missing, g, clean, compat, selection)


def decide(
    f: CnfFormula, alphas: Sequence[int] = (1, 0), *, rng: random.Random | None = None
) -> Verdict:
    """Decide ``f`` by trying each ``alpha`` in turn.

    A stable outcome is only reported as satisfiable after the assignment
    and the covering are both re-checked; a failed check turns that
    ``alpha`` into an anomaly and the next one is tried.
    """
    if f.has_empty_clause:
        return Verdict(VerdictKind.UNSAT, reason="empty-clause")
    pre = preprocess(f)
    d = decomposition_of_cnf(pre.formula)
    outcomes: dict[int, AlphaOutcome] = {}
    for alpha in alphas:
        out = run_alpha(d, alpha, rng=rng)
        outcomes[alpha] = out
        if not out.stable:
            continue
        assignment = pre.expand(out.selection)
        if evaluate(f, assignment) and is_special_covering(d, out.selection):
            return Verdict(VerdictKind.SAT, assignment, out.selection, alpha, outcomes)
        out.status = "anomaly"
    if any(o.status == "anomaly" for o in outcomes.values()):
        return Verdict(VerdictKind.ANOMALY, outcomes=outcomes, reason="verification-failed")
    return Verdict(VerdictKind.UNSAT, outcomes=outcomes, reason="unstable")


def verify_verdict(f: CnfFormula, v: Verdict) -> bool:
    if v.kind is not VerdictKind.SAT:
        return True
    if v.assignment is None or len(v.assignment) != f.num_vars or not evaluate(f, v.assignment):
        return False
    if v.selection is None:
        return False
    d = decomposition_of_cnf(preprocess(f).formula)
    return len(v.selection) == d.n and is_special_covering(d, v.selection)


class ProportionalKind(str, Enum):
    ALREADY = "already-proportional"
    TRANSFORMED = "transformed"
    NOT_TRANSFORMABLE = "not-transformable"


@dataclass
class ProportionalResult:
    kind: ProportionalKind
    formula: CnfFormula | None = None
    inverted: frozenset[int] = frozenset()
    evidence: Verdict | None = None


def to_proportional(
    f: CnfFormula, *, use_oracle: bool = False, cap: int | None = None
) -> ProportionalResult:
    """Invert literals so that every clause gains a positive literal.

    A satisfying assignment is taken from :func:`decide`, or from the
    brute-force oracle when ``use_oracle`` is set; the variables it sets to 0
    are inverted, so the all-ones assignment satisfies the result.
    """
    if is_proportional(f):
        return ProportionalResult(ProportionalKind.ALREADY, f)
    if use_oracle:
        from .oracle import brute_force_sat

        ov = brute_force_sat(f, cap=cap)
        sigma = ov.witness if ov.satisfiable else None
        evidence = None
    else:
        evidence = decide(f)
        sigma = evidence.assignment if evidence.is_sat else None
    if sigma is None:
        return ProportionalResult(ProportionalKind.NOT_TRANSFORMABLE, evidence=evidence)
    flip = frozenset(i for i, s in enumerate(sigma, start=1) if s == 0)
    return ProportionalResult(
        ProportionalKind.TRANSFORMED, invert_literals(f, flip), flip, evidence
    )

"""Brute-force ground truth, random instances and the differential harness."""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from . import kernels
from .cnf import CnfFormula, evaluate, preprocess, write_dimacs
from .decomposition import SpecialDecomposition, decomposition_of_cnf, is_special_covering
from .solver import Verdict, VerdictKind, decide, verify_verdict

DEFAULT_CAP = 24
REPORT_FORMAT = "covsat.report/1"


class TooManyVariables(ValueError):
    pass


class TooManyPairs(ValueError):
    pass


class InvalidBounds(ValueError):
    pass


class EquivalenceViolation(AssertionError):
    """The formula and its decomposition disagree on satisfiability.

    Satisfiability of a CNF and existence of a covering of its decomposition
    are equivalent, so this always means an implementation bug.
    """


def oracle_cap() -> int:
    return int(os.environ.get("COVSAT_ORACLE_CAP", DEFAULT_CAP))


def _bits(k: int, n: int) -> tuple[int, ...]:
    return tuple((k >> (n - i)) & 1 for i in range(1, n + 1))


@dataclass(frozen=True)
class OracleVerdict:
    satisfiable: bool
    witness: tuple[int, ...] | None = None


def brute_force_sat(f: CnfFormula, cap: int | None = None) -> OracleVerdict:
    """Scan assignments in counting order (``x1`` most significant); first hit wins."""
    cap = oracle_cap() if cap is None else cap
    n = f.num_vars
    if n > cap:
        raise TooManyVariables(f"{n} variables exceeds the oracle cap of {cap}")
    pos, neg = [], []
    for c in f.clauses:
        p = q = 0
        for lit in c.literals:
            if lit.sign:
                p |= 1 << (n - lit.var)
            else:
                q |= 1 << (n - lit.var)
        pos.append(p)
        neg.append(q)
    k = kernels.first_satisfying(n, pos, neg)
    if k < 0:
        return OracleVerdict(False)
    return OracleVerdict(True, _bits(k, n))


def brute_force_covering(d: SpecialDecomposition, cap: int | None = None) -> OracleVerdict:
    """Scan selections in counting order (pair 1 most significant); first covering wins."""
    cap = oracle_cap() if cap is None else cap
    if d.n > cap:
        raise TooManyPairs(f"{d.n} pairs exceeds the oracle cap of {cap}")
    comp1 = [p.pos_mask for p in d.pairs]
    comp0 = [p.neg_mask for p in d.pairs]
    k = kernels.first_covering(d.n, d.ground, comp1, comp0)
    if k < 0:
        return OracleVerdict(False)
    return OracleVerdict(True, _bits(k, d.n))


def random_cnf(seed: int, n: int, m: int, min_len: int = 1, max_len: int | None = None) -> CnfFormula:
    """Uniform random CNF: each clause draws a length, distinct variables and signs."""
    if max_len is None:
        max_len = min(4, n)
    if not 1 <= min_len <= max_len <= n or m < 0:
        raise InvalidBounds(f"need 1 <= min_len <= max_len <= n and m >= 0 (got {min_len}, {max_len}, {n}, {m})")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        size = rng.randint(min_len, max_len)
        vars_ = rng.sample(range(1, n + 1), size)
        clauses.append([v if rng.getrandbits(1) else -v for v in vars_])
    return CnfFormula.from_lists(n, clauses)


class Classification(str, Enum):
    AGREE = "agree"
    FALSE_UNSAT = "false-unsat"
    FALSE_SAT = "false-sat"
    ANOMALY = "anomaly"


def classify(verdict: Verdict, oracle: OracleVerdict) -> Classification:
    if verdict.kind is VerdictKind.ANOMALY:
        return Classification.ANOMALY
    if verdict.is_sat:
        return Classification.AGREE if oracle.satisfiable else Classification.FALSE_SAT
    return Classification.FALSE_UNSAT if oracle.satisfiable else Classification.AGREE


@dataclass
class DiscrepancyReport:
    seed: int | str
    dimacs: str
    verdict: Verdict
    oracle: OracleVerdict
    classification: Classification
    sound: bool = True
    preserved: bool = True

    def alpha_gaps(self) -> list[int]:
        """Alphas whose procedures reported instability on a satisfiable instance."""
        if not self.oracle.satisfiable:
            return []
        return [a for a, o in self.verdict.outcomes.items() if o.status == "unstable"]

    def to_record(self, full: bool | None = None) -> dict:
        if full is None:
            full = self.classification is not Classification.AGREE
        rec = {
            "seed": self.seed,
            "classification": self.classification.value,
            "verdict": self.verdict.kind.value,
            "alpha": self.verdict.alpha,
            "per_alpha": {str(a): o.status for a, o in self.verdict.outcomes.items()},
            "oracle": {
                "satisfiable": self.oracle.satisfiable,
                "witness": list(self.oracle.witness) if self.oracle.witness else None,
            },
            "alpha_gaps": self.alpha_gaps(),
            "domain_preserved": self.preserved,
        }
        if full:
            rec["instance"] = self.dimacs
            rec["verdict_detail"] = self.verdict.to_record()
            rec["trace"] = self.verdict.traces()
        return rec


@dataclass
class DifferentialReport:
    records: list[DiscrepancyReport] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out = {c.value: 0 for c in Classification}
        for r in self.records:
            out[r.classification.value] += 1
        return out

    def summary(self) -> dict:
        gaps = {"0": 0, "1": 0}
        for r in self.records:
            for a in r.alpha_gaps():
                gaps[str(a)] += 1
        return {
            "format": REPORT_FORMAT,
            "count": len(self.records),
            "counts": self.counts(),
            "unsound": sum(not r.sound for r in self.records),
            "domain_violations": sum(not r.preserved for r in self.records),
            "alpha_gaps": gaps,
        }

    def lines(self) -> list[str]:
        out = [json.dumps(r.to_record(), sort_keys=True, ensure_ascii=False) for r in self.records]
        out.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return out

    def dumps(self) -> str:
        return "\n".join(self.lines()) + "\n"


def committed_traces_preserve_domain(verdict: Verdict, d: SpecialDecomposition) -> bool:
    from .procedures import check_domain_preservation

    for alpha, out in verdict.outcomes.items():
        for t in out.traces:
            if t.committed and not check_domain_preservation(d, alpha, t.before, t.after):
                return False
    return True


def check_instance(f: CnfFormula, seed: int | str = "", cap: int | None = None) -> DiscrepancyReport:
    """Run the pipeline and the oracles on one formula and classify the result."""
    truth = brute_force_sat(f, cap)
    if truth.satisfiable and not evaluate(f, truth.witness):
        raise EquivalenceViolation(f"oracle witness {truth.witness} does not satisfy instance {seed}")
    pre = preprocess(f)
    d = decomposition_of_cnf(pre.formula)
    if not f.has_empty_clause:
        cover = brute_force_covering(d, cap)
        if cover.satisfiable != truth.satisfiable:
            raise EquivalenceViolation(
                f"instance {seed}: satisfiable={truth.satisfiable} but covering exists={cover.satisfiable}"
            )
        if cover.satisfiable and not is_special_covering(d, cover.witness):
            raise EquivalenceViolation(f"instance {seed}: covering witness does not cover")
    verdict = decide(f)
    preserved = f.has_empty_clause or committed_traces_preserve_domain(verdict, d)
    return DiscrepancyReport(
        seed, write_dimacs(f), verdict, truth, classify(verdict, truth),
        sound=verify_verdict(f, verdict), preserved=preserved,
    )


def differential_run(
    seeds: Iterable[int],
    n: int,
    m: int,
    min_len: int = 1,
    max_len: int | None = None,
    cap: int | None = None,
) -> DifferentialReport:
    cap = oracle_cap() if cap is None else cap
    if n > cap:
        raise TooManyVariables(f"{n} variables exceeds the oracle cap of {cap}")
    report = DifferentialReport()
    for seed in seeds:
        f = random_cnf(seed, n, m, min_len, max_len)
        report.records.append(check_instance(f, seed, cap))
    return report


def differential_corpus(
    formulas: Sequence[tuple[str, CnfFormula]], cap: int | None = None
) -> DifferentialReport:
    report = DifferentialReport()
    for name, f in formulas:
        report.records.append(check_instance(f, name, cap))
    return report

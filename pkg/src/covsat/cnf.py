"""CNF formulas: data model, DIMACS I/O, evaluation and literal inversion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Assignment = tuple[int, ...]


class ParseError(ValueError):
    """Raised when DIMACS input cannot be turned into a formula."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeader(ParseError):
    pass


class LiteralOutOfRange(ParseError):
    pass


class TautologicalClause(ParseError):
    pass


class ClauseCountMismatch(ParseError):
    pass


class LengthMismatch(ValueError):
    pass


class VarOutOfRange(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    """A variable occurrence; ``sign`` is 1 for ``x_j`` and 0 for ``not x_j``."""

    var: int
    sign: int

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")
        if self.sign not in (0, 1):
            raise ValueError(f"sign must be 0 or 1, got {self.sign}")

    @classmethod
    def from_int(cls, lit: int) -> Literal:
        return cls(abs(lit), 1 if lit > 0 else 0)

    def to_int(self) -> int:
        return self.var if self.sign else -self.var

    def inverted(self) -> Literal:
        return Literal(self.var, 1 - self.sign)

    def __str__(self):
        return f"x{self.var}" if self.sign else f"-x{self.var}"


@dataclass(frozen=True)
class Clause:
    id: int
    literals: tuple[Literal, ...]

    def __post_init__(self):
        seen: dict[int, int] = {}
        for lit in self.literals:
            prev = seen.setdefault(lit.var, lit.sign)
            if prev != lit.sign:
                raise TautologicalClause(
                    f"clause c{self.id} contains both x{lit.var} and -x{lit.var}"
                )
        if len(seen) != len(self.literals):
            raise ValueError(f"clause c{self.id} repeats a literal")

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        for idx, clause in enumerate(self.clauses, start=1):
            if clause.id != idx:
                raise ValueError(f"clause ids must be 1..m in order, got c{clause.id} at {idx}")
            for lit in clause.literals:
                if lit.var > self.num_vars:
                    raise LiteralOutOfRange(
                        f"literal {lit.to_int()} exceeds num_vars={self.num_vars}"
                    )

    @classmethod
    def from_lists(cls, num_vars: int, clauses: Iterable[Sequence[int]]) -> CnfFormula:
        """Build a formula from DIMACS-style signed integer lists."""
        built = tuple(
            Clause(i, tuple(Literal.from_int(x) for x in lits))
            for i, lits in enumerate(clauses, start=1)
        )
        return cls(num_vars, built)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def has_empty_clause(self) -> bool:
        return any(c.is_empty for c in self.clauses)

    def as_lists(self) -> list[list[int]]:
        return [c.ints() for c in self.clauses]

    def used_vars(self) -> set[int]:
        return {lit.var for c in self.clauses for lit in c.literals}


@dataclass(frozen=True)
class Preprocessed:
    """A formula with unused variables compacted away.

    ``var_map[k]`` is the original index of compacted variable ``k + 1``.
    """

    formula: CnfFormula
    original_vars: int
    var_map: tuple[int, ...]
    unused: tuple[int, ...] = field(default=())

    def expand(self, values: Sequence[int]) -> Assignment:
        """Lift an assignment of the compacted formula; unused variables get 1."""
        out = [1] * self.original_vars
        for k, orig in enumerate(self.var_map):
            out[orig - 1] = values[k]
        return tuple(out)


def preprocess(f: CnfFormula) -> Preprocessed:
    used_set = f.used_vars()
    used = sorted(used_set)
    unused = tuple(v for v in range(1, f.num_vars + 1) if v not in used_set)
    if not unused:
        return Preprocessed(f, f.num_vars, tuple(range(1, f.num_vars + 1)))
    renum = {old: new for new, old in enumerate(used, start=1)}
    compact = CnfFormula(
        len(used),
        tuple(
            Clause(c.id, tuple(Literal(renum[l.var], l.sign) for l in c.literals))
            for c in f.clauses
        ),
    )
    return Preprocessed(compact, f.num_vars, tuple(used), unused)


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            return
        if line.startswith("p"):
            yield lineno, "header", line
            continue
        for tok in line.split():
            yield lineno, "int", tok


def parse_dimacs(
    text: str | bytes, *, strip_tautologies: bool = False, strict_count: bool = True
) -> CnfFormula:
    """Parse DIMACS CNF text.

    Clauses may span lines. A lone ``0`` yields an empty clause, which is
    kept and flagged via :attr:`CnfFormula.has_empty_clause`. Repeated
    literals inside one clause are merged. Tautological clauses raise
    :class:`TautologicalClause` unless ``strip_tautologies`` is set, in which
    case they are dropped and the header count is adjusted.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = m = None
    clauses: list[list[int]] = []
    current: list[int] = []
    dropped = 0
    for lineno, kind, tok in _tokens(text):
        if kind == "header":
            if n is not None:
                raise MalformedHeader("duplicate problem line", lineno)
            parts = tok.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise MalformedHeader(f"expected 'p cnf <vars> <clauses>', got {tok!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedHeader(f"non-integer counts in {tok!r}", lineno) from None
            if n < 0 or m < 0:
                raise MalformedHeader(f"negative counts in {tok!r}", lineno)
            continue
        if n is None:
            raise MalformedHeader("clause data before problem line", lineno)
        try:
            x = int(tok)
        except ValueError:
            raise ParseError(f"invalid literal {tok!r}", lineno) from None
        if x == 0:
            lits = list(dict.fromkeys(current))
            current = []
            if any(-y in lits for y in lits):
                if strip_tautologies:
                    dropped += 1
                    continue
                raise TautologicalClause(f"clause {len(clauses) + 1} contains v and -v", lineno)
            clauses.append(lits)
            continue
        if abs(x) > n:
            raise LiteralOutOfRange(f"literal {x} outside 1..{n}", lineno)
        current.append(x)
    if n is None:
        raise MalformedHeader("missing problem line")
    if current:
        raise ParseError("last clause is not terminated by 0")
    if strict_count and len(clauses) + dropped != m:
        raise ClauseCountMismatch(f"header declares {m} clauses, found {len(clauses) + dropped}")
    return CnfFormula.from_lists(n, clauses)


def write_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines.extend(" ".join([*map(str, c.ints()), "0"]) for c in f.clauses)
    return "\n".join(lines) + "\n"


def evaluate(f: CnfFormula, a: Sequence[int]) -> int:
    if len(a) != f.num_vars:
        raise LengthMismatch(f"assignment has {len(a)} values, formula has {f.num_vars} vars")
    for c in f.clauses:
        if not any(a[lit.var - 1] == lit.sign for lit in c.literals):
            return 0
    return 1


def is_proportional(f: CnfFormula) -> bool:
    all_pos = all(any(l.sign == 1 for l in c.literals) for c in f.clauses)
    all_neg = all(any(l.sign == 0 for l in c.literals) for c in f.clauses)
    return all_pos or all_neg


def invert_literals(f: CnfFormula, vars: Iterable[int]) -> CnfFormula:
    flip = set(vars)
    bad = [v for v in flip if not 1 <= v <= f.num_vars]
    if bad:
        raise VarOutOfRange(f"variables {sorted(bad)} outside 1..{f.num_vars}")
    return CnfFormula(
        f.num_vars,
        tuple(
            Clause(c.id, tuple(l.inverted() if l.var in flip else l for l in c.literals))
            for c in f.clauses
        ),
    )

"""Special decompositions of a finite set and the CNF bridge.

Elements ``1..m`` and pair indices ``1..n`` are dense and 1-based. Each
component is an ``int`` bitset with element ``e`` stored at bit ``e - 1``,
so unions and differences are single integer operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .cnf import CnfFormula, Clause, LengthMismatch, Literal


class ValidationError(ValueError):
    pass


class OverlapViolation(ValidationError):
    def __init__(self, pair: int, elements: frozenset[int]):
        self.pair = pair
        self.elements = elements
        super().__init__(f"pair {pair}: components share elements {sorted(elements)}")


class EmptyPairViolation(ValidationError):
    def __init__(self, pair: int):
        self.pair = pair
        super().__init__(f"pair {pair}: both components are empty")


class CoverageViolation(ValidationError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} belongs to no component")


class ElementOutOfRange(ValidationError):
    def __init__(self, pair: int, element: int):
        self.pair = pair
        self.element = element
        super().__init__(f"pair {pair}: element {element} outside the ground set")


class IndexOutOfRange(IndexError):
    pass


class DecompositionFormatError(ValueError):
    pass


def bits_of(mask: int) -> Iterator[int]:
    """Yield the 1-based element ids stored in ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length()
        mask ^= low


def to_set(mask: int) -> frozenset[int]:
    return frozenset(bits_of(mask))


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element ids are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


@dataclass(frozen=True)
class OrderedPair:
    pos_mask: int
    neg_mask: int

    @classmethod
    def of(cls, pos: Iterable[int], neg: Iterable[int]) -> OrderedPair:
        return cls(to_mask(pos), to_mask(neg))

    @property
    def pos(self) -> frozenset[int]:
        return to_set(self.pos_mask)

    @property
    def neg(self) -> frozenset[int]:
        return to_set(self.neg_mask)

    def component(self, alpha: int) -> int:
        return self.pos_mask if alpha else self.neg_mask

    def swapped(self) -> OrderedPair:
        return OrderedPair(self.neg_mask, self.pos_mask)


@dataclass(frozen=True)
class SpecialDecomposition:
    """``ground`` elements split by ``pairs``; pair ``i`` is ``pairs[i - 1]``.

    Construction does not validate; call :func:`validate_decomposition`.
    """

    ground: int
    pairs: tuple[OrderedPair, ...]

    @classmethod
    def from_sets(cls, ground: int, pairs: Iterable[tuple[Iterable[int], Iterable[int]]]):
        return cls(ground, tuple(OrderedPair.of(p, q) for p, q in pairs))

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def full_mask(self) -> int:
        return (1 << self.ground) - 1

    def pair(self, i: int) -> OrderedPair:
        if not 1 <= i <= len(self.pairs):
            raise IndexOutOfRange(f"pair index {i} outside 1..{len(self.pairs)}")
        return self.pairs[i - 1]

    def component(self, i: int, alpha: int) -> int:
        return self.pair(i).component(alpha)

    def as_sets(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        return [(p.pos, p.neg) for p in self.pairs]


def validate_decomposition(d: SpecialDecomposition) -> None:
    """Raise the first violated condition; return ``None`` when ``d`` is valid."""
    full = d.full_mask
    covered = 0
    for i, p in enumerate(d.pairs, start=1):
        stray = (p.pos_mask | p.neg_mask) & ~full
        if stray:
            raise ElementOutOfRange(i, next(bits_of(stray)))
        if p.pos_mask & p.neg_mask:
            raise OverlapViolation(i, to_set(p.pos_mask & p.neg_mask))
        if not (p.pos_mask | p.neg_mask):
            raise EmptyPairViolation(i)
        covered |= p.pos_mask | p.neg_mask
    if covered != full:
        raise CoverageViolation(next(bits_of(full & ~covered)))


def is_valid(d: SpecialDecomposition) -> bool:
    try:
        validate_decomposition(d)
    except ValidationError:
        return False
    return True


def domain_mask(d: SpecialDecomposition, alpha: int) -> int:
    mask = 0
    for p in d.pairs:
        mask |= p.component(alpha)
    return mask


def domain(d: SpecialDecomposition, alpha: int) -> frozenset[int]:
    return to_set(domain_mask(d, alpha))


def missing_mask(d: SpecialDecomposition, alpha: int) -> int:
    return d.full_mask & ~domain_mask(d, alpha)


def missing_elements(d: SpecialDecomposition, alpha: int) -> frozenset[int]:
    return to_set(missing_mask(d, alpha))


def i_transform(d: SpecialDecomposition, idxs: Iterable[int]) -> SpecialDecomposition:
    flip = set(idxs)
    bad = [i for i in flip if not 1 <= i <= d.n]
    if bad:
        raise IndexOutOfRange(f"pair indices {sorted(bad)} outside 1..{d.n}")
    return SpecialDecomposition(
        d.ground,
        tuple(p.swapped() if i in flip else p for i, p in enumerate(d.pairs, start=1)),
    )


def swapped_domain_mask(d: SpecialDecomposition, alpha: int, idxs: Iterable[int]) -> int:
    """Domain ``alpha`` after swapping the pairs in ``idxs``, without building a copy."""
    flip = set(idxs)
    mask = 0
    for i, p in enumerate(d.pairs, start=1):
        mask |= p.component(1 - alpha if i in flip else alpha)
    return mask


def selection_union(d: SpecialDecomposition, beta: Sequence[int]) -> int:
    if len(beta) != d.n:
        raise LengthMismatch(f"selection has {len(beta)} bits, decomposition has {d.n} pairs")
    mask = 0
    for p, b in zip(d.pairs, beta):
        mask |= p.component(b)
    return mask


def is_special_covering(d: SpecialDecomposition, beta: Sequence[int]) -> bool:
    return selection_union(d, beta) == d.full_mask


def decomposition_of_cnf(f: CnfFormula) -> SpecialDecomposition:
    """Pair ``i`` holds the ids of clauses containing ``x_i`` and ``-x_i``."""
    pos = [0] * f.num_vars
    neg = [0] * f.num_vars
    for c in f.clauses:
        bit = 1 << (c.id - 1)
        for lit in c.literals:
            if lit.sign:
                pos[lit.var - 1] |= bit
            else:
                neg[lit.var - 1] |= bit
    return SpecialDecomposition(
        f.num_clauses, tuple(OrderedPair(p, q) for p, q in zip(pos, neg))
    )


def cnf_of_decomposition(d: SpecialDecomposition) -> CnfFormula:
    """Element ``e`` becomes clause ``c_e`` with literal ``x_j^a`` for each ``e in M_j^a``.

    Literals are emitted in ascending pair order.
    """
    clauses = []
    for e in range(1, d.ground + 1):
        bit = 1 << (e - 1)
        lits = []
        for j, p in enumerate(d.pairs, start=1):
            if p.pos_mask & bit:
                lits.append(Literal(j, 1))
            elif p.neg_mask & bit:
                lits.append(Literal(j, 0))
        clauses.append(Clause(e, tuple(lits)))
    return CnfFormula(d.n, tuple(clauses))


def element_locations(d: SpecialDecomposition, alpha: int, e: int) -> frozenset[int]:
    bit = 1 << (e - 1)
    return frozenset(i for i, p in enumerate(d.pairs, start=1) if p.component(alpha) & bit)


def multiplicity_masks(d: SpecialDecomposition, alpha: int) -> tuple[int, int]:
    """Return (elements in >= 1 alpha-component, elements in >= 2)."""
    once = twice = 0
    for p in d.pairs:
        comp = p.component(alpha)
        twice |= once & comp
        once |= comp
    return once, twice


def single_mask(d: SpecialDecomposition, i: int, alpha: int) -> int:
    comp = d.component(i, alpha)
    others = 0
    for j, p in enumerate(d.pairs, start=1):
        if j != i:
            others |= p.component(alpha)
    return comp & ~others


def single_elements(d: SpecialDecomposition, i: int, alpha: int) -> frozenset[int]:
    return to_set(single_mask(d, i, alpha))


def is_immediate_replaceable(d: SpecialDecomposition, i: int, alpha: int) -> bool:
    return single_mask(d, i, alpha) == 0


# Text format -----------------------------------------------------------------

_PAIR_RE = re.compile(r"^\s*(\d+)\s*:\s*\{([^}]*)\}\s*\|\s*\{([^}]*)\}\s*$")


def _parse_elems(body: str, lineno: int) -> list[int]:
    body = body.strip()
    if not body:
        return []
    try:
        return [int(tok.strip().lstrip("ce")) for tok in body.split(",")]
    except ValueError:
        raise DecompositionFormatError(f"line {lineno}: bad element list {{{body}}}") from None


def parse_decomposition(text: str) -> SpecialDecomposition:
    """Parse the line format written by :func:`format_decomposition`."""
    ground = None
    pairs: list[OrderedPair] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ground"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or ground is not None or pairs:
                raise DecompositionFormatError(f"line {lineno}: expected 'ground <m>' first")
            ground = int(parts[1])
            continue
        match = _PAIR_RE.match(line)
        if not match:
            raise DecompositionFormatError(f"line {lineno}: expected 'i : {{..}} | {{..}}'")
        idx = int(match.group(1))
        if idx != len(pairs) + 1:
            raise DecompositionFormatError(f"line {lineno}: pair {idx} out of sequence")
        pos = _parse_elems(match.group(2), lineno)
        neg = _parse_elems(match.group(3), lineno)
        pairs.append(OrderedPair.of(pos, neg))
    if ground is None:
        ground = max((p.pos_mask | p.neg_mask).bit_length() for p in pairs) if pairs else 0
    return SpecialDecomposition(ground, tuple(pairs))


def format_decomposition(d: SpecialDecomposition) -> str:
    def fmt(mask: int) -> str:
        return "{" + ",".join(map(str, bits_of(mask))) + "}"

    lines = [f"ground {d.ground}"]
    lines += [f"{i} : {fmt(p.pos_mask)} | {fmt(p.neg_mask)}" for i, p in enumerate(d.pairs, 1)]
    return "\n".join(lines) + "\n"

import pytest
from hypothesis import given, strategies as st

from covsat.cnf import (
    Clause,
    ClauseCountMismatch,
    CnfFormula,
    LengthMismatch,
    Literal,
    LiteralOutOfRange,
    MalformedHeader,
    ParseError,
    TautologicalClause,
    VarOutOfRange,
    evaluate,
    invert_literals,
    is_proportional,
    parse_dimacs,
    preprocess,
    write_dimacs,
)

from conftest import F1_TEXT, FD_TEXT


def test_parse_f1(f1):
    assert f1.num_vars == 3
    assert f1.as_lists() == [[1, -2], [2, 3], [-1, -3]]
    assert [c.id for c in f1.clauses] == [1, 2, 3]


def test_tautology_rejected():
    with pytest.raises(TautologicalClause):
        parse_dimacs("p cnf 1 1\n1 -1 0\n")


def test_tautology_stripped_on_request():
    f = parse_dimacs("p cnf 2 2\n1 -1 0\n2 0\n", strip_tautologies=True)
    assert f.as_lists() == [[2]]


def test_comments_skipped():
    f = parse_dimacs("c hi\np cnf 1 1\n1 0\n")
    assert f.num_vars == 1 and f.as_lists() == [[1]]


def test_clause_spanning_lines_and_percent_terminator():
    f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n%\n0\n")
    assert f.as_lists() == [[1, 2, 3], [-1]]


def test_empty_clause_kept():
    f = parse_dimacs("p cnf 1 2\n1 0\n0\n")
    assert f.has_empty_clause
    assert f.clauses[1].is_empty


def test_duplicate_literals_merged():
    assert parse_dimacs("p cnf 2 1\n1 1 -2 0\n").as_lists() == [[1, -2]]


@pytest.mark.parametrize(
    "text, exc",
    [
        ("1 0\n", MalformedHeader),
        ("p cnf 2\n1 0\n", MalformedHeader),
        ("p dnf 2 1\n1 0\n", MalformedHeader),
        ("p cnf 1 1\n2 0\n", LiteralOutOfRange),
        ("p cnf 1 2\n1 0\n", ClauseCountMismatch),
        ("p cnf 1 1\n1\n", ParseError),
        ("p cnf 1 1\nx 0\n", ParseError),
    ],
)
def test_malformed_inputs(text, exc):
    with pytest.raises(exc):
        parse_dimacs(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        parse_dimacs("c a\np cnf 1 1\n5 0\n")
    assert info.value.line == 3


def test_write_round_trip_fixtures():
    assert write_dimacs(parse_dimacs(F1_TEXT)) == F1_TEXT
    assert write_dimacs(parse_dimacs(FD_TEXT)) == FD_TEXT


def test_write_empty_formula():
    assert write_dimacs(CnfFormula(0, ())).splitlines() == ["p cnf 0 0"]


def test_evaluate(f1, fc):
    assert evaluate(f1, (1, 1, 0)) == 1
    assert evaluate(f1, (1, 1, 1)) == 0
    assert evaluate(fc, (0, 0)) == 1
    with pytest.raises(LengthMismatch):
        evaluate(f1, (1, 1))


def test_is_proportional(f1):
    assert is_proportional(CnfFormula.from_lists(2, [[1, 2], [2, -1]]))
    assert is_proportional(CnfFormula.from_lists(2, [[-1], [-2]]))
    assert not is_proportional(f1)


def test_invert_literals(f1, fd):
    assert invert_literals(f1, {1, 2}).as_lists() == [[-1, 2], [-2, 3], [1, -3]]
    assert invert_literals(f1, set()) == f1
    assert invert_literals(invert_literals(fd, {1, 2}), {1, 2}) == fd
    with pytest.raises(VarOutOfRange):
        invert_literals(f1, {4})


def test_literal_and_clause_invariants():
    assert Literal.from_int(-3) == Literal(3, 0)
    assert Literal(3, 0).to_int() == -3
    with pytest.raises(ValueError):
        Literal(0, 1)
    with pytest.raises(ValueError):
        Clause(1, (Literal(1, 1), Literal(1, 0)))
    with pytest.raises(ValueError):
        CnfFormula.from_lists(1, [[2]])


def test_preprocess_compacts_unused_variables():
    f = CnfFormula.from_lists(4, [[1, -4], [4]])
    pre = preprocess(f)
    assert pre.formula.num_vars == 2
    assert pre.formula.as_lists() == [[1, -2], [2]]
    assert pre.unused == (2, 3)
    assert pre.expand((0, 1)) == (0, 1, 1, 1)


clause_lists = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(
            st.lists(st.integers(1, n), unique=True, max_size=n).flatmap(
                lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs]).map(list)
            ),
            max_size=8,
        ),
    )
)


@given(clause_lists)
def test_parse_write_round_trip(data):
    n, clauses = data
    f = CnfFormula.from_lists(n, clauses)
    assert parse_dimacs(write_dimacs(f)) == f


@given(clause_lists, st.data())
def test_inversion_is_an_involution_that_moves_satisfying_points(data, draw):
    n, clauses = data
    f = CnfFormula.from_lists(n, clauses)
    flip = draw.draw(st.sets(st.integers(1, n)))
    a = draw.draw(st.tuples(*[st.integers(0, 1)] * n))
    moved = tuple(1 - x if i in flip else x for i, x in enumerate(a, start=1))
    assert invert_literals(invert_literals(f, flip), flip) == f
    assert evaluate(f, a) == evaluate(invert_literals(f, flip), moved)

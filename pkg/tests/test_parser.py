import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcanvas.syntax import (BinOp, Call, Definition, Ident, Index, ListLit,
                              Neg, Num, Param, SyntaxTree, TextLit, TupleLit,
                              parse_source, print_tree, trees_equal)

from conftest import HOUSE_NAMES, HOUSE_SOURCE


def parse_ok(source):
    tree, diags = parse_source(source)
    assert not diags, [d.render() for d in diags]
    return tree


def parse_codes(source):
    _, diags = parse_source(source)
    return [d.code for d in diags]


def test_house_program_definitions():
    tree = parse_ok(HOUSE_SOURCE)
    assert [d.name for d in tree.definitions] == HOUSE_NAMES
    by_name = {d.name: d for d in tree.definitions}
    assert [p.name for p in by_name["house"].params] == ["rcolor", "fcolor"]
    assert [p.name for p in by_name["tile"].params] == ["n"]
    assert all(d.guard is None for d in tree.definitions)


def test_guard_clauses_share_a_head():
    tree = parse_ok("absoluteValue(x) | x < 0 = -x\nabsoluteValue(x) | x >= 0 = x\n")
    assert [d.name for d in tree.definitions] == ["absoluteValue", "absoluteValue"]
    assert all(d.guard is not None for d in tree.definitions)
    first = tree.definitions[0]
    assert isinstance(first.guard, BinOp) and first.guard.op == "<"
    assert isinstance(first.body, Neg)


def test_index_over_tuple_parses():
    tree = parse_ok("y = (1,2,3) # 2\n")
    body = tree.definitions[0].body
    assert isinstance(body, Index)
    assert isinstance(body.seq, TupleLit) and len(body.seq.items) == 3


def test_overlay_right_associative():
    a = parse_ok("x = a & b & c\n")
    b = parse_ok("x = a & (b & c)\n")
    assert trees_equal(a, b)
    c = parse_ok("x = (a & b) & c\n")
    assert not trees_equal(a, c)


def test_multiplication_binds_tighter_than_addition():
    a = parse_ok("x = 1 + 2 * 3\n")
    b = parse_ok("x = 1 + (2 * 3)\n")
    assert trees_equal(a, b)


def test_index_binds_tighter_than_unary_minus():
    a = parse_ok("x = -xs # 2\n")
    b = parse_ok("x = -(xs # 2)\n")
    assert trees_equal(a, b)


def test_comparisons_bind_looser_than_arithmetic():
    a = parse_ok("x = 1 + 2 < 3 * 4\n")
    body = a.definitions[0].body
    assert isinstance(body, BinOp) and body.op == "<"


def test_chained_comparison_rejected():
    assert "chained-comparison" in parse_codes("x = 1 < 2 < 3\n")


def test_parenthesized_expression_is_grouping():
    a = parse_ok("x = (1)\n")
    assert isinstance(a.definitions[0].body, Num)


def test_empty_list_literal():
    tree = parse_ok("x = []\n")
    assert isinstance(tree.definitions[0].body, ListLit)
    assert tree.definitions[0].body.items == []


def test_missing_equals():
    assert "missing-equals" in parse_codes("x 1\n")


def test_empty_body():
    assert "empty-body" in parse_codes("x =\ny = 1\n")


def test_unbalanced_brackets():
    assert "unbalanced-brackets" in parse_codes("x = f(1, 2\n")
    assert "unbalanced-brackets" in parse_codes("x = [1, 2\n")
    assert "unbalanced-brackets" in parse_codes("x = )\n")
    assert "unexpected-token" in parse_codes("x = 1)\n")


def test_unexpected_indent_at_start():
    assert "unexpected-indent" in parse_codes("  x = 1\n")


def test_no_unconsumed_tokens():
    assert "unexpected-token" in parse_codes("x = 1 2\n")


def test_error_recovery_keeps_later_definitions():
    tree, diags = parse_source("x =\ny = 2\n")
    assert [d.name for d in tree.definitions] == ["y"]
    assert len(diags) == 1


def test_body_on_continuation_line():
    tree = parse_ok("f(x) =\n  x + 1\n")
    assert isinstance(tree.definitions[0].body, BinOp)


def test_where_block():
    tree = parse_ok("f(x) = a + b\n  where\n    a = x * 2\n    b = x - 1\n")
    d = tree.definitions[0]
    assert [l.name for l in d.where_locals] == ["a", "b"]


def test_where_local_continuation():
    tree = parse_ok("f(x) = a\n  where\n    a = x +\n      1\n")
    assert [l.name for l in tree.definitions[0].where_locals] == ["a"]


def test_where_inconsistent_indent():
    assert "inconsistent-indent" in parse_codes("f(x) = a\n  where\n      a = 1\n    b = 2\n")


def test_where_reserved():
    assert "reserved-name" in parse_codes("where = 1\n")


def test_bracket_suspends_layout():
    tree = parse_ok("xs = [1,\n2,\n  3]\n")
    assert len(tree.definitions[0].body.items) == 3


# --- round-trip property ---

_names = st.sampled_from(["spot", "tile", "blob", "part", "axis", "gear"])
_params = st.sampled_from(["n", "k", "t"])


def _exprs(param_names):
    leaves = st.one_of(
        st.integers(min_value=0, max_value=99).map(lambda v: Num((1, 1), None, float(v))),
        st.floats(min_value=0, max_value=50, allow_nan=False, allow_infinity=False,
                  width=32).map(lambda v: Num((1, 1), None, float(v))),
        _names.map(lambda n: Ident((1, 1), None, n)),
        st.sampled_from(param_names).map(lambda n: Ident((1, 1), None, n)) if param_names
        else _names.map(lambda n: Ident((1, 1), None, n)),
        st.text(alphabet="ab c", max_size=4).map(lambda s: TextLit((1, 1), None, s)),
    )

    def extend(inner):
        return st.one_of(
            st.tuples(st.sampled_from("+-*/&"), inner, inner).map(
                lambda t: BinOp((1, 1), None, t[0], t[1], t[2])),
            st.tuples(st.sampled_from(["<", "<=", ">", ">=", "==", "/="]), inner, inner).map(
                lambda t: BinOp((1, 1), None, t[0], t[1], t[2])),
            inner.map(lambda e: Neg((1, 1), None, e)),
            st.tuples(_names, st.lists(inner, min_size=1, max_size=3)).map(
                lambda t: Call((1, 1), None, t[0], t[1])),
            st.lists(inner, max_size=3).map(lambda items: ListLit((1, 1), None, items)),
            st.lists(inner, min_size=2, max_size=3).map(lambda items: TupleLit((1, 1), None, items)),
            st.tuples(inner, inner).map(lambda t: Index((1, 1), None, t[0], t[1])),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@st.composite
def _definitions(draw):
    name = draw(_names)
    params = draw(st.lists(_params, unique=True, max_size=2))
    exprs = _exprs(params)
    guard = draw(st.none() | exprs)
    body = draw(exprs)
    locals_ = []
    if draw(st.booleans()):
        local_names = draw(st.lists(st.sampled_from(["inner", "half", "step"]),
                                    unique=True, min_size=1, max_size=2))
        locals_ = [Definition(n, (1, 1), [], None, draw(exprs)) for n in local_names]
    return Definition(name, (1, 1), [Param(p, (1, 1)) for p in params], guard, body, locals_)


@settings(max_examples=150, deadline=None)
@given(st.lists(_definitions(), min_size=1, max_size=4))
def test_print_parse_round_trip(defs):
    tree = SyntaxTree(defs)
    printed = print_tree(tree)
    reparsed, diags = parse_source(printed)
    assert not diags, (printed, [d.render() for d in diags])
    assert trees_equal(tree, reparsed), printed


def test_fmt_canonical_shape():
    tree = parse_ok(HOUSE_SOURCE)
    printed = print_tree(tree)
    for line in printed.strip().split("\n"):
        assert " = " in line
    assert trees_equal(parse_ok(printed), tree)

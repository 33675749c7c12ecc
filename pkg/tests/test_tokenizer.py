from funcanvas.syntax import (COMMA, EQUALS, IDENT, INDENT, LBRACKET, NEWLINE,
                              NUMBER, OP, RBRACKET, TEXT, tokenize)

from conftest import HOUSE_SOURCE


def kinds(tokens):
    return [t.kind for t in tokens]


def test_minimal_definition():
    tokens, diags = tokenize("x = 1")
    assert not diags
    assert [(t.kind, t.lexeme) for t in tokens[:3]] == [(IDENT, "x"), (EQUALS, "="), (NUMBER, "1")]
    assert tokens[-1].kind == NEWLINE


def test_roof_line_tokens():
    tokens, diags = tokenize("roof     = solidPolygon([ (-4,4),(4,4),(0,6) ])")
    assert not diags
    lexemes = [t.lexeme for t in tokens if t.kind not in (NEWLINE,)]
    assert lexemes.count("[") == 1
    assert lexemes.count("]") == 1
    assert lexemes.count("(") == 4  # call + three point tuples
    assert [t.kind for t in tokens if t.kind == LBRACKET] == [LBRACKET]
    assert sum(1 for t in tokens if t.kind == COMMA) == 5  # one per pair, two between pairs


def test_unterminated_text_literal():
    tokens, diags = tokenize('s = "unterminated')
    assert any(d.code == "unterminated-text" and d.line == 1 for d in diags)


def test_illegal_character():
    _, diags = tokenize("x = 1 $ 2")
    assert [d.code for d in diags] == ["illegal-character"]
    assert diags[0].col == 7


def test_text_escapes():
    tokens, diags = tokenize('t = "a\\"b\\n"')
    assert not diags
    text = [t for t in tokens if t.kind == TEXT][0]
    assert text.lexeme == 'a"b\n'


def test_comments_ignored():
    tokens, diags = tokenize("-- nothing here\nx = 1 -- trailing\n-- tail")
    assert not diags
    assert [t.lexeme for t in tokens if t.kind not in (NEWLINE,)] == ["x", "=", "1"]


def test_crlf_and_blank_lines():
    tokens, diags = tokenize("x = 1\r\n\r\ny = 2\r\n")
    assert not diags
    names = [t.lexeme for t in tokens if t.kind == IDENT]
    assert names == ["x", "y"]


def test_indent_marker_for_continuation():
    tokens, diags = tokenize("x = 1\n  + 2\n")
    assert not diags
    indents = [t for t in tokens if t.kind == INDENT]
    assert len(indents) == 1
    assert indents[0].line == 2


def test_positions_strictly_increasing():
    tokens, diags = tokenize(HOUSE_SOURCE)
    assert not diags
    positions = [(t.line, t.col) for t in tokens]
    assert positions == sorted(positions)
    assert len(set(positions)) == len(positions)


def test_number_forms():
    tokens, diags = tokenize("a = 1.5 2 0.25 3e2 1.5e-3")
    assert not diags
    values = [t.lexeme for t in tokens if t.kind == NUMBER]
    assert values == ["1.5", "2", "0.25", "3e2", "1.5e-3"]


def test_huge_number_rejected():
    _, diags = tokenize("a = 1e999")
    assert [d.code for d in diags] == ["invalid-number"]


def test_operators_two_char():
    tokens, diags = tokenize("a = 1 <= 2 >= 3 == 4 /= 5 < 6 > 7")
    ops = [t.lexeme for t in tokens if t.kind == OP]
    assert ops == ["<=", ">=", "==", "/=", "<", ">"]


def test_tab_rejected():
    _, diags = tokenize("x = 1\n\ty = 2")
    assert diags and diags[0].code == "illegal-character"
    assert "tab" in diags[0].message

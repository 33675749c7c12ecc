from pathlib import Path

import pytest

from funcanvas.analysis import check_types, resolve
from funcanvas.evaluator import Interpreter
from funcanvas.syntax import parse_source

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

HOUSE_SOURCE = (PROGRAMS / "house.fcw").read_text(encoding="utf-8")
SPIN_SOURCE = (PROGRAMS / "spin.fcw").read_text(encoding="utf-8")
CLOCK_SOURCE = (PROGRAMS / "clock.fcw").read_text(encoding="utf-8")

HOUSE_NAMES = ["program", "house", "roof", "windows", "floor2", "floor3", "window",
               "door", "facade", "pathway", "tile", "stone", "oval"]


def build(source: str, require_entry: bool = True):
    """Parse + resolve + type-check, asserting every stage is clean."""
    tree, diags = parse_source(source)
    assert not diags, [d.render() for d in diags]
    table, diags = resolve(tree, require_entry=require_entry)
    assert not diags, [d.render() for d in diags]
    diags = check_types(tree, table, require_entry=require_entry)
    assert not diags, [d.render() for d in diags]
    return tree, table


def interpreter_for(source: str, require_entry: bool = True, **kwargs) -> Interpreter:
    _, table = build(source, require_entry=require_entry)
    return Interpreter(table, **kwargs)


@pytest.fixture
def house():
    return build(HOUSE_SOURCE)

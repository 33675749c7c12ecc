import math
import random

import pytest

from funcanvas import picture as pic
from funcanvas.evaluator import Interpreter
from funcanvas.syntax import BinOp, Ident, Neg, Num, parse_source
from funcanvas.values import Cons, EvalError

from conftest import HOUSE_SOURCE, build, interpreter_for

# --- independent splitmix64 oracle (kept free of the production prng module) ---

_M64 = (1 << 64) - 1


def _oracle_mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def oracle_random(seed, count):
    state = _oracle_mix(seed & _M64)
    out = []
    for _ in range(count):
        state = _oracle_mix((state + 0x9E3779B97F4A7C15) & _M64)
        out.append((state >> 11) * 2.0 ** -53)
    return out


# Golden first three draws for seed 1, frozen from the oracle above.
GOLDEN_SEED1_PREFIX = [0.7497482413580301, 0.3350425609216934, 0.8543399066900692]


def eval_name(source, name, **kwargs):
    interp = interpreter_for(source, require_entry=False, **kwargs)
    return interp.evaluate_name(name)


def list_prefix(value, n):
    out = []
    while isinstance(value, Cons) and len(out) < n:
        out.append(value.head.force())
        value = value.tail.force()
    return out


# --- guards and clause dispatch ---

ABS_SOURCE = "absoluteValue(x) | x <  0  = -x\nabsoluteValue(x) | x >= 0  =  x\n"


@pytest.mark.parametrize("x", [-7.0, -5.0, -0.0, 0.0, 3.5])
def test_absolute_value(x):
    interp = interpreter_for(ABS_SOURCE, require_entry=False)
    assert interp.call("absoluteValue", [x]) == abs(x)


def test_guard_boundary_uses_second_clause():
    interp = interpreter_for(ABS_SOURCE, require_entry=False)
    result = interp.call("absoluteValue", [0.0])
    assert result == 0.0 and math.copysign(1.0, result) == 1.0


def test_clause_order_is_source_order():
    src = "pick(x) | x >= 0 = 1\npick(x) = 2\n"
    interp = interpreter_for(src, require_entry=False)
    assert interp.call("pick", [5.0]) == 1.0
    assert interp.call("pick", [-5.0]) == 2.0


def test_guard_fallthrough():
    interp = interpreter_for("f(x) | x < 0 = 1\n", require_entry=False)
    with pytest.raises(EvalError) as exc:
        interp.call("f", [3.0])
    assert exc.value.kind == "guard-fallthrough"


def test_reordering_abs_clauses_same_results():
    flipped = "absoluteValue(x) | x >= 0  =  x\nabsoluteValue(x) | x <  0  = -x\n"
    a = interpreter_for(ABS_SOURCE, require_entry=False)
    b = interpreter_for(flipped, require_entry=False)
    for x in (-5.0, -0.0, 0.0, 5.0):
        assert a.call("absoluteValue", [x]) == b.call("absoluteValue", [x])


def test_where_locals_see_params_and_guards_see_locals():
    src = "f(x) | big = 1\n  where\n    big = x > 10\nf(x) = 0\n"
    interp = interpreter_for(src, require_entry=False)
    assert interp.call("f", [20.0]) == 1.0
    assert interp.call("f", [5.0]) == 0.0


# --- laziness and memoization ---

def test_unused_divergent_definition_is_fine():
    src = "bad = bad\nprogram = drawingOf(blank)\n"
    value = interpreter_for(src).evaluate()
    assert value.kind == "drawing"


def test_demanded_divergent_definition_fails():
    src = "bad = bad\nprogram = drawingOf(scaled(blank, bad, 1))\n"
    with pytest.raises(EvalError) as exc:
        interpreter_for(src).evaluate()
    assert exc.value.kind == "fuel-exhausted"


def test_unused_arguments_never_forced():
    src = "constantly(x, y) = x\nboom = boom\nv = constantly(42, boom)\n"
    assert eval_name(src, "v") == 42.0


def test_value_recursion_through_arithmetic():
    with pytest.raises(EvalError) as exc:
        eval_name("x = x + 1\n", "x")
    assert exc.value.kind == "fuel-exhausted"


def test_memoization_counts_applications_once():
    src = "double(x) = 2 * x\nd = double(3)\ntwice = d + d\n"
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("twice") == 12.0
    assert interp.fuel_used == 1  # one application despite two reads


def test_without_sharing_applications_double():
    src = "double(x) = 2 * x\ntwice = double(3) + double(3)\n"
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("twice") == 12.0
    assert interp.fuel_used == 2


def test_fuel_exhaustion_on_recursion():
    src = "f(n) = f(n + 1)\nv = f(0)\n"
    interp = interpreter_for(src, require_entry=False, fuel=10_000)
    with pytest.raises(EvalError) as exc:
        interp.evaluate_name("v")
    assert exc.value.kind == "fuel-exhausted"


def test_deep_non_tail_recursion_is_contained():
    src = "g(n) = 1 + g(n + 1)\nv = g(0)\n"
    interp = interpreter_for(src, require_entry=False)
    with pytest.raises(EvalError) as exc:
        interp.evaluate_name("v")
    assert exc.value.kind == "fuel-exhausted"


def test_purity_two_runs_identical():
    a = interpreter_for(HOUSE_SOURCE).evaluate()
    b = interpreter_for(HOUSE_SOURCE).evaluate()
    assert a.drawing == b.drawing  # frozen picture trees compare structurally


def test_error_carries_position_and_stack():
    src = "f(x) = x / 0\ng(x) = f(x)\nv = g(1)\n"
    with pytest.raises(EvalError) as exc:
        eval_name(src, "v")
    assert exc.value.kind == "division-by-zero"
    assert exc.value.pos is not None
    assert [name for name, _ in exc.value.frames][-1] == "f"
    assert len(exc.value.frames) <= 20


# --- overlays ---

def test_overlays_matches_explicit_chain_structurally():
    src = ("f(k) = translated(solidCircle(k), k, 0)\n"
           "viaOverlays = overlays(f, 3)\n"
           "viaChain = f(1) & f(2) & f(3)\n")
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("viaOverlays") == interp.evaluate_name("viaChain")


def test_overlays_zero_is_empty():
    assert eval_name("p = overlays(solidCircle, 0)\n", "p") == pic.EMPTY


def test_overlays_one_is_single_application():
    src = "f(k) = solidCircle(k)\np = overlays(f, 1)\n"
    assert eval_name(src, "p") == pic.Circle(1.0, True)


def test_overlays_rejects_fractional_and_negative_counts():
    for count in ("2.5", "-1"):
        with pytest.raises(EvalError) as exc:
            eval_name(f"f(k) = solidCircle(k)\np = overlays(f, {count})\n", "p")
        assert exc.value.kind == "non-whole-count"


def test_house_top_overlay_structure():
    value = interpreter_for(HOUSE_SOURCE).evaluate()
    top = value.drawing
    assert isinstance(top, pic.Overlay)
    assert top.bottom == pic.COORDINATE_PLANE
    assert isinstance(top.top, pic.Overlay)  # the house application


def test_pictures_overlays_in_list_order():
    src = ("a = translated(solidCircle(1), -2, 0)\nb = solidCircle(0.5)\n"
           "c = translated(solidCircle(1), 2, 0)\np = pictures([a, b, c])\n"
           "q = a & b & c\n")
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("p") == interp.evaluate_name("q")


def test_pictures_empty_list():
    assert eval_name("p = pictures([])\n", "p") == pic.EMPTY


def test_user_functions_are_first_class():
    src = ("apply(f, x) = f(x)\n"
           "twice(g, x) = g(g(x))\n"
           "inc(n) = n + 1\n"
           "a = apply(inc, 41)\n"
           "b = twice(inc, 40)\n")
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("a") == 42.0
    assert interp.evaluate_name("b") == 42.0
    # a user function is monomorphic, so builtin-passing gets its own program
    assert eval_name("apply(f, x) = f(x)\nc = apply(solidCircle, 2)\n", "c") == pic.Circle(2.0, True)


# --- foreach and indexing ---

def test_foreach_maps_in_order():
    src = "double(x) = 2 * x\nys = foreach([1,2,3], double)\n"
    assert list_prefix(eval_name(src, "ys"), 10) == [2.0, 4.0, 6.0]


def test_foreach_empty():
    src = "f(x) = x\nys = foreach([], f)\n"
    assert list_prefix(eval_name(src, "ys"), 10) == []


def test_foreach_is_lazy_over_infinite_lists():
    src = "negate(x) = -x\nys = foreach(randomNumbers(1), negate)\n"
    got = list_prefix(eval_name(src, "ys"), 3)
    assert got == [-v for v in oracle_random(1, 3)]


def test_index_basics():
    assert eval_name("v = [10, 20, 30] # 2\n", "v") == 20.0


def test_index_zero_out_of_range():
    with pytest.raises(EvalError) as exc:
        eval_name("v = [10] # 0\n", "v")
    assert exc.value.kind == "index-out-of-range"


def test_index_past_end():
    with pytest.raises(EvalError) as exc:
        eval_name("v = [10, 20] # 3\n", "v")
    assert exc.value.kind == "index-out-of-range"


def test_index_fractional():
    with pytest.raises(EvalError) as exc:
        eval_name("v = [10] # 1.5\n", "v")
    assert exc.value.kind == "non-whole-count"


def test_index_forces_only_a_prefix():
    src = "v = randomNumbers(1) # 5\n"
    assert eval_name(src, "v") == oracle_random(1, 5)[4]


def test_index_is_one_based():
    assert eval_name("v = [7, 8] # 1\n", "v") == 7.0


# --- randomNumbers ---

def test_random_first_draws_match_frozen_golden():
    src = "r = randomNumbers(1)\n"
    assert list_prefix(eval_name(src, "r"), 3) == GOLDEN_SEED1_PREFIX


def test_random_matches_oracle_for_several_seeds():
    for seed in (0, 1, 2, 42, 2024):
        got = list_prefix(eval_name(f"r = randomNumbers({seed})\n", "r"), 10)
        assert got == oracle_random(seed, 10)


def test_random_deterministic_across_calls():
    src = "a = randomNumbers(9) # 3\nb = randomNumbers(9) # 3\nsame = a == b\n"
    assert eval_name(src, "same") is True


def test_random_outputs_in_unit_interval():
    values = list_prefix(eval_name("r = randomNumbers(5)\n", "r"), 1000)
    assert all(0.0 <= v < 1.0 for v in values)


def test_random_fractional_seed_rejected():
    with pytest.raises(EvalError) as exc:
        eval_name("v = randomNumbers(1.5) # 1\n", "v")
    assert exc.value.kind == "non-whole-count"


# --- arithmetic ---

def test_division_by_zero():
    with pytest.raises(EvalError) as exc:
        eval_name("v = 1 / 0\n", "v")
    assert exc.value.kind == "division-by-zero"


def test_overflow_is_an_error():
    with pytest.raises(EvalError) as exc:
        eval_name("big = 1e308\nv = big * 10\n", "v")
    assert exc.value.kind == "non-finite-number"


def test_comparisons_and_equality():
    src = ('a = 1 < 2\nb = 2 <= 2\nc = 3 > 4\nd = 1 == 1\ne = 1 /= 1\nf = "x" == "x"\n')
    interp = interpreter_for(src, require_entry=False)
    assert interp.evaluate_name("a") is True
    assert interp.evaluate_name("b") is True
    assert interp.evaluate_name("c") is False
    assert interp.evaluate_name("d") is True
    assert interp.evaluate_name("e") is False
    assert interp.evaluate_name("f") is True


# --- numeric oracle: lazy evaluation agrees with direct arithmetic ---

def strict_eval(expr, env):
    """Plain recursive arithmetic over the parse tree."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Ident):
        return env[expr.name]
    if isinstance(expr, Neg):
        return -strict_eval(expr.operand, env)
    if isinstance(expr, BinOp):
        left = strict_eval(expr.left, env)
        right = strict_eval(expr.right, env)
        return {"+": left + right, "-": left - right, "*": left * right}[expr.op]
    raise TypeError(type(expr).__name__)


def random_numeric_program(rng, n_defs=4, max_depth=5):
    names = [f"v{i}" for i in range(n_defs)]

    def gen(depth, avail):
        choices = ["lit", "lit", "neg", "bin", "bin"]
        if avail and depth > 0:
            choices.append("ref")
        pick = rng.choice(choices if depth > 0 else ["lit", "ref"] if avail else ["lit"])
        if pick == "lit":
            value = rng.choice([0, 1, 2, 3, 5, 7, 0.5, 1.25, 10])
            return str(value)
        if pick == "ref":
            return rng.choice(avail)
        if pick == "neg":
            return f"-({gen(depth - 1, avail)})"
        op = rng.choice(["+", "-", "*"])
        return f"({gen(depth - 1, avail)} {op} {gen(depth - 1, avail)})"

    lines = []
    for i, name in enumerate(names):
        lines.append(f"{name} = {gen(max_depth, names[:i])}")
    return "\n".join(lines) + "\n", names[-1]


def test_numeric_oracle_sample():
    rng = random.Random(12345)
    for _ in range(100):
        source, last = random_numeric_program(rng)
        tree, table = build(source, require_entry=False)
        env = {}
        for d in tree.definitions:
            env[d.name] = strict_eval(d.body, env)
        interp = Interpreter(table)
        assert interp.evaluate_name(last) == env[last]

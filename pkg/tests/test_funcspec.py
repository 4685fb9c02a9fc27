import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdiffkit.families import build
from cdiffkit.funcspec import (
    SpecError,
    ValueTable,
    composite_power,
    constant,
    identity,
    is_permutation,
    monomial,
    parse_element,
    parse_func,
    sum_of,
    trace_power,
)
from cdiffkit.gf import ContextMismatch, FieldError, make_field

from oracles import zh31_expanded


def horner(ctx, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def test_identity_and_constant():
    ctx = make_field(2, 4)
    assert np.array_equal(identity(ctx).compile().values, ctx.elements())
    assert identity(ctx).eval(ctx.elem(7)) == ctx.elem(7)
    t = constant(ctx, 9).compile()
    assert (t.values == 9).all()
    ok, (x1, x2) = is_permutation(t)
    assert not ok and x1 != x2 and t[x1] == t[x2]


def test_frobenius_is_permutation():
    for n in (3, 4, 5):
        ctx = make_field(2, n)
        assert is_permutation(monomial(ctx, 2).compile()) == (True, None)


def test_composite_power_at_zero():
    ctx = make_field(2, 6)
    for d in (1, 5, 43):
        f = parse_func(ctx, "(X^pm + X + d)^19 + X", m=3, d=d)
        assert f.eval(ctx.elem(0)) == ctx.elem(ctx.pow(d, 19))


def test_zero_exponent_rejected():
    ctx = make_field(2, 4)
    with pytest.raises(SpecError):
        parse_func(ctx, "(X + 1)^0")


def test_render_round_trip():
    ctx = make_field(2, 6)
    f = parse_func(ctx, "(X^pm + X + d)^{2^(2*m-2)+2^(m-2)+1} + X", m=3, d=ctx.gen_power(54).value)
    assert str(f) == "(X^8 + X + g^54)^19 + X"
    again = parse_func(ctx, str(f))
    assert np.array_equal(again.compile().values, f.compile().values)


@pytest.mark.parametrize(
    "text",
    ["Tr(X^3)", "Tr_3(X^5 + g^3*X)", "g^7*X^3 + [1,0,1]*X + 1", "(X^2 + X)^3 * X", "-X^5 + X"],
)
def test_parser_forms_round_trip(text):
    ctx = make_field(2, 6) if "-" not in text else make_field(3, 2)
    f = parse_func(ctx, text)
    g = parse_func(ctx, str(f))
    assert np.array_equal(f.compile().values, g.compile().values)


def test_parser_errors():
    ctx = make_field(3, 2)
    for bad in ["X^", "Y + X", "(X + 1", "5*X", "Tr_4(X)", "[1,2,3]"]:
        with pytest.raises((SpecError, FieldError)):
            parse_func(ctx, bad)


def test_parse_element():
    ctx = make_field(2, 4)
    assert parse_element(ctx, "g^5").value == ctx.gen_power(5).value
    assert parse_element(ctx, "[1,1]").value == 3
    assert parse_element(ctx, "1").value == 1
    with pytest.raises(SpecError):
        parse_element(ctx, "X")


def test_trace_power_api():
    ctx = make_field(2, 6)
    f = trace_power(monomial(ctx, 3), 3, exponent=2)
    x = ctx.elements()
    expected = ctx.pow(ctx.rel_trace(ctx.pow(x, 3), 3), 2)
    assert np.array_equal(f.compile().values, expected)
    with pytest.raises(FieldError):
        trace_power(identity(ctx), 4)


def test_context_mismatch():
    a, b = make_field(2, 4), make_field(2, 3)
    with pytest.raises(ContextMismatch):
        identity(a) + identity(b)
    with pytest.raises(ContextMismatch):
        identity(a).eval(b.elem(1))


def test_value_table_validation():
    ctx = make_field(2, 3)
    with pytest.raises(SpecError):
        ValueTable(ctx, np.arange(7))
    with pytest.raises(SpecError):
        ValueTable(ctx, np.full(8, 8))
    t = ValueTable(ctx, np.arange(8)[::-1])
    assert np.array_equal(t.inverse().values[t.values], np.arange(8))
    with pytest.raises(SpecError):
        ValueTable(ctx, np.zeros(8)).inverse()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 4), (2, 6), (3, 2), (3, 3), (5, 2)]), st.data())
def test_eval_matches_horner(pn, data):
    ctx = make_field(*pn)
    coeffs = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=1, max_size=7))
    spec = sum_of(constant(ctx, coeffs[0]), *[monomial(ctx, e, c) for e, c in enumerate(coeffs) if e and c])
    table = spec.compile()
    xs = data.draw(st.lists(st.integers(0, ctx.q - 1), min_size=1, max_size=20))
    for x in xs:
        want = horner(ctx, coeffs, x)
        assert table[x] == want
        assert spec.eval(ctx.elem(x)).value == want


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=16, max_size=16))
def test_is_permutation_matches_distinct_count(values):
    ctx = make_field(2, 4)
    ok, witness = is_permutation(ValueTable(ctx, values))
    assert ok == (len(set(values)) == 16)
    if not ok:
        assert witness[0] != witness[1] and values[witness[0]] == values[witness[1]]


def test_compile_agrees_with_eval_at_random_points():
    ctx = make_field(2, 8)
    f = build("ZH21", 4, 77, ctx).spec
    table = f.compile()
    rng = np.random.default_rng(1)
    pts = rng.integers(0, ctx.q, 100)
    assert np.array_equal(table.values[pts], f.eval(pts))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_zh31_power_form_equals_expanded_trace_form(m):
    ctx = make_field(2, 2 * m)
    rng = np.random.default_rng(m)
    for delta in rng.integers(0, ctx.q, 8):
        spec = build("ZH31", m, int(delta), ctx).spec
        assert np.array_equal(spec.compile().values, zh31_expanded(ctx, m, int(delta)))


def test_composite_power_keeps_written_exponent():
    ctx = make_field(2, 4)
    base = parse_func(ctx, "X + 1")
    f = composite_power(base, 15 + 3)
    assert "18" in str(f)
    # x = 1 makes the base zero: 0^18 = 0
    assert f.eval(ctx.elem(1)).value == 0

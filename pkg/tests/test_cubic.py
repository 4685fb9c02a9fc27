import numpy as np
import pytest

from cdiffkit.cubic import classify_cubic, cubic_roots, p_n_eval, root_count_table
from cdiffkit.gf import FieldError, make_field

from oracles import brute_cubic_roots


def test_p_small_indices():
    ctx = make_field(2, 5)
    x = ctx.elements()
    assert np.array_equal(p_n_eval(ctx, 1, x), x)
    assert np.array_equal(p_n_eval(ctx, 2, x), x)
    assert np.array_equal(p_n_eval(ctx, 3, x), ctx.add(x, ctx.pow(x, 2)))
    # p_4 = p_3 + x^2 p_2
    assert np.array_equal(p_n_eval(ctx, 4, x), ctx.add(ctx.add(x, ctx.pow(x, 2)), ctx.pow(x, 3)))
    with pytest.raises(ValueError):
        p_n_eval(ctx, 0, 1)


def test_gf2_and_gf4_a_equals_one():
    for n in (1, 2):
        ctx = make_field(2, n)
        v = classify_cubic(ctx.elem(1))
        assert v.root_count == 0 and v.criterion == "otherwise" and v.roots == ()


def test_unique_root_branch_gf16():
    ctx = make_field(2, 4)
    for a in range(1, 16):
        if ctx.abs_trace(ctx.add(ctx.inv(a), 1)) == 1:
            v = classify_cubic(ctx.elem(a))
            assert v.root_count == 1 and len(brute_cubic_roots(ctx, a)) == 1


@pytest.mark.parametrize("n", range(1, 10))
def test_trichotomy_matches_brute_force(n):
    ctx = make_field(2, n)
    counts = root_count_table(ctx)
    for a in range(1, ctx.q):
        v = classify_cubic(ctx.elem(a))
        assert v.root_count == counts[a] == len(v.roots)
        assert v.root_count in (0, 1, 3)
        assert (p_n_eval(ctx, n, a) == 0) == (v.root_count == 3)


def test_fibres_of_cubic_map():
    ctx = make_field(2, 7)
    counts = root_count_table(ctx)
    assert counts.sum() == ctx.q
    assert set(np.unique(counts[1:]).tolist()) <= {0, 1, 3}
    sample = [1, 5, 77]
    assert [len(cubic_roots(ctx, a)) for a in sample] == [int(counts[a]) for a in sample]


def test_errors():
    with pytest.raises(ValueError):
        classify_cubic(make_field(2, 3).elem(0))
    with pytest.raises(FieldError):
        classify_cubic(make_field(3, 2).elem(1))
    with pytest.raises(TypeError):
        classify_cubic(3)


def test_large_field_skips_search_unless_roots():
    ctx = make_field(2, 17)
    v = classify_cubic(ctx.elem(12345), check=False)
    assert v.root_count in (0, 1, 3)
    if v.root_count:
        assert len(v.roots) == v.root_count

import numpy as np
import pytest

from cdiffkit.gf import FieldError, make_field
from cdiffkit.walsh import (
    MUST_VANISH,
    NO_CLAIM,
    GoldPairParams,
    gold_pair_mask,
    gold_pair_vanishing,
    gold_pair_values,
    quad_form_kernel,
    quad_walsh_law_check,
    quadratic_values,
    v2,
    walsh_point,
    walsh_spectrum,
)

from oracles import naive_walsh_sq


def test_zero_function():
    ctx = make_field(2, 5)
    f = np.zeros(ctx.q, dtype=np.int64)
    assert walsh_point(ctx, f, 0).coefficient == ctx.q
    assert walsh_point(ctx, f, 3).coefficient == 0
    spec = walsh_spectrum(ctx, f)
    assert spec.sq_magnitudes[0] == ctx.q**2 and spec.sq_magnitudes[1:].sum() == 0


def test_trace_cube_gf8():
    ctx = make_field(2, 3)
    f = ctx.abs_trace(ctx.pow(ctx.elements(), 3))
    mags = walsh_spectrum(ctx, f).sq_magnitudes
    assert sorted(set(mags.tolist())) == [0, 16]
    assert (mags == 16).sum() == 4


@pytest.mark.parametrize("pn", [(2, 6), (3, 4), (2, 10), (3, 2)])
def test_parseval_and_naive_oracle(pn):
    ctx = make_field(*pn)
    rng = np.random.default_rng(sum(pn))
    for _ in range(5):
        f = rng.integers(0, ctx.p, ctx.q)
        spec = walsh_spectrum(ctx, f)
        assert spec.parseval_sum() == ctx.q**2
        for v in rng.integers(0, ctx.q, 4):
            assert spec[v].counts == walsh_point(ctx, f, v).counts
            assert abs(naive_walsh_sq(ctx, f, int(v)) - spec[v].sq_magnitude) < 1e-6
        assert sum(spec[0].counts) == ctx.q


def test_coefficient_odd_p_rejected():
    ctx = make_field(3, 2)
    pt = walsh_point(ctx, np.zeros(9, dtype=np.int64), 0)
    with pytest.raises(ValueError):
        pt.coefficient
    with pytest.raises(ValueError):
        walsh_point(ctx, np.full(9, 3), 0)


def test_kernel_trivial_cases():
    ctx = make_field(2, 5)
    assert quad_form_kernel(ctx, [0, 0]).ell == 5
    assert quad_form_kernel(ctx, [1]).ell == 5


def test_kernel_is_linear_and_annihilated():
    ctx = make_field(2, 8)
    rng = np.random.default_rng(3)
    coeffs = [int(c) for c in rng.integers(0, ctx.q, 4)]
    lmap = quad_form_kernel(ctx, coeffs)
    ker = lmap.kernel_elements()
    assert len(ker) == 2**lmap.ell
    assert (lmap(ker) == 0).all()
    x, y = rng.integers(0, ctx.q, (2, 50))
    assert np.array_equal(lmap(ctx.add(x, y)), ctx.add(lmap(x), lmap(y)))
    # the kernel found by elimination equals the zero set found by a full sweep
    assert set(ker.tolist()) == set(np.flatnonzero(lmap(ctx.elements()) == 0).tolist())


def test_quadratic_law_exhaustive_small():
    ctx = make_field(2, 6)
    rng = np.random.default_rng(5)
    for _ in range(5):
        coeffs = [int(c) for c in rng.integers(0, ctx.q, 4)]
        spec = walsh_spectrum(ctx, quadratic_values(ctx, coeffs))
        assert all(quad_walsh_law_check(ctx, coeffs, v, spec) for v in range(ctx.q))
    ctx3 = make_field(3, 2)
    assert all(quad_walsh_law_check(ctx3, [1], v) for v in range(9))


@pytest.mark.parametrize("m", [3, 4])
def test_subfield_in_kernel_of_proof_map(m):
    """The map attached to G(X) = u1 X^(2^(m-1)+1) + u1^2 X^3 + u3 X^(2^(m-2)+1) + u3^4 X^5."""
    ctx = make_field(2, 2 * m)
    rng = np.random.default_rng(m)
    done = 0
    while done < 5:
        beta, c, delta = (int(v) for v in rng.integers(0, ctx.q, 3))
        u1 = ctx.rel_trace(ctx.mul(ctx.add(1, c), beta), m)
        if u1 == 0:
            continue
        u3 = ctx.mul(ctx.rel_trace(ctx.pow(delta, 2 ** (m - 2)), m), u1)
        coeffs = [0] * m
        for idx, u in ((m - 1, u1), (1, ctx.pow(u1, 2)), (m - 2, u3), (2, ctx.pow(u3, 4))):
            coeffs[idx] = ctx.add(coeffs[idx], u)
        ker = set(quad_form_kernel(ctx, coeffs).kernel_elements().tolist())
        assert set(ctx.subfield_elements(m).tolist()) <= ker
        done += 1


def test_v2_and_params():
    assert v2(0) == float("inf") and v2(12) == 2 and v2(1) == 0
    prm = GoldPairParams.of(6, 2, 4)
    assert (prm.d1, prm.d2, prm.nu, prm.case) == (2, 6, 1, "1")
    assert GoldPairParams.of(4, 0, 2).plain_case2
    # 4 and 6 have different 2-adic valuations, so (8, 1, 5) is not the exceptional case
    assert not GoldPairParams.of(8, 1, 5).plain_case2
    with pytest.raises(ValueError):
        GoldPairParams.of(6, 3, 3)


def _violations(ctx, a, b, u):
    mask, _ = gold_pair_mask(ctx, a, b, u)
    w = walsh_spectrum(ctx, gold_pair_values(ctx, a, b, u)).coefficients
    return np.flatnonzero(mask & (w != 0))


def test_gold_pair_m3_example():
    ctx = make_field(2, 6)
    alphas = np.flatnonzero(ctx.rel_trace(ctx.elements(), 3) != 0)
    mask, _ = gold_pair_mask(ctx, 2, 4, 1)
    assert mask[alphas].all()
    w = walsh_spectrum(ctx, gold_pair_values(ctx, 2, 4, 1)).coefficients
    assert (w[alphas] == 0).all()
    assert gold_pair_vanishing(ctx, 2, 4, 1, 0).verdict == NO_CLAIM


@pytest.mark.parametrize("k,a,b", [(4, 0, 2), (8, 0, 4), (8, 1, 5), (6, 1, 3), (10, 2, 6)])
def test_plain_rule_sound(k, a, b):
    ctx = make_field(2, k)
    assert len(_violations(ctx, a, b, 1)) == 0


def test_scaled_rule_case1_sound():
    for k in range(2, 10):
        ctx = make_field(2, k)
        for b in range(1, k + 1):
            for a in range(b):
                prm = GoldPairParams.of(k, a, b)
                if prm.case != "1":
                    continue
                for u in ctx.subfield_elements(prm.d1)[:16]:
                    assert len(_violations(ctx, a, b, int(u))) == 0, (k, a, b, u)


def test_scaled_rule_case2_contradicted_at_k4():
    """Documented counterexample: the second scaled case flags alpha where W != 0.

    k=4, a=1, b=3: d1=2, d2=4, nu=2=v2(k), so the rule claims W(alpha)=0
    whenever alpha/u^(2^-b) lies outside S_2 cap S_4 = {0}, i.e. for every
    nonzero alpha.  For u in GF(4) minus GF(2) the spectrum is nonzero at
    three such alpha.
    """
    ctx = make_field(2, 4)
    assert GoldPairParams.of(4, 1, 3).case == "2"
    omega = [int(u) for u in ctx.subfield_elements(2) if u > 1]
    for u in omega:
        bad = _violations(ctx, 1, 3, u)
        assert len(bad) == 3
        assert gold_pair_vanishing(ctx, 1, 3, u, int(bad[0])).verdict == MUST_VANISH
    # u = 1 stays sound
    assert len(_violations(ctx, 1, 3, 1)) == 0


def test_gold_pair_errors():
    ctx = make_field(2, 6)
    with pytest.raises(ValueError):
        gold_pair_mask(ctx, 2, 4, ctx.gen_power(1).value)  # not in GF(2^2)
    with pytest.raises(FieldError):
        gold_pair_mask(make_field(3, 2), 0, 1, 1)
    assert gold_pair_vanishing(ctx, 2, 4, 0, 5).verdict == NO_CLAIM

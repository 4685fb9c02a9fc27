"""c-differential tables, uniformity and the boomerang cross-check.

The c-DDT entry at (a, b) counts x with F(x + a) - c F(x) = b; the
c-differential uniformity is its maximum over all (a, b), skipping a = 0
when c = 1.  Direct counting is the engine; :func:`count_via_charsum`
recomputes single entries through additive-character sums as an
independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .funcspec import ValueTable, is_permutation
from .gf import ContextMismatch, FieldElem

WITNESS_CAP = 16


def _val(ctx, x):
    if isinstance(x, FieldElem):
        if x.ctx != ctx:
            raise ContextMismatch("element lives in a different field")
        return x.value
    x = int(x)
    if not 0 <= x < ctx.q:
        raise ValueError(f"element index {x} out of range")
    return x


def _table(t):
    if not isinstance(t, ValueTable):
        raise TypeError("expected a compiled ValueTable")
    return t


def _add_args(ctx):
    if ctx.p == 2:
        return np.zeros((1, 1), dtype=np.int64), True
    return np.ascontiguousarray(ctx.add_table, dtype=np.int64), False


def _neg_c_f(ctx, values, c):
    return np.ascontiguousarray(ctx.neg(np.asarray(ctx.mul(c, values))), dtype=np.int64)


def derivative_values(table, c, a):
    """F(x + a) - c F(x) for every x."""
    ctx = table.ctx
    c, a = _val(ctx, c), _val(ctx, a)
    x = ctx.elements()
    fv = table.values
    return np.asarray(ctx.sub(fv[ctx.add(x, a)], ctx.mul(c, fv)))


def cddt_entry(table, c, a, b):
    """Number of x with F(x + a) - c F(x) = b."""
    table = _table(table)
    ctx = table.ctx
    c, a, b = _val(ctx, c), _val(ctx, a), _val(ctx, b)
    if c == 1 and a == 0:
        raise ValueError("a = 0 is excluded when c = 1")
    return int(np.count_nonzero(derivative_values(table, c, a) == b))


def label(uniformity):
    return {1: "PcN", 2: "APcN"}.get(uniformity, f"{uniformity}-uniform")


@dataclass(frozen=True)
class CDdtSummary:
    c: int
    uniformity: int
    histogram: dict
    witnesses: tuple = field(default=())
    excluded_a0: bool = False

    @property
    def label(self):
        return label(self.uniformity)

    def to_dict(self):
        return {
            "c": self.c,
            "uniformity": self.uniformity,
            "label": self.label,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "witnesses": [list(w) for w in self.witnesses],
            "excluded_a0": self.excluded_a0,
        }


def cdu(table, c, witnesses=WITNESS_CAP):
    """Full c-DDT sweep summarized as uniformity, histogram and witnesses."""
    table = _table(table)
    ctx = table.ctx
    c = _val(ctx, c)
    add, is2 = _add_args(ctx)
    fv = np.ascontiguousarray(table.values, dtype=np.int64)
    ncf = _neg_c_f(ctx, fv, c)
    a_start = 1 if c == 1 else 0
    hist, _ = _kernels.cddt_scan(fv, ncf, add, is2, a_start, -1, 1)
    uniformity = int(np.flatnonzero(hist)[-1])
    wit = ()
    if witnesses:
        _, w = _kernels.cddt_scan(fv, ncf, add, is2, a_start, uniformity, witnesses)
        wit = tuple((int(a), int(b)) for a, b in w)
    histogram = {int(k): int(hist[k]) for k in np.flatnonzero(hist)}
    return CDdtSummary(c, uniformity, histogram, wit, c == 1)


def cddt_table(table, c):
    """All rows of the c-DDT as an array indexed [a, b] (row a = 0 dropped for c = 1)."""
    table = _table(table)
    ctx = table.ctx
    c = _val(ctx, c)
    add, is2 = _add_args(ctx)
    fv = np.ascontiguousarray(table.values, dtype=np.int64)
    return _kernels.cddt_full(fv, _neg_c_f(ctx, fv, c), add, is2, 1 if c == 1 else 0)


def count_via_charsum(table, c, a, b):
    """c-DDT entry from  N(b) = (1/q) sum_x sum_beta chi(beta (D(x) - b)).

    The additive character is tallied by residue class of the trace: with
    ``M_j`` the number of (beta, x) whose trace is j, the double sum equals
    ``sum_j M_j w^j``.  That is a rational integer only when
    ``M_1 = ... = M_{p-1}``, and then equals ``M_0 - M_1``.
    """
    table = _table(table)
    ctx = table.ctx
    c, a, b = _val(ctx, c), _val(ctx, a), _val(ctx, b)
    if c == 1 and a == 0:
        raise ValueError("a = 0 is excluded when c = 1")
    y = np.ascontiguousarray(ctx.sub(derivative_values(table, c, a), b), dtype=np.int64)
    tally = _kernels.charsum_tally(
        y,
        np.ascontiguousarray(ctx.log_table),
        np.ascontiguousarray(ctx.exp_table),
        np.ascontiguousarray(ctx.abs_trace_table),
        ctx.p,
    )
    if len(set(tally[1:].tolist())) > 1:
        raise ArithmeticError(f"character sum is not rational: tallies {tally.tolist()}")
    total = int(tally[0] - (tally[1] if ctx.p > 1 else 0))
    count, rem = divmod(total, ctx.q)
    if rem:
        raise ArithmeticError(f"character sum {total} is not divisible by q={ctx.q}")
    return count


@dataclass(frozen=True)
class BoomerangResult:
    table: np.ndarray = field(repr=False)
    uniformity: int

    def to_dict(self):
        return {"uniformity": self.uniformity}


def bct(table):
    """Boomerang connectivity table of a permutation and its max over a, b != 0."""
    table = _table(table)
    ok, witness = is_permutation(table)
    if not ok:
        raise ValueError(f"BCT needs a permutation; F({witness[0]}) = F({witness[1]})")
    ctx = table.ctx
    add, is2 = _add_args(ctx)
    if is2:
        sub = add
    else:
        x = ctx.elements()
        sub = np.ascontiguousarray(ctx.sub(x[:, None], x[None, :]), dtype=np.int64)
    fv = np.ascontiguousarray(table.values, dtype=np.int64)
    finv = np.ascontiguousarray(table.inverse().values, dtype=np.int64)
    t = _kernels.bct_table(fv, finv, add, sub, is2)
    return BoomerangResult(t, int(t[1:, 1:].max()) if ctx.q > 1 else 0)


def minus_one_ddt_max(table):
    """Maximum (-1)-DDT entry over a, b != 0."""
    table = _table(table)
    ctx = table.ctx
    full = cddt_table(table, ctx.neg(1))
    return int(full[1:, 1:].max())


def is_apn(table):
    """Classical APN: every ordinary DDT entry with a != 0 is at most 2."""
    return cdu(_table(table), 1, witnesses=0).uniformity <= 2


def bct_cross_check(table):
    """Compare boomerang uniformity with the (-1)-DDT maximum (recorded, not asserted)."""
    table = _table(table)
    perm, _ = is_permutation(table)
    apn = is_apn(table)
    bu = bct(table).uniformity if perm else None
    m1 = minus_one_ddt_max(table)
    return {
        "field": table.ctx.describe(),
        "permutation": perm,
        "apn": apn,
        "boomerang_uniformity": bu,
        "minus_one_ddt_max": m1,
        "equal": bu == m1,
    }


def uniformities(table, cs):
    """c-differential uniformity for each c in ``cs`` (no histogram)."""
    table = _table(table)
    ctx = table.ctx
    cs = [_val(ctx, c) for c in cs]
    if not cs:
        return np.zeros(0, dtype=np.int64)
    add, is2 = _add_args(ctx)
    fv = np.ascontiguousarray(table.values, dtype=np.int64)
    ncfs = np.ascontiguousarray(np.stack([_neg_c_f(ctx, fv, c) for c in cs]))
    skip = np.array([c == 1 for c in cs], dtype=np.bool_)
    return _kernels.cdu_many(fv, ncfs, skip, add, is2)

"""Root counts of X^3 + X + a over GF(2^n).

The classification uses the trace criterion for a unique root and the
recursively defined polynomials ``p_k`` for three roots:
``p_1 = p_2 = X`` and ``p_k = p_{k-1} + X^(2^(k-3)) p_{k-2}``.
"""

from dataclasses import dataclass

import numpy as np

from .gf import FieldElem, FieldError

BRUTE_FORCE_LIMIT = 2**16


def p_n_eval(ctx, k, x):
    """Evaluate p_k at ``x`` (int or index array) by the two-term recurrence."""
    if ctx.p != 2:
        raise FieldError("p_k is defined over fields of characteristic 2")
    if k < 1:
        raise ValueError("p_k is defined for k >= 1")
    x = np.asarray(x, dtype=np.int64)
    prev2, prev1 = x, x
    for j in range(3, k + 1):
        # X^(2^(j-3)) is the (j-3)-fold Frobenius
        cur = ctx.add(prev1, ctx.mul(ctx.frobenius(x, j - 3), prev2))
        prev2, prev1 = prev1, np.asarray(cur)
    return prev1 if prev1.ndim else int(prev1)


@dataclass(frozen=True)
class CubicVerdict:
    root_count: int
    criterion: str
    roots: tuple

    def to_dict(self):
        return {"root_count": self.root_count, "criterion": self.criterion, "roots": list(self.roots)}


def cubic_roots(ctx, a):
    """All x with x^3 + x + a = 0, by direct search."""
    x = ctx.elements()
    vals = ctx.add(ctx.add(ctx.pow(x, 3), x), a)
    return tuple(int(r) for r in np.flatnonzero(vals == 0))


def classify_cubic(a, *, check=None):
    """Classify the roots of X^3 + X + a in the field of ``a``.

    ``check`` forces (True) or skips (False) the brute-force agreement
    check; by default it runs whenever the field has at most 2^16 elements.
    Roots are always reported; on large fields they come from the search
    only when ``check`` is enabled.
    """
    if not isinstance(a, FieldElem):
        raise TypeError("classify_cubic expects a FieldElem")
    ctx = a.ctx
    if ctx.p != 2:
        raise FieldError("the cubic classification is for characteristic 2")
    if a.value == 0:
        raise ValueError("a must be nonzero")
    if check is None:
        check = ctx.q <= BRUTE_FORCE_LIMIT

    if ctx.abs_trace(ctx.add(ctx.inv(a.value), 1)) == 1:
        count, criterion = 1, "trace-criterion"
    elif p_n_eval(ctx, ctx.n, a.value) == 0:
        count, criterion = 3, "p_n-zero"
    else:
        count, criterion = 0, "otherwise"

    roots = ()
    if check or count:
        roots = cubic_roots(ctx, a.value)
        if len(roots) != count:
            raise AssertionError(
                f"cubic criterion says {count} roots but search found {len(roots)} for a={a.value}"
            )
    return CubicVerdict(count, criterion, roots)


def root_count_table(ctx):
    """Number of roots of X^3+X+a for every a, from the fibres of x -> x^3+x."""
    x = ctx.elements()
    images = np.asarray(ctx.add(ctx.pow(x, 3), x))
    return np.bincount(images, minlength=ctx.q)

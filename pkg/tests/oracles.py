"""Independent reference computations used by the tests.

Nothing here goes through funcspec or the compiled kernels; each oracle is
written directly against the field arithmetic.
"""

import numpy as np


def zh31_expanded(ctx, m, delta):
    """ZH31 written out as the sum of relative traces from its proof.

    Tr_m^2m(y) = y + y^(2^m).
    """
    x = ctx.elements()
    tr = lambda y: ctx.add(y, ctx.frobenius(y, m))  # noqa: E731
    P = lambda y, e: ctx.pow(y, e)  # noqa: E731
    a, b = 2 ** (m - 1), 2 ** (2 * m - 1)
    c, d = 2 ** (m - 2), 2 ** (2 * m - 2)
    terms = [
        tr(ctx.add(P(x, a + 1), P(x, b + 1))),
        ctx.mul(delta, tr(P(x, a))),
        ctx.mul(ctx.add(P(delta, c + 1), P(delta, d + 1)), tr(P(x, c))),
        ctx.mul(tr(P(delta, c)), tr(ctx.add(P(x, c + 1), P(x, d + 1)))),
        ctx.mul(P(delta, c + d), tr(x)),
        x,
        np.full(ctx.q, P(delta, d + c + 1), dtype=np.int64),
    ]
    out = np.zeros(ctx.q, dtype=np.int64)
    for t in terms:
        out = ctx.add(out, t)
    return out


def naive_cddt_entry(ctx, values, c, a, b):
    """Count x with F(x+a) - c F(x) = b one element at a time."""
    n = 0
    for x in range(ctx.q):
        lhs = ctx.sub(int(values[ctx.add(x, a)]), ctx.mul(c, int(values[x])))
        n += int(lhs == b)
    return n


def naive_walsh_sq(ctx, f, v):
    """|sum_x w^(f(x) - Tr(v x))|^2 in floating point (p = 2 or 3)."""
    w = np.exp(2j * np.pi / ctx.p)
    x = ctx.elements()
    s = np.sum(w ** ((f - ctx.abs_trace(ctx.mul(v, x))) % ctx.p))
    return abs(s) ** 2


def brute_cubic_roots(ctx, a):
    return [x for x in range(ctx.q) if ctx.add(ctx.add(ctx.pow(x, 3), x), a) == 0]


def brute_bct(ctx, values):
    inv = np.empty_like(values)
    inv[values] = np.arange(ctx.q)
    t = np.zeros((ctx.q, ctx.q), dtype=np.int64)
    x = ctx.elements()
    for a in range(ctx.q):
        fa = values[ctx.add(x, a)]
        for b in range(ctx.q):
            d = ctx.sub(inv[ctx.add(fa, b)], inv[ctx.add(values[x], b)])
            t[a, b] = int(np.count_nonzero(d == a))
    return t

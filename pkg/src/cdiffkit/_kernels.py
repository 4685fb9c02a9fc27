"""Compiled inner loops for the O(q^2) sweeps.

Element addition is XOR when ``is2`` is set and a lookup into the q x q
table ``add`` otherwise (pass a 1 x 1 dummy for characteristic 2).
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _add(add, is2, x, y):
    if is2:
        return x ^ y
    return add[x, y]


@njit(cache=True, nogil=True)
def cddt_scan(fv, ncf, add, is2, a_start, target, max_witnesses):
    """Histogram of c-DDT entries over rows a >= a_start.

    ``ncf[x]`` holds -c*F(x), so entry (a, b) counts x with
    F(x+a) + ncf[x] = b.  Cells equal to ``target`` are reported as
    witnesses (at most ``max_witnesses``); once the witness list is full the
    scan stops early, so only call with target >= 0 after the histogram is
    known.
    """
    q = fv.shape[0]
    hist = np.zeros(q + 1, dtype=np.int64)
    counts = np.zeros(q, dtype=np.int64)
    wit = np.full((max_witnesses, 2), -1, dtype=np.int64)
    nw = 0
    for a in range(a_start, q):
        counts[:] = 0
        if is2:
            for x in range(q):
                counts[fv[x ^ a] ^ ncf[x]] += 1
        else:
            col = add[:, a]
            for x in range(q):
                counts[add[fv[col[x]], ncf[x]]] += 1
        if target < 0:
            for b in range(q):
                hist[counts[b]] += 1
        else:
            for b in range(q):
                if counts[b] == target and nw < max_witnesses:
                    wit[nw, 0] = a
                    wit[nw, 1] = b
                    nw += 1
            if nw >= max_witnesses:
                break
    return hist, wit[:nw]


@njit(cache=True, nogil=True)
def cddt_full(fv, ncf, add, is2, a_start):
    q = fv.shape[0]
    out = np.zeros((q - a_start, q), dtype=np.int64)
    for a in range(a_start, q):
        for x in range(q):
            y = _add(add, is2, fv[_add(add, is2, x, a)], ncf[x])
            out[a - a_start, y] += 1
    return out


@njit(cache=True, nogil=True)
def charsum_tally(y, log_t, exp_t, trace_t, p):
    """M[j] = #{(beta, x) : Tr(beta * y[x]) = j}."""
    q = y.shape[0]
    qm1 = q - 1
    m = np.zeros(p, dtype=np.int64)
    for beta in range(q):
        if beta == 0:
            m[0] += q
            continue
        lb = log_t[beta]
        for x in range(q):
            yx = y[x]
            if yx == 0:
                m[0] += 1
            else:
                m[trace_t[exp_t[(lb + log_t[yx]) % qm1]]] += 1
    return m


@njit(cache=True, nogil=True)
def bct_table(fv, finv, add, sub, is2):
    """BCT(a, b) = #{x : Finv(F(x+a)+b) - Finv(F(x)+b) = a}."""
    q = fv.shape[0]
    out = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            cnt = 0
            for x in range(q):
                u = finv[_add(add, is2, fv[_add(add, is2, x, a)], b)]
                w = finv[_add(add, is2, fv[x], b)]
                d = (u ^ w) if is2 else sub[u, w]
                if d == a:
                    cnt += 1
            out[a, b] = cnt
    return out


@njit(cache=True, nogil=True)
def cdu_many(fv, ncfs, skip_a0, add, is2):
    """Uniformity only, for several c at once sharing the F(x+a) gather.

    Row k of ``ncfs`` is -c_k*F; ``skip_a0[k]`` drops row a = 0 (c_k = 1).
    """
    q = fv.shape[0]
    nc = ncfs.shape[0]
    mx = np.zeros(nc, dtype=np.int64)
    counts = np.zeros(q, dtype=np.int32)
    fa = np.empty(q, dtype=np.int64)
    for a in range(q):
        if is2:
            for x in range(q):
                fa[x] = fv[x ^ a]
        else:
            for x in range(q):
                fa[x] = fv[add[x, a]]
        for k in range(nc):
            if a == 0 and skip_a0[k]:
                continue
            counts[:] = 0
            m = mx[k]
            row = ncfs[k]
            if is2:
                for x in range(q):
                    y = fa[x] ^ row[x]
                    c = counts[y] + 1
                    counts[y] = c
                    if c > m:
                        m = c
            else:
                for x in range(q):
                    y = add[fa[x], row[x]]
                    c = counts[y] + 1
                    counts[y] = c
                    if c > m:
                        m = c
            mx[k] = m
    return mx

"""Exact Walsh spectra, quadratic-form kernels and Gold-pair vanishing rules.

A Walsh coefficient ``sum_x w^(f(x) - Tr(v x))`` is kept as the residue
counts ``N_j = #{x : f(x) - Tr(v x) = j}``.  For p = 2 the coefficient is
``N_0 - N_1`` and for p = 3 the squared magnitude is the integer
``N_0^2 + N_1^2 + N_2^2 - N_0 N_1 - N_1 N_2 - N_2 N_0``, so every check in
this module is an exact integer comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldElem, FieldError


# -- Walsh coefficients -------------------------------------------------------

def _sq_magnitude(counts, p):
    counts = np.asarray(counts, dtype=np.int64)
    if p == 2:
        w = counts[..., 0] - counts[..., 1]
        return w * w
    if p == 3:
        n0, n1, n2 = counts[..., 0], counts[..., 1], counts[..., 2]
        return n0 * n0 + n1 * n1 + n2 * n2 - n0 * n1 - n1 * n2 - n2 * n0
    raise NotImplementedError("exact squared magnitudes are implemented for p in {2, 3}")


@dataclass(frozen=True)
class WalshPoint:
    v: int
    counts: tuple

    @property
    def p(self):
        return len(self.counts)

    @property
    def coefficient(self):
        """The (integer) coefficient; only defined for p = 2."""
        if self.p != 2:
            raise ValueError("Walsh coefficients are complex for odd p; use sq_magnitude")
        return self.counts[0] - self.counts[1]

    @property
    def sq_magnitude(self):
        return int(_sq_magnitude(self.counts, self.p))

    def to_dict(self):
        return {"v": self.v, "counts": list(self.counts), "sq_magnitude": self.sq_magnitude}


def _check_boolean_values(ctx, f):
    f = np.asarray(getattr(f, "values", f), dtype=np.int64)
    if f.shape != (ctx.q,):
        raise ValueError(f"function table must have {ctx.q} entries, got {f.shape}")
    if f.size and (f.min() < 0 or f.max() >= ctx.p):
        raise ValueError("function values must lie in [0, p)")
    return f


def walsh_point(ctx, f, v):
    """Residue counts of f(x) - Tr(v x) by direct enumeration of x."""
    f = _check_boolean_values(ctx, f)
    v = int(v.value if isinstance(v, FieldElem) else v)
    tr = np.asarray(ctx.abs_trace(ctx.mul(v, ctx.elements())))
    r = (f - tr) % ctx.p
    return WalshPoint(v, tuple(int(c) for c in np.bincount(r, minlength=ctx.p)))


@dataclass(frozen=True)
class WalshSpectrum:
    """Residue counts at every v; ``counts[v, j]``."""

    ctx: object
    counts: np.ndarray = field(repr=False)

    def __getitem__(self, v):
        return WalshPoint(int(v), tuple(int(c) for c in self.counts[int(v)]))

    def __len__(self):
        return len(self.counts)

    @property
    def sq_magnitudes(self):
        return _sq_magnitude(self.counts, self.ctx.p)

    @property
    def coefficients(self):
        if self.ctx.p != 2:
            raise ValueError("Walsh coefficients are complex for odd p")
        return self.counts[:, 0] - self.counts[:, 1]

    def parseval_sum(self):
        return int(self.sq_magnitudes.sum())

    def to_dict(self):
        return {"points": [self[v].to_dict() for v in range(len(self))]}


def trace_form_matrix(ctx):
    """Gram matrix T[i, j] = Tr(X^i X^j) of the trace form in the polynomial basis."""
    basis = np.array([ctx.p**i for i in range(ctx.n)], dtype=np.int64)
    prods = np.asarray(ctx.mul(basis[:, None], basis[None, :]))
    return np.asarray(ctx.abs_trace(prods), dtype=np.int64)


def walsh_spectrum(ctx, f):
    """All q Walsh points at once via a butterfly on residue-count vectors.

    Each x contributes one unit at residue ``f(x) - u.x`` for the coordinate
    dot product ``u.x``; the butterfly tallies these per coordinate axis.
    The trace pairing is ``Tr(v x) = (T v).x`` with T the trace-form Gram
    matrix, so the point v is read at ``u = T v``.
    """
    f = _check_boolean_values(ctx, f)
    p, n, q = ctx.p, ctx.n, ctx.q
    acc = np.zeros((q, p), dtype=np.int64)
    acc[np.arange(q), f] = 1
    for i in range(n):
        shaped = acc.reshape(p ** (n - 1 - i), p, p**i, p)
        out = np.zeros_like(shaped)
        for u in range(p):
            for t in range(p):
                shift = (-u * t) % p
                block = shaped[:, t]
                out[:, u] += np.roll(block, shift, axis=-1) if shift else block
        acc = out.reshape(q, p)
    digits = ctx.coords(ctx.elements())
    u_of_v = ((digits @ trace_form_matrix(ctx)) % p) @ np.array([p**i for i in range(n)])
    return WalshSpectrum(ctx, acc[u_of_v])


def boolean_part(ctx, values):
    """Absolute trace of a field-valued table (the GF(p)-valued component)."""
    return np.asarray(ctx.abs_trace(np.asarray(getattr(values, "values", values))))


# -- GF(p) linear algebra -----------------------------------------------------

def gf_p_nullspace(mat, p):
    """Basis of the right null space of an integer matrix over GF(p)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        nz = np.flatnonzero(a[r:, c]) if r < rows else []
        if len(nz) == 0:
            continue
        k = r + nz[0]
        a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = np.zeros(cols, dtype=np.int64)
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-a[i, fc]) % p
        basis.append(vec)
    return basis


def span(ctx, basis):
    """All GF(p)-combinations of the given element indices."""
    elems = np.zeros(1, dtype=np.int64)
    for b in basis:
        multiples = [np.asarray(ctx.mul(c, b)) for c in range(ctx.p)]
        elems = np.concatenate([np.asarray(ctx.add(elems, m)) for m in multiples])
    return np.unique(elems)


# -- quadratic forms ----------------------------------------------------------

@dataclass(frozen=True)
class LinearizedMap:
    """x -> sum_i (a_i x^(p^i) + (a_i x)^(p^(n-i))) with its kernel."""

    ctx: object
    coeffs: tuple
    kernel: tuple
    ell: int

    def __call__(self, x):
        return linearized_apply(self.ctx, self.coeffs, x)

    def kernel_elements(self):
        return span(self.ctx, self.kernel)


def linearized_apply(ctx, coeffs, x):
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros(x.shape, dtype=np.int64)
    for i, a in enumerate(coeffs):
        if a == 0:
            continue
        left = ctx.mul(a, ctx.frobenius(x, i))
        right = ctx.frobenius(ctx.mul(a, x), ctx.n - i)
        acc = np.asarray(ctx.add(acc, ctx.add(left, right)))
    return acc


def _coeff_values(coeffs):
    return tuple(int(c.value if isinstance(c, FieldElem) else c) for c in coeffs)


def quad_form_kernel(ctx, a_coeffs):
    """Kernel of the linearized map attached to Tr(sum_i a_i x^(p^i+1)).

    Built from the n x n matrix of the map on the basis X^j and reduced by
    elimination over GF(p).
    """
    coeffs = _coeff_values(a_coeffs)
    basis = np.array([ctx.p**j for j in range(ctx.n)], dtype=np.int64)
    images = linearized_apply(ctx, coeffs, basis)
    mat = ctx.coords(images).T
    null = gf_p_nullspace(mat, ctx.p)
    powers = np.array([ctx.p**i for i in range(ctx.n)], dtype=np.int64)
    kernel = tuple(int(vec @ powers) for vec in null)
    return LinearizedMap(ctx, coeffs, kernel, len(kernel))


def quadratic_values(ctx, a_coeffs):
    """Table of f(x) = Tr(sum_i a_i x^(p^i + 1))."""
    coeffs = _coeff_values(a_coeffs)
    x = ctx.elements()
    acc = np.zeros(ctx.q, dtype=np.int64)
    for i, a in enumerate(coeffs):
        if a:
            acc = np.asarray(ctx.add(acc, ctx.mul(a, ctx.pow(x, ctx.p**i + 1))))
    return np.asarray(ctx.abs_trace(acc))


def predicted_sq_magnitudes(ctx, a_coeffs, lmap=None):
    """|W_f(v)|^2 for every v according to the kernel law."""
    lmap = lmap or quad_form_kernel(ctx, a_coeffs)
    f = quadratic_values(ctx, a_coeffs)
    ker = lmap.kernel_elements()
    # f - Tr(v z) must vanish for all z in the kernel
    tr = np.asarray(ctx.abs_trace(ctx.mul(ctx.elements()[:, None], ker[None, :])))
    vanish = ((f[ker][None, :] - tr) % ctx.p == 0).all(axis=1)
    return np.where(vanish, ctx.p ** (ctx.n + lmap.ell), 0)


def quad_walsh_law_check(ctx, a_coeffs, v, spectrum=None):
    """True iff the direct |W_f(v)|^2 equals the kernel-law prediction."""
    v = int(v.value if isinstance(v, FieldElem) else v)
    lmap = quad_form_kernel(ctx, a_coeffs)
    predicted = predicted_sq_magnitudes(ctx, a_coeffs, lmap)[v]
    if spectrum is not None:
        observed = int(spectrum.sq_magnitudes[v])
    else:
        observed = walsh_point(ctx, quadratic_values(ctx, a_coeffs), v).sq_magnitude
    return observed == int(predicted)


# -- Gold pairs ---------------------------------------------------------------

MUST_VANISH = "must_vanish"
NO_CLAIM = "no_claim"


def v2(x):
    """2-adic valuation; v2(0) is +infinity."""
    if x == 0:
        return math.inf
    return (x & -x).bit_length() - 1


@dataclass(frozen=True)
class GoldPairParams:
    k: int
    a: int
    b: int
    d1: int
    d2: int
    nu: int
    v2k: int
    case: str

    @classmethod
    def of(cls, k, a, b):
        if not 0 <= a < b:
            raise ValueError("need 0 <= a < b")
        d1, d2 = math.gcd(b - a, k), math.gcd(b + a, k)
        nu = max(v2(b - a), v2(b + a))
        vk = v2(k)
        if v2(a) == v2(b) and v2(a) < vk:
            case = "2"
        else:
            case = "1"
        return cls(k, a, b, d1, d2, nu, vk, case)

    @property
    def plain_case2(self):
        """The exceptional case of the u = 1 rule: v2(b-a) = v2(b+a) = v2(k) - 1."""
        return v2(self.b - self.a) == v2(self.b + self.a) == self.v2k - 1


def _l_map(ctx, d, x):
    """L_d(x) = x + x^(2^d) + ... + x^(2^(k/2 - d))."""
    k = ctx.n
    acc = np.zeros(np.shape(x), dtype=np.int64)
    for j in range((k // 2) // d):
        acc = np.asarray(ctx.add(acc, ctx.frobenius(x, j * d)))
    return acc


def _l_composite_nonzero(ctx, prm, x):
    """(L_1 o L_2)(x) != 0, or None when L_i is not well formed."""
    k = ctx.n
    if k % 2 or (k // 2) % prm.d1 or (k // 2) % prm.d2:
        return None
    return _l_map(ctx, prm.d1, _l_map(ctx, prm.d2, x)) != 0


def _outside_s(ctx, prm, x):
    in_s1 = np.asarray(ctx.rel_trace(x, prm.d1)) == 0
    in_s2 = np.asarray(ctx.rel_trace(x, prm.d2)) == 0
    return ~(in_s1 & in_s2)


def _plain_rule(ctx, prm, gamma):
    """Vanishing mask for f = Tr(x^(2^a+1) + x^(2^b+1)) at the points gamma."""
    gamma = np.asarray(gamma, dtype=np.int64)
    if prm.plain_case2:
        m = _l_composite_nonzero(ctx, prm, ctx.add(gamma, 1))
    elif prm.v2k <= prm.nu:
        m = _outside_s(ctx, prm, gamma)
    else:
        m = _l_composite_nonzero(ctx, prm, gamma)
    return np.zeros(gamma.shape, dtype=bool) if m is None else m


@dataclass(frozen=True)
class GoldVerdict:
    verdict: str
    case: str
    beta: int | None = None
    note: str = ""


def find_beta(ctx, d1, a, u):
    """Least beta in GF(2^d1) with beta^(2^a+1) = u, or None."""
    sub = ctx.subfield_elements(d1)
    hits = sub[np.asarray(ctx.pow(sub, 2**a + 1)) == u]
    return int(hits[0]) if len(hits) else None


def gold_pair_mask(ctx, a, b, u):
    """Vectorized predicate: boolean mask over all alpha, True = must vanish.

    Returns ``(mask, GoldVerdict-template)``; the template carries the case
    label and the beta used (if any).
    """
    if ctx.p != 2:
        raise FieldError("Gold-pair rules are for characteristic 2")
    u = int(u.value if isinstance(u, FieldElem) else u)
    prm = GoldPairParams.of(ctx.n, a, b)
    if not ctx.in_subfield(u, prm.d1):
        raise ValueError(f"u must lie in GF(2^{prm.d1})")
    alpha = ctx.elements()
    none = np.zeros(ctx.q, dtype=bool)
    if u == 0:
        return none, GoldVerdict(NO_CLAIM, prm.case, note="u = 0")
    if prm.case == "1":
        beta = find_beta(ctx, prm.d1, a, u)
        if beta is None:
            return none, GoldVerdict(NO_CLAIM, "1", note="no beta with beta^(2^a+1) = u")
        gamma = ctx.div(alpha, beta)
        return _plain_rule(ctx, prm, gamma), GoldVerdict(NO_CLAIM, "1", beta=beta)
    # u^(2^-b) is the inverse Frobenius applied b times
    scale = ctx.frobenius(u, -prm.b)
    gamma = np.asarray(ctx.div(alpha, scale))
    if prm.v2k <= prm.nu:
        mask = _outside_s(ctx, prm, gamma)
    else:
        mask = _l_composite_nonzero(ctx, prm, gamma)
        mask = none if mask is None else mask
    return mask, GoldVerdict(NO_CLAIM, "2")


def gold_pair_vanishing(ctx, a, b, u, alpha):
    """must_vanish if the Gold-pair rules force W_{f_u}(alpha) = 0, else no_claim.

    ``f_u(x) = Tr(u x^(2^a+1) + u x^(2^b+1))`` on GF(2^k), k = ctx.n.
    """
    alpha = int(alpha.value if isinstance(alpha, FieldElem) else alpha)
    mask, tmpl = gold_pair_mask(ctx, a, b, u)
    verdict = MUST_VANISH if mask[alpha] else NO_CLAIM
    return GoldVerdict(verdict, tmpl.case, tmpl.beta, tmpl.note)


def gold_pair_values(ctx, a, b, u):
    """Table of f_u(x) = Tr(u x^(2^a+1) + u x^(2^b+1))."""
    u = int(u.value if isinstance(u, FieldElem) else u)
    x = ctx.elements()
    inner = ctx.add(ctx.pow(x, 2**a + 1), ctx.pow(x, 2**b + 1))
    return np.asarray(ctx.abs_trace(ctx.mul(u, inner)))

"""Table-driven arithmetic in GF(p^n).

Elements are encoded as integers ``sum(c_i * p**i)`` where ``c_i`` is the
coefficient of ``X**i`` in the polynomial basis.  Every arithmetic method
on :class:`FieldCtx` accepts either a Python int or a numpy integer array
and returns the same kind, so the sweep code can work on whole tables at
once while :class:`FieldElem` gives a scalar, operator-based interface.
"""

from __future__ import annotations

import itertools
from functools import cached_property, lru_cache

import numpy as np

MAX_ORDER = 2**20


class FieldError(ValueError):
    pass


class ContextMismatch(FieldError):
    pass


# -- polynomials over GF(p), coefficient lists low -> high ------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        a = _trim(a)
    return a


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(poly)
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(p):
    return p >= 2 and _prime_factors(p) == [p]


def default_modulus(p, n):
    """Lexicographically least monic irreducible of degree ``n``.

    Coefficient vectors ``(c_0, ..., c_{n-1})`` are compared with ``c_0``
    most significant.
    """
    for low in itertools.product(range(p), repeat=n):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


# -- field context ------------------------------------------------------------

class FieldCtx:
    """Immutable description of GF(p^n) with discrete-log tables.

    Use :func:`make_field` rather than instantiating directly; it caches
    contexts so equal parameters yield the same object.
    """

    def __init__(self, p, n, modulus=None):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1:
            raise FieldError("extension degree must be >= 1")
        if p**n > MAX_ORDER:
            raise FieldError(f"field order {p}^{n} exceeds table bound {MAX_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree n")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")

        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = modulus
        self._powers = np.array([p**i for i in range(n)], dtype=np.int64)
        self.g = self._find_primitive()
        self._build_tables()

    # construction helpers

    def _slow_mul(self, a, b):
        p, n = self.p, self.n
        ca, cb = self._coords_int(a), self._coords_int(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, self.modulus, p) if n > 0 else prod
        rem = rem + [0] * (n - len(rem))
        return sum(c * p**i for i, c in enumerate(rem[:n]))

    def _slow_pow(self, a, e):
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    def _coords_int(self, a):
        return [(a // self.p**i) % self.p for i in range(self.n)]

    def _find_primitive(self):
        order = self.q - 1
        if order == 1:
            return 1
        factors = _prime_factors(order)
        for cand in range(2, self.q):
            if all(self._slow_pow(cand, order // r) != 1 for r in factors):
                return cand
        raise FieldError("no primitive element found; modulus is not irreducible")

    def _times_constant_map(self, c, chunk=1 << 15):
        """Index map x -> c*x for every element, computed on coordinates."""
        p, n = self.p, self.n
        cc = self._coords_int(c)
        mod = np.array(self.modulus, dtype=np.int64)
        out = np.empty(self.q, dtype=np.int64)
        for start in range(0, self.q, chunk):
            idx = np.arange(start, min(start + chunk, self.q), dtype=np.int64)
            digits = (idx[:, None] // self._powers[None, :]) % p
            prod = np.zeros((len(idx), 2 * n - 1), dtype=np.int64)
            for j, cj in enumerate(cc):
                if cj:
                    prod[:, j:j + n] += cj * digits
            for k in range(2 * n - 2, n - 1, -1):
                lead = prod[:, k] % p
                prod[:, k - n:k + 1] -= lead[:, None] * mod[None, :]
            out[start:start + len(idx)] = (prod[:, :n] % p) @ self._powers
        return out

    def _build_tables(self):
        q = self.q
        step = self._times_constant_map(self.g).tolist()
        exp = [1] * (q - 1)
        x = 1
        for k in range(1, q - 1):
            x = step[x]
            exp[k] = x
        exp_arr = np.array(exp, dtype=np.int64)
        log_arr = np.full(q, -1, dtype=np.int64)
        log_arr[exp_arr] = np.arange(q - 1, dtype=np.int64)
        if (log_arr[1:] < 0).any():
            raise FieldError("generator orbit does not cover the nonzero elements")
        exp_arr.setflags(write=False)
        log_arr.setflags(write=False)
        self.exp_table = exp_arr
        self.log_table = log_arr

    # identity and description

    @property
    def key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FieldCtx({self.describe()})"

    def describe(self):
        """Field description line ``p,n,c_0,...,c_n``."""
        return ",".join(str(v) for v in (self.p, self.n) + self.modulus)

    @classmethod
    def from_description(cls, line):
        return parse_field(line)

    # element construction

    def elem(self, value):
        return FieldElem(self, value)

    def from_coords(self, coords):
        coords = list(coords)
        if len(coords) > self.n or any(not 0 <= int(c) < self.p for c in coords):
            raise FieldError(f"invalid coordinates {coords} for GF({self.p}^{self.n})")
        return FieldElem(self, sum(int(c) * self.p**i for i, c in enumerate(coords)))

    def gen_power(self, k):
        """The element g^k for the context's primitive element g."""
        return FieldElem(self, int(self.exp_table[k % (self.q - 1)]))

    def coords(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers) % self.p

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    # arithmetic on ints / int arrays

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, 1)

    def sub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._digitwise(a, b, -1)

    def neg(self, a):
        if self.p == 2:
            return a
        return self._digitwise(0, a, -1)

    def _digitwise(self, a, b, sign):
        p = self.p
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a_arr, b_arr).shape, dtype=np.int64)
        for pw in self._powers.tolist():
            da = (a_arr // pw) % p
            db = (b_arr // pw) % p
            out += ((da + sign * db) % p) * pw
        return _like(out, a, b)

    def mul(self, a, b):
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        s = (self.log_table[a_arr] + self.log_table[b_arr]) % (self.q - 1)
        out = np.where((a_arr == 0) | (b_arr == 0), 0, self.exp_table[s])
        return _like(out, a, b)

    def inv(self, a):
        a_arr = np.asarray(a, dtype=np.int64)
        if (a_arr == 0).any():
            raise ZeroDivisionError("inverse of zero in GF(%d^%d)" % (self.p, self.n))
        out = self.exp_table[(-self.log_table[a_arr]) % (self.q - 1)]
        return _like(out, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a**e; exponents reduce mod q-1 on nonzero bases, 0**e = 0 for e > 0."""
        e = int(e)
        a_arr = np.asarray(a, dtype=np.int64)
        if e == 0:
            return _like(np.ones_like(a_arr), a)
        if e < 0:
            a_arr = np.asarray(self.inv(a_arr))
            e = -e
        r = e % (self.q - 1)
        s = (self.log_table[a_arr] * r) % (self.q - 1)
        out = np.where(a_arr == 0, 0, self.exp_table[s])
        return _like(out, a)

    def frobenius(self, a, k=1):
        """a**(p**k), with k taken mod n (negative k gives the inverse map)."""
        k %= self.n
        if k == 0:
            return a
        return self.pow(a, pow(self.p, k, self.q - 1) or (self.q - 1))

    @cached_property
    def abs_trace_table(self):
        t = self.rel_trace(self.elements(), 1)
        if (t >= self.p).any():
            raise FieldError("absolute trace left the prime field; tables are corrupt")
        t = t.astype(np.int64)
        t.setflags(write=False)
        return t

    def abs_trace(self, a):
        out = self.abs_trace_table[np.asarray(a, dtype=np.int64)]
        return _like(out, a)

    def rel_trace(self, a, m):
        """Tr_m^n(a) = sum_{i < n/m} a^(p^(m i))."""
        if m < 1 or self.n % m:
            raise FieldError(f"subfield degree {m} does not divide {self.n}")
        acc = np.asarray(a, dtype=np.int64)
        term = acc
        for _ in range(self.n // m - 1):
            term = np.asarray(self.frobenius(term, m))
            acc = np.asarray(self.add(acc, term))
        return _like(acc, a)

    def in_subfield(self, a, m):
        if m < 1 or self.n % m:
            raise FieldError(f"subfield degree {m} does not divide {self.n}")
        a_arr = np.asarray(a, dtype=np.int64)
        return _like(np.asarray(self.frobenius(a_arr, m)) == a_arr, a)

    def subfield_elements(self, m):
        """Sorted indices of GF(p^m) inside this field."""
        mask = self.in_subfield(self.elements(), m)
        out = np.flatnonzero(mask)
        if len(out) != self.p**m:
            raise FieldError("subfield has the wrong size; tables are corrupt")
        return out

    def is_square(self, a):
        """Squareness in this field (0 counts as a square)."""
        a_arr = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return _like(np.ones(a_arr.shape, dtype=bool), a)
        ok = (a_arr == 0) | (self.log_table[a_arr] % 2 == 0)
        return _like(ok, a)

    @cached_property
    def add_table(self):
        """Full q x q addition table (only built for modest q)."""
        if self.q > 4096:
            raise FieldError("addition table too large for this field")
        x = self.elements()
        t = np.asarray(self.add(x[:, None], x[None, :]))
        t.setflags(write=False)
        return t

    @cached_property
    def neg_table(self):
        t = np.asarray(self.neg(self.elements()))
        t.setflags(write=False)
        return t


def _like(out, *inputs):
    if all(np.ndim(x) == 0 and not isinstance(x, np.ndarray) for x in inputs):
        out = np.asarray(out)
        if out.dtype == bool:
            return bool(out)
        return int(out)
    return out


@lru_cache(maxsize=None)
def _make_field_cached(p, n, modulus):
    return FieldCtx(p, n, modulus)


def make_field(p, n, modulus=None):
    """Build (or fetch the cached) GF(p^n) context."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    return _make_field_cached(int(p), int(n), modulus)


def parse_field(line):
    """Parse ``p,n[,c_0,...,c_n]`` into a field context."""
    try:
        parts = [int(tok) for tok in line.replace(" ", "").split(",") if tok != ""]
    except ValueError as exc:
        raise FieldError(f"bad field description {line!r}") from exc
    if len(parts) < 2:
        raise FieldError(f"bad field description {line!r}")
    p, n, rest = parts[0], parts[1], parts[2:]
    return make_field(p, n, rest or None)


class FieldElem:
    """A single field element bound to its context."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx, value):
        value = int(value)
        if not 0 <= value < ctx.q:
            raise FieldError(f"element index {value} out of range for q={ctx.q}")
        self.ctx = ctx
        self.value = value

    @property
    def coeffs(self):
        return tuple(int(c) for c in self.ctx.coords(self.value))

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ContextMismatch("elements belong to different fields")
            return other.value
        if isinstance(other, (int, np.integer)) and 0 <= int(other) < self.ctx.p:
            return int(other)
        return NotImplemented

    def _wrap(self, v):
        return FieldElem(self.ctx, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(self.value, o))

    def __pow__(self, e):
        return self._wrap(self.ctx.pow(self.value, e))

    def inv(self):
        return self._wrap(self.ctx.inv(self.value))

    def trace(self):
        return self.ctx.abs_trace(self.value)

    def rel_trace(self, m):
        return self._wrap(self.ctx.rel_trace(self.value, m))

    def log(self):
        if self.value == 0:
            raise ZeroDivisionError("log of zero")
        return int(self.ctx.log_table[self.value])

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElem({list(self.coeffs)})"

    def __str__(self):
        if self.value == 0:
            return "0"
        return f"g^{self.log()}"

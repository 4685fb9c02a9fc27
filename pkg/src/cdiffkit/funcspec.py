"""Symbolic functions GF(p^n) -> GF(p^n) and their compiled value tables.

A :class:`FuncSpec` is a small expression tree.  Leaves are the variable
``X`` and field constants; the interior node kinds mirror the shapes that
occur in the permutation families: scaled monomials, scaled powers of a
trace expression, and scaled powers of an arbitrary sub-expression.  Trees
are evaluated on whole numpy arrays of element indices, so compiling to a
:class:`ValueTable` is a single vectorized pass.

Textual grammar (whitespace-insensitive)::

    expr     := ["+" | "-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := primary ["^" exponent]
    primary  := "X" | "g" | INT | "[" INT ("," INT)* "]" | NAME
              | "Tr" ["_" INT ["^" INT]] "(" expr ")" | "(" expr ")"
    exponent := INT | "pm" | NAME | "{" intexpr "}" | "(" intexpr ")"
    intexpr  := integer arithmetic with + - * ^ ( ), INT, "p", "pm" and bound names

``INT`` as a primary is a prime-field constant (``0 <= INT < p``); wider
constants are written ``g^k`` or as a coordinate vector ``[c_0,c_1,...]``.
``NAME`` is looked up in the bindings passed to :func:`parse_func` (field
elements for primaries, integers inside exponents); ``pm`` means ``p**m``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .gf import ContextMismatch, FieldCtx, FieldElem, FieldError


class SpecError(ValueError):
    pass


# -- expression nodes ---------------------------------------------------------

class Node:
    def evaluate(self, ctx, xs):
        raise NotImplementedError

    def render(self, ctx):
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Node):
    value: int

    def evaluate(self, ctx, xs):
        return np.full(np.shape(xs), self.value, dtype=np.int64)

    def render(self, ctx):
        return _render_const(ctx, self.value)


@dataclass(frozen=True)
class Monomial(Node):
    coef: int
    exponent: int

    def evaluate(self, ctx, xs):
        return np.asarray(ctx.mul(self.coef, ctx.pow(xs, self.exponent)))

    def render(self, ctx):
        body = "X" if self.exponent == 1 else f"X^{self.exponent}"
        return _scaled(ctx, self.coef, body)


@dataclass(frozen=True)
class TracePower(Node):
    """coef * Tr_m^n(inner)^exponent."""

    coef: int
    inner: Node
    m: int
    exponent: int = 1

    def evaluate(self, ctx, xs):
        t = ctx.rel_trace(self.inner.evaluate(ctx, xs), self.m)
        if self.exponent != 1:
            t = ctx.pow(t, self.exponent)
        return np.asarray(ctx.mul(self.coef, t))

    def render(self, ctx):
        body = f"Tr_{self.m}({self.inner.render(ctx)})"
        if self.exponent != 1:
            body += f"^{self.exponent}"
        return _scaled(ctx, self.coef, body)


@dataclass(frozen=True)
class CompositePower(Node):
    """coef * base^exponent with the exponent kept exactly as written."""

    coef: int
    base: Node
    exponent: int

    def __post_init__(self):
        if self.exponent <= 0:
            raise SpecError("composite power needs a positive exponent (0^0 is undefined)")

    def evaluate(self, ctx, xs):
        return np.asarray(ctx.mul(self.coef, ctx.pow(self.base.evaluate(ctx, xs), self.exponent)))

    def render(self, ctx):
        return _scaled(ctx, self.coef, f"({self.base.render(ctx)})^{self.exponent}")


@dataclass(frozen=True)
class Product(Node):
    factors: tuple

    def evaluate(self, ctx, xs):
        acc = self.factors[0].evaluate(ctx, xs)
        for f in self.factors[1:]:
            acc = np.asarray(ctx.mul(acc, f.evaluate(ctx, xs)))
        return acc

    def render(self, ctx):
        return "*".join(_paren(f.render(ctx)) for f in self.factors)


@dataclass(frozen=True)
class Sum(Node):
    terms: tuple

    def evaluate(self, ctx, xs):
        acc = np.zeros(np.shape(xs), dtype=np.int64)
        for t in self.terms:
            acc = np.asarray(ctx.add(acc, t.evaluate(ctx, xs)))
        return acc

    def render(self, ctx):
        return " + ".join(t.render(ctx) for t in self.terms) if self.terms else "0"


def _render_const(ctx, v):
    if v < ctx.p:
        return str(v)
    return f"g^{int(ctx.log_table[v])}"


def _scaled(ctx, coef, body):
    if coef == 1:
        return body
    return f"{_render_const(ctx, coef)}*{body}"


def _paren(s):
    return f"({s})" if "+" in s else s


# -- building blocks ----------------------------------------------------------

def _reduce_exponent(q, e):
    e = int(e)
    if e <= 0:
        raise SpecError("monomial exponents must be positive")
    return (e - 1) % (q - 1) + 1


def _scale(ctx, node, coef):
    if coef == 1:
        return node
    if coef == 0:
        return Const(0)
    if isinstance(node, Const):
        return Const(ctx.mul(coef, node.value))
    if isinstance(node, Monomial):
        return Monomial(ctx.mul(coef, node.coef), node.exponent)
    if isinstance(node, TracePower):
        return TracePower(ctx.mul(coef, node.coef), node.inner, node.m, node.exponent)
    if isinstance(node, CompositePower):
        return CompositePower(ctx.mul(coef, node.coef), node.base, node.exponent)
    if isinstance(node, Sum):
        return Sum(tuple(_scale(ctx, t, coef) for t in node.terms))
    return Product((Const(coef), node))


def _power(ctx, node, e):
    e = int(e)
    if e == 1:
        return node
    if isinstance(node, Const):
        if e < 0 and node.value == 0:
            raise SpecError("negative power of zero constant")
        return Const(ctx.pow(node.value, e))
    if e <= 0:
        raise SpecError("non-constant expressions need positive exponents")
    if isinstance(node, Monomial) and node.coef == 1:
        return Monomial(1, _reduce_exponent(ctx.q, node.exponent * e))
    if isinstance(node, TracePower) and node.coef == 1 and node.exponent == 1:
        return TracePower(1, node.inner, node.m, e)
    return CompositePower(1, node, e)


def _product(ctx, nodes):
    coef = 1
    rest = []
    for nd in nodes:
        if isinstance(nd, Const):
            coef = ctx.mul(coef, nd.value)
        else:
            rest.append(nd)
    if not rest:
        return Const(coef)
    if len(rest) == 1:
        return _scale(ctx, rest[0], coef)
    node = Product(tuple(rest))
    return _scale(ctx, node, coef)


# -- public spec / table types ------------------------------------------------

@dataclass(frozen=True)
class FuncSpec:
    """A function on one field, stored as an expression tree."""

    ctx: FieldCtx
    root: Node

    def __post_init__(self):
        _check_consts(self.ctx, self.root)

    def eval(self, x):
        if isinstance(x, FieldElem):
            if x.ctx != self.ctx:
                raise ContextMismatch("argument lives in a different field")
            return FieldElem(self.ctx, int(self.root.evaluate(self.ctx, np.int64(x.value))))
        xs = np.asarray(x, dtype=np.int64)
        if xs.size and (xs.min() < 0 or xs.max() >= self.ctx.q):
            raise FieldError("element index out of range")
        return self.root.evaluate(self.ctx, xs)

    def compile(self):
        values = np.asarray(self.root.evaluate(self.ctx, self.ctx.elements()), dtype=np.int64)
        return ValueTable(self.ctx, values)

    def __add__(self, other):
        if not isinstance(other, FuncSpec):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch("cannot add functions over different fields")
        return FuncSpec(self.ctx, Sum(_terms(self.root) + _terms(other.root)))

    def scaled(self, coef):
        return FuncSpec(self.ctx, _scale(self.ctx, self.root, _value(self.ctx, coef)))

    def power(self, e):
        return FuncSpec(self.ctx, _power(self.ctx, self.root, e))

    def __str__(self):
        return self.root.render(self.ctx)


def _terms(node):
    return node.terms if isinstance(node, Sum) else (node,)


def _check_consts(ctx, node):
    vals = []
    if isinstance(node, Const):
        vals.append(node.value)
    elif isinstance(node, (Monomial, TracePower, CompositePower)):
        vals.append(node.coef)
    if any(not 0 <= int(v) < ctx.q for v in vals):
        raise FieldError("constant outside the field")
    for child in _children(node):
        _check_consts(ctx, child)


def _children(node):
    if isinstance(node, TracePower):
        return (node.inner,)
    if isinstance(node, CompositePower):
        return (node.base,)
    if isinstance(node, (Sum, Product)):
        return node.terms if isinstance(node, Sum) else node.factors
    return ()


def _value(ctx, c):
    if isinstance(c, FieldElem):
        if c.ctx != ctx:
            raise ContextMismatch("coefficient lives in a different field")
        return c.value
    return int(c)


def identity(ctx):
    return FuncSpec(ctx, Monomial(1, 1))


def constant(ctx, value):
    return FuncSpec(ctx, Const(_value(ctx, value)))


def monomial(ctx, exponent, coef=1):
    return FuncSpec(ctx, _scale(ctx, Monomial(1, _reduce_exponent(ctx.q, exponent)), _value(ctx, coef)))


def trace_power(inner, m, exponent=1, coef=1):
    ctx = inner.ctx
    if m < 1 or ctx.n % m:
        raise FieldError(f"subfield degree {m} does not divide {ctx.n}")
    return FuncSpec(ctx, TracePower(_value(ctx, coef), inner.root, m, int(exponent)))


def composite_power(base, exponent, coef=1):
    ctx = base.ctx
    return FuncSpec(ctx, CompositePower(_value(ctx, coef), base.root, int(exponent)))


def sum_of(*specs):
    out = specs[0]
    for s in specs[1:]:
        out = out + s
    return out


@dataclass(frozen=True)
class ValueTable:
    """Compiled function: ``values[i]`` is F at the element with index i."""

    ctx: FieldCtx
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        if v.shape != (self.ctx.q,):
            raise SpecError(f"value table must have exactly {self.ctx.q} entries")
        if v.size and (v.min() < 0 or v.max() >= self.ctx.q):
            raise SpecError("value table entry outside the field")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return int(self.values[int(i)])

    def is_permutation(self):
        return is_permutation(self)

    def inverse(self):
        ok, witness = is_permutation(self)
        if not ok:
            raise SpecError(f"not a permutation: F({witness[0]}) = F({witness[1]})")
        inv = np.empty_like(self.values)
        inv[self.values] = np.arange(len(self.values))
        return ValueTable(self.ctx, inv)


def is_permutation(table):
    """Return ``(True, None)`` or ``(False, (x1, x2))`` with F(x1) = F(x2)."""
    v = table.values
    order = np.argsort(v, kind="stable")
    dup = np.flatnonzero(v[order][1:] == v[order][:-1])
    if dup.size == 0:
        return True, None
    i = dup[0]
    return False, (int(order[i]), int(order[i + 1]))


def table_from_values(ctx, values):
    return ValueTable(ctx, np.asarray(values, dtype=np.int64))


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif sym.strip():
            out.append(("sym", sym))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, ctx, text, bindings):
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0
        self.bindings = dict(bindings or {})

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            raise SpecError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def accept(self, sym):
        if self.peek() == ("sym", sym):
            self.i += 1
            return True
        return False

    def parse(self):
        node = self.expr()
        self.take("end")
        return node

    def expr(self):
        terms = []
        sign = -1 if self.accept("-") else (self.accept("+") and 1) or 1
        terms.append(self._signed(self.term(), sign))
        while True:
            if self.accept("+"):
                terms.append(self.term())
            elif self.accept("-"):
                terms.append(self._signed(self.term(), -1))
            else:
                break
        if len(terms) == 1:
            return terms[0]
        flat = []
        for t in terms:
            flat.extend(_terms(t))
        return Sum(tuple(flat))

    def _signed(self, node, sign):
        if sign == 1:
            return node
        return _scale(self.ctx, node, self.ctx.neg(1))

    def term(self):
        factors = [self.factor()]
        while self.accept("*"):
            factors.append(self.factor())
        return _product(self.ctx, factors)

    def factor(self):
        base = self.primary()
        if self.accept("^"):
            e = self.exponent()
            base = _power(self.ctx, base, e)
        return base

    def primary(self):
        kind, val = self.peek()
        ctx = self.ctx
        if kind == "sym" and val == "(":
            self.take()
            node = self.expr()
            self.take("sym", ")")
            return node
        if kind == "sym" and val == "[":
            self.take()
            coords = [self.take("int")[1]]
            while self.accept(","):
                coords.append(self.take("int")[1])
            self.take("sym", "]")
            return Const(ctx.from_coords(coords).value)
        if kind == "int":
            self.take()
            if val >= ctx.p:
                raise SpecError(f"integer constant {val} is not in GF({ctx.p}); use g^k or [coords]")
            return Const(val)
        if kind == "name":
            self.take()
            if val in ("X", "x"):
                return Monomial(1, 1)
            if val == "g":
                return Const(ctx.gen_power(1).value)
            if val in ("Tr", "tr"):
                return self.trace()
            if val in self.bindings:
                return Const(_value(ctx, self.bindings[val]))
            raise SpecError(f"unknown name {val!r}")
        raise SpecError(f"unexpected token {val!r}")

    def trace(self):
        m = 1
        if self.accept("_"):
            m = self.take("int")[1]
            if self.accept("^"):
                top = self.take("int")[1]
                if top != self.ctx.n:
                    raise SpecError(f"trace target degree {top} != field degree {self.ctx.n}")
        if self.ctx.n % m:
            raise SpecError(f"trace subfield degree {m} does not divide {self.ctx.n}")
        self.take("sym", "(")
        inner = self.expr()
        self.take("sym", ")")
        return TracePower(1, inner, m, 1)

    def exponent(self):
        kind, val = self.peek()
        if kind == "sym" and val == "-":
            self.take()
            return -self.exponent()
        if kind == "sym" and val in "{(":
            close = "}" if val == "{" else ")"
            self.take()
            v = self.int_expr()
            self.take("sym", close)
            return v
        if kind == "int":
            self.take()
            return val
        if kind == "name":
            self.take()
            return self._int_name(val)
        raise SpecError(f"bad exponent token {val!r}")

    def _int_name(self, name):
        if name == "p":
            return self.ctx.p
        if name == "q":
            return self.ctx.q
        if name == "n":
            return self.ctx.n
        if name == "pm":
            return self.ctx.p ** int(self._int_name("m"))
        if name in self.bindings and isinstance(self.bindings[name], int):
            return self.bindings[name]
        raise SpecError(f"unknown integer name {name!r}")

    # integer arithmetic inside exponents
    def int_expr(self):
        v = self.int_term()
        while True:
            if self.accept("+"):
                v += self.int_term()
            elif self.accept("-"):
                v -= self.int_term()
            else:
                return v

    def int_term(self):
        v = self.int_factor()
        while self.accept("*"):
            v *= self.int_factor()
        return v

    def int_factor(self):
        base = self.int_atom()
        if self.accept("^"):
            return base ** self.int_factor()
        return base

    def int_atom(self):
        kind, val = self.peek()
        if self.accept("("):
            v = self.int_expr()
            self.take("sym", ")")
            return v
        if self.accept("-"):
            return -self.int_atom()
        if kind == "int":
            self.take()
            return val
        if kind == "name":
            self.take()
            return self._int_name(val)
        raise SpecError(f"bad integer expression token {val!r}")


def parse_func(ctx, text, **bindings):
    """Parse the textual grammar into a :class:`FuncSpec` over ``ctx``."""
    return FuncSpec(ctx, _Parser(ctx, text, bindings).parse())


def parse_element(ctx, text):
    """Parse a constant such as ``g^43``, ``[1,0,1]`` or ``2``."""
    node = _Parser(ctx, text, {}).parse()
    if not isinstance(node, Const):
        raise SpecError(f"{text!r} is not a constant")
    return FieldElem(ctx, node.value)

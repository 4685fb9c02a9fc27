"""The five permutation families and their parameter conditions.

Every builder returns a :class:`FamilyInstance` even when the conditions
on ``delta`` fail, so callers can sweep all of GF(p^n) and filter on
``instance.passes``.  Only structural errors (bad ``m``, wrong field)
raise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cubic import p_n_eval
from .funcspec import FuncSpec, composite_power, identity, parse_func, sum_of
from .gf import FieldElem, FieldError, make_field


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    evidence: str = ""
    gating: bool = True

    def to_dict(self):
        return {"name": self.name, "holds": self.holds, "evidence": self.evidence, "gating": self.gating}


@dataclass(frozen=True)
class FamilyInstance:
    family_id: str
    m: int
    delta: int
    spec: FuncSpec
    exponents: tuple
    precond_report: tuple

    @property
    def ctx(self):
        return self.spec.ctx

    @property
    def passes(self):
        """True when the permutation conditions on delta hold."""
        return all(c.holds for c in self.precond_report if c.gating)

    def condition(self, name):
        for c in self.precond_report:
            if c.name == name:
                return c.holds
        raise KeyError(name)

    def to_dict(self):
        return {
            "family": self.family_id,
            "m": self.m,
            "field": self.ctx.describe(),
            "delta": self.delta,
            "spec": str(self.spec),
            "exponents": list(self.exponents),
            "preconditions": [c.to_dict() for c in self.precond_report],
            "passes": self.passes,
        }


def _field_and_delta(p, n, delta, ctx):
    ctx = ctx or make_field(p, n)
    if ctx.p != p or ctx.n != n:
        raise FieldError(f"family needs GF({p}^{n}), got GF({ctx.p}^{ctx.n})")
    if isinstance(delta, FieldElem):
        if delta.ctx != ctx:
            raise FieldError("delta lives in a different field")
        delta = delta.value
    delta = int(delta)
    if not 0 <= delta < ctx.q:
        raise FieldError("delta outside the field")
    return ctx, delta


def _trinomial(ctx, m, delta, minus=False):
    """X^(p^m) + X + delta  (or X^(p^m) - X + delta)."""
    sign = "-" if minus else "+"
    return parse_func(ctx, f"X^pm {sign} X + d", m=m, d=delta)


def _power_sum(ctx, m, delta, exponents, minus=False):
    base = _trinomial(ctx, m, delta, minus)
    return sum_of(*[composite_power(base, e) for e in exponents], identity(ctx))


def zh31_exponent(m):
    return 2 ** (2 * m - 2) + 2 ** (m - 2) + 1


def zh21_exponent(m):
    return 3 * 2 ** (2 * m - 2) + 2 ** (m - 2)


def wbz31_exponent(m):
    return 3 * 2 ** (m - 2) + 2 ** (2 * m - 2)


def lwc8_exponents(m):
    return (2 ** (2 * m + 1) + 2**m, 2 ** (2 * m) + 2 ** (m + 1))


def lwc10_exponents(m):
    return (3**m + 4, 5)


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)


def zh31_conditions(ctx, m, delta):
    in_sub = bool(ctx.in_subfield(delta, m))
    tr_ok = ctx.abs_trace(delta) == m % 2
    if in_sub:
        pm_ok, pm_evidence = False, "delta in subfield"
    else:
        t = ctx.rel_trace(delta, m)
        pm_val = p_n_eval(ctx, m, ctx.inv(t))
        pm_ok, pm_evidence = pm_val != 0, f"p_m((delta+delta^(2^m))^-1) = {pm_val}"
    return (
        Condition("delta in GF(2^m)", in_sub),
        Condition(
            "delta outside GF(2^m), Tr(delta) = Tr_1^m(1), p_m((delta+delta^(2^m))^-1) != 0",
            (not in_sub) and tr_ok and pm_ok,
            f"Tr(delta)={ctx.abs_trace(delta)}, Tr_1^m(1)={m % 2}; {pm_evidence}",
        ),
    )


def build_zh31(m, delta, ctx=None):
    """(X^(2^m) + X + delta)^(2^(2m-2) + 2^(m-2) + 1) + X over GF(2^(2m))."""
    _need(m >= 2, "ZH31 needs m >= 2")
    ctx, delta = _field_and_delta(2, 2 * m, delta, ctx)
    e = zh31_exponent(m)
    branch1, branch2 = zh31_conditions(ctx, m, delta)
    either = Condition("delta condition", branch1.holds or branch2.holds,
                       "subfield branch" if branch1.holds else ("trace/p_m branch" if branch2.holds else "neither branch"))
    return FamilyInstance("ZH31", m, delta, _power_sum(ctx, m, delta, (e,)), (e,),
                          (either, _info(branch1), _info(branch2)))


def _info(cond):
    return Condition(cond.name, cond.holds, cond.evidence, gating=False)


def build_zh21(m, delta, ctx=None):
    """(X^(2^m) + X + delta)^(3*2^(2m-2) + 2^(m-2)) + X over GF(2^(2m))."""
    _need(m >= 2, "ZH21 needs m >= 2")
    _need(m % 3 != 0, "ZH21 needs m not divisible by 3")
    ctx, delta = _field_and_delta(2, 2 * m, delta, ctx)
    e = zh21_exponent(m)
    return FamilyInstance("ZH21", m, delta, _power_sum(ctx, m, delta, (e,)), (e,), ())


def build_wbz31(m, delta, ctx=None):
    """(X^(2^m) + X + delta)^(3*2^(m-2) + 2^(2m-2)) + X over GF(2^(2m))."""
    _need(m >= 2, "WBZ31 needs m >= 2")
    _need(m % 3 != 0, "WBZ31 needs m not divisible by 3")
    ctx, delta = _field_and_delta(2, 2 * m, delta, ctx)
    e = wbz31_exponent(m)
    return FamilyInstance("WBZ31", m, delta, _power_sum(ctx, m, delta, (e,)), (e,), ())


def build_lwc8(m, delta, ctx=None):
    """Two-power binomial in X^(2^m) + X + delta over GF(2^(3m))."""
    _need(m >= 1, "LWC8 needs m >= 1")
    ctx, delta = _field_and_delta(2, 3 * m, delta, ctx)
    es = lwc8_exponents(m)
    tr = ctx.rel_trace(delta, m)
    cond = Condition("Tr_m^3m(delta) = 0", tr == 0, f"Tr_m^3m(delta) = {tr}")
    return FamilyInstance("LWC8", m, delta, _power_sum(ctx, m, delta, es), es, (cond,))


def lwc10_square_value(ctx, m, delta):
    """1 - Tr_m^(2m)(delta)^4, an element of GF(3^m)."""
    return ctx.sub(1, ctx.pow(ctx.rel_trace(delta, m), 4))


def is_subfield_square(ctx, m, s, nonzero):
    if s == 0:
        return not nonzero
    return ctx.pow(s, (3**m - 1) // 2) == 1


def build_lwc10(m, delta, ctx=None):
    """(X^(3^m) - X + delta)^(3^m+4) + (X^(3^m) - X + delta)^5 + X over GF(3^(2m)).

    Two squareness conditions are recorded: square in GF(3^m) (zero
    allowed), which gates ``passes``, and nonzero square.
    """
    _need(m >= 1, "LWC10 needs m >= 1")
    ctx, delta = _field_and_delta(3, 2 * m, delta, ctx)
    es = lwc10_exponents(m)
    s = lwc10_square_value(ctx, m, delta)
    lemma = Condition("1 - Tr_m^2m(delta)^4 square in GF(3^m)", is_subfield_square(ctx, m, s, False),
                      f"value = {s}")
    theorem = Condition("1 - Tr_m^2m(delta)^4 nonzero square in GF(3^m)",
                        is_subfield_square(ctx, m, s, True), f"value = {s}", gating=False)
    return FamilyInstance("LWC10", m, delta, _power_sum(ctx, m, delta, es, minus=True), es,
                          (lemma, theorem))


BUILDERS = {
    "ZH31": build_zh31,
    "ZH21": build_zh21,
    "WBZ31": build_wbz31,
    "LWC8": build_lwc8,
    "LWC10": build_lwc10,
}

FIELD_SHAPE = {
    "ZH31": (2, 2),
    "ZH21": (2, 2),
    "WBZ31": (2, 2),
    "LWC8": (2, 3),
    "LWC10": (3, 2),
}


def build(family_id, m, delta, ctx=None):
    try:
        builder = BUILDERS[family_id.upper()]
    except KeyError:
        raise ValueError(f"unknown family {family_id!r}; choose from {sorted(BUILDERS)}") from None
    return builder(m, delta, ctx)


def family_field(family_id, m):
    p, mult = FIELD_SHAPE[family_id.upper()]
    return make_field(p, mult * m)


def instances(family_id, m, ctx=None):
    """One instance per delta in the family's field, in index order."""
    ctx = ctx or family_field(family_id, m)
    return [build(family_id, m, d, ctx) for d in range(ctx.q)]


def qualifying_deltas(family_id, m, ctx=None):
    return np.array([inst.delta for inst in instances(family_id, m, ctx) if inst.passes], dtype=np.int64)

"""Formal Bessel expressions and their rewrite normal form.

A :class:`BesselExpr` is a finite sum ``sum c_{k,m}(x) theta^m J_{alpha0+k}(x)``
where ``theta = x d/dx``, ``alpha0`` is a symbolic base order (a
:class:`CoeffPoly`, e.g. ``-i*sigma``) and each coefficient is a Laurent
polynomial in ``x`` whose coefficients are :class:`CoeffPoly`.

Rewrite rules, all exact:

* R1  ``theta J_b = -b J_b + x J_{b-1}``      (i.e. ``(theta + b) J_b = x J_{b-1}``)
* R2  ``theta J_b = +b J_b - x J_{b+1}``      (i.e. ``(theta - b) J_b = -x J_{b+1}``)
* R3  ``x J_{b+1} + x J_{b-1} = 2 b J_b``, used directionally to move every
  order into the window ``{alpha0, alpha0 + 1}``.

The normal form has no derivatives and only shifts 0 and 1. Since
``J_{alpha0}`` and ``J_{alpha0+1}`` are independent over rational functions of
``x``, an expression vanishes identically iff its normal form is empty.
"""
from __future__ import annotations

import random
from math import comb
from typing import Dict, Mapping, Optional, Tuple

from .ring import ONE_MONO, CoeffPoly

XPoly = Dict[int, CoeffPoly]
Key = Tuple[int, int]  # (order shift, number of theta applications)


def _xpoly_add(p: Mapping[int, CoeffPoly], q: Mapping[int, CoeffPoly]) -> XPoly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out[e] + c if e in out else c
    return {e: c for e, c in out.items() if c}


def _xpoly_scale(p: Mapping[int, CoeffPoly], c: CoeffPoly, shift: int = 0) -> XPoly:
    return {e + shift: v * c for e, v in p.items() if v * c}


def order_shift(order: CoeffPoly, base: CoeffPoly) -> int:
    """Integer ``k`` with ``order == base + k``; raises if the difference is not an integer."""
    diff = CoeffPoly.lift(order) - CoeffPoly.lift(base)
    if diff.is_zero():
        return 0
    if set(diff.terms) != {ONE_MONO}:
        raise ValueError(f"orders differ by a non-constant: {diff}")
    (c,) = diff.terms.values()
    if c.im or c.re.denominator != 1:
        raise ValueError(f"orders differ by a non-integer: {c}")
    return int(c.re)


class BesselExpr:
    __slots__ = ("base", "terms")

    def __init__(self, base, terms: Optional[Mapping[Key, Mapping[int, CoeffPoly]]] = None):
        self.base = CoeffPoly.lift(base)
        clean: Dict[Key, XPoly] = {}
        for key, poly in (terms or {}).items():
            poly = {e: CoeffPoly.lift(c) for e, c in poly.items() if CoeffPoly.lift(c)}
            if poly:
                clean[key] = _xpoly_add(clean.get(key, {}), poly)
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @classmethod
    def J(cls, base, order=None, *, coeff=1, xpow: int = 0, deriv: int = 0) -> "BesselExpr":
        """``coeff * x**xpow * theta**deriv J_order`` with ``order`` defaulting to ``base``."""
        base = CoeffPoly.lift(base)
        k = 0 if order is None else order_shift(order, base)
        return cls(base, {(k, deriv): {xpow: CoeffPoly.lift(coeff)}})

    def _check(self, other: "BesselExpr") -> None:
        if self.base != other.base:
            raise ValueError("Bessel expressions over different base orders")

    def __add__(self, other: "BesselExpr") -> "BesselExpr":
        self._check(other)
        out = dict(self.terms)
        for key, poly in other.terms.items():
            out[key] = _xpoly_add(out.get(key, {}), poly)
        return BesselExpr(self.base, out)

    def __neg__(self) -> "BesselExpr":
        return self.scale(CoeffPoly.const(-1))

    def __sub__(self, other: "BesselExpr") -> "BesselExpr":
        return self + (-other)

    def scale(self, c, xpow: int = 0) -> "BesselExpr":
        """Multiply by ``c * x**xpow``."""
        c = CoeffPoly.lift(c)
        return BesselExpr(self.base, {k: _xpoly_scale(p, c, xpow) for k, p in self.terms.items()})

    def theta(self) -> "BesselExpr":
        """Apply ``x d/dx``: ``theta(x^p F) = x^p (p + theta) F``."""
        out: Dict[Key, XPoly] = {}
        for (k, m), poly in self.terms.items():
            weighted = {e: c * e for e, c in poly.items() if e}
            out[(k, m)] = _xpoly_add(out.get((k, m), {}), weighted)
            out[(k, m + 1)] = _xpoly_add(out.get((k, m + 1), {}), poly)
        return BesselExpr(self.base, out)

    def order(self, shift: int) -> CoeffPoly:
        return self.base + shift

    def is_zero(self) -> bool:
        return not self.terms

    def is_normal(self) -> bool:
        return all(m == 0 and k in (0, 1) for k, m in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BesselExpr):
            return NotImplemented
        return self.base == other.base and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (k, m), poly in sorted(self.terms.items()):
            coeff = " + ".join(f"({c})*x^{e}" for e, c in sorted(poly.items()))
            d = f"theta^{m} " if m else ""
            parts.append(f"[{coeff}] {d}J[base{k:+d}]")
        return " + ".join(parts)


def _apply_derivative_rule(expr_terms: Dict[Key, XPoly], key: Key, base: CoeffPoly, rule: str) -> None:
    """Lower theta^m J_b (m >= 1) by one R1 or R2 step, in place."""
    k, m = key
    poly = expr_terms.pop(key)
    order = base + k
    if rule == "R1":
        sign, nk, lin = CoeffPoly.const(-1), k - 1, CoeffPoly.const(1)
    else:
        sign, nk, lin = CoeffPoly.const(1), k + 1, CoeffPoly.const(-1)
    updates = [((k, m - 1), _xpoly_scale(poly, sign * order))]
    # theta^{m-1} (x F) = x (theta + 1)^{m-1} F
    for j in range(m):
        updates.append(((nk, j), _xpoly_scale(poly, lin * comb(m - 1, j), 1)))
    for ukey, upoly in updates:
        merged = _xpoly_add(expr_terms.get(ukey, {}), upoly)
        if merged:
            expr_terms[ukey] = merged
        else:
            expr_terms.pop(ukey, None)


def _apply_recurrence(expr_terms: Dict[Key, XPoly], key: Key, base: CoeffPoly) -> None:
    """Move a derivative-free J_{base+k} one step toward the window {0, 1}."""
    k, m = key
    poly = expr_terms.pop(key)
    if k > 1:
        # J_{c+1} = (2c/x) J_c - J_{c-1} with c = base + k - 1
        c = base + (k - 1)
        updates = [((k - 1, 0), _xpoly_scale(poly, c * 2, -1)), ((k - 2, 0), _xpoly_scale(poly, CoeffPoly.const(-1)))]
    else:
        # J_{c-1} = (2c/x) J_c - J_{c+1} with c = base + k + 1
        c = base + (k + 1)
        updates = [((k + 1, 0), _xpoly_scale(poly, c * 2, -1)), ((k + 2, 0), _xpoly_scale(poly, CoeffPoly.const(-1)))]
    for ukey, upoly in updates:
        merged = _xpoly_add(expr_terms.get(ukey, {}), upoly)
        if merged:
            expr_terms[ukey] = merged
        else:
            expr_terms.pop(ukey, None)


def rewrite_bessel(expr: BesselExpr, rng: Optional[random.Random] = None, max_steps: int = 100_000) -> BesselExpr:
    """Normal form of ``expr`` under R1/R2/R3.

    With ``rng`` the redex and the choice between R1 and R2 are drawn at
    random; the result does not depend on these choices.
    """
    terms: Dict[Key, XPoly] = {k: dict(v) for k, v in expr.terms.items()}
    base = expr.base
    for _ in range(max_steps):
        redexes = [key for key in terms if key[1] > 0 or key[0] not in (0, 1)]
        if not redexes:
            return BesselExpr(base, terms)
        if rng is None:
            deriv = [key for key in redexes if key[1] > 0]
            key = max(deriv, key=lambda t: (t[1], -abs(t[0]))) if deriv else max(redexes, key=lambda t: abs(t[0] - 0.5))
            rule = "R1"
        else:
            key = rng.choice(sorted(redexes))
            rule = rng.choice(("R1", "R2"))
        if key[1] > 0:
            _apply_derivative_rule(terms, key, base, rule)
        else:
            _apply_recurrence(terms, key, base)
    raise RuntimeError("Bessel rewriting did not terminate")

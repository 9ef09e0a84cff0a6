"""Exact coefficient arithmetic.

Coefficients live in a Laurent polynomial ring over the Gaussian rationals
Q(i). The generators are the mode symbols ``sigma, E, M, a, b, gamma`` and a
dedicated generator ``ez`` standing for e^z, so that e^{kz} is the monomial
``ez**k``. Everything is kept in canonical form: no zero coefficients stored.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

SYMBOLS: Tuple[str, ...] = ("sigma", "E", "M", "a", "b", "gamma")
EXP = "ez"
GENERATORS: Tuple[str, ...] = SYMBOLS + (EXP,)
_INDEX = {name: i for i, name in enumerate(GENERATORS)}
_NGEN = len(GENERATORS)

Monomial = Tuple[int, ...]
ONE_MONO: Monomial = (0,) * _NGEN


class GaussQ:
    """Gaussian rational ``re + i*im`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussQ":
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (Rational, float)):
            return cls(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} to GaussQ")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            other = GaussQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, other) -> "GaussQ":
        other = GaussQ.coerce(other)
        return GaussQ(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussQ":
        return GaussQ(-self.re, -self.im)

    def __sub__(self, other) -> "GaussQ":
        return self + (-GaussQ.coerce(other))

    def __rsub__(self, other) -> "GaussQ":
        return GaussQ.coerce(other) - self

    def __mul__(self, other) -> "GaussQ":
        other = GaussQ.coerce(other)
        return GaussQ(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def __truediv__(self, other) -> "GaussQ":
        other = GaussQ.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussQ(num.re / norm, num.im / norm)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*I"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*I)"


I_UNIT = GaussQ(0, 1)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(m1, m2))


def _is_scalar(value) -> bool:
    return isinstance(value, (CoeffPoly, GaussQ, Rational, float, complex))


class CoeffPoly:
    """Sparse Laurent polynomial in the mode symbols and e^z.

    Instances are treated as immutable. ``terms`` maps exponent tuples
    (ordered as :data:`GENERATORS`) to nonzero :class:`GaussQ` coefficients.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, GaussQ] | None = None):
        clean: Dict[Monomial, GaussQ] = {}
        if terms:
            for mono, c in terms.items():
                c = GaussQ.coerce(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, value) -> "CoeffPoly":
        return cls({ONE_MONO: GaussQ.coerce(value)})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "CoeffPoly":
        mono = [0] * _NGEN
        mono[_INDEX[name]] = power
        return cls({tuple(mono): GaussQ(1)})

    @classmethod
    def exp(cls, k: int) -> "CoeffPoly":
        """The factor e^{kz}."""
        return cls.symbol(EXP, k)

    @classmethod
    def lift(cls, value) -> "CoeffPoly":
        if isinstance(value, CoeffPoly):
            return value
        return cls.const(value)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def exp_degrees(self) -> Iterable[int]:
        return sorted({m[-1] for m in self.terms})

    def free_symbols(self) -> set:
        return {GENERATORS[i] for m in self.terms for i, e in enumerate(m) if e}

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "CoeffPoly":
        if not _is_scalar(other):
            return NotImplemented
        other = CoeffPoly.lift(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out[mono] + c if mono in out else c
        return CoeffPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "CoeffPoly":
        return CoeffPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "CoeffPoly":
        if not _is_scalar(other):
            return NotImplemented
        return self + (-CoeffPoly.lift(other))

    def __rsub__(self, other) -> "CoeffPoly":
        return CoeffPoly.lift(other) - self

    def __mul__(self, other) -> "CoeffPoly":
        if not _is_scalar(other):
            return NotImplemented
        other = CoeffPoly.lift(other)
        out: Dict[Monomial, GaussQ] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return CoeffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CoeffPoly":
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (mono, c), = self.terms.items()
            inv = CoeffPoly({tuple(-e for e in mono): GaussQ(1) / c})
            return inv ** (-n)
        out = CoeffPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = CoeffPoly.lift(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # calculus & substitution -------------------------------------------
    def dz(self) -> "CoeffPoly":
        """d/dz: every monomial carrying e^{kz} picks up a factor k."""
        return CoeffPoly({m: c * m[-1] for m, c in self.terms.items() if m[-1]})

    def shift_exp(self, k: int) -> "CoeffPoly":
        return self * CoeffPoly.exp(k)

    def subs(self, name: str, value) -> "CoeffPoly":
        """Substitute a generator by a CoeffPoly (or exact number)."""
        idx = _INDEX[name]
        value = CoeffPoly.lift(value)
        out = CoeffPoly()
        for mono, c in self.terms.items():
            e = mono[idx]
            rest = list(mono)
            rest[idx] = 0
            base = CoeffPoly({tuple(rest): c})
            if e:
                if e < 0 and value.is_zero():
                    raise ZeroDivisionError(f"{name} substituted by 0 under a negative power")
                base = base * value ** e
            out = out + base
        return out

    def reduce_square(self, name: str, square) -> "CoeffPoly":
        """Reduce modulo ``name**2 == square`` (square an exact constant)."""
        idx = _INDEX[name]
        sq = GaussQ.coerce(square)
        out: Dict[Monomial, GaussQ] = {}
        for mono, c in self.terms.items():
            e = mono[idx]
            r = e % 2
            half = (e - r) // 2
            factor = GaussQ(1)
            base = sq if half >= 0 else GaussQ(1) / sq
            for _ in range(abs(half)):
                factor = factor * base
            m = list(mono)
            m[idx] = r
            m = tuple(m)
            c = c * factor
            out[m] = out[m] + c if m in out else c
        return CoeffPoly(out)

    def evaluate(self, values: Mapping[str, complex], z: complex = 0.0) -> complex:
        """Numeric value with symbols from ``values`` and e^z at ``z``."""
        import cmath

        ez = cmath.exp(z)
        total = 0j
        for mono, c in self.terms.items():
            term = complex(c)
            for name, e in zip(SYMBOLS, mono):
                if e:
                    term *= complex(values[name]) ** e
            if mono[-1]:
                term *= ez ** mono[-1]
            total += term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            factors = []
            for name, e in zip(GENERATORS, mono):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append("*".join([repr(c)] + factors) if factors else repr(c))
        return " + ".join(parts)


def sym(name: str) -> CoeffPoly:
    return CoeffPoly.symbol(name)


def const(value) -> CoeffPoly:
    return CoeffPoly.const(value)


def ez(k: int = 1) -> CoeffPoly:
    return CoeffPoly.exp(k)


I = CoeffPoly.const(I_UNIT)

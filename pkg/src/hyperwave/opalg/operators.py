"""Linear differential operators in d/dz and matrices of them."""
from __future__ import annotations

from math import comb
from typing import Callable, Dict, Iterable, List, Mapping, Sequence, Tuple

from .ring import CoeffPoly, ez


class DiffOperator:
    """``sum_n c_n(z) D^n`` with ``D = d/dz`` and coefficients in :class:`CoeffPoly`.

    Coefficients multiply from the left, so ``e^{kz} D`` means "differentiate,
    then multiply by e^{kz}".
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, CoeffPoly] | None = None):
        clean: Dict[int, CoeffPoly] = {}
        if terms:
            for order, c in terms.items():
                if order < 0:
                    raise ValueError("derivative order must be non-negative")
                c = CoeffPoly.lift(c)
                if c:
                    clean[order] = clean[order] + c if order in clean else c
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def mul(cls, c) -> "DiffOperator":
        """Multiplication operator by ``c``."""
        return cls({0: CoeffPoly.lift(c)})

    @classmethod
    def d(cls, n: int = 1) -> "DiffOperator":
        return cls({n: CoeffPoly.const(1)})

    @classmethod
    def lift(cls, value) -> "DiffOperator":
        if isinstance(value, DiffOperator):
            return value
        return cls.mul(value)

    @property
    def order(self) -> int:
        return max(self.terms) if self.terms else -1

    def coeff(self, order: int) -> CoeffPoly:
        return self.terms.get(order, CoeffPoly())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        try:
            other = DiffOperator.lift(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "DiffOperator":
        other = DiffOperator.lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return DiffOperator(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffOperator":
        return DiffOperator({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "DiffOperator":
        return self + (-DiffOperator.lift(other))

    def __rsub__(self, other) -> "DiffOperator":
        return DiffOperator.lift(other) - self

    def __mul__(self, other) -> "DiffOperator":
        """Operator product ``self o other``."""
        return compose(self, DiffOperator.lift(other))

    def __rmul__(self, other) -> "DiffOperator":
        return compose(DiffOperator.lift(other), self)

    def map_coeffs(self, fn: Callable[[CoeffPoly], CoeffPoly]) -> "DiffOperator":
        return DiffOperator({k: fn(c) for k, c in self.terms.items()})

    def subs(self, name: str, value) -> "DiffOperator":
        return self.map_coeffs(lambda c: c.subs(name, value))

    def conjugate_by_exp(self, k: int) -> "DiffOperator":
        """``e^{-kz} o self o e^{kz}``: the operator seen by phi when psi = e^{kz} phi."""
        return compose(DiffOperator.mul(ez(-k)), compose(self, DiffOperator.mul(ez(k))))

    def apply(self, values: Mapping[str, complex], z: complex, derivs: Sequence[complex]) -> complex:
        """Numeric action on a function given its derivatives ``derivs[n] = f^(n)(z)``."""
        if self.order >= len(derivs):
            raise ValueError(f"need derivatives up to order {self.order}")
        return sum(c.evaluate(values, z) * derivs[n] for n, c in self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[k]})*D^{k}" for k in sorted(self.terms, reverse=True))


def _dz_power(c: CoeffPoly, j: int) -> CoeffPoly:
    for _ in range(j):
        c = c.dz()
    return c


def compose(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Exact product ``A o B``.

    ``D^m o (c D^n) = sum_j C(m, j) c^{(j)} D^{m-j+n}``; on e^{kz} this is the
    shift ``D o e^{kz} = e^{kz} (D + k)``.
    """
    out: Dict[int, CoeffPoly] = {}
    for m, a in A.terms.items():
        for n, b in B.terms.items():
            for j in range(m + 1):
                db = _dz_power(b, j)
                if not db:
                    continue
                order = m - j + n
                term = a * db * comb(m, j)
                out[order] = out[order] + term if order in out else term
    return DiffOperator(out)


def right_remainder(A: DiffOperator, L: DiffOperator) -> DiffOperator:
    """Remainder of ``A`` modulo a monic operator ``L`` acting on the right.

    Returns ``R`` with order < order(L) and ``A = Q o L + R``; for a function
    annihilated by ``L`` this rewrites every derivative of order >= order(L).
    """
    n = L.order
    if n < 0 or L.coeff(n) != CoeffPoly.const(1):
        raise ValueError("reduction needs a monic operator")
    R = A
    while R.order >= n:
        top = R.order
        lead = R.coeff(top)
        R = R - compose(DiffOperator({top - n: lead}), L)
    return R


D = DiffOperator.d(1)
ONE = DiffOperator.mul(1)


class OperatorMatrix:
    """Rectangular grid of :class:`DiffOperator` entries (row-major)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows: Tuple[Tuple[DiffOperator, ...], ...] = tuple(
            tuple(DiffOperator.lift(e) for e in row) for row in rows
        )
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged operator matrix")

    @classmethod
    def zeros(cls, n: int, m: int) -> "OperatorMatrix":
        return cls([[DiffOperator() for _ in range(m)] for _ in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "OperatorMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else DiffOperator() for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, idx: Tuple[int, int]) -> DiffOperator:
        i, j = idx
        return self.rows[i][j]

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return OperatorMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix([[-a for a in r] for r in self.rows])

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-other)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out: List[List[DiffOperator]] = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = DiffOperator()
                for t in range(k):
                    if self.rows[i][t] and other.rows[t][j]:
                        acc = acc + compose(self.rows[i][t], other.rows[t][j])
                row.append(acc)
            out.append(row)
        return OperatorMatrix(out)

    def select_rows(self, idx: Sequence[int]) -> "OperatorMatrix":
        return OperatorMatrix([self.rows[i] for i in idx])

    def map(self, fn: Callable[[DiffOperator], DiffOperator]) -> "OperatorMatrix":
        return OperatorMatrix([[fn(e) for e in r] for r in self.rows])

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return "OperatorMatrix(" + ",\n  ".join(repr(list(r)) for r in self.rows) + ")"

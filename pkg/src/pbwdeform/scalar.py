"""Exact arithmetic in the cyclotomic field Q(zeta_N).

An element is stored as an integer coefficient vector over the power basis
1, zeta, ..., zeta^(phi(N)-1) together with one positive common denominator,
reduced modulo the N-th cyclotomic polynomial.  The representation is
canonical, so equality and hashing are structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .expr import ParseError, parse_with

__all__ = [
    "CyclotomicContext",
    "Scalar",
    "FieldOrderError",
    "ParseError",
    "cyclotomic_polynomial",
    "parse_scalar",
    "conjugate",
]


class FieldOrderError(ValueError):
    """E(n) requested in a context whose order N is not a multiple of n."""


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; coefficient lists are low-to-high
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


Number = Union[int, Fraction, "Scalar"]


class CyclotomicContext:
    """The field Q(zeta_N).  One context is shared by a whole computation."""

    _instances: dict[int, "CyclotomicContext"] = {}

    def __new__(cls, order: int = 1):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        inst = cls._instances.get(order)
        if inst is None:
            inst = super().__new__(cls)
            inst._setup(order)
            cls._instances[order] = inst
        return inst

    def _setup(self, order: int) -> None:
        self.order = order
        self.minimal_polynomial = cyclotomic_polynomial(order)
        self.degree = len(self.minimal_polynomial) - 1
        d = self.degree
        powers = []
        vec = [1] + [0] * (d - 1)
        for _ in range(order):
            powers.append(tuple(vec))
            # multiply by x and reduce
            shifted = [0] + vec
            top = shifted[d]
            if top:
                for j in range(d):
                    shifted[j] -= top * self.minimal_polynomial[j]
            vec = shifted[:d]
        self._powers = powers
        self.zero = Scalar._make(self, (0,) * d, 1)
        self.one = Scalar._make(self, (1,) + (0,) * (d - 1), 1)

    def __repr__(self) -> str:
        return f"CyclotomicContext({self.order})"

    def __reduce__(self):
        return (CyclotomicContext, (self.order,))

    def __call__(self, value: Number) -> "Scalar":
        if isinstance(value, Scalar):
            if value.ctx is not self:
                raise ValueError(f"scalar from {value.ctx!r} used in {self!r}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return Scalar._make(self, (value,) + (0,) * (self.degree - 1), 1)
        if isinstance(value, Fraction):
            return Scalar._make(
                self, (value.numerator,) + (0,) * (self.degree - 1), value.denominator
            )
        raise TypeError(f"cannot convert {type(value).__name__} to a scalar")

    def zeta_power(self, k: int) -> "Scalar":
        return Scalar._make(self, self._powers[k % self.order], 1)

    def root(self, n: int) -> "Scalar":
        """E(n): the primitive n-th root zeta_N^(N/n)."""
        if n < 1:
            raise ValueError("root order must be positive")
        if self.order % n:
            raise FieldOrderError(
                f"E({n}) is not in Q(zeta_{self.order}); the field order must be a multiple of {n}"
            )
        return self.zeta_power(self.order // n)

    @property
    def zeta(self) -> "Scalar":
        return self.zeta_power(1)

    def reduce_product(self, a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        mp = self.minimal_polynomial
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                base = k - d
                for j in range(d):
                    if mp[j]:
                        prod[base + j] -= c * mp[j]
        return prod[:d]


class Scalar:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("ctx", "num", "den", "_hash")

    ctx: CyclotomicContext
    num: tuple[int, ...]
    den: int

    @classmethod
    def _make(cls, ctx: CyclotomicContext, num, den: int) -> "Scalar":
        if den < 0:
            num = tuple(-x for x in num)
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            if g == 0:
                num, den = tuple(num), 1
            else:
                num = tuple(x // g for x in num)
                den //= g
        self = object.__new__(cls)
        self.ctx = ctx
        self.num = tuple(num)
        self.den = den
        self._hash = None
        return self

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx:
                raise ValueError("scalars from different cyclotomic contexts")
            return other
        return self.ctx(other)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return Scalar._make(self.ctx, [a + b for a, b in zip(self.num, o.num)], self.den)
        return Scalar._make(
            self.ctx,
            [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(self.ctx, [-a for a in self.num], self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Scalar._make(self.ctx, [a * other for a in self.num], self.den)
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.ctx.degree == 1:
            return Scalar._make(self.ctx, (self.num[0] * o.num[0],), self.den * o.den)
        return Scalar._make(self.ctx, self.ctx.reduce_product(self.num, o.num), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        d = self.ctx.degree
        if d == 1:
            return Scalar._make(self.ctx, (self.den,), self.num[0])
        # solve (multiplication-by-self matrix) y = e_0 over Q
        cols = []
        basis = [0] * d
        for j in range(d):
            basis = [0] * d
            basis[j] = 1
            cols.append(self.ctx.reduce_product(self.num, tuple(basis)))
        rows = [[Fraction(cols[j][i]) for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for c in range(d):
            p = next(r for r in range(c, d) if rows[r][c])
            rows[c], rows[p] = rows[p], rows[c]
            pv = rows[c][c]
            rows[c] = [x / pv for x in rows[c]]
            for r in range(d):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        sol = [rows[i][d] * self.den for i in range(d)]
        den = math.lcm(*(x.denominator for x in sol))
        return Scalar._make(self.ctx, [int(x * den) for x in sol], den)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ctx.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Image under zeta -> zeta^(N-1) (complex conjugation)."""
        ctx = self.ctx
        if ctx.degree == 1:
            return self
        out = [0] * ctx.degree
        for k, c in enumerate(self.num):
            if c:
                for j, x in enumerate(ctx._powers[(-k) % ctx.order]):
                    out[j] += c * x
        return Scalar._make(ctx, out, self.den)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ctx.order == other.ctx.order and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den)) if not self.is_rational() else hash(
                Fraction(self.num[0], self.den)
            )
        return self._hash

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r}, N={self.ctx.order})"

    def __reduce__(self):
        return (Scalar._make, (self.ctx, self.num, self.den))


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical text: ascending powers of E(N), rational coefficients in lowest terms."""
    N = s.ctx.order
    parts: list[tuple[bool, str]] = []
    for k, c in enumerate(s.num):
        if not c:
            continue
        q = Fraction(c, s.den)
        neg = q < 0
        q = abs(q)
        if k == 0:
            body = _format_fraction(q)
        else:
            root = f"E({N})" if k == 1 else f"E({N})^{k}"
            body = root if q == 1 else f"{_format_fraction(q)}*{root}"
        parts.append((neg, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


class _ScalarAlgebra:
    def __init__(self, ctx: CyclotomicContext, text: str):
        self.ctx = ctx
        self.text = text

    def number(self, n):
        return self.ctx(n)

    def root(self, n, pos):
        return self.ctx.root(n)

    def symbol(self, name, pos):
        raise ParseError(f"unknown symbol {name!r}", self.text, pos)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        if b.is_zero():
            raise ZeroDivisionError(f"division by zero at position {pos}: {self.text!r}")
        return a / b

    def neg(self, a):
        return -a

    def power(self, a, k, pos):
        if k < 0 and a.is_zero():
            raise ZeroDivisionError(f"zero raised to a negative power at position {pos}: {self.text!r}")
        return a**k


def parse_scalar(text: str, ctx: CyclotomicContext) -> Scalar:
    """Parse a scalar expression such as ``"1/2 + E(3)^2"`` in ``ctx``."""
    return parse_with(text, _ScalarAlgebra(ctx, text))


def conjugate(s: Scalar) -> Scalar:
    return s.conjugate()

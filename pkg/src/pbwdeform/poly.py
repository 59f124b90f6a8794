"""Commutative polynomials in S(V) = k[v_1, ..., v_n] with Scalar coefficients.

A polynomial is a plain dict mapping exponent tuples to nonzero Scalars.
Keeping it a dict (rather than a class) keeps the inner loops of the
condition checker and the cochain code cheap.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .scalar import CyclotomicContext, Scalar

Poly = dict  # exponent tuple -> Scalar


def zero_exps(n: int) -> tuple:
    return (0,) * n


def unit_exps(n: int, i: int) -> tuple:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def add_term(p: Poly, e: tuple, c: Scalar) -> None:
    """p[e] += c in place, pruning zeros."""
    if not c:
        return
    old = p.get(e)
    if old is None:
        p[e] = c
    else:
        s = old + c
        if s:
            p[e] = s
        else:
            del p[e]


def add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        add_term(out, e, c)
    return out


def add_into(p: Poly, q: Poly, scale=None) -> None:
    for e, c in q.items():
        add_term(p, e, c if scale is None else c * scale)


def neg(p: Poly) -> Poly:
    return {e: -c for e, c in p.items()}


def sub(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        add_term(out, e, -c)
    return out


def scale(p: Poly, c) -> Poly:
    if not c:
        return {}
    return {e: x * c for e, x in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            add_term(out, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
    return out


def constant(n: int, c: Scalar) -> Poly:
    return {zero_exps(n): c} if c else {}


def linear(vec: Sequence[Scalar]) -> Poly:
    """The linear form sum_i vec[i] v_i."""
    n = len(vec)
    return {unit_exps(n, i): c for i, c in enumerate(vec) if c}


def degree(e: tuple) -> int:
    return sum(e)


def total_degree(p: Poly) -> int:
    return max((sum(e) for e in p), default=-1)


def homogeneous_part(p: Poly, d: int) -> Poly:
    return {e: c for e, c in p.items() if sum(e) == d}


def linear_coefficients(p: Poly, n: int, ctx: CyclotomicContext) -> tuple:
    """Coefficient vector of the degree-1 part."""
    out = [ctx.zero] * n
    for e, c in p.items():
        if sum(e) == 1:
            out[e.index(1)] = c
    return tuple(out)


def constant_term(p: Poly, n: int, ctx: CyclotomicContext) -> Scalar:
    return p.get(zero_exps(n), ctx.zero)


def monomials(n: int, d: int) -> list[tuple]:
    """Exponent vectors of total degree exactly d, in descending lex order."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class GroupActionOnS:
    """Caches ^g(v^e) for the linear substitution v_i -> ^g v_i."""

    def __init__(self, group):
        self.group = group
        self._images: dict = {}

    def image_of_variable(self, g: int, i: int) -> Poly:
        M = self.group.elements[g]
        return linear(M.column(i))

    def monomial(self, g: int, e: tuple) -> Poly:
        key = (g, e)
        hit = self._images.get(key)
        if hit is not None:
            return hit
        n = len(e)
        if sum(e) == 0:
            result = {e: self.group.ctx.one}
        else:
            i = next(k for k in range(n) if e[k])
            rest = list(e)
            rest[i] -= 1
            result = mul(self.image_of_variable(g, i), self.monomial(g, tuple(rest)))
        self._images[key] = result
        return result

    def apply(self, g: int, p: Poly) -> Poly:
        if g == 0:
            return dict(p)
        out: Poly = {}
        for e, c in p.items():
            add_into(out, self.monomial(g, e), c)
        return out


def format_monomial(e: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(names[i])
        elif k > 1:
            parts.append(f"{names[i]}^{k}")
    return "*".join(parts)


def format_coefficient_product(c: Scalar, body: str) -> tuple[bool, str]:
    """(is_negative, text) for coefficient c times a monomial body ('' for 1)."""
    s = str(c)
    if " " in s:
        return False, f"({s})*{body}" if body else f"({s})"
    neg = s.startswith("-")
    mag = s[1:] if neg else s
    if not body:
        return neg, mag
    return neg, body if mag == "1" else f"{mag}*{body}"


def join_signed(parts: Iterable[tuple[bool, str]]) -> str:
    parts = list(parts)
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def format_poly(p: Poly, names: Sequence[str]) -> str:
    keys = sorted(p, key=lambda e: (-sum(e), tuple(-x for x in e)))
    return join_signed(format_coefficient_product(p[e], format_monomial(e, names)) for e in keys)

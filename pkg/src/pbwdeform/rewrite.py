"""Normal forms in T(V)#G modulo the kappa relations, and the overlap oracle.

Words are tuples of integer tokens: a basis vector v_i is ``i`` and a group
element g is ``~g`` (always negative).  Identity letters are dropped.

Rewrite rules:
  R1  g h        -> gh
  R2  g v_i      -> sum_j M_g[j, i] v_j g
  R3  v_b v_a    -> v_a v_b - kappa^L(v_a, v_b) t^e1 - kappa^C(v_a, v_b) t^e2   (b > a)

with (e1, e2) = (1, 2) when the formal variable t is tracked and (0, 0)
otherwise.  The normal words are v_1^m1 ... v_n^mn g.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from . import poly as P
from .expr import ParseError, parse_with
from .kappa import KappaParameter
from .scalar import CyclotomicContext, Scalar


def group_token(g: int) -> int:
    return ~g


def is_group_token(tok: int) -> bool:
    return tok < 0


class PbwElement:
    """Linear combination of normal words v^e g t^k.

    ``terms`` maps (exponents, group index, t power) to a nonzero Scalar.
    """

    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx: CyclotomicContext, n: int, terms: Optional[Mapping] = None):
        self.ctx = ctx
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, ctx, exps: Sequence[int], g: int = 0, coeff=1, tpow: int = 0) -> "PbwElement":
        return cls(ctx, len(exps), {(tuple(exps), g, tpow): ctx(coeff)})

    def __add__(self, other: "PbwElement") -> "PbwElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            P.add_term(out, k, c)
        return PbwElement(self.ctx, self.n, out)

    def __neg__(self) -> "PbwElement":
        return PbwElement(self.ctx, self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "PbwElement") -> "PbwElement":
        return self + (-other)

    def scale(self, c) -> "PbwElement":
        c = self.ctx(c)
        return PbwElement(self.ctx, self.n, {k: x * c for k, x in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PbwElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def t_coefficient(self, i: int) -> "PbwElement":
        """The coefficient of t^i, as an element with no t."""
        return PbwElement(
            self.ctx, self.n, {(e, g, 0): c for (e, g, k), c in self.terms.items() if k == i}
        )

    def t_powers(self) -> list[int]:
        return sorted({k for _, _, k in self.terms})

    def polynomial_degrees(self) -> set[int]:
        return {sum(e) for e, _, _ in self.terms}

    def without_t(self) -> "PbwElement":
        out: dict = {}
        for (e, g, _), c in self.terms.items():
            P.add_term(out, (e, g, 0), c)
        return PbwElement(self.ctx, self.n, out)

    def sorted_keys(self) -> list:
        return sorted(self.terms, key=lambda k: (-sum(k[0]), tuple(-x for x in k[0]), k[1], k[2]))

    def format(self, basis_names: Sequence[str], group_names: Sequence[str]) -> str:
        parts = []
        for key in self.sorted_keys():
            e, g, k = key
            factors = []
            mono = P.format_monomial(e, basis_names)
            if mono:
                factors.append(mono)
            if g != 0:
                factors.append(group_names[g])
            if k == 1:
                factors.append("t")
            elif k > 1:
                factors.append(f"t^{k}")
            parts.append(P.format_coefficient_product(self.terms[key], "*".join(factors)))
        return P.join_signed(parts)

    def __repr__(self) -> str:
        names = [f"v{i + 1}" for i in range(self.n)]
        return f"PbwElement({self.format(names, _GroupNames())!r})"


class _GroupNames:
    def __getitem__(self, g: int) -> str:
        return f"G[{g}]"


class FreeElement:
    """Linear combination of words in T(V)#G with t-polynomial coefficients.

    ``terms`` maps (word, t power) to a nonzero Scalar.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: CyclotomicContext, terms: Optional[Mapping] = None):
        self.ctx = ctx
        self.terms = {}
        for (w, k), c in (terms or {}).items():
            w = tuple(x for x in w if x != -1)  # drop identity letters (~0 == -1)
            P.add_term(self.terms, (w, k), ctx(c))

    @classmethod
    def word(cls, ctx, word: Sequence[int], coeff=1, tpow: int = 0) -> "FreeElement":
        return cls(ctx, {(tuple(word), tpow): coeff})

    @classmethod
    def scalar(cls, ctx, c) -> "FreeElement":
        return cls(ctx, {((), 0): c})

    def __add__(self, other: "FreeElement") -> "FreeElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            P.add_term(out, k, c)
        return FreeElement(self.ctx, out)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        out: dict = {}
        for (w1, k1), c1 in self.terms.items():
            for (w2, k2), c2 in other.terms.items():
                P.add_term(out, (w1 + w2, k1 + k2), c1 * c2)
        return FreeElement(self.ctx, out)

    def scale(self, c) -> "FreeElement":
        c = self.ctx(c)
        return FreeElement(self.ctx, {k: x * c for k, x in self.terms.items()})

    def is_scalar(self) -> bool:
        return all(w == () and k == 0 for w, k in self.terms)

    def scalar_value(self) -> Scalar:
        return self.terms.get(((), 0), self.ctx.zero)

    def sorted_keys(self) -> list:
        return sorted(self.terms, key=lambda k: (len(k[0]), k[0], k[1]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class Rewriter:
    """Memoised reduction of T(V)#G words to PBW normal form for a fixed kappa."""

    def __init__(self, kappa: KappaParameter, graded_t: bool = False):
        self.kappa = kappa
        self.group = kappa.group
        self.n = kappa.n
        self.ctx = kappa.ctx
        self.graded_t = graded_t
        self.e1, self.e2 = (1, 2) if graded_t else (0, 0)
        self._cache: dict = {}
        self._zero = (0,) * self.n

    def _times_token(self, exps: tuple, g: int, tok: int) -> dict:
        """Normal form of (v^exps g) * tok as {(exps, g, tpow): coeff}."""
        key = (exps, g, tok)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        G = self.group
        one = self.ctx.one
        out: dict = {}
        if tok < 0:
            out[(exps, G.cayley[g][~tok], 0)] = one
        elif g != 0:
            column = G.elements[g].column(tok)
            for j, c in enumerate(column):
                if c:
                    for (e2, g2, k2), c2 in self._times_token(exps, 0, j).items():
                        P.add_term(out, (e2, G.cayley[g2][g], k2), c * c2)
        else:
            b = max((i for i in range(self.n) if exps[i]), default=-1)
            if b <= tok:
                e = list(exps)
                e[tok] += 1
                out[(tuple(e), 0, 0)] = one
            else:
                rest = list(exps)
                rest[b] -= 1
                rest = tuple(rest)
                # v^rest v_b v_i = v^rest v_i v_b - v^rest kappa(v_i, v_b)
                for (e2, g2, k2), c2 in self._times_token(rest, 0, tok).items():
                    for (e3, g3, k3), c3 in self._times_token(e2, g2, b).items():
                        P.add_term(out, (e3, g3, k2 + k3), c2 * c3)
                kap = self.kappa
                for h in kap.linear_support():
                    vec = kap.linear_value(h, tok, b)
                    for m, c in enumerate(vec):
                        if c:
                            for (e2, g2, k2), c2 in self._times_token(rest, 0, m).items():
                                P.add_term(out, (e2, G.cayley[g2][h], k2 + self.e1), -c * c2)
                for h in kap.constant_support():
                    c = kap.const_value(h, tok, b)
                    if c:
                        P.add_term(out, (rest, h, self.e2), -c)
        self._cache[key] = out
        return out

    def reduce_word(self, word: Sequence[int], start: Optional[tuple] = None) -> dict:
        state = {start or (self._zero, 0, 0): self.ctx.one}
        for tok in word:
            nxt: dict = {}
            for (e, g, k), c in state.items():
                for (e2, g2, k2), c2 in self._times_token(e, g, tok).items():
                    P.add_term(nxt, (e2, g2, k + k2), c * c2)
            state = nxt
        return state

    def normal_form(self, x: FreeElement) -> PbwElement:
        out: dict = {}
        for (word, k), c in x.terms.items():
            for (e, g, k2), c2 in self.reduce_word(word).items():
                P.add_term(out, (e, g, k + k2), c * c2)
        return PbwElement(self.ctx, self.n, out)

    def word_normal_form(self, word: Sequence[int]) -> PbwElement:
        return PbwElement(self.ctx, self.n, self.reduce_word(word))

    def multiply(self, a: PbwElement, b: PbwElement) -> PbwElement:
        out: dict = {}
        for (e2, g2, k2), c2 in b.terms.items():
            tail = [i for i in range(self.n) for _ in range(e2[i])]
            if g2:
                tail.append(~g2)
            for (e1, g1, k1), c1 in a.terms.items():
                for (e, g, k), c in self.reduce_word(tail, (e1, g1, 0)).items():
                    P.add_term(out, (e, g, k + k1 + k2), c * c1 * c2)
        return PbwElement(self.ctx, self.n, out)

    def kappa_terms(self, a: int, b: int) -> list[tuple[tuple, int, Scalar]]:
        """kappa(v_a, v_b) as (word, t power, coeff) pieces: v_m h and h."""
        kap = self.kappa
        pieces = []
        for h in kap.linear_support():
            for m, c in enumerate(kap.linear_value(h, a, b)):
                if c:
                    pieces.append(((m, ~h), self.e1, c))
        for h in kap.constant_support():
            c = kap.const_value(h, a, b)
            if c:
                pieces.append(((~h,), self.e2, c))
        return pieces


def normal_form(x: FreeElement, kappa: KappaParameter, graded_t: bool = False) -> PbwElement:
    return Rewriter(kappa, graded_t).normal_form(x)


def multiply(a: PbwElement, b: PbwElement, kappa: KappaParameter, graded_t: bool = False) -> PbwElement:
    return Rewriter(kappa, graded_t).multiply(a, b)


# ---------------------------------------------------------------------------
# overlap oracle


@dataclass
class Ambiguity:
    word: tuple
    left: PbwElement
    right: PbwElement

    @property
    def residue(self) -> PbwElement:
        return self.left - self.right

    @property
    def resolved(self) -> bool:
        return self.left == self.right


@dataclass
class OverlapVerdict:
    confluent: bool
    failures: list  # list of Ambiguity
    checked: int

    @property
    def witness(self) -> Optional[Ambiguity]:
        return self.failures[0] if self.failures else None


def _combine(rw: Rewriter, pieces: Iterable[tuple[tuple, int, Scalar]]) -> PbwElement:
    out: dict = {}
    for word, k, c in pieces:
        for (e, g, k2), c2 in rw.reduce_word(word).items():
            P.add_term(out, (e, g, k + k2), c * c2)
    return PbwElement(rw.ctx, rw.n, out)


def ambiguities(rw: Rewriter) -> Iterable[Ambiguity]:
    """Every overlap word, reduced along both of its first rewrite steps."""
    G = rw.group
    n = rw.n
    one = rw.ctx.one
    # g h v_a: (gh) v_a versus g (h v_a)
    for g in range(1, G.order):
        for h in range(1, G.order):
            for a in range(n):
                left = _combine(rw, [((~G.cayley[g][h], a), 0, one)])
                col = G.elements[h].column(a)
                right = _combine(rw, [((~g, j, ~h), 0, c) for j, c in enumerate(col) if c])
                yield Ambiguity((~g, ~h, a), left, right)
    # g v_b v_a: (g v_b) v_a versus g (v_b v_a)
    for g in range(1, G.order):
        col_cache = {}
        for a, b in combinations(range(n), 2):
            col = col_cache.setdefault(b, G.elements[g].column(b))
            left = _combine(rw, [((j, ~g, a), 0, c) for j, c in enumerate(col) if c])
            right_pieces = [((~g, a, b), 0, one)]
            right_pieces += [((~g,) + w, k, -c) for w, k, c in rw.kappa_terms(a, b)]
            right = _combine(rw, right_pieces)
            yield Ambiguity((~g, b, a), left, right)
    # v_c v_b v_a: (v_c v_b) v_a versus v_c (v_b v_a)
    for a, b, c in combinations(range(n), 3):
        left_pieces = [((b, c, a), 0, one)]
        left_pieces += [(w + (a,), k, -x) for w, k, x in rw.kappa_terms(b, c)]
        right_pieces = [((c, a, b), 0, one)]
        right_pieces += [((c,) + w, k, -x) for w, k, x in rw.kappa_terms(a, b)]
        yield Ambiguity((c, b, a), _combine(rw, left_pieces), _combine(rw, right_pieces))


def overlap_check(kappa: KappaParameter, graded_t: bool = False) -> OverlapVerdict:
    """Diamond-lemma test: kappa gives a PBW algebra iff every ambiguity resolves."""
    rw = Rewriter(kappa, graded_t)
    failures = []
    checked = 0
    for amb in ambiguities(rw):
        checked += 1
        if not amb.resolved:
            failures.append(amb)
    return OverlapVerdict(not failures, failures, checked)


class PreconditionError(ValueError):
    pass


def pbw_count(n: int, group_order: int, d: int) -> int:
    return group_order * sum(comb(n + e - 1, e) for e in range(d + 1))


def graded_dimension(kappa: KappaParameter, d: int) -> int:
    """Number of PBW words of filtered degree <= d, checked against the reducer.

    Every word w g with w of length <= d is reduced with t tracked; its
    t-free part must be exactly the sorted monomial of w times g and every
    term must have polynomial degree <= len(w).  The distinct leading words
    collected this way are counted and compared with the closed formula.
    """
    if not overlap_check(kappa).confluent:
        raise PreconditionError("graded_dimension requires a confluent kappa")
    G = kappa.group
    n = kappa.n
    rw = Rewriter(kappa, graded_t=True)
    seen = set()
    for length in range(d + 1):
        for word in product(range(n), repeat=length):
            for g in range(G.order):
                nf = rw.reduce_word(word + ((~g,) if g else ()))
                exps = [0] * n
                for i in word:
                    exps[i] += 1
                lead = (tuple(exps), g, 0)
                top = {key: c for key, c in nf.items() if key[2] == 0}
                if top != {lead: kappa.ctx.one}:
                    raise RuntimeError(f"word {word} does not reduce to its sorted monomial")
                if any(sum(e) > length for e, _, _ in nf):
                    raise RuntimeError(f"word {word} reduced to a term of higher degree")
                seen.add(lead)
    count = len(seen)
    if count != pbw_count(n, G.order, d):
        raise RuntimeError("normal-form monomial count disagrees with the PBW count")
    return count


# ---------------------------------------------------------------------------
# parsing free-algebra expressions


class _FreeAlgebra:
    def __init__(self, ctx: CyclotomicContext, symbols: Mapping[str, FreeElement], text: str, invert):
        self.ctx = ctx
        self.symbols = symbols
        self.text = text
        self.invert = invert

    def number(self, n):
        return FreeElement.scalar(self.ctx, n)

    def root(self, n, pos):
        return FreeElement.scalar(self.ctx, self.ctx.root(n))

    def symbol(self, name, pos):
        if name not in self.symbols:
            raise ParseError(f"unknown symbol {name!r}", self.text, pos)
        return self.symbols[name]

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        if not b.is_scalar():
            raise ParseError("can only divide by a scalar", self.text, pos)
        c = b.scalar_value()
        if c.is_zero():
            raise ZeroDivisionError(f"division by zero at position {pos}: {self.text!r}")
        return a.scale(c.inverse())

    def neg(self, a):
        return -a

    def power(self, a, k, pos):
        if k < 0:
            if a.is_scalar():
                c = a.scalar_value()
                if c.is_zero():
                    raise ZeroDivisionError(f"zero raised to a negative power at position {pos}: {self.text!r}")
                return FreeElement.scalar(self.ctx, c**k)
            inv = self.invert(a)
            if inv is None:
                raise ParseError("negative powers are only allowed for group elements", self.text, pos)
            a, k = inv, -k
        out = FreeElement.scalar(self.ctx, 1)
        for _ in range(k):
            out = out * a
        return out


def parse_free(
    text: str,
    ctx: CyclotomicContext,
    symbols: Mapping[str, FreeElement],
    group=None,
) -> FreeElement:
    """Parse an expression over named generators of T(V)#G (and t)."""

    def invert(x: FreeElement):
        if group is None or len(x.terms) != 1:
            return None
        ((word, k), c), = x.terms.items()
        if k != 0 or c != 1 or any(tok >= 0 for tok in word):
            return None
        g = 0
        for tok in word:
            g = group.cayley[g][~tok]
        return FreeElement.word(ctx, (~group.inverses[g],))

    return parse_with(text, _FreeAlgebra(ctx, symbols, text, invert))

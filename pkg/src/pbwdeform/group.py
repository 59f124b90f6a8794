"""Finite matrix groups: closure, Cayley table, conjugacy data, fixed spaces."""

from __future__ import annotations

from typing import Optional, Sequence

from .linalg import Matrix, Subspace, determinant, nullspace
from .scalar import CyclotomicContext, Scalar

DEFAULT_MAX_ORDER = 10000


class GroupOrderError(ValueError):
    """Closure exceeded the element cap (group infinite or too large)."""


class SingularGeneratorError(ValueError):
    pass


def _word_text(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        k = j - i
        parts.append(names[word[i]] if k == 1 else f"{names[word[i]]}^{k}")
        i = j
    return "*".join(parts)


class Group:
    """A finite group of invertible n x n matrices.

    Element 0 is the identity.  Elements are listed in breadth-first order of
    the closure, so each element's stored word is a shortest word in the
    generators.  The matrix of g has ``^g v_i`` as its i-th column.
    """

    def __init__(
        self,
        ctx: CyclotomicContext,
        generators: Sequence[Matrix],
        dim: int,
        generator_names: Optional[Sequence[str]] = None,
        max_order: int = DEFAULT_MAX_ORDER,
    ):
        self.ctx = ctx
        self.dim = dim
        self.generators = list(generators)
        if generator_names is None:
            generator_names = [f"g{i + 1}" for i in range(len(self.generators))]
        if len(generator_names) != len(self.generators):
            raise ValueError("one name per generator required")
        self.generator_names = list(generator_names)
        for k, s in enumerate(self.generators):
            if s.rows != dim or s.cols != dim:
                raise ValueError(f"generator {self.generator_names[k]} is not {dim}x{dim}")
            if determinant(s).is_zero():
                raise SingularGeneratorError(f"generator {self.generator_names[k]} is singular")
        self._close(max_order)
        self._tables()
        self._conjugacy()
        self._geometry()

    def _close(self, max_order: int) -> None:
        one = Matrix.identity(self.ctx, self.dim)
        self.elements: list[Matrix] = [one]
        self.words: list[tuple[int, ...]] = [()]
        self._index = {one.entries: 0}
        frontier = 0
        while frontier < len(self.elements):
            m = self.elements[frontier]
            for k, s in enumerate(self.generators):
                p = m @ s
                if p.entries not in self._index:
                    if len(self.elements) >= max_order:
                        raise GroupOrderError(
                            f"group closure exceeded {max_order} elements; the generators may not generate a finite group"
                        )
                    self._index[p.entries] = len(self.elements)
                    self.elements.append(p)
                    self.words.append(self.words[frontier] + (k,))
            frontier += 1
        self.names = [_word_text(w, self.generator_names) for w in self.words]
        self.generator_indices = [self._index[s.entries] for s in self.generators]

    def _tables(self) -> None:
        n = len(self.elements)
        # g*s for generators s is known from the closure; build rows by words
        right = [[self._index[(self.elements[g] @ s).entries] for s in self.generators] for g in range(n)]
        self.cayley = [[0] * n for _ in range(n)]
        for g in range(n):
            row = self.cayley[g]
            row[0] = g
            for h in range(1, n):
                w = self.words[h]
                # parent of h in BFS tree is the element whose word is w[:-1]
                parent = self._parent(h)
                row[h] = right[row[parent]][w[-1]]
        self.inverses = [row.index(0) for row in self.cayley]

    def _parent(self, h: int) -> int:
        if not hasattr(self, "_parents"):
            by_word = {w: i for i, w in enumerate(self.words)}
            self._parents = [by_word[w[:-1]] if w else 0 for w in self.words]
        return self._parents[h]

    def _conjugacy(self) -> None:
        n = len(self.elements)
        inv = self.inverses
        seen = [None] * n
        self.conj_classes: list[list[int]] = []
        for g in range(n):
            if seen[g] is not None:
                continue
            cls = sorted({self.cayley[self.cayley[h][g]][inv[h]] for h in range(n)})
            for x in cls:
                seen[x] = len(self.conj_classes)
            self.conj_classes.append(cls)
        self.class_of = seen
        self.representatives = [c[0] for c in self.conj_classes]
        self.centralizers = [
            [h for h in range(n) if self.cayley[h][g] == self.cayley[g][h]] for g in range(n)
        ]
        self.kernel = [g for g in range(n) if self.elements[g].is_identity()]

    def _geometry(self) -> None:
        ctx = self.ctx
        n = self.dim
        total = Matrix.zeros(ctx, n, n)
        for m in self.elements:
            total = total + m.conjugate_transpose() @ m
        self.invariant_form = total.scale(ctx(1) / len(self.elements))
        eye = Matrix.identity(ctx, n)
        self.fixed_spaces = [nullspace(m - eye) for m in self.elements]
        H = self.invariant_form
        self.perp_spaces = []
        for V in self.fixed_spaces:
            rows = [
                [sum((b[i].conjugate() * H[i, j] for i in range(n)), ctx.zero) for j in range(n)]
                for b in V.basis
            ]
            if rows:
                self.perp_spaces.append(nullspace(Matrix(ctx, rows, n)))
            else:
                self.perp_spaces.append(Subspace.full(ctx, n))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, m: Matrix) -> Optional[int]:
        return self._index.get(m.entries)

    def mul(self, g: int, h: int) -> int:
        return self.cayley[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    def conj(self, h: int, g: int) -> int:
        """h g h^-1."""
        return self.cayley[self.cayley[h][g]][self.inverses[h]]

    def act(self, g: int, v: Sequence[Scalar]) -> tuple:
        """^g v for a coordinate vector v."""
        return self.elements[g].apply(v)

    def codim(self, g: int) -> int:
        return self.dim - self.fixed_spaces[g].dim

    def is_abelian(self) -> bool:
        return all(len(c) == 1 for c in self.conj_classes)

    def word_index(self, word: Sequence[int]) -> int:
        g = 0
        for k in word:
            g = self.cayley[g][self.generator_indices[k]]
        return g

    def __repr__(self) -> str:
        return f"Group(order={self.order}, dim={self.dim})"


def generate_group(
    generators: Sequence[Matrix],
    dim: int,
    max_order: int = DEFAULT_MAX_ORDER,
    generator_names: Optional[Sequence[str]] = None,
    ctx: Optional[CyclotomicContext] = None,
) -> Group:
    if ctx is None:
        if not generators:
            raise ValueError("a context is required when there are no generators")
        ctx = generators[0].ctx
    return Group(ctx, generators, dim, generator_names, max_order)


def fixed_space(G: Group, g: int) -> Subspace:
    return G.fixed_spaces[g]


def invariant_form(G: Group) -> Matrix:
    return G.invariant_form


def conjugacy_data(G: Group):
    """(classes, representatives, centralizers of representatives, kernel)."""
    return (
        [list(c) for c in G.conj_classes],
        list(G.representatives),
        [list(G.centralizers[r]) for r in G.representatives],
        list(G.kernel),
    )

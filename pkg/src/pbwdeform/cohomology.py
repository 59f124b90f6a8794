"""Koszul-side cochains for S#G: differential, group action, bracket, and the
representative spaces of cohomology classes.

A p-cochain assigns to each group element g and each p-subset J of basis
indices (stored sorted) a polynomial alpha_g(v_J) in S.  Sorting signs are
applied on access.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Optional, Sequence

from . import poly as P
from .group import Group
from .kappa import ALT3, KappaParameter
from .linalg import Matrix, Subspace, inverse, nullspace, solve_affine


class CochainDegreeError(ValueError):
    pass


def _sort_sign(J: Sequence[int]) -> tuple[int, tuple]:
    """(sign, sorted J); sign 0 if J has a repeated index."""
    if len(set(J)) != len(J):
        return 0, ()
    arr = list(J)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def _minor_det(columns: Sequence[Sequence], rows: Sequence[int], ctx):
    """det of the square matrix with entries columns[l][rows[k]]."""
    m = len(rows)
    if m == 0:
        return ctx.one
    if m == 1:
        return columns[0][rows[0]]
    if m == 2:
        return columns[0][rows[0]] * columns[1][rows[1]] - columns[1][rows[0]] * columns[0][rows[1]]
    total = ctx.zero
    for perm in permutations(range(m)):
        sign, _ = _sort_sign(perm)
        term = ctx.one
        for k, l in enumerate(perm):
            term = term * columns[l][rows[k]]
            if not term:
                break
        if term:
            total = total + term * sign
    return total


class Cochain:
    """Element of the cochain space sum_g S g (x) Lambda^p V*.

    ``values`` maps g -> {sorted p-tuple J -> polynomial}.  ``q`` bounds the
    polynomial degree of every value.
    """

    def __init__(self, group: Group, p: int, q: int, values: Optional[Mapping] = None):
        self.group = group
        self.p = p
        self.q = q
        self.n = group.dim
        self.ctx = group.ctx
        clean: dict = {}
        for g, table in (values or {}).items():
            row: dict = {}
            for J, f in table.items():
                sign, SJ = _sort_sign(J)
                if sign == 0 or not f:
                    continue
                if len(SJ) != p:
                    raise CochainDegreeError(f"wedge index {J} does not have length {p}")
                f = f if sign == 1 else P.neg(f)
                if P.total_degree(f) > q:
                    raise CochainDegreeError(f"value of polynomial degree {P.total_degree(f)} exceeds bound {q}")
                if SJ in row:
                    f = P.add(row[SJ], f)
                if f:
                    row[SJ] = f
                else:
                    row.pop(SJ, None)
            if row:
                clean[g] = dict(sorted(row.items()))
        self.values = dict(sorted(clean.items()))

    # access -----------------------------------------------------------------

    def value(self, g: int, J: Sequence[int]) -> dict:
        sign, SJ = _sort_sign(J)
        if sign == 0:
            return {}
        f = self.values.get(g, {}).get(SJ, {})
        return f if sign == 1 else P.neg(f)

    def evaluate(self, g: int, vectors: Sequence[Sequence]) -> dict:
        """alpha_g(u_1 ^ ... ^ u_p) for coordinate vectors u_k."""
        out: dict = {}
        for J, f in self.values.get(g, {}).items():
            c = _minor_det(vectors, J, self.ctx)
            if c:
                P.add_into(out, f, c)
        return out

    def support(self) -> list[int]:
        return list(self.values)

    def is_zero(self) -> bool:
        return not self.values

    def max_degree(self) -> int:
        return max((P.total_degree(f) for t in self.values.values() for f in t.values()), default=-1)

    def homogeneous_part(self, d: int) -> "Cochain":
        return Cochain(
            self.group, self.p, self.q,
            {g: {J: P.homogeneous_part(f, d) for J, f in t.items()} for g, t in self.values.items()},
        )

    # linear structure -----------------------------------------------------

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.p != other.p:
            raise CochainDegreeError("cannot add cochains of different degrees")
        vals = {g: dict(t) for g, t in self.values.items()}
        for g, t in other.values.items():
            row = vals.setdefault(g, {})
            for J, f in t.items():
                row[J] = P.add(row[J], f) if J in row else f
        return Cochain(self.group, self.p, max(self.q, other.q), vals)

    def scale(self, c) -> "Cochain":
        c = self.ctx(c)
        return Cochain(
            self.group, self.p, self.q,
            {g: {J: P.scale(f, c) for J, f in t.items()} for g, t in self.values.items()},
        )

    def __neg__(self) -> "Cochain":
        return self.scale(-1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.p == other.p and self.values == other.values

    def __repr__(self) -> str:
        return f"Cochain(p={self.p}, q={self.q}, support={self.support()})"

    @classmethod
    def zero(cls, group: Group, p: int, q: int = 0) -> "Cochain":
        return cls(group, p, q)


def linear_cochain(kappa: KappaParameter) -> Cochain:
    return Cochain(
        kappa.group, 2, 1,
        _by_group({(g, (i, j)): P.linear(v) for (g, i, j), v in kappa.linear.items()}),
    )


def constant_cochain(kappa: KappaParameter) -> Cochain:
    n = kappa.n
    return Cochain(
        kappa.group, 2, 0,
        _by_group({(g, (i, j)): P.constant(n, c) for (g, i, j), c in kappa.constant.items()}),
    )


def cochain_to_kappa(constant: Optional[Cochain], linear: Optional[Cochain], group: Group) -> KappaParameter:
    """Read constant / linear degree-2 cochains back as a parameter."""
    n = group.dim
    const: dict = {}
    lin: dict = {}
    if constant is not None:
        for g, t in constant.values.items():
            for (i, j), f in t.items():
                const[(g, i, j)] = P.constant_term(f, n, group.ctx)
    if linear is not None:
        for g, t in linear.values.items():
            for (i, j), f in t.items():
                lin[(g, i, j)] = P.linear_coefficients(f, n, group.ctx)
    return KappaParameter(group, const, lin)


def _by_group(flat: Mapping[tuple, dict]) -> dict:
    out: dict = {}
    for (g, J), f in flat.items():
        out.setdefault(g, {})[J] = f
    return out


# ---------------------------------------------------------------------------
# differential and group action


def differential(alpha: Cochain) -> Cochain:
    """(d*alpha)_g(v_J) = sum_i (-1)^i alpha_g(v_{J minus j_i}) (v_{j_i} - ^g v_{j_i})."""
    G = alpha.group
    n = alpha.n
    ctx = alpha.ctx
    vals: dict = {}
    for g, table in alpha.values.items():
        if g == 0:
            continue
        M = G.elements[g]
        diffs = []
        for j in range(n):
            col = M.column(j)
            diffs.append(P.linear([(ctx.one if k == j else ctx.zero) - col[k] for k in range(n)]))
        row: dict = {}
        for J in combinations(range(n), alpha.p + 1):
            acc: dict = {}
            for i, j in enumerate(J):
                f = table.get(J[:i] + J[i + 1:])
                if f and diffs[j]:
                    P.add_into(acc, P.mul(f, diffs[j]), ctx.one if i % 2 == 0 else -ctx.one)
            if acc:
                row[J] = acc
        if row:
            vals[g] = row
    return Cochain(G, alpha.p + 1, alpha.q + 1, vals)


class _Actions:
    _cache: dict = {}

    @classmethod
    def on_s(cls, G: Group) -> P.GroupActionOnS:
        key = id(G)
        hit = cls._cache.get(key)
        if hit is None or hit.group is not G:
            hit = P.GroupActionOnS(G)
            cls._cache[key] = hit
        return hit


def act(h: int, alpha: Cochain) -> Cochain:
    """(^h alpha)_{h g h^-1}(v_J) = ^h(alpha_g(^{h^-1} v_J))."""
    G = alpha.group
    if h == 0:
        return alpha
    hinv = G.inverses[h]
    Minv = G.elements[hinv]
    action = _Actions.on_s(G)
    vals: dict = {}
    for g, table in alpha.values.items():
        target = G.conj(h, g)
        row: dict = {}
        for J in combinations(range(alpha.n), alpha.p):
            vecs = [Minv.column(j) for j in J]
            f = alpha.evaluate(g, vecs)
            if f:
                row[J] = action.apply(h, f)
        if row:
            vals[target] = row
    return Cochain(G, alpha.p, alpha.q, vals)


def average(alpha: Cochain) -> Cochain:
    G = alpha.group
    total = Cochain.zero(G, alpha.p, alpha.q)
    for h in range(G.order):
        total = total + act(h, alpha)
    return total.scale(G.ctx(1) / G.order)


def is_invariant(alpha: Cochain) -> bool:
    return all(act(h, alpha) == alpha for h in alpha.group.generator_indices)


def is_cocycle(alpha: Cochain) -> bool:
    return differential(alpha).is_zero()


# ---------------------------------------------------------------------------
# bracket


def _split_linear_constant(alpha: Cochain) -> tuple[Cochain, Cochain]:
    if alpha.p != 2:
        raise CochainDegreeError("the bracket is defined on 2-cochains")
    if alpha.max_degree() > 1:
        raise CochainDegreeError("the bracket is defined for polynomial degree at most 1")
    return alpha.homogeneous_part(0), alpha.homogeneous_part(1)


def _as_vector(f: dict, n: int, ctx) -> tuple:
    return P.linear_coefficients(f, n, ctx)


def _one_sided(outer: Cochain, inner: Cochain) -> Cochain:
    """sum_{g,h,sigma} outer_{g h^-1}(inner_h(v_s1 ^ v_s2) ^ v_s3) g, inner linear."""
    G = outer.group
    n = outer.n
    ctx = outer.ctx
    units = [tuple(ctx.one if k == i else ctx.zero for k in range(n)) for i in range(n)]
    vals: dict = {}
    for triple in combinations(range(n), 3):
        for h in inner.support():
            for s1, s2, s3 in ALT3:
                i1, i2, i3 = triple[s1], triple[s2], triple[s3]
                u = _as_vector(inner.value(h, (i1, i2)), n, ctx)
                if not any(u):
                    continue
                for gh in outer.support():
                    # outer component gh = g h^-1, so g = gh * h
                    g = G.cayley[gh][h]
                    f = outer.evaluate(gh, [u, units[i3]])
                    if f:
                        row = vals.setdefault(g, {})
                        row[triple] = P.add(row[triple], f) if triple in row else f
    return Cochain(G, 3, 1, vals)


def bracket(alpha: Cochain, beta: Cochain) -> Cochain:
    """The cochain bracket of two 2-cochains of polynomial degree <= 1.

    linear-linear:   sum [alpha_{gh^-1}(beta_h(v_s1^v_s2) ^ v_s3) + beta_{gh^-1}(alpha_h(...) ^ v_s3)] g
    constant-linear: sum alpha_{gh^-1}(beta_h(v_s1^v_s2) ^ v_s3) g
    constant-constant: 0
    extended bilinearly to mixed cochains.
    """
    a0, a1 = _split_linear_constant(alpha)
    b0, b1 = _split_linear_constant(beta)
    out = Cochain.zero(alpha.group, 3, 1)
    if not a1.is_zero() and not b1.is_zero():
        out = out + _one_sided(a1, b1) + _one_sided(b1, a1)
    if not a0.is_zero() and not b1.is_zero():
        out = out + _one_sided(a0, b1)
    if not b0.is_zero() and not a1.is_zero():
        out = out + _one_sided(b0, a1)
    return out


# ---------------------------------------------------------------------------
# coordinates and coboundaries


class CochainCoordinates:
    """Flattening of p-cochains with polynomial degree <= q into vectors."""

    def __init__(self, group: Group, p: int, q: int, elements: Optional[Iterable[int]] = None):
        self.group = group
        self.p = p
        self.q = q
        n = group.dim
        self.elements = list(range(group.order)) if elements is None else list(elements)
        monos = [e for d in range(q + 1) for e in P.monomials(n, d)]
        self.keys = [(g, J, e) for g in self.elements for J in combinations(range(n), p) for e in monos]
        self.index = {k: i for i, k in enumerate(self.keys)}

    @property
    def dim(self) -> int:
        return len(self.keys)

    def flatten(self, alpha: Cochain) -> tuple:
        ctx = self.group.ctx
        vec = [ctx.zero] * len(self.keys)
        for g, t in alpha.values.items():
            for J, f in t.items():
                for e, c in f.items():
                    key = (g, J, e)
                    if key not in self.index:
                        raise CochainDegreeError(f"cochain term {key} outside the coordinate range")
                    vec[self.index[key]] = c
        return tuple(vec)

    def unflatten(self, vec: Sequence) -> Cochain:
        vals: dict = {}
        for (g, J, e), c in zip(self.keys, vec):
            if c:
                vals.setdefault(g, {}).setdefault(J, {})[e] = c
        return Cochain(self.group, self.p, self.q, vals)


def is_coboundary(gamma: Cochain, q: Optional[int] = None) -> Optional[Cochain]:
    """A cochain rho with d*rho = gamma, or None.

    rho ranges over (p-1)-cochains of polynomial degree <= q-1 where q bounds
    gamma's polynomial degree (default: gamma's own bound).
    """
    if gamma.p < 1:
        raise CochainDegreeError("coboundaries have degree at least 1")
    G = gamma.group
    q = gamma.q if q is None else q
    if gamma.max_degree() > q:
        raise CochainDegreeError("gamma exceeds the stated polynomial degree bound")
    if gamma.is_zero():
        return Cochain.zero(G, gamma.p - 1, max(q - 1, 0))
    if q < 1:
        return None
    # d* preserves the group component, so solve one g at a time
    solution = Cochain.zero(G, gamma.p - 1, q - 1)
    for g in range(G.order):
        target = Cochain(G, gamma.p, q, {g: gamma.values[g]} if g in gamma.values else {})
        if target.is_zero():
            continue
        if g == 0:
            return None
        src = CochainCoordinates(G, gamma.p - 1, q - 1, [g])
        dst = CochainCoordinates(G, gamma.p, q, [g])
        ctx = G.ctx
        columns = []
        for k in range(src.dim):
            unit = [ctx.zero] * src.dim
            unit[k] = ctx.one
            columns.append(dst.flatten(differential(src.unflatten(unit))))
        A = Matrix(ctx, [[col[r] for col in columns] for r in range(dst.dim)], src.dim)
        found = solve_affine(A, dst.flatten(target))
        if found is None:
            return None
        solution = solution + src.unflatten(found[0])
    return solution


# ---------------------------------------------------------------------------
# representative spaces


@dataclass
class RepresentativeSpace:
    """Bases of the representative spaces per group element, and the G-invariants.

    ``basis[g]`` spans S(V^g) g (x) Lambda^{p-c}(V^g)* (x) Lambda^c((V^g)^perp)*
    (c = codim V^g) truncated at polynomial degree q; ``invariant_basis`` spans
    its G-invariant subspace; ``class_dimensions`` gives the dimension of the
    invariants supported on each conjugacy class, keyed by representative.
    """

    group: Group
    p: int
    q: int
    exact_degree: bool
    basis: dict
    coordinates: CochainCoordinates
    subspace: Subspace
    invariant_basis: list
    invariant_subspace: Subspace
    class_dimensions: dict
    class_dimensions_by_degree: dict

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.basis.values())

    @property
    def invariant_dimension(self) -> int:
        return len(self.invariant_basis)

    def contains(self, alpha: Cochain) -> bool:
        return self.subspace.contains(self.coordinates.flatten(alpha))

    def contains_invariant(self, alpha: Cochain) -> bool:
        return self.invariant_subspace.contains(self.coordinates.flatten(alpha))


def _poly_of_vectors(vectors: Sequence[Sequence], exps: Sequence[int], n: int, ctx) -> dict:
    f = P.constant(n, ctx.one)
    for vec, k in zip(vectors, exps):
        for _ in range(k):
            f = P.mul(f, P.linear(vec))
    return f


def element_basis(G: Group, g: int, p: int, q: int, exact_degree: bool = False) -> list[Cochain]:
    n = G.dim
    ctx = G.ctx
    A = list(G.fixed_spaces[g].basis)
    B = list(G.perp_spaces[g].basis)
    r, c = len(A), len(B)
    if p < c or p - c > r:
        return []
    T = Matrix(ctx, [[v[i] for v in A + B] for i in range(n)], n)
    duals = inverse(T).entries  # row k is the functional dual to column k of T
    alpha_duals = duals[:r]
    beta_duals = duals[r:]
    degrees = [q] if exact_degree else range(q + 1)
    polys = []
    for d in degrees:
        for e in P.monomials(r, d) if r else ([()] if d == 0 else []):
            polys.append(_poly_of_vectors(A, e, n, ctx))
    out = []
    for I in combinations(range(r), p - c):
        functionals = [alpha_duals[i] for i in I] + list(beta_duals)
        form: dict = {}
        for J in combinations(range(n), p):
            # (phi_1 ^ ... ^ phi_p)(v_J) = det[phi_k(v_{j_l})]
            cols = [[phi[j] for phi in functionals] for j in J]
            val = _minor_det(cols, list(range(p)), ctx)
            if val:
                form[J] = val
        for f in polys:
            vals = {g: {J: P.scale(f, val) for J, val in form.items()}}
            out.append(Cochain(G, p, q, vals))
    return out


def representative_space(G: Group, p: int, q: int, exact_degree: bool = False) -> RepresentativeSpace:
    ctx = G.ctx
    coords = CochainCoordinates(G, p, q)
    basis = {g: element_basis(G, g, p, q, exact_degree) for g in range(G.order)}
    all_vectors = [coords.flatten(b) for g in range(G.order) for b in basis[g]]
    subspace = Subspace.span(ctx, coords.dim, all_vectors)
    invariants: list = []
    class_dims: dict = {}
    class_dims_deg: dict = {}
    for cls in G.conj_classes:
        members = [b for g in cls for b in basis[g]]
        rep = cls[0]
        if not members:
            class_dims[rep] = 0
            class_dims_deg[rep] = [0] * (q + 1)
            continue
        vecs = [coords.flatten(b) for b in members]
        Bmat = Matrix(ctx, [[v[i] for v in vecs] for i in range(coords.dim)], len(vecs))
        # matrix of the averaging operator in the basis `members`
        avg_cols = []
        for b in members:
            found = solve_affine(Bmat, coords.flatten(average(b)))
            if found is None:
                raise RuntimeError("representative space is not closed under the group action")
            avg_cols.append(found[0])
        k = len(members)
        op = Matrix(ctx, [[avg_cols[j][i] - (ctx.one if i == j else ctx.zero) for j in range(k)] for i in range(k)], k)
        fixed = nullspace(op)
        by_degree = [0] * (q + 1)
        for sol in fixed.basis:
            vec = [ctx.zero] * coords.dim
            for a, v in zip(sol, vecs):
                if a:
                    vec = [x + a * y for x, y in zip(vec, v)]
            cochain = coords.unflatten(vec)
            invariants.append(cochain)
        # split the invariant space by homogeneous degree (the action preserves degree)
        for d in range(q + 1):
            deg_members = [i for i, b in enumerate(members) if b.max_degree() == d]
            if not deg_members:
                continue
            sub = Matrix(
                ctx,
                [[op[i, j] for j in deg_members] for i in deg_members],
                len(deg_members),
            )
            by_degree[d] = len(nullspace(sub).basis)
        class_dims[rep] = fixed.dim
        class_dims_deg[rep] = by_degree
    inv_sub = Subspace.span(ctx, coords.dim, [coords.flatten(c) for c in invariants])
    return RepresentativeSpace(
        G, p, q, exact_degree, basis, coords, subspace, invariants, inv_sub, class_dims, class_dims_deg
    )

"""Parameter spaces: admissible linear parts, then constant parts for a fixed
linear part.  Both stages are exact linear algebra because the conditions are
linear in the unknowns being solved for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from . import poly as P
from .cohomology import linear_cochain, representative_space
from .group import Group
from .kappa import KappaParameter, residuals_i, residuals_ii, residuals_iii, residuals_iv
from .linalg import Matrix, Subspace, nullspace, solve_affine


class InadmissibleLinearPart(ValueError):
    """The given linear part fails condition (i) or (ii)."""


@dataclass
class ParameterSpace:
    """``particular + span(basis)``; for the linear stage ``particular`` is zero.

    ``feasible`` is False when the affine system has no solution, in which
    case the space is empty and ``basis`` is empty.
    """

    kind: str  # "linear" or "constant"
    basis: list
    particular: Optional[KappaParameter]
    feasible: bool = True
    in_representative_space: list = field(default_factory=list)

    @property
    def dimension(self) -> Optional[int]:
        return len(self.basis) if self.feasible else None

    def element(self, coefficients) -> KappaParameter:
        if not self.feasible:
            raise ValueError("the parameter space is empty")
        out = self.particular
        for c, b in zip(coefficients, self.basis):
            out = out + b.scale(c)
        return out


def _flatten_residuals(residuals, monomial_index: dict) -> list:
    """Concatenate residual polynomials into one coordinate list."""
    out = []
    for r in residuals:
        block = [None] * len(monomial_index[r.condition])
        for e, c in r.value.items():
            block[monomial_index[r.condition][e]] = c
        out.append(block)
    return out


def _residual_vector(kappa: KappaParameter, conditions) -> tuple:
    ctx = kappa.ctx
    n = kappa.n
    index = {
        "i": {e: k for k, e in enumerate(P.monomials(n, 0) + P.monomials(n, 1))},
        "ii": {e: k for k, e in enumerate(P.monomials(n, 2))},
        "iii": {e: k for k, e in enumerate(P.monomials(n, 1))},
        "iv": {e: k for k, e in enumerate(P.monomials(n, 0))},
    }
    funcs = {"i": residuals_i, "ii": residuals_ii, "iii": residuals_iii, "iv": residuals_iv}
    out = []
    for name in conditions:
        for block in _flatten_residuals(funcs[name](kappa), index):
            out.extend(ctx.zero if x is None else x for x in block)
    return tuple(out)


def linear_unknowns(G: Group) -> list[tuple]:
    return [(g, i, j, m) for g in range(G.order) for i, j in combinations(range(G.dim), 2) for m in range(G.dim)]


def constant_unknowns(G: Group) -> list[tuple]:
    return [(g, i, j) for g in range(G.order) for i, j in combinations(range(G.dim), 2)]


def _unit_linear(G: Group, key: tuple) -> KappaParameter:
    g, i, j, m = key
    ctx = G.ctx
    vec = tuple(ctx.one if k == m else ctx.zero for k in range(G.dim))
    return KappaParameter(G, {}, {(g, i, j): vec})


def _linear_from_vector(G: Group, keys, vec) -> KappaParameter:
    ctx = G.ctx
    lin: dict = {}
    for (g, i, j, m), c in zip(keys, vec):
        if c:
            cur = lin.setdefault((g, i, j), [ctx.zero] * G.dim)
            cur[m] = c
    return KappaParameter(G, {}, lin)


def solve_linear_part(G: Group) -> ParameterSpace:
    """All linear parts satisfying conditions (i) and (ii).

    The basis is the reduced echelon basis in the unknown order
    (g index, pair i < j, coordinate).  Each basis vector carries a flag
    telling whether it lies in the degree-2 representative space.
    """
    ctx = G.ctx
    keys = linear_unknowns(G)
    columns = [_residual_vector(_unit_linear(G, k), ("i", "ii")) for k in keys]
    rows = len(columns[0]) if columns else 0
    A = Matrix(ctx, [[col[r] for col in columns] for r in range(rows)], len(keys))
    kernel = nullspace(A) if keys else Subspace.zero(ctx, 0)
    basis = [_linear_from_vector(G, keys, v) for v in kernel.basis]
    reps = representative_space(G, 2, 1, exact_degree=True) if basis else None
    flags = [reps.contains(linear_cochain(b)) for b in basis] if reps else []
    return ParameterSpace("linear", basis, KappaParameter.zero(G), True, flags)


def is_admissible_linear(kappa_linear: KappaParameter) -> bool:
    return not any(_residual_vector(kappa_linear.linear_part(), ("i", "ii")))


def solve_constant_part(G: Group, kappa_linear: KappaParameter) -> ParameterSpace:
    """All constant parts kappa^C making kappa^L + kappa^C pass every condition.

    Conditions (i), (iii), (iv) are affine in kappa^C once kappa^L is fixed;
    the columns of the system are the residual changes caused by each unit
    constant entry.
    """
    if kappa_linear.group is not G:
        raise ValueError("linear part belongs to a different group")
    lin = kappa_linear.linear_part()
    if not is_admissible_linear(lin):
        raise InadmissibleLinearPart("the linear part fails condition (i) or (ii)")
    ctx = G.ctx
    conditions = ("i", "iii", "iv")
    base = _residual_vector(lin, conditions)
    keys = constant_unknowns(G)
    columns = []
    for key in keys:
        shifted = _residual_vector(lin + KappaParameter(G, {key: ctx.one}, {}), conditions)
        columns.append([a - b for a, b in zip(shifted, base)])
    A = Matrix(ctx, [[col[r] for col in columns] for r in range(len(base))], len(keys))
    found = solve_affine(A, [-x for x in base])
    if found is None:
        return ParameterSpace("constant", [], None, False)
    particular, kernel = found

    def to_kappa(vec) -> KappaParameter:
        return KappaParameter(G, {k: c for k, c in zip(keys, vec) if c}, {})

    return ParameterSpace("constant", [to_kappa(v) for v in kernel.basis], to_kappa(particular), True)

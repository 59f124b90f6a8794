"""The deformation parameter kappa and the PBW condition checker.

kappa sends v_i ^ v_j to a constant part sum_g c_g g and a linear part
sum_g u_g g (u_g in V).  Only pairs i < j are stored; the alternating
extension is applied on access.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Optional, Sequence

from . import poly as P
from .group import Group
from .linalg import Matrix, nullspace
from .scalar import Scalar

CONDITIONS = ("i", "ii", "iii", "iv")

# cyclic permutations of a triple (sigma(1), sigma(2), sigma(3))
ALT3 = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


class KappaParameter:
    """Immutable sparse parameter over a fixed group.

    ``constant`` maps (g, i, j) with i < j to a Scalar and ``linear`` maps
    (g, i, j) to a coordinate vector of length n.  Zero entries are dropped.
    """

    def __init__(
        self,
        group: Group,
        constant: Optional[Mapping[tuple, Scalar]] = None,
        linear: Optional[Mapping[tuple, Sequence[Scalar]]] = None,
    ):
        self.group = group
        self.n = group.dim
        ctx = group.ctx
        self.ctx = ctx
        const: dict = {}
        for (g, i, j), c in (constant or {}).items():
            g, i, j, sign = _orient(g, i, j)
            if sign == 0:
                continue
            c = ctx(c) * sign
            old = const.get((g, i, j))
            const[(g, i, j)] = c if old is None else old + c
        lin: dict = {}
        for (g, i, j), v in (linear or {}).items():
            g, i, j, sign = _orient(g, i, j)
            if sign == 0:
                continue
            if len(v) != self.n:
                raise ValueError(f"linear value for pair ({i}, {j}) has length {len(v)}, expected {self.n}")
            v = tuple(ctx(x) * sign for x in v)
            old = lin.get((g, i, j))
            lin[(g, i, j)] = v if old is None else tuple(a + b for a, b in zip(old, v))
        for (g, i, j) in list(const) + list(lin):
            if not 0 <= g < group.order or not (0 <= i < j < self.n):
                raise ValueError(f"entry ({g}, {i}, {j}) out of range")
        self.constant = {k: c for k, c in sorted(const.items()) if c}
        self.linear = {k: v for k, v in sorted(lin.items()) if any(v)}
        self._zero_vec = (ctx.zero,) * self.n
        self._const_by_g: dict = {}
        for (g, i, j), c in self.constant.items():
            self._const_by_g.setdefault(g, []).append((i, j, c))
        self._lin_by_g: dict = {}
        for (g, i, j), v in self.linear.items():
            self._lin_by_g.setdefault(g, []).append((i, j, v))

    # access ---------------------------------------------------------------

    def const_value(self, g: int, i: int, j: int) -> Scalar:
        if i < j:
            return self.constant.get((g, i, j), self.ctx.zero)
        if i > j:
            c = self.constant.get((g, j, i))
            return -c if c is not None else self.ctx.zero
        return self.ctx.zero

    def linear_value(self, g: int, i: int, j: int) -> tuple:
        if i < j:
            return self.linear.get((g, i, j), self._zero_vec)
        if i > j:
            v = self.linear.get((g, j, i))
            return tuple(-x for x in v) if v is not None else self._zero_vec
        return self._zero_vec

    def eval_constant(self, g: int, u: Sequence[Scalar], w: Sequence[Scalar]) -> Scalar:
        acc = self.ctx.zero
        for i, j, c in self._const_by_g.get(g, ()):
            coeff = u[i] * w[j] - u[j] * w[i]
            if coeff:
                acc = acc + coeff * c
        return acc

    def eval_linear(self, g: int, u: Sequence[Scalar], w: Sequence[Scalar]) -> tuple:
        acc = list(self._zero_vec)
        for i, j, v in self._lin_by_g.get(g, ()):
            coeff = u[i] * w[j] - u[j] * w[i]
            if coeff:
                acc = [a + coeff * x for a, x in zip(acc, v)]
        return tuple(acc)

    def linear_support(self) -> list[int]:
        return sorted(self._lin_by_g)

    def constant_support(self) -> list[int]:
        return sorted(self._const_by_g)

    # algebra --------------------------------------------------------------

    def linear_part(self) -> "KappaParameter":
        return KappaParameter(self.group, {}, self.linear)

    def constant_part(self) -> "KappaParameter":
        return KappaParameter(self.group, self.constant, {})

    def __add__(self, other: "KappaParameter") -> "KappaParameter":
        const = dict(self.constant)
        for k, c in other.constant.items():
            const[k] = const[k] + c if k in const else c
        lin = dict(self.linear)
        for k, v in other.linear.items():
            lin[k] = tuple(a + b for a, b in zip(lin[k], v)) if k in lin else v
        return KappaParameter(self.group, const, lin)

    def scale(self, c) -> "KappaParameter":
        c = self.ctx(c)
        return KappaParameter(
            self.group,
            {k: x * c for k, x in self.constant.items()},
            {k: tuple(x * c for x in v) for k, v in self.linear.items()},
        )

    def __neg__(self) -> "KappaParameter":
        return self.scale(-1)

    def __sub__(self, other: "KappaParameter") -> "KappaParameter":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.constant and not self.linear

    def __eq__(self, other) -> bool:
        if not isinstance(other, KappaParameter):
            return NotImplemented
        return self.group is other.group and self.constant == other.constant and self.linear == other.linear

    def __hash__(self):
        return hash((tuple(self.constant.items()), tuple(self.linear.items())))

    def __repr__(self) -> str:
        return f"KappaParameter(constant={len(self.constant)} entries, linear={len(self.linear)} entries)"

    @classmethod
    def zero(cls, group: Group) -> "KappaParameter":
        return cls(group)


def _orient(g: int, i: int, j: int) -> tuple[int, int, int, int]:
    if i == j:
        return g, i, j, 0
    if i > j:
        return g, j, i, -1
    return g, i, j, 1


# ---------------------------------------------------------------------------
# condition residuals


@dataclass(frozen=True)
class Residual:
    """One evaluated identity.  ``value`` is a polynomial in S that must vanish.

    For condition (i), ``indices`` is a basis pair and ``h`` the conjugating
    element; the identity lives in the component of h^-1 g h.  For the other
    conditions ``indices`` is a basis triple and ``h`` is None.
    """

    condition: str
    g: int
    indices: tuple
    h: Optional[int]
    value: dict

    @property
    def is_zero(self) -> bool:
        return not self.value


def _unit(ctx, n: int, i: int) -> tuple:
    return tuple(ctx.one if k == i else ctx.zero for k in range(n))


def residuals_i(kappa: KappaParameter) -> Iterator[Residual]:
    """kappa_{h^-1 g h}(v_a, v_b) - ^{h^-1}(kappa_g(^h v_a, ^h v_b)) for all g, a < b, h."""
    G = kappa.group
    n = kappa.n
    for g in range(G.order):
        for a, b in combinations(range(n), 2):
            for h in range(G.order):
                hinv = G.inverses[h]
                target = G.conj(hinv, g)
                ha = G.elements[h].column(a)
                hb = G.elements[h].column(b)
                const = kappa.const_value(target, a, b) - kappa.eval_constant(g, ha, hb)
                moved = G.act(hinv, kappa.eval_linear(g, ha, hb))
                lin = tuple(x - y for x, y in zip(kappa.linear_value(target, a, b), moved))
                value = P.linear(lin)
                if const:
                    value[P.zero_exps(n)] = const
                yield Residual("i", g, (a, b), h, value)


def residuals_ii(kappa: KappaParameter) -> Iterator[Residual]:
    """sum over Alt_3 of kappa^L_g(v_s2, v_s3) (v_s1 - ^g v_s1), as a quadratic in S."""
    G = kappa.group
    n = kappa.n
    for g in range(G.order):
        M = G.elements[g]
        for triple in combinations(range(n), 3):
            value: dict = {}
            for s1, s2, s3 in ALT3:
                i1, i2, i3 = triple[s1], triple[s2], triple[s3]
                vec = kappa.linear_value(g, i2, i3)
                if not any(vec):
                    continue
                moved = M.column(i1)
                diff = tuple((kappa.ctx.one if k == i1 else kappa.ctx.zero) - moved[k] for k in range(n))
                P.add_into(value, P.mul(P.linear(vec), P.linear(diff)))
            yield Residual("ii", g, triple, None, value)


def _hecke_sums(kappa: KappaParameter, g: int, triple: tuple, use_constant: bool):
    """sum_{sigma, h} kappa_{g h^-1}(v_s1 + ^h v_s1, kappa^L_h(v_s2, v_s3)).

    Returns a vector (linear part of the outer kappa) or a Scalar (constant part).
    """
    G = kappa.group
    n = kappa.n
    ctx = kappa.ctx
    lin_support = kappa.linear_support()
    acc_vec = [ctx.zero] * n
    acc = ctx.zero
    for s1, s2, s3 in ALT3:
        i1, i2, i3 = triple[s1], triple[s2], triple[s3]
        for h in lin_support:
            inner = kappa.linear_value(h, i2, i3)
            if not any(inner):
                continue
            outer = G.cayley[g][G.inverses[h]]
            moved = G.elements[h].column(i1)
            first = tuple((ctx.one if k == i1 else ctx.zero) + moved[k] for k in range(n))
            if use_constant:
                acc = acc + kappa.eval_constant(outer, first, inner)
            else:
                out = kappa.eval_linear(outer, first, inner)
                acc_vec = [a + b for a, b in zip(acc_vec, out)]
    return acc if use_constant else tuple(acc_vec)


def residuals_iii(kappa: KappaParameter) -> Iterator[Residual]:
    """Left side minus 2 sum_sigma kappa^C_g(v_s2, v_s3)(^g v_s1 - v_s1)."""
    G = kappa.group
    n = kappa.n
    ctx = kappa.ctx
    for g in range(G.order):
        M = G.elements[g]
        for triple in combinations(range(n), 3):
            lhs = list(_hecke_sums(kappa, g, triple, use_constant=False))
            for s1, s2, s3 in ALT3:
                i1, i2, i3 = triple[s1], triple[s2], triple[s3]
                c = kappa.const_value(g, i2, i3)
                if c:
                    moved = M.column(i1)
                    for k in range(n):
                        diff = moved[k] - (ctx.one if k == i1 else ctx.zero)
                        if diff:
                            lhs[k] = lhs[k] - 2 * c * diff
            yield Residual("iii", g, triple, None, P.linear(lhs))


def residuals_iv(kappa: KappaParameter) -> Iterator[Residual]:
    G = kappa.group
    n = kappa.n
    for g in range(G.order):
        for triple in combinations(range(n), 3):
            value = _hecke_sums(kappa, g, triple, use_constant=True)
            yield Residual("iv", g, triple, None, P.constant(n, value))


RESIDUAL_FUNCTIONS = {
    "i": residuals_i,
    "ii": residuals_ii,
    "iii": residuals_iii,
    "iv": residuals_iv,
}


@dataclass
class ConditionResult:
    condition: str
    passed: bool
    witness: Optional[Residual] = None
    failures: int = 0


@dataclass
class ConditionReport:
    results: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __getitem__(self, name: str) -> ConditionResult:
        return self.results[name]

    def failing(self) -> list[str]:
        return [c for c in CONDITIONS if not self.results[c].passed]


def check_conditions(kappa: KappaParameter) -> ConditionReport:
    """Evaluate all four PBW conditions; witnesses are the first failures in
    (g index, basis pair/triple, h) order."""
    report = ConditionReport()
    for name in CONDITIONS:
        witness = None
        failures = 0
        for r in RESIDUAL_FUNCTIONS[name](kappa):
            if r.value:
                failures += 1
                if witness is None:
                    witness = r
        report.results[name] = ConditionResult(name, failures == 0, witness, failures)
    return report


# ---------------------------------------------------------------------------
# Lie orbifold specialisation


class LieOrbifoldPreconditionError(ValueError):
    """The linear part is supported away from the identity."""


LIE_CONDITIONS = (
    "bracket_jacobi",
    "bracket_invariant",
    "constant_equivariant",
    "constant_kernel",
    "hecke_jacobi",
    "compatible",
)


@dataclass
class LieOrbifoldReport:
    results: dict  # name -> (passed, witness description or None)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.results.values())


def check_lie_orbifold(kappa: KappaParameter) -> LieOrbifoldReport:
    """Check the identity-supported case through its Lie-theoretic conditions.

    bracket_jacobi      [., .] = kappa^L_1 satisfies the Jacobi identity
    bracket_invariant   the bracket is G-equivariant
    constant_equivariant a_{hgh^-1}(v, w) = a_g(^{h^-1} v, ^{h^-1} w)
    constant_kernel     for g != 1, a_g = 0 or (radical of a_g) = V^g of codimension 2
    hecke_jacobi        sum_sigma a_g(v_s2, v_s3)(v_s1 - ^g v_s1) = 0
    compatible          sum_sigma a_g(v_s1, [v_s2, v_s3]) = 0
    """
    G = kappa.group
    n = kappa.n
    ctx = kappa.ctx
    if any(g != 0 for g in kappa.linear_support()):
        raise LieOrbifoldPreconditionError("the linear part of kappa is supported off the identity")
    e = [_unit(ctx, n, i) for i in range(n)]

    def bracket(u, w):
        return kappa.eval_linear(0, u, w)

    results: dict = {}

    witness = None
    for i, j, k in combinations(range(n), 3):
        total = [ctx.zero] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            total = [x + y for x, y in zip(total, bracket(e[a], bracket(e[b], e[c])))]
        if any(total):
            witness = f"Jacobi sum on ({i}, {j}, {k}) is nonzero"
            break
    results["bracket_jacobi"] = (witness is None, witness)

    witness = None
    for h in range(G.order):
        for i, j in combinations(range(n), 2):
            lhs = G.act(h, bracket(e[i], e[j]))
            rhs = bracket(G.elements[h].column(i), G.elements[h].column(j))
            if lhs != rhs:
                witness = f"^{G.names[h]}[v{i + 1}, v{j + 1}] differs from [^{G.names[h]}v{i + 1}, ^{G.names[h]}v{j + 1}]"
                break
        if witness:
            break
    results["bracket_invariant"] = (witness is None, witness)

    witness = None
    for g in range(G.order):
        for h in range(G.order):
            target = G.conj(h, g)
            hinv = G.inverses[h]
            for i, j in combinations(range(n), 2):
                lhs = kappa.const_value(target, i, j)
                rhs = kappa.eval_constant(g, G.elements[hinv].column(i), G.elements[hinv].column(j))
                if lhs != rhs:
                    witness = f"a_{G.names[target]} is not the {G.names[h]}-conjugate of a_{G.names[g]} on (v{i + 1}, v{j + 1})"
                    break
            if witness:
                break
        if witness:
            break
    results["constant_equivariant"] = (witness is None, witness)

    witness = None
    for g in range(1, G.order):
        if not any(gg == g for gg, _, _ in kappa.constant):
            continue
        form = Matrix(ctx, [[kappa.const_value(g, i, j) for j in range(n)] for i in range(n)], n)
        radical = nullspace(form)
        if G.codim(g) != 2 or radical != G.fixed_spaces[g]:
            witness = f"a_{G.names[g]} is nonzero but its kernel is not a codimension-2 fixed space"
            break
    results["constant_kernel"] = (witness is None, witness)

    constant_only = KappaParameter(G, kappa.constant, {})
    witness = None
    for r in residuals_iii(constant_only):
        if r.value:
            witness = f"Hecke Jacobi sum at {G.names[r.g]} on {r.indices} is nonzero"
            break
    results["hecke_jacobi"] = (witness is None, witness)

    witness = None
    for g in range(G.order):
        for i, j, k in combinations(range(n), 3):
            total = ctx.zero
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                total = total + kappa.eval_constant(g, e[a], bracket(e[b], e[c]))
            if total:
                witness = f"a_{G.names[g]} is not compatible with the bracket on ({i}, {j}, {k})"
                break
        if witness:
            break
    results["compatible"] = (witness is None, witness)
    return LieOrbifoldReport(results)


# ---------------------------------------------------------------------------
# gauge transformation


class GaugeError(ValueError):
    pass


def is_invariant_one_cochain(G: Group, rho: Mapping[tuple, Scalar]) -> bool:
    """rho(v_i) = sum_g rho[(g, i)] g is G-invariant: h rho(v) h^-1 = rho(^h v)."""
    n = G.dim
    ctx = G.ctx
    for h in range(G.order):
        M = G.elements[h]
        for i in range(n):
            lhs: dict = {}
            for (g, k), c in rho.items():
                if k == i and c:
                    key = G.conj(h, g)
                    lhs[key] = lhs.get(key, ctx.zero) + c
            rhs: dict = {}
            for (g, k), c in rho.items():
                coeff = M[k, i]
                if coeff and c:
                    rhs[g] = rhs.get(g, ctx.zero) + coeff * c
            keys = set(lhs) | set(rhs)
            if any(lhs.get(x, ctx.zero) != rhs.get(x, ctx.zero) for x in keys):
                return False
    return True


def apply_gauge(kappa: KappaParameter, rho: Mapping[tuple, Scalar]) -> KappaParameter:
    """Transform kappa along v -> v + rho(v) for an invariant rho: V -> kG.

    rho maps (g, i) to the coefficient of g in rho(v_i).  The result has
    linear part kappa^L + d*rho and constant part
    kappa^C - rho o (new linear part) + rho (x) rho, and defines an algebra
    isomorphic to the input as a filtered algebra.
    """
    G = kappa.group
    n = kappa.n
    ctx = kappa.ctx
    rho = {k: ctx(c) for k, c in rho.items() if c}
    if not is_invariant_one_cochain(G, rho):
        raise GaugeError("rho is not G-invariant")

    def rho_of(vec) -> dict:
        out: dict = {}
        for (g, k), c in rho.items():
            if vec[k]:
                out[g] = out.get(g, ctx.zero) + vec[k] * c
        return out

    # d*rho(v_a ^ v_b) = sum_g [rho_g(v_b)(v_a - ^g v_a) - rho_g(v_a)(v_b - ^g v_b)] g
    lin: dict = {k: list(v) for k, v in kappa.linear.items()}
    for a, b in combinations(range(n), 2):
        for g in range(G.order):
            ca = rho.get((g, a), ctx.zero)
            cb = rho.get((g, b), ctx.zero)
            if not ca and not cb:
                continue
            M = G.elements[g]
            vec = [ctx.zero] * n
            for k in range(n):
                da = (ctx.one if k == a else ctx.zero) - M[k, a]
                db = (ctx.one if k == b else ctx.zero) - M[k, b]
                vec[k] = cb * da - ca * db
            if any(vec):
                cur = lin.setdefault((g, a, b), [ctx.zero] * n)
                lin[(g, a, b)] = [x + y for x, y in zip(cur, vec)]
    new_linear = KappaParameter(G, {}, lin)

    const: dict = dict(kappa.constant)

    def bump(key, c):
        if c:
            const[key] = const[key] + c if key in const else c

    for a, b in combinations(range(n), 2):
        # - rho o kappa~^L : rho(u_g g) = sum_h rho_h(u_g) h g
        for g in new_linear.linear_support():
            u = new_linear.linear_value(g, a, b)
            for h, c in rho_of(u).items():
                bump((G.cayley[h][g], a, b), -c)
        # + rho(v_a) rho(v_b) - rho(v_b) rho(v_a)
        ra = {g: c for (g, k), c in rho.items() if k == a}
        rb = {g: c for (g, k), c in rho.items() if k == b}
        for x, cx in ra.items():
            for y, cy in rb.items():
                bump((G.cayley[x][y], a, b), cx * cy)
                bump((G.cayley[y][x], a, b), -cx * cy)
    return KappaParameter(G, const, new_linear.linear)

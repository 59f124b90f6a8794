"""Shared fixtures for the test suite: small groups and a seeded corpus of
random parameters, roughly half of which give PBW deformations."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

from pbwdeform import poly as P
from pbwdeform.cohomology import Cochain
from pbwdeform.group import Group
from pbwdeform.kappa import KappaParameter
from pbwdeform.linalg import Matrix
from pbwdeform.scalar import CyclotomicContext
from pbwdeform.solver import solve_constant_part, solve_linear_part


def _group(order: int, rows_list, dim: int) -> Group:
    ctx = CyclotomicContext(order)
    gens = [Matrix(ctx, [[ctx(x) if not isinstance(x, str) else _root(ctx, x) for x in row] for row in m], dim) for m in rows_list]
    return Group(ctx, gens, dim)


def _root(ctx, text: str):
    # "z^k" is the k-th power of the primitive order-th root
    k = int(text[2:])
    return ctx.zeta_power(k)


def diag(*entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def small_group(name: str) -> Group:
    """Groups of order at most 6 acting on spaces of dimension at most 3."""
    table = {
        "trivial2": (1, [], 2),
        "trivial3": (1, [], 3),
        "z2_plane": (1, [diag(-1, -1)], 2),
        "z2_reflection2": (1, [diag(-1, 1)], 2),
        "z2_swap": (1, [[[0, 1], [1, 0]]], 2),
        "z2_rotation3": (1, [diag(-1, -1, 1)], 3),
        "z2_reflection3": (1, [diag(1, 1, -1)], 3),
        "klein": (1, [diag(-1, 1, -1), diag(-1, -1, 1)], 3),
        "z3_plane": (3, [diag("z^1", "z^2")], 2),
        "z3_space": (3, [diag("z^1", "z^2", 1)], 3),
        "z4_rotation": (1, [[[0, -1], [1, 0]]], 2),
        "s3_perm": (1, [[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]]], 3),
        "z6_space": (3, [diag(-1, "z^1", "z^2")], 3),
    }
    order, gens, dim = table[name]
    return _group(order, gens, dim)


GROUP_NAMES = [
    "trivial2",
    "trivial3",
    "z2_plane",
    "z2_reflection2",
    "z2_swap",
    "z2_rotation3",
    "z2_reflection3",
    "klein",
    "z3_plane",
    "z3_space",
    "z4_rotation",
    "s3_perm",
    "z6_space",
]


@lru_cache(maxsize=None)
def linear_space(name: str):
    return solve_linear_part(small_group(name))


def small_scalar(rng: random.Random, ctx, allow_zero: bool = True):
    choices = [-2, -1, 1, 2] + ([0, 0] if allow_zero else [])
    c = ctx(rng.choice(choices))
    if ctx.order > 2 and rng.random() < 0.3:
        c = c * ctx.zeta_power(rng.randrange(ctx.order))
    return c


def random_kappa(rng: random.Random, G: Group, density: float = 0.3) -> KappaParameter:
    ctx = G.ctx
    const = {}
    lin = {}
    for g in range(G.order):
        for i, j in combinations(range(G.dim), 2):
            if rng.random() < density:
                const[(g, i, j)] = small_scalar(rng, ctx, allow_zero=False)
            if rng.random() < density:
                lin[(g, i, j)] = [small_scalar(rng, ctx) for _ in range(G.dim)]
    return KappaParameter(G, const, lin)


def combine(rng: random.Random, space, ctx):
    coeffs = [ctx(rng.choice([-1, 0, 1, 2])) for _ in space.basis]
    return space.element(coeffs)


def admissible_kappa(rng: random.Random, G: Group, name: str) -> KappaParameter:
    """Admissible linear part drawn from the solved space, then a constant
    part from the solved affine space when one exists."""
    ctx = G.ctx
    lin = combine(rng, linear_space(name), ctx) if rng.random() < 0.8 else KappaParameter.zero(G)
    space = solve_constant_part(G, lin)
    if not space.feasible:
        lin = KappaParameter.zero(G)
        space = solve_constant_part(G, lin)
    return lin + combine(rng, space, ctx)


def perturb(rng: random.Random, kappa: KappaParameter) -> KappaParameter:
    G = kappa.group
    ctx = G.ctx
    g = rng.randrange(G.order)
    i, j = rng.sample(range(G.dim), 2)
    if rng.random() < 0.5:
        return kappa + KappaParameter(G, {(g, i, j): small_scalar(rng, ctx, allow_zero=False)}, {})
    vec = [ctx.zero] * G.dim
    vec[rng.randrange(G.dim)] = small_scalar(rng, ctx, allow_zero=False)
    return kappa + KappaParameter(G, {}, {(g, i, j): vec})


def kappa_corpus(size: int = 120, seed: int = 20240611) -> list[tuple[str, KappaParameter]]:
    """Deterministic mix of admissible, perturbed and unstructured parameters."""
    rng = random.Random(seed)
    out = []
    for k in range(size):
        name = GROUP_NAMES[k % len(GROUP_NAMES)]
        G = small_group(name)
        mode = rng.random()
        if mode < 0.4:
            kappa = admissible_kappa(rng, G, name)
        elif mode < 0.85:
            kappa = perturb(rng, admissible_kappa(rng, G, name))
        else:
            kappa = random_kappa(rng, G)
        out.append((name, kappa))
    return out


@lru_cache(maxsize=None)
def cached_corpus() -> tuple:
    return tuple(kappa_corpus())


def random_poly(rng, ctx, n, q):
    f: dict = {}
    for d in range(q + 1):
        for e in P.monomials(n, d):
            if rng.random() < 0.4:
                P.add_term(f, e, ctx(rng.randint(-3, 3)))
    return f


def random_cochain(rng, G, p, q, density=0.5):
    values = {}
    for g in range(G.order):
        if rng.random() > density:
            continue
        values[g] = {J: random_poly(rng, G.ctx, G.dim, q) for J in combinations(range(G.dim), p)}
    return Cochain(G, p, q, values)


def random_combination(rng, cochains, G, p, q):
    out = Cochain.zero(G, p, q)
    for c in cochains:
        k = rng.randint(-2, 2)
        if k:
            out = out + c.scale(G.ctx(k))
    return out


def diagonal_group(order, exponent_lists):
    """Group generated by diag(zeta^k1, ..., zeta^kn) for each exponent list."""
    ctx = CyclotomicContext(order)
    n = len(exponent_lists[0])
    gens = [Matrix(ctx, [[ctx.zeta_power(ks[i]) if i == j else 0 for j in range(n)] for i in range(n)]) for ks in exponent_lists]
    return Group(ctx, gens, n)


ABELIAN_DIAGONAL = {
    "trivial3": lambda: small_group("trivial3"),
    "z2_rotation3": lambda: small_group("z2_rotation3"),
    "z2_reflection3": lambda: small_group("z2_reflection3"),
    "z2_plane": lambda: small_group("z2_plane"),
    "klein": lambda: small_group("klein"),
    "z3_space": lambda: small_group("z3_space"),
    "z6_space": lambda: small_group("z6_space"),
    "signs3": lambda: diagonal_group(2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    "z4_space": lambda: diagonal_group(4, [[1, 3, 0]]),
    "z4_z2": lambda: diagonal_group(4, [[1, 3, 0], [0, 0, 2]]),
    "z8_space": lambda: diagonal_group(8, [[1, 7, 0]]),
    "z4_scalar": lambda: diagonal_group(4, [[1, 1, 2]]),
}


@lru_cache(maxsize=None)
def abelian_diagonal_groups() -> dict:
    """Abelian groups of order at most 8 acting diagonally on a 3-dimensional space."""
    return {name: build() for name, build in ABELIAN_DIAGONAL.items()}

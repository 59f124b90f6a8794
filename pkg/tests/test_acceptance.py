"""Acceptance gate.  Every criterion is exact and prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import random
import time

import pytest

from pbwdeform.cohomology import (
    bracket,
    constant_cochain,
    differential,
    is_coboundary,
    linear_cochain,
    representative_space,
)
from pbwdeform.kappa import check_conditions, check_lie_orbifold
from pbwdeform.problem import load_bundled
from pbwdeform.rewrite import PbwElement, Rewriter, ambiguities, graded_dimension, overlap_check, pbw_count
from pbwdeform.solver import solve_constant_part

from helpers import (
    GROUP_NAMES,
    abelian_diagonal_groups,
    cached_corpus,
    random_cochain,
    random_combination,
    small_group,
)


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert ok, detail

    return emit


def test_criterion_1_klein_example(report):
    start = time.perf_counter()
    kappa = load_bundled("klein").kappa
    conditions = check_conditions(kappa)
    verdict = overlap_check(kappa)
    elapsed = time.perf_counter() - start
    ok = conditions.passed and verdict.confluent and elapsed < 1.0
    report(1, "Klein four-group parameter is PBW", ok, f"conditions {conditions.passed}, overlaps {verdict.confluent}, {elapsed:.3f}s")


def test_criterion_2_s3_example(report):
    start = time.perf_counter()
    kappa = load_bundled("s3").kappa
    conditions = check_conditions(kappa)
    elapsed = time.perf_counter() - start
    ok = conditions.passed and kappa.ctx.order == 3 and elapsed < 2.0
    report(2, "S3 parameter over Q(E(3)) is PBW", ok, f"failing {conditions.failing()}, {elapsed:.3f}s")


def test_criterion_3_sl2_example(report):
    start = time.perf_counter()
    kappa = load_bundled("sl2").kappa
    conditions = check_conditions(kappa)
    lie = check_lie_orbifold(kappa)
    space = solve_constant_part(kappa.group, kappa.linear_part())
    elapsed = time.perf_counter() - start
    # bundled instance (t1, t2) = (0, 1)
    instance = space.element([kappa.ctx(0), kappa.ctx(1)]) if space.dimension == 2 else None
    inside = instance is not None and instance == kappa.constant_part()
    ok = conditions.passed and lie.passed and space.dimension == 2 and inside and elapsed < 2.0
    report(
        3,
        "sl2 Lie orbifold family",
        ok,
        f"conditions {conditions.passed}, lie {lie.passed}, dimension {space.dimension}, instance inside {inside}, {elapsed:.3f}s",
    )


def test_criterion_4_oracle_equivalence(report):
    cases = [load_bundled(name).kappa for name in ("klein", "klein_bad", "s3", "sl2")]
    cases += [kappa for _, kappa in cached_corpus()]
    disagreements = 0
    passing = 0
    for kappa in cases:
        verdict = check_conditions(kappa).passed
        passing += verdict
        disagreements += verdict != overlap_check(kappa).confluent
    failing = len(cases) - passing
    balanced = min(passing, failing) >= 0.3 * len(cases)
    ok = disagreements == 0 and len(cases) >= 104 and balanced
    report(4, "condition checker agrees with the overlap oracle", ok, f"{len(cases)} cases, {passing} pass, {failing} fail, {disagreements} disagreements")


def _random_monomial(rng, G, max_degree=3):
    exps = [0] * G.dim
    for _ in range(rng.randint(0, max_degree)):
        exps[rng.randrange(G.dim)] += 1
    return PbwElement.monomial(G.ctx, exps, rng.randrange(G.order))


def test_criterion_5_degree_law(report):
    violations = 0
    pairs = 0
    for name in ("klein", "sl2"):
        kappa = load_bundled(name).kappa
        G = kappa.group
        rw = Rewriter(kappa, graded_t=True)
        rng = random.Random(f"degree-{name}")
        for _ in range(50):
            r = _random_monomial(rng, G)
            s = _random_monomial(rng, G)
            total = sum(next(iter(r.terms))[0]) + sum(next(iter(s.terms))[0])
            product = rw.multiply(r, s)
            pairs += 1
            for i in product.t_powers():
                if product.t_coefficient(i).polynomial_degrees() != {total - i}:
                    violations += 1
    report(5, "t-graded products obey the degree law", violations == 0 and pairs == 100, f"{pairs} pairs, {violations} violations")


def test_criterion_6_cocycle_and_bracket_equivalences(report):
    spaces = {}
    disagreements = {"ii": 0, "iii": 0, "iv": 0}
    with_hypothesis = 0
    corpus = cached_corpus()
    for name, kappa in corpus:
        conditions = check_conditions(kappa)
        L = linear_cochain(kappa)
        disagreements["ii"] += conditions["ii"].passed != differential(L).is_zero()
        if name not in spaces:
            spaces[name] = representative_space(kappa.group, 2, 1, exact_degree=True)
        # the bracket equivalences assume kappa^L is a representative
        if not spaces[name].contains(L):
            continue
        with_hypothesis += 1
        C = constant_cochain(kappa)
        iii = bracket(L, L) == differential(C).scale(kappa.ctx(2))
        iv = bracket(C, L).is_zero()
        disagreements["iii"] += conditions["iii"].passed != iii
        disagreements["iv"] += conditions["iv"].passed != iv
    ok = not any(disagreements.values()) and with_hypothesis >= 50
    report(6, "conditions (ii)-(iv) match their cochain forms", ok, f"{len(corpus)} cases, {with_hypothesis} with representative linear part, disagreements {disagreements}")


def test_criterion_7_complex_and_vanishing(report):
    rng = random.Random(77)
    square_failures = 0
    for k in range(100):
        G = small_group(GROUP_NAMES[k % len(GROUP_NAMES)])
        alpha = random_cochain(rng, G, rng.randint(0, G.dim - 2), rng.randint(0, 2))
        square_failures += not differential(differential(alpha)).is_zero()

    recovered = 0
    recover_failures = 0
    k = 0
    while recovered + recover_failures < 50:
        G = small_group(GROUP_NAMES[k % len(GROUP_NAMES)])
        k += 1
        rho = random_cochain(rng, G, rng.randint(0, min(2, G.dim - 1)), rng.randint(0, 1), density=0.8)
        gamma = differential(rho)
        if gamma.is_zero():
            continue
        sigma = is_coboundary(gamma)
        if sigma is not None and differential(sigma) == gamma:
            recovered += 1
        else:
            recover_failures += 1

    instances = 0
    violations = 0
    for G in abelian_diagonal_groups().values():
        invariants = representative_space(G, 2, 1, exact_degree=True).invariant_basis
        on_kernel = [b for b in invariants if b.support() == [0]]
        off_kernel = [b for b in invariants if 0 not in b.support()]
        for _ in range(8):
            # square of a kernel-supported cochain: a coboundary only if zero
            L = random_combination(rng, on_kernel, G, 2, 1)
            square = bracket(L, L)
            if is_coboundary(square) is not None:
                instances += 1
                violations += not square.is_zero()
            # brackets of invariant representatives that are coboundaries vanish
            a = random_combination(rng, invariants, G, 2, 1)
            b = random_combination(rng, invariants, G, 2, 1)
            ab = bracket(a, b)
            if is_coboundary(ab) is not None:
                instances += 1
                violations += not ab.is_zero()
            # brackets of invariant representatives supported off the kernel vanish
            a = random_combination(rng, off_kernel, G, 2, 1)
            b = random_combination(rng, off_kernel, G, 2, 1)
            instances += 1
            violations += not bracket(a, b).is_zero()
    ok = square_failures == 0 and recovered == 50 and instances >= 50 and violations == 0
    report(
        7,
        "cochain complex, coboundaries and abelian vanishing",
        ok,
        f"d*d* failures {square_failures}/100, recovered {recovered}/50, vanishing instances {instances}, violations {violations}",
    )


def test_criterion_8_pbw_dimension_counts(report):
    mismatches = []
    for name in ("klein", "s3", "sl2", "trivial2"):
        kappa = load_bundled(name).kappa
        G = kappa.group
        for d in range(5):
            got = graded_dimension(kappa, d)
            if got != pbw_count(G.dim, G.order, d):
                mismatches.append((name, d, got))
    report(8, "filtered pieces have PBW dimension", not mismatches, f"mismatches {mismatches}")


def test_criterion_9_negative_control(report):
    problem = load_bundled("klein_bad")
    kappa = problem.kappa
    G = problem.group
    conditions = check_conditions(kappa)
    failing = conditions.failing()
    witness = conditions[failing[0]].witness if failing else None
    nonzero = False
    if witness is not None:
        residue = PbwElement(G.ctx, G.dim, {(e, witness.g, 0): c for e, c in witness.value.items()})
        rw = Rewriter(kappa)
        word = tuple(reversed(witness.indices))
        matches = [a for a in ambiguities(rw) if a.word == word]
        if matches:
            overlap = matches[0].residue
            component = PbwElement(G.ctx, G.dim, {k: c for k, c in overlap.terms.items() if k[1] == witness.g})
            nonzero = component == residue and not component.is_zero()
    text = residue.format(problem.basis_names, G.names) if witness is not None else "none"
    ok = bool(failing) and nonzero
    report(9, "perturbed Klein parameter fails with a live witness", ok, f"failing {failing}, residue {text}")

import random

import pytest

from pbwdeform.kappa import check_conditions
from pbwdeform.problem import load_bundled
from pbwdeform.rewrite import (
    FreeElement,
    PbwElement,
    PreconditionError,
    Rewriter,
    ambiguities,
    graded_dimension,
    multiply,
    normal_form,
    overlap_check,
    parse_free,
    pbw_count,
)


def reduce_text(name, text, graded_t=False):
    problem = load_bundled(name)
    ctx = problem.ctx
    symbols = {"t": FreeElement(ctx, {((), 1): 1})}
    for alias, g in problem.symbol_aliases().items():
        symbols[alias] = FreeElement.word(ctx, (~g,))
    for i, b in enumerate(problem.basis_names):
        symbols[b] = FreeElement.word(ctx, (i,))
    x = parse_free(text, ctx, symbols, problem.group)
    nf = normal_form(x, problem.kappa, graded_t)
    return nf.format(problem.basis_names, problem.group.names)


@pytest.mark.parametrize(
    "name, text, expected",
    [
        ("klein", "y*x", "x*y - z*h"),
        ("klein", "g1*x", "-x*g"),
        ("klein", "g*x", "-x*g"),
        ("klein", "x", "x"),
        ("klein", "g*g", "1"),
        ("klein", "g^-1*h", "g*h"),
        ("klein", "z*x", "x*z + y*g"),
        ("sl2", "h*e", "e*h + 2*e - g"),
        ("sl2", "f*e", "e*f - h"),
        ("s3", "w2*w1", "w1*w2 - w3*c + w3*c^2"),
        ("trivial2", "b*a - a*b", "0"),
    ],
)
def test_reduce_examples(name, text, expected):
    assert reduce_text(name, text) == expected


def test_graded_reduction_tracks_t():
    assert reduce_text("klein", "y*x", graded_t=True) == "x*y - z*h*t"
    assert reduce_text("sl2", "h*e", graded_t=True) == "e*h + 2*e*t - g*t^2"


def random_pbw_monomial(rng, problem, max_degree=3):
    n = problem.group.dim
    exps = [0] * n
    for _ in range(rng.randint(0, max_degree)):
        exps[rng.randrange(n)] += 1
    return PbwElement.monomial(problem.ctx, exps, rng.randrange(problem.group.order))


def random_pbw_element(rng, problem, terms=2):
    out = PbwElement(problem.ctx, problem.group.dim)
    for _ in range(terms):
        out = out + random_pbw_monomial(rng, problem, 2).scale(rng.choice([-2, -1, 1, 3]))
    return out


@pytest.mark.parametrize("name", ["klein", "sl2", "s3"])
def test_degree_law(name):
    problem = load_bundled(name)
    rng = random.Random(name)
    rw = Rewriter(problem.kappa, graded_t=True)
    for _ in range(50):
        r = random_pbw_monomial(rng, problem)
        s = random_pbw_monomial(rng, problem)
        total = sum(next(iter(r.terms))[0]) + sum(next(iter(s.terms))[0])
        product = rw.multiply(r, s)
        for i in product.t_powers():
            assert product.t_coefficient(i).polynomial_degrees() == {total - i}


@pytest.mark.parametrize("name", ["klein", "sl2", "s3"])
def test_associativity(name):
    problem = load_bundled(name)
    rng = random.Random(name + "assoc")
    for graded in (False, True):
        rw = Rewriter(problem.kappa, graded_t=graded)
        for _ in range(15):
            a, b, c = (random_pbw_element(rng, problem) for _ in range(3))
            assert rw.multiply(rw.multiply(a, b), c) == rw.multiply(a, rw.multiply(b, c))


@pytest.mark.parametrize("name", ["klein", "sl2", "s3"])
def test_group_inputs_carry_no_t(name):
    problem = load_bundled(name)
    G = problem.group
    ctx = problem.ctx
    rng = random.Random(name + "group")
    rw = Rewriter(problem.kappa, graded_t=True)
    for _ in range(20):
        g = PbwElement.monomial(ctx, [0] * G.dim, rng.randrange(G.order))
        x = random_pbw_monomial(rng, problem)
        assert rw.multiply(x, g).t_powers() in ([], [0])
        assert rw.multiply(g, g).t_powers() in ([], [0])
        v = PbwElement(ctx, G.dim)
        for i in range(G.dim):
            exps = [0] * G.dim
            exps[i] = 1
            v = v + PbwElement.monomial(ctx, exps, coeff=rng.randint(-2, 2))
        assert rw.multiply(g, v).t_powers() in ([], [0])


def test_diagonal_action_moves_monomials_without_t():
    # for a diagonal action ^g(v^e) is a multiple of v^e, so no reordering happens
    problem = load_bundled("klein")
    rng = random.Random(11)
    rw = Rewriter(problem.kappa, graded_t=True)
    for _ in range(30):
        g = PbwElement.monomial(problem.ctx, [0, 0, 0], rng.randrange(4))
        x = random_pbw_monomial(rng, problem, 4)
        assert rw.multiply(g, x).t_powers() in ([], [0])


def test_multiply_matches_free_product():
    problem = load_bundled("klein")
    ctx = problem.ctx
    y = PbwElement.monomial(ctx, [0, 1, 0])
    x = PbwElement.monomial(ctx, [1, 0, 0])
    direct = multiply(y, x, problem.kappa)
    via_word = normal_form(FreeElement.word(ctx, (1, 0)), problem.kappa)
    assert direct == via_word


def test_normal_words_are_fixed_points():
    problem = load_bundled("s3")
    rw = Rewriter(problem.kappa)
    word = (0, 0, 1, 2, ~3)
    assert rw.word_normal_form(word) == PbwElement.monomial(problem.ctx, [2, 1, 1], 3)


@pytest.mark.parametrize("name", ["klein", "s3", "sl2", "trivial2"])
def test_bundled_overlaps_resolve(name):
    verdict = overlap_check(load_bundled(name).kappa)
    assert verdict.confluent
    assert verdict.witness is None


def test_klein_bad_overlap_witness():
    problem = load_bundled("klein_bad")
    verdict = overlap_check(problem.kappa)
    assert not verdict.confluent
    amb = verdict.witness
    assert amb.word == (2, 1, 0)
    assert amb.residue.format(problem.basis_names, problem.group.names) == "2*z^2*g"


def test_checker_witness_matches_an_overlap_residue():
    problem = load_bundled("klein_bad")
    G = problem.group
    w = check_conditions(problem.kappa)["ii"].witness
    residue = PbwElement(problem.ctx, G.dim, {(e, w.g, 0): c for e, c in w.value.items()})
    rw = Rewriter(problem.kappa)
    word = tuple(reversed(w.indices))
    (amb,) = [a for a in ambiguities(rw) if a.word == word]
    got = PbwElement(problem.ctx, G.dim, {k: c for k, c in amb.residue.terms.items() if k[1] == w.g})
    assert got == residue
    assert not got.is_zero()


@pytest.mark.parametrize("name", ["klein", "s3", "sl2", "trivial2"])
@pytest.mark.parametrize("d", [0, 1, 2, 3, 4])
def test_graded_dimension(name, d):
    problem = load_bundled(name)
    G = problem.group
    assert graded_dimension(problem.kappa, d) == pbw_count(G.dim, G.order, d)


def test_pbw_count_formula():
    # |G| * sum_{e <= d} C(n + e - 1, e)
    assert pbw_count(3, 4, 2) == 4 * (1 + 3 + 6)
    assert pbw_count(2, 1, 4) == 1 + 2 + 3 + 4 + 5


def test_graded_dimension_requires_confluence():
    with pytest.raises(PreconditionError):
        graded_dimension(load_bundled("klein_bad").kappa, 2)


def test_free_element_arithmetic():
    ctx = load_bundled("klein").ctx
    x = FreeElement.word(ctx, (0,))
    y = FreeElement.word(ctx, (1,))
    assert (x * y - y * x) != FreeElement(ctx, {})
    assert (x + y).scale(2) == x.scale(2) + y.scale(2)
    assert FreeElement.word(ctx, (~0,)) == FreeElement.scalar(ctx, 1)

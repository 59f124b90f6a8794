import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbwdeform.scalar import (
    CyclotomicContext,
    FieldOrderError,
    conjugate,
    cyclotomic_polynomial,
    format_scalar,
    parse_scalar,
)

ORDERS = [1, 3, 4, 5, 8, 12]


def scalars(order):
    ctx = CyclotomicContext(order)

    @st.composite
    def build(draw):
        fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))
        coeffs = draw(st.lists(fractions, min_size=1, max_size=ctx.order))
        out = ctx.zero
        for k, c in enumerate(coeffs):
            out = out + ctx(c) * ctx.zeta_power(k)
        return out

    return build()


def numeric(s):
    """Complex value with zeta = exp(2 pi i / N)."""
    z = cmath.exp(2j * cmath.pi / s.ctx.order)
    return sum(float(c) * z**k for k, c in enumerate(s.coefficients))


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_contexts_are_shared_per_order():
    assert CyclotomicContext(3) is CyclotomicContext(3)
    assert CyclotomicContext(3).degree == 2


def test_canonical_reduction():
    ctx = CyclotomicContext(3)
    assert format_scalar(parse_scalar("E(3)^2", ctx)) == "-1 - E(3)"
    assert parse_scalar("1 + E(3) + E(3)^2", ctx) == 0


def test_roots_of_smaller_order():
    ctx = CyclotomicContext(12)
    assert ctx.root(4) ** 2 == -1
    assert ctx.root(3) ** 3 == 1
    assert ctx.root(3) != 1
    with pytest.raises(FieldOrderError):
        ctx.root(5)
    with pytest.raises(FieldOrderError):
        parse_scalar("E(8)", CyclotomicContext(4))


def test_rational_embedding():
    ctx = CyclotomicContext(5)
    x = ctx(Fraction(3, 4))
    assert x.is_rational()
    assert x.to_fraction() == Fraction(3, 4)
    assert x == Fraction(3, 4)
    assert not ctx.zeta.is_rational()


def test_division_by_zero():
    ctx = CyclotomicContext(3)
    with pytest.raises(ZeroDivisionError):
        ctx.one / ctx.zero


def test_mixing_fields_is_refused():
    with pytest.raises(ValueError):
        CyclotomicContext(3).one + CyclotomicContext(4).one


@pytest.mark.parametrize("order", ORDERS)
def test_zeta_has_exact_order(order):
    ctx = CyclotomicContext(order)
    z = ctx.zeta
    assert z**order == 1
    assert all(z**k != 1 for k in range(1, order))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n), scalars(n))))
def test_field_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n))))
def test_conjugation_is_a_field_automorphism(ab):
    a, b = ab
    assert conjugate(a + b) == conjugate(a) + conjugate(b)
    assert conjugate(a * b) == conjugate(a) * conjugate(b)
    assert conjugate(conjugate(a)) == a
    assert abs(numeric(conjugate(a)) - numeric(a).conjugate()) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(scalars))
def test_format_parse_round_trip(a):
    assert parse_scalar(format_scalar(a), a.ctx) == a


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda n: st.tuples(scalars(n), scalars(n))))
def test_arithmetic_agrees_with_complex_numbers(ab):
    a, b = ab
    assert abs(numeric(a * b) - numeric(a) * numeric(b)) < 1e-6
    assert abs(numeric(a + b) - (numeric(a) + numeric(b))) < 1e-9

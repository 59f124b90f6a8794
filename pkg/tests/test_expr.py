import pytest

from pbwdeform.expr import ParseError, parse_with, root_orders, tokenize
from pbwdeform.scalar import CyclotomicContext, parse_scalar


def test_tokenize_positions():
    toks = tokenize("2*E(3) + x")
    assert [t.value for t in toks][:4] == ["2", "*", "E", "("]


def test_precedence_and_unary_minus():
    ctx = CyclotomicContext(1)
    assert parse_scalar("1 + 2*3", ctx) == 7
    assert parse_scalar("-2^2", ctx) == -4
    assert parse_scalar("(1 + 1)^3 / 4", ctx) == 2
    assert parse_scalar("1/2 - 1/3", ctx) * 6 == 1


def test_root_prescan():
    assert root_orders("E(3) + E( 4 )*2") == [3, 4]
    assert root_orders("1 + 2") == []


@pytest.mark.parametrize("text", ["", "1 +", "(1", "1 2", "E(", "E(0)", "2^x", "x"])
def test_malformed_expressions(text):
    with pytest.raises((ParseError, ValueError)):
        parse_scalar(text, CyclotomicContext(1))


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_scalar("1 + * 2", CyclotomicContext(1))
    assert info.value.position == 4


class _Strings:
    def number(self, n):
        return str(n)

    def root(self, n, pos):
        return f"E{n}"

    def symbol(self, name, pos):
        return name

    def add(self, a, b):
        return f"({a}+{b})"

    def sub(self, a, b):
        return f"({a}-{b})"

    def mul(self, a, b):
        return f"({a}*{b})"

    def div(self, a, b, pos):
        return f"({a}/{b})"

    def neg(self, a):
        return f"-{a}"

    def power(self, a, k, pos):
        return f"{a}^{k}"


def test_generic_algebra_sees_structure():
    assert parse_with("a + b*c^2", _Strings()) == "(a+(b*c^2))"
    assert parse_with("a - b - c", _Strings()) == "((a-b)-c)"

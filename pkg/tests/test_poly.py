import random

from pbwdeform import poly as P
from pbwdeform.problem import load_bundled
from pbwdeform.scalar import CyclotomicContext

Q = CyclotomicContext(1)
K3 = CyclotomicContext(3)


def test_monomial_enumeration():
    assert P.monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(P.monomials(3, 3)) == 10
    assert P.monomials(0, 0) == [()]


def test_ring_operations():
    x = P.linear([Q(1), Q(0)])
    y = P.linear([Q(0), Q(1)])
    s = P.add(x, y)
    d = P.sub(x, y)
    assert P.mul(s, d) == P.sub(P.mul(x, x), P.mul(y, y))
    assert P.total_degree(P.mul(s, s)) == 2
    assert P.homogeneous_part(P.add(s, P.constant(2, Q(3))), 0) == {(0, 0): Q(3)}
    assert P.sub(s, s) == {}


def test_formatting():
    names = ["x", "y"]
    f = P.add(P.scale(P.mul(P.linear([Q(1), Q(0)]), P.linear([Q(0), Q(1)])), Q(-2)), P.constant(2, Q(1)))
    assert P.format_poly(f, names) == "-2*x*y + 1"
    g = P.scale(P.linear([K3(0), K3(1)]), K3.zeta + 1)
    assert P.format_poly(g, names) == "(1 + E(3))*y"
    assert P.format_poly(P.scale(g, K3(-1)), names) == "(-1 - E(3))*y"
    assert P.format_poly({}, names) == "0"


def test_group_action_is_a_ring_homomorphism():
    G = load_bundled("s3").group
    act = P.GroupActionOnS(G)
    rng = random.Random(0)
    for _ in range(10):
        f = {e: G.ctx(rng.randint(-2, 2)) for e in P.monomials(3, 1) if rng.random() < 0.7}
        h = {e: G.ctx(rng.randint(-2, 2)) for e in P.monomials(3, 2) if rng.random() < 0.5}
        f = {e: c for e, c in f.items() if c}
        h = {e: c for e, c in h.items() if c}
        for g in range(G.order):
            assert act.apply(g, P.mul(f, h)) == P.mul(act.apply(g, f), act.apply(g, h))
            for k in range(G.order):
                assert act.apply(G.mul(g, k), f) == act.apply(g, act.apply(k, f))

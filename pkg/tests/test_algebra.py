from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sskg import corpus
from sskg.algebra import CQ, Algebra, BadLevel, ExpressionError, Monomial
from sskg.kgraph import Path, degrees_upto


@pytest.fixture(scope="module")
def A():
    return Algebra(corpus.load("flip2x3")[2])


def test_mono_mul_examples(A):
    ev = A.evaluate
    assert ev("S(a0) U(1) S*(v) * S(a1) U(0) S*(v)") == A.mono("a0.a0", 1, "v")
    assert ev("S(v) U(1) S*(v) * S(a0) U(0) S*(v)") == A.mono("a1", 0, "v")
    assert ev("S(a0) S*(a0) * S(a1) S*(a1)").is_zero()


def test_adjoint_examples(A):
    assert A.adjoint(A.mono("a0", 1, "v")) == A.mono("v", -1, "a0")
    p = A.mono("v", 0, "v")
    assert A.adjoint(p) == p
    x = A.evaluate("1/2 S(a0) - 2i S(b0) U(1)")
    assert A.adjoint(A.adjoint(x)) == x
    assert A.adjoint(A.scalar(CQ(Fraction(0), Fraction(1)))) == A.scalar(CQ(Fraction(0), Fraction(-1)))


def test_gauge_examples(A):
    m = A.mono("a0", 1, "v")
    assert A.gauge_components(m) == {(1, 0): m}
    x = A.mono("v", 1, "v") + A.mono("a0", 0, "a0")
    assert A.gauge_components(x) == {(0, 0): x}
    y = A.mono("a0", 0, "b0")
    assert A.gauge_components(y) == {(1, -1): y}


def test_expand_examples(A):
    assert A.expand_to_level(A.mono("v", 0, "v"), (1, 0)) == A.evaluate("S(a0)S*(a0) + S(a1)S*(a1)")
    assert A.expand_to_level(A.mono("v", 1, "v"), (1, 0)) == A.mono("a1", 0, "a0") + A.mono("a0", 1, "a1")
    m = A.mono("a0", 0, "a0")
    assert A.expand_to_level(m, (1, 0)) == m
    with pytest.raises(BadLevel):
        A.expand_to_level(A.mono("a0", 0, "a0"), (0, 1))


def test_equals_examples(A):
    ev = A.evaluate
    assert A.equals(ev("U(1) S(a0)"), ev("S(a1) U(0)")) == "Equal"
    assert A.equals(ev("S(v) S*(v)"), ev("S(a0)S*(a0) + S(a1)S*(a1)")) == "Equal"
    assert A.equals(ev("S(a0)S*(a0)"), ev("S(a1)S*(a1)")) == "Distinct"


def test_apply_examples(A):
    B = A.boundary
    x = B.parse(";a0.b0")
    assert A.apply_to_path(A.evaluate("S(a0)"), x) == {B.make("a0", "a0.b0"): CQ.of(1)}
    img = A.apply_to_path(A.evaluate("U(1)"), x)
    assert list(img) == [B.act_on_path(A.group(1), x)]
    assert A.apply_to_path(A.evaluate("S*(a0)"), B.parse("a1;a0.b0")) == {}


def test_expression_errors(A):
    with pytest.raises(ExpressionError):
        A.evaluate("S(a0) +")
    with pytest.raises(ExpressionError):
        A.evaluate("S(a0")


def _monomials(A, bound=(1, 1), radius=2):
    g = A.graph
    paths = [p for v in g.vertices for d in degrees_upto(bound[:g.k]) for p in g.paths_from(v, d)]
    ball = sorted(A.group.enumerate_ball(radius))
    return [A.mono(mu, h, nu) for mu in paths for nu in paths for h in ball
            if g.source(mu) == A.action.act_vertex(h, g.source(nu))]


MONOS = {name: _monomials(Algebra(corpus.load(name)[2])) for name in ["flip2x3", "swap2"]}


@pytest.mark.parametrize("name", ["flip2x3", "swap2"])
@given(data=st.data())
def test_ring_laws(name, data):
    Al = MONOS[name][0].algebra
    a, b, c = (data.draw(st.sampled_from(MONOS[name])) for _ in range(3))
    assert Al.equals((a * b) * c, a * (b * c)) == "Equal"
    assert Al.equals(Al.adjoint(a * b), Al.adjoint(b) * Al.adjoint(a)) == "Equal"
    # products of monomials stay in the span of monomials, graded additively
    prod = a * b
    assert all(isinstance(m, Monomial) for m in prod.terms)
    da, db = (next(iter(Al.gauge_components(t))) for t in (a, b))
    assert set(Al.gauge_components(prod)) <= {tuple(i + j for i, j in zip(da, db))}


@pytest.mark.parametrize("name", ["flip2x3", "swap2"])
@given(data=st.data())
def test_representation_is_multiplicative(name, data):
    Al = MONOS[name][0].algebra
    a, b = (data.draw(st.sampled_from(MONOS[name])) for _ in range(2))
    x = data.draw(st.sampled_from(Al.boundary.sample_paths(2)))
    assert Al.apply_to_path(a * b, x) == Al.apply_to_vector(a, Al.apply_to_path(b, x))


def test_defining_relations(A):
    g, G = A.graph, A.group
    ball = sorted(G.enumerate_ball(2))
    for h in ball:
        for k in ball:
            assert A.equals(A.u(h) * A.u(k), A.u(h * k)) == "Equal"
    for d in degrees_upto((1, 1)):
        for mu in g.paths_from("v", d):
            for h in ball:
                img, res = A.action.act_restrict(h, mu)
                assert A.equals(A.u(h) * A.s(mu), A.s(img) * A.u(res)) == "Equal"
            assert A.equals(A.s_star(mu) * A.s(mu), A.s(Path(g.source(mu)))) == "Equal"
    for d in [(1, 0), (0, 1), (1, 1)]:
        total = A.zero()
        for mu in g.paths_from("v", d):
            total = total + A.s(mu) * A.s_star(mu)
        assert A.equals(A.s(Path("v")), total) == "Equal"

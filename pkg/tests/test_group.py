import pytest
from hypothesis import given, strategies as st

from sskg.group import MixedGroups, NotAGroup, make_group

BACKENDS = ["Z", "Z^2", "Z/2", "Z/5", "free(a,b)", "trivial"]


def test_make_group_examples():
    Z = make_group("Z")
    assert Z(2) * Z(3) == Z(5)
    t2 = make_group({"elements": ["1", "t"],
                     "table": {("1", "1"): "1", ("1", "t"): "t", ("t", "1"): "t", ("t", "t"): "1"}})
    assert t2("t").inverse() == t2("t")
    assert len(t2.enumerate_ball(1)) == 2


def test_table_without_inverse_rejected():
    bad = {("1", "1"): "1", ("1", "t"): "t", ("t", "1"): "t", ("t", "t"): "t"}
    with pytest.raises(NotAGroup):
        make_group({"elements": ["1", "t"], "table": bad})


def test_free_reduction():
    F = make_group("free(a,b)")
    assert F("a*b") * F("b^-1") == F("a")
    assert {str(x) for x in make_group("free(a)").enumerate_ball(1)} == {"1", "a", "a^-1"}


def test_ball_examples():
    Z = make_group("Z")
    assert {int(str(x)) for x in Z.enumerate_ball(2)} == {-2, -1, 0, 1, 2}


def test_mixed_groups():
    with pytest.raises(MixedGroups):
        make_group("Z")(1) * make_group("Z")(1)


@pytest.mark.parametrize("descriptor", BACKENDS)
@given(data=st.data())
def test_group_axioms(descriptor, data):
    G = make_group(descriptor)
    ball = sorted(G.enumerate_ball(3))
    a, b, c = (data.draw(st.sampled_from(ball)) for _ in range(3))
    e = G.identity
    assert (a * b) * c == (a * (b * c))
    assert a * e == a == e * a
    assert a * a.inverse() == e
    assert G.parse(str(a)) == a
    # the generator word multiplies back to the element
    w = e
    for s, sign in G.word(a):
        w = w * (s if sign > 0 else s.inverse())
    assert w == a


@pytest.mark.parametrize("descriptor", BACKENDS)
def test_ball_monotone(descriptor):
    G = make_group(descriptor)
    prev = set()
    for r in range(4):
        ball = G.enumerate_ball(r)
        assert G.identity in ball and prev <= ball
        prev = ball

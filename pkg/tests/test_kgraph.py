import pytest
from hypothesis import given, strategies as st

from oracles import brute_lambda_min, path_key, swap_table, word_class, words_from
from sskg import corpus
from sskg.kgraph import (BadDegree, Edge, MissingSquare, NotBijective, NotComposable, Path,
                         SourceViolation, degrees_upto, validate_kgraph)

CORPUS = corpus.names()


def _p(g, s):
    return g.path(s)


def test_flip_graph_shape(flip):
    g, _, _ = flip
    assert g.k == 2 and g.vertices == ("v",)
    assert len(g.edges) == 5 and len(g.squares) == 6


def test_square_removed_is_missing():
    doc = corpus.document("flip2x3")
    doc.squares = [sq for sq in doc.squares if sq[:2] != ("a0", "b1")]
    with pytest.raises(MissingSquare):
        doc.build_graph()


def test_source_violation():
    with pytest.raises(SourceViolation):
        validate_kgraph(1, ["u", "v"], [Edge("e", 1, "u", "v")], {})


def test_not_bijective():
    edges = [Edge("a", 1, "v", "v"), Edge("b", 2, "v", "v"), Edge("c", 2, "v", "v")]
    # both colour-(1,2) words claim the same colour-(2,1) image
    squares = {("a", "b"): ("b", "a"), ("a", "c"): ("b", "a")}
    with pytest.raises(NotBijective):
        validate_kgraph(2, ["v"], edges, squares)


def test_compose_examples(flip):
    g, _, _ = flip
    assert g.compose(_p(g, "a0"), _p(g, "b1")) == _p(g, "b2.a0")
    assert g.compose(_p(g, "a0"), _p(g, "b1")).word == ("a0", "b1")
    assert g.compose(_p(g, "v"), _p(g, "a0")) == _p(g, "a0")
    assert g.compose(_p(g, "b0"), _p(g, "a0")).word == ("a0", "b0")


def test_compose_not_composable(loaded):
    g, _, _ = loaded("line2")
    with pytest.raises(NotComposable):
        g.compose(g.path("l"), g.path("e"))


def test_factorize_and_segment(flip):
    g, _, _ = flip
    ab = _p(g, "a0.b0")
    assert g.factorize(ab, (0, 1)) == (_p(g, "b0"), _p(g, "a0"))
    assert g.factorize(ab, (1, 1)) == (ab, Path("v"))
    with pytest.raises(BadDegree):
        g.factorize(_p(g, "a0"), (0, 1))
    assert g.segment(ab, (0, 0), (1, 0)) == _p(g, "a0")
    assert g.segment(ab, (1, 0), (1, 1)) == _p(g, "b0")
    assert g.segment(ab, (0, 1), (1, 1)) == _p(g, "a0")


def test_paths_from(flip):
    g, _, _ = flip
    assert [str(p) for p in g.paths_from("v", (1, 0))] == ["a0", "a1"]
    assert g.paths_from("v", (0, 0)) == (Path("v"),)
    assert len(g.paths_from("v", (1, 1))) == 6


def test_lambda_min_examples(flip, loaded):
    g, _, _ = flip
    assert g.lambda_min(_p(g, "a0"), _p(g, "b2")) == [(_p(g, "b1"), _p(g, "a0"))]
    l1, _, _ = loaded("loop1")
    assert l1.lambda_min(l1.path("l"), l1.path("l")) == [(Path("v"), Path("v"))]
    l2, _, _ = loaded("line2")
    assert l2.lambda_min(l2.path("e"), l2.path("l")) == []


def _all_paths(g, bound):
    return [p for v in g.vertices for d in degrees_upto(bound) for p in g.paths_from(v, d)]


@pytest.mark.parametrize("name", CORPUS)
def test_normal_form_matches_word_classes(loaded, name):
    """Two raw words give the same Path exactly when the squares connect them."""
    g, _, _ = loaded(name)
    table = swap_table(g)
    bound = (2,) * g.k
    for v in g.vertices:
        for d in degrees_upto(bound):
            words = words_from(g, v, d)
            by_path = {}
            for w in words:
                by_path.setdefault(g.path(w) if w else Path(v), set()).add(w)
            for p, ws in by_path.items():
                assert ws == set(word_class(g, p.word, table)) or not p.word


@pytest.mark.parametrize("name", CORPUS)
def test_factorization_unique_and_inverse(loaded, name):
    g, _, _ = loaded(name)
    for p in _all_paths(g, (2,) * g.k):
        for n in degrees_upto(g.degree(p)):
            a, b = g.factorize(p, n)
            assert g.compose(a, b) == p
            # uniqueness: no other pair of these degrees recomposes to p
            others = [(x, y) for x in g.paths_from(p.range, n)
                      for y in g.paths_from(g.source(x), tuple(i - j for i, j in zip(g.degree(p), n)))
                      if g.compose(x, y) == p]
            assert others == [(a, b)]


@pytest.mark.parametrize("name", ["flip2x3", "line2", "swap2", "graph2x"])
def test_lambda_min_matches_brute_force(loaded, name):
    g, _, _ = loaded(name)
    table = swap_table(g)
    paths = _all_paths(g, (2,) * g.k)
    for mu in paths:
        for nu in paths:
            got = {(path_key(g, a, table), path_key(g, b, table)) for a, b in g.lambda_min(mu, nu)}
            assert got == brute_lambda_min(g, mu, nu)


@given(st.data())
def test_lambda_min_symmetry(data):
    g, _, _ = corpus.load("flip2x3")
    paths = _all_paths(g, (2, 2))
    mu = data.draw(st.sampled_from(paths))
    nu = data.draw(st.sampled_from(paths))
    assert {(b, a) for a, b in g.lambda_min(mu, nu)} == set(g.lambda_min(nu, mu))


@pytest.mark.parametrize("name", CORPUS)
def test_square_counting(loaded, name):
    g, _, _ = loaded(name)
    if g.k < 2:
        return
    for v in g.vertices:
        one_first = sum(len(g.paths_from(g.edges[e].source, (0, 1))) for e in g.edges_into(v, 1))
        two_first = sum(len(g.paths_from(g.edges[e].source, (1, 0))) for e in g.edges_into(v, 2))
        assert one_first == two_first == len(g.paths_from(v, (1, 1)))

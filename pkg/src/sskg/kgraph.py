"""Finite k-graphs presented by a coloured 1-skeleton plus factorization squares.

Morphisms are stored in colour-sorted normal form: all colour-1 edges first,
then colour-2 edges, and so on.  Two words denote the same morphism exactly
when their normal forms agree, so equality of :class:`Path` is structural.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

Degree = tuple[int, ...]


class KGraphError(ValidationError):
    pass


class MissingSquare(KGraphError):
    pass


class NotBijective(KGraphError):
    pass


class SquareMismatch(KGraphError):
    pass


class SourceViolation(KGraphError):
    pass


class CubeViolation(KGraphError):
    pass


class NotComposable(KGraphError):
    pass


class BadDegree(KGraphError):
    pass


# --- degree arithmetic -------------------------------------------------------

def deg_le(a: Degree, b: Degree) -> bool:
    return all(x <= y for x, y in zip(a, b))


def deg_add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def deg_sub(a: Degree, b: Degree) -> Degree:
    if not deg_le(b, a):
        raise BadDegree(f"{b} is not below {a}")
    return tuple(x - y for x, y in zip(a, b))


def deg_join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def deg_meet(a: Degree, b: Degree) -> Degree:
    return tuple(min(x, y) for x, y in zip(a, b))


def deg_scale(m: int, a: Degree) -> Degree:
    return tuple(m * x for x in a)


def unit(k: int, i: int) -> Degree:
    """The generator e_i of N^k (colours are 1-based)."""
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def degrees_upto(bound: Degree):
    """All degrees n with 0 <= n <= bound, in lexicographic order."""
    return list(product(*(range(b + 1) for b in bound)))


# --- data --------------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True, order=True)
class Path:
    """A morphism: its range vertex and colour-sorted edge word."""
    range: str
    word: tuple[str, ...] = ()

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return ".".join(self.word) if self.word else self.range


class KGraph:
    """Validated finite k-graph.  Build instances with :func:`validate_kgraph`."""

    def __init__(self, k: int, vertices: Sequence[str], edges: Sequence[Edge],
                 squares: Mapping[tuple[str, str], tuple[str, str]]):
        self.k = k
        self.vertices = tuple(vertices)
        self.edges = {e.id: e for e in edges}
        self.squares = dict(squares)
        # adjacent transpositions in both directions
        self._swap: dict[tuple[str, str], tuple[str, str]] = {}
        for (e, f), (f2, e2) in self.squares.items():
            self._swap[(e, f)] = (f2, e2)
            self._swap[(f2, e2)] = (e, f)
        self._rearrange_cache: dict = {}
        self._paths_cache: dict = {}

    # basic accessors
    def color(self, e: str) -> int:
        return self.edges[e].color

    def vertex(self, v: str) -> Path:
        if v not in self.vertices:
            raise KGraphError(f"unknown vertex {v!r}")
        return Path(v)

    def edge(self, e: str) -> Path:
        return Path(self.edges[e].range, (e,))

    def degree(self, p: Path) -> Degree:
        d = [0] * self.k
        for e in p.word:
            d[self.edges[e].color - 1] += 1
        return tuple(d)

    def source(self, p: Path) -> str:
        return self.edges[p.word[-1]].source if p.word else p.range

    def zero(self) -> Degree:
        return (0,) * self.k

    def edges_of_color(self, i: int) -> list[str]:
        return sorted(e.id for e in self.edges.values() if e.color == i)

    def edges_into(self, v: str, i: int) -> list[str]:
        """vΛ^{e_i}: the colour-i edges with range v."""
        return sorted(e.id for e in self.edges.values()
                      if e.color == i and e.range == v)

    # word manipulation
    def _rearrange(self, word: tuple[str, ...], target: tuple[int, ...]) -> tuple[str, ...]:
        key = (word, target)
        hit = self._rearrange_cache.get(key)
        if hit is not None:
            return hit
        w = list(word)
        for idx, c in enumerate(target):
            j = idx
            while self.edges[w[j]].color != c:
                j += 1
            for t in range(j - 1, idx - 1, -1):
                w[t], w[t + 1] = self._swap[(w[t], w[t + 1])]
        out = tuple(w)
        self._rearrange_cache[key] = out
        return out

    def normal_form(self, word: tuple[str, ...]) -> tuple[str, ...]:
        target = tuple(sorted(self.edges[e].color for e in word))
        return self._rearrange(tuple(word), target)

    def path(self, tokens: Iterable[str] | str) -> Path:
        """Build a path from edge ids listed in composable order (any colours),
        or from a single vertex id.  A string is split on '.'."""
        if isinstance(tokens, str):
            tokens = [t for t in tokens.strip().split(".") if t]
        tokens = list(tokens)
        if len(tokens) == 1 and tokens[0] in self.vertices:
            return Path(tokens[0])
        if not tokens:
            raise KGraphError("empty path literal")
        for t in tokens:
            if t not in self.edges:
                raise KGraphError(f"unknown edge or vertex {t!r}")
        for a, b in zip(tokens, tokens[1:]):
            if self.edges[a].source != self.edges[b].range:
                raise NotComposable(f"{a} then {b}")
        return Path(self.edges[tokens[0]].range, self.normal_form(tuple(tokens)))

    def compose(self, p: Path, q: Path) -> Path:
        if self.source(p) != q.range:
            raise NotComposable(f"s({p}) = {self.source(p)} but r({q}) = {q.range}")
        if not p.word:
            return q
        if not q.word:
            return p
        return Path(p.range, self.normal_form(p.word + q.word))

    def compose_all(self, *paths: Path) -> Path:
        out = paths[0]
        for q in paths[1:]:
            out = self.compose(out, q)
        return out

    def factorize(self, p: Path, n: Degree) -> tuple[Path, Path]:
        d = self.degree(p)
        if len(n) != self.k or not deg_le(n, d):
            raise BadDegree(f"{n} is not below d({p}) = {d}")
        rest = deg_sub(d, n)
        target = tuple(c for i in range(self.k) for c in [i + 1] * n[i])
        target += tuple(c for i in range(self.k) for c in [i + 1] * rest[i])
        w = self._rearrange(p.word, target)
        m = sum(n)
        alpha = Path(p.range, w[:m])
        beta = Path(self.source(alpha), w[m:])
        return alpha, beta

    def segment(self, p: Path, a: Degree, b: Degree) -> Path:
        if not deg_le(a, b):
            raise BadDegree(f"{a} is not below {b}")
        head, _ = self.factorize(p, b)
        _, mid = self.factorize(head, a)
        return mid

    def paths_from(self, v: str, n: Degree) -> tuple[Path, ...]:
        """vΛ^n, sorted."""
        key = (v, tuple(n))
        hit = self._paths_cache.get(key)
        if hit is not None:
            return hit
        colors = [i + 1 for i in range(self.k) for _ in range(n[i])]
        by_range: dict[tuple[str, int], list[str]] = {}
        for e in self.edges.values():
            by_range.setdefault((e.range, e.color), []).append(e.id)
        words = [((), v)]
        for c in colors:
            words = [(w + (e,), self.edges[e].source)
                     for w, end in words
                     for e in sorted(by_range.get((end, c), []))]
        out = tuple(sorted(Path(v, w) for w, _ in words))
        self._paths_cache[key] = out
        return out

    def lambda_min(self, mu: Path, nu: Path) -> list[tuple[Path, Path]]:
        """All (α, β) with μα = νβ and d(μα) = d(μ) ∨ d(ν)."""
        if mu.range != nu.range:
            return []
        dmu, dnu = self.degree(mu), self.degree(nu)
        top = deg_join(dmu, dnu)
        out = []
        for alpha in self.paths_from(self.source(mu), deg_sub(top, dmu)):
            first, beta = self.factorize(self.compose(mu, alpha), dnu)
            if first == nu:
                out.append((alpha, beta))
        return out

    def __repr__(self):
        return f"KGraph(k={self.k}, vertices={len(self.vertices)}, edges={len(self.edges)})"


def validate_kgraph(k: int, vertices: Sequence[str], edges: Sequence[Edge],
                    squares: Mapping[tuple[str, str], tuple[str, str]]) -> KGraph:
    if not isinstance(k, int) or k < 1:
        raise KGraphError(f"k must be a positive integer, got {k!r}")
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise KGraphError("duplicate vertex id")
    emap: dict[str, Edge] = {}
    for e in edges:
        if e.id in emap or e.id in vset:
            raise KGraphError(f"duplicate id {e.id!r}")
        if not 1 <= e.color <= k:
            raise KGraphError(f"edge {e.id}: colour {e.color} outside 1..{k}")
        if e.range not in vset or e.source not in vset:
            raise KGraphError(f"edge {e.id}: unknown endpoint")
        emap[e.id] = e

    for v in vertices:
        for i in range(1, k + 1):
            if not any(e.range == v and e.color == i for e in edges):
                raise SourceViolation(f"vertex {v} receives no colour-{i} edge")

    for (e, f), (f2, e2) in squares.items():
        for x in (e, f, f2, e2):
            if x not in emap:
                raise SquareMismatch(f"square mentions unknown edge {x!r}")
        ce, cf = emap[e].color, emap[f].color
        if not ce < cf or emap[f2].color != cf or emap[e2].color != ce:
            raise SquareMismatch(f"square {e}.{f} = {f2}.{e2}: bad colours")
        if emap[e].source != emap[f].range or emap[f2].source != emap[e2].range:
            raise SquareMismatch(f"square {e}.{f} = {f2}.{e2}: not composable")
        if emap[e].range != emap[f2].range or emap[f].source != emap[e2].source:
            raise SquareMismatch(f"square {e}.{f} = {f2}.{e2}: endpoints differ")

    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            left = [(e.id, f.id) for e in edges for f in edges
                    if e.color == i and f.color == j and e.source == f.range]
            right = {(f.id, e.id) for f in edges for e in edges
                     if f.color == j and e.color == i and f.source == e.range}
            for pair in left:
                if pair not in squares:
                    raise MissingSquare(f"no square for {pair[0]}.{pair[1]}")
            images = [squares[pair] for pair in left]
            if len(set(images)) != len(images) or set(images) != right:
                raise NotBijective(f"colours ({i},{j}): squares are not a bijection")

    g = KGraph(k, list(vertices), list(edges), squares)
    if k >= 3:
        _check_cubes(g)
    return g


def _check_cubes(g: KGraph):
    e = g.edges
    for x, y, z in product(e.values(), repeat=3):
        if not (x.color > y.color > z.color):
            continue
        if x.source != y.range or y.source != z.range:
            continue
        results = []
        for order in ((0, 1, 0), (1, 0, 1)):
            w = [x.id, y.id, z.id]
            for t in order:
                w[t], w[t + 1] = g._swap[(w[t], w[t + 1])]
            results.append(tuple(w))
        if results[0] != results[1]:
            raise CubeViolation(f"word {x.id}.{y.id}.{z.id} re-sorts to {results[0]} and {results[1]}")

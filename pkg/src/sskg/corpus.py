"""Built-in example documents."""
from __future__ import annotations

from .fileformat import InputDocument, parse


def odometer_source(name: str, sizes: list[int], letters: str = "abcdefgh") -> str:
    """Single-vertex k-graph with n_i loops of colour i and the Z-odometer:
    1 adds one to the first digit and carries through the mixed radix."""
    k = len(sizes)
    edge = lambda i, s: f"{letters[i]}{s}"  # noqa: E731
    lines = ["[kgraph]", f"name {name}", f"k {k}", "vertices v"]
    for i, n in enumerate(sizes):
        lines += [f"edge {edge(i, s)} {i + 1} v v" for s in range(n)]
    for i in range(k):
        for j in range(i + 1, k):
            ni, nj = sizes[i], sizes[j]
            for s in range(ni):
                for t in range(nj):
                    # x^i_s x^j_t = x^j_{t'} x^i_{s'} where s + t n_i = t' + s' n_j
                    total = s + t * ni
                    t2, s2 = total % nj, total // nj
                    lines.append(f"square {edge(i, s)}.{edge(j, t)} = {edge(j, t2)}.{edge(i, s2)}")
    lines += ["[group]", "backend Z", "amenable true", "[action]", "generator 1", "  vertex v -> v"]
    for i, n in enumerate(sizes):
        for s in range(n):
            carry = 1 if s == n - 1 else 0
            lines.append(f"  edge {edge(i, s)} -> {edge(i, (s + 1) % n)} | {carry}")
    return "\n".join(lines) + "\n"


LOOP1 = """\
[kgraph]
name loop1
k 1
vertices v
edge l 1 v v
[group]
backend trivial
amenable true
"""

LINE2 = """\
[kgraph]
name line2
k 1
vertices u v
edge e 1 u v
edge l 1 v v
[group]
backend trivial
amenable true
"""

DISJOINT2 = """\
[kgraph]
name disjoint2
k 1
vertices p q
edge lp 1 p p
edge lq 1 q q
[group]
backend trivial
amenable true
"""

SWAP2 = """\
[kgraph]
name swap2
k 1
vertices p q
edge ep 1 p q
edge eq 1 q p
[group]
backend table
amenable true
elements 1 t
row 1 : 1 t
row t : t 1
generators t
[action]
generator t
  vertex p -> q
  vertex q -> p
  edge ep -> eq | t
  edge eq -> ep | t
"""

SOURCES = {
    "flip2x3": odometer_source("flip2x3", [2, 3]),
    "loop1": LOOP1,
    "line2": LINE2,
    "disjoint2": DISJOINT2,
    "swap2": SWAP2,
    "graph2x": odometer_source("graph2x", [2], letters="x"),
}


def names() -> list[str]:
    return list(SOURCES)


def source(name: str) -> str:
    return SOURCES[name]


def document(name: str) -> InputDocument:
    return parse(SOURCES[name])


def load(name: str):
    """(graph, group, action) for a corpus entry."""
    return document(name).build()

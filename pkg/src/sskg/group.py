"""Group backends with decidable equality: finite tables, Z^n and free groups."""
from __future__ import annotations

import re
from collections import deque
from itertools import product
from typing import Hashable, Mapping, Sequence

from .errors import SSKGError, ValidationError


class NotAGroup(ValidationError):
    pass


class MixedGroups(SSKGError):
    pass


class GroupElement:
    __slots__ = ("group", "value", "_hash")

    def __init__(self, group: "Group", value: Hashable):
        self.group = group
        self.value = value
        self._hash = hash(value)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.group.mul(self, other)

    def inverse(self) -> "GroupElement":
        return self.group.inv(self)

    def is_identity(self) -> bool:
        return self.value == self.group._identity

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group is other.group and self.value == other.value

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.group.sort_key(self.value) < other.group.sort_key(other.value)

    def __str__(self):
        return self.group.format(self.value)

    def __repr__(self):
        return f"<{self.group.name} {self}>"


class Group:
    name = "group"
    _identity: Hashable

    # backend hooks
    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def _parse(self, text: str):
        raise NotImplementedError

    def sort_key(self, value):
        return value

    def generator_values(self) -> list:
        raise NotImplementedError

    def word_values(self, value) -> list:
        """A fixed word s_1 ... s_m in the generators and their inverses with
        value = s_1 * ... * s_m; each letter is (generator value, +1 or -1)."""
        raise NotImplementedError

    # public api
    def wrap(self, value) -> GroupElement:
        return GroupElement(self, value)

    @property
    def identity(self) -> GroupElement:
        return self.wrap(self._identity)

    def generators(self) -> list[GroupElement]:
        return [self.wrap(v) for v in self.generator_values()]

    def _own(self, *xs: GroupElement):
        for x in xs:
            if not isinstance(x, GroupElement) or x.group is not self:
                raise MixedGroups(f"{x!r} does not belong to {self.name}")

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        self._own(g, h)
        return self.wrap(self._mul(g.value, h.value))

    def inv(self, g: GroupElement) -> GroupElement:
        self._own(g)
        return self.wrap(self._inv(g.value))

    def eq(self, g: GroupElement, h: GroupElement) -> bool:
        self._own(g, h)
        return g.value == h.value

    def parse(self, text) -> GroupElement:
        if isinstance(text, GroupElement):
            self._own(text)
            return text
        return self.wrap(self._parse(str(text).strip()))

    __call__ = parse

    def word(self, g: GroupElement) -> list[tuple[GroupElement, int]]:
        self._own(g)
        return [(self.wrap(s), e) for s, e in self.word_values(g.value)]

    def enumerate_ball(self, radius: int) -> set[GroupElement]:
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        letters = set()
        for s in self.generator_values():
            letters.add(s)
            letters.add(self._inv(s))
        seen = {self._identity}
        frontier = [self._identity]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for s in letters:
                    y = self._mul(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return {self.wrap(x) for x in seen}

    def is_finite(self) -> bool:
        return False

    def descriptor(self) -> str:
        raise NotImplementedError


class FiniteGroup(Group):
    """Group given by a full multiplication table over named elements."""

    def __init__(self, elements: Sequence[str], table: Mapping[tuple[str, str], str],
                 generators: Sequence[str] | None = None):
        self.elements = list(elements)
        self.table = dict(table)
        self.name = f"table{{{', '.join(self.elements)}}}"
        els = set(self.elements)
        if len(els) != len(self.elements) or not els:
            raise NotAGroup("element names must be distinct and nonempty")
        for a, b in product(self.elements, repeat=2):
            c = self.table.get((a, b))
            if c not in els:
                raise NotAGroup(f"product {a}*{b} missing or outside the set")
        ids = [e for e in self.elements
               if all(self.table[(e, x)] == x == self.table[(x, e)] for x in self.elements)]
        if not ids:
            raise NotAGroup("no identity element")
        self._identity = ids[0]
        for a, b, c in product(self.elements, repeat=3):
            if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                raise NotAGroup(f"not associative at ({a},{b},{c})")
        self._inverse = {}
        for a in self.elements:
            inv = [b for b in self.elements if self.table[(a, b)] == self._identity]
            if not inv or self.table[(inv[0], a)] != self._identity:
                raise NotAGroup(f"{a} has no inverse")
            self._inverse[a] = inv[0]
        if generators is None:
            generators = [e for e in self.elements if e != self._identity]
        for s in generators:
            if s not in els:
                raise NotAGroup(f"unknown generator {s!r}")
        self._gens = list(generators)
        self._words = self._bfs_words()
        if len(self._words) != len(self.elements):
            raise NotAGroup("generators do not generate the table")

    def _bfs_words(self):
        words = {self._identity: []}
        q = deque([self._identity])
        while q:
            x = q.popleft()
            for s in self._gens:
                y = self.table[(x, s)]
                if y not in words:
                    words[y] = words[x] + [(s, 1)]
                    q.append(y)
        return words

    def _mul(self, a, b):
        return self.table[(a, b)]

    def _inv(self, a):
        return self._inverse[a]

    def format(self, value):
        return value

    def _parse(self, text):
        if text not in self.elements:
            raise SSKGError(f"unknown element {text!r} of {self.name}")
        return text

    def sort_key(self, value):
        return self.elements.index(value)

    def generator_values(self):
        return list(self._gens)

    def word_values(self, value):
        return list(self._words[value])

    def is_finite(self):
        return True

    def descriptor(self):
        return "table"


class IntegerGroup(Group):
    """Z^n under vector addition; rank-1 elements print as plain integers."""

    def __init__(self, n: int = 1):
        if n < 1:
            raise NotAGroup("rank must be positive")
        self.n = n
        self.name = "Z" if n == 1 else f"Z^{n}"
        self._identity = (0,) * n

    def _mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _inv(self, a):
        return tuple(-x for x in a)

    def format(self, value):
        if self.n == 1:
            return str(value[0])
        return "(" + ",".join(map(str, value)) + ")"

    def _parse(self, text):
        parts = [p for p in text.strip("()").replace(" ", "").split(",") if p]
        if len(parts) != self.n:
            raise SSKGError(f"expected {self.n} integers, got {text!r}")
        return tuple(int(p) for p in parts)

    def sort_key(self, value):
        return (sum(abs(x) for x in value), value)

    def generator_values(self):
        return [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]

    def word_values(self, value):
        out = []
        for i, c in enumerate(value):
            e = tuple(1 if j == i else 0 for j in range(self.n))
            out += [(e, 1 if c > 0 else -1)] * abs(c)
        return out

    def descriptor(self):
        return self.name


class FreeGroup(Group):
    """Free group on named generators; values are reduced words of
    (generator index, exponent sign) letters."""

    def __init__(self, names: Sequence[str]):
        if not names or len(set(names)) != len(names):
            raise NotAGroup("free generators must be distinct and nonempty")
        self.names = list(names)
        self.name = f"free({','.join(self.names)})"
        self._identity = ()

    @staticmethod
    def _reduce(letters):
        out = []
        for x in letters:
            if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def _mul(self, a, b):
        return self._reduce(a + b)

    def _inv(self, a):
        return tuple((i, -s) for i, s in reversed(a))

    def format(self, value):
        if not value:
            return "1"
        return "*".join(self.names[i] + ("^-1" if s < 0 else "") for i, s in value)

    _token = re.compile(r"\s*([A-Za-z_]\w*)(?:\^(-?\d+))?\s*")

    def _parse(self, text):
        if text in ("1", "e", ""):
            return ()
        letters = []
        for part in text.split("*"):
            m = self._token.fullmatch(part)
            if not m or m.group(1) not in self.names:
                raise SSKGError(f"bad free-group word {text!r}")
            i = self.names.index(m.group(1))
            exp = int(m.group(2) or 1)
            letters += [(i, 1 if exp > 0 else -1)] * abs(exp)
        return self._reduce(letters)

    def sort_key(self, value):
        return (len(value), value)

    def generator_values(self):
        return [((i, 1),) for i in range(len(self.names))]

    def word_values(self, value):
        return [(((i, 1),), s) for i, s in value]

    def descriptor(self):
        return self.name


def cyclic_group(n: int, names: Sequence[str] | None = None) -> FiniteGroup:
    names = list(names) if names else ["1"] + [f"t{i}" for i in range(1, n)]
    table = {(names[a], names[b]): names[(a + b) % n] for a in range(n) for b in range(n)}
    return FiniteGroup(names, table, generators=names[1:2] if n > 1 else [])


def make_group(descriptor) -> Group:
    """Build a group from a short descriptor string or a table mapping.

    Accepted strings: ``Z``, ``Z^n``, ``trivial``, ``Z/n``, ``free(a,b,...)``.
    A mapping needs keys ``elements`` and ``table`` (and optional
    ``generators``), where ``table`` maps element pairs to their product.
    """
    if isinstance(descriptor, Group):
        return descriptor
    if isinstance(descriptor, Mapping):
        return FiniteGroup(descriptor["elements"], descriptor["table"], descriptor.get("generators"))
    s = str(descriptor).replace(" ", "")
    if s == "Z":
        return IntegerGroup(1)
    if m := re.fullmatch(r"Z\^(\d+)", s):
        return IntegerGroup(int(m.group(1)))
    if s == "trivial":
        return FiniteGroup(["1"], {("1", "1"): "1"}, [])
    if m := re.fullmatch(r"Z/(\d+)", s):
        return cyclic_group(int(m.group(1)))
    if m := re.fullmatch(r"free\(([\w,]+)\)", s):
        return FreeGroup(m.group(1).split(","))
    raise NotAGroup(f"unrecognised group descriptor {descriptor!r}")

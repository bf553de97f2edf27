"""Line-oriented input format.

A document has the sections ``[kgraph]``, ``[group]``, ``[action]`` and an
optional ``[options]``::

    [kgraph]
    name flip2x3
    k 2
    vertices v
    edge a0 1 v v          # id colour range source
    square a0.b1 = b2.a0   # colour-i word on the left, re-sorted word on the right
    [group]
    backend Z              # Z, Z^n, trivial, free(a,b), or table
    amenable true
    [action]
    generator 1
      vertex v -> v
      edge a0 -> a1 | 0    # image | restriction
    [options]
    ball 6
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .action import GeneratorAction, SelfSimilarAction, validate_action
from .errors import ValidationError
from .group import FiniteGroup, Group, make_group
from .kgraph import Edge, KGraph, validate_kgraph


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class InputSyntaxError(ParseError):
    pass


class UnknownReference(ParseError):
    pass


class DuplicateId(ParseError):
    pass


OPTION_KEYS = ("ball", "cycle-len", "degree", "depth")


@dataclass
class InputDocument:
    name: str
    k: int
    vertices: list[str]
    edges: list[Edge]
    squares: list[tuple[str, str, str, str]]
    backend: str
    amenable: bool = True
    table_elements: list[str] = field(default_factory=list)
    table_rows: dict[str, list[str]] = field(default_factory=dict)
    table_generators: list[str] | None = None
    actions: list[tuple[str, dict[str, str], dict[str, tuple[str, str]]]] = field(default_factory=list)
    options: dict[str, str] = field(default_factory=dict)

    def build_graph(self) -> KGraph:
        sq = {(e, f): (f2, e2) for e, f, f2, e2 in self.squares}
        return validate_kgraph(self.k, self.vertices, self.edges, sq)

    def build_group(self) -> Group:
        if self.backend == "table":
            els = self.table_elements
            table = {(a, b): self.table_rows[a][j] for a in els for j, b in enumerate(els)}
            return FiniteGroup(els, table, self.table_generators)
        return make_group(self.backend)

    def build(self) -> tuple[KGraph, Group, SelfSimilarAction]:
        graph = self.build_graph()
        group = self.build_group()
        gens = []
        for g, vm, em in self.actions:
            gens.append(GeneratorAction(
                group.parse(g), dict(vm),
                {e: f for e, (f, _) in em.items()},
                {e: group.parse(r) for e, (_, r) in em.items()}))
        return graph, group, validate_action(graph, group, gens)

    def option(self, key: str, default=None):
        return self.options.get(key, default)


_ID = r"[A-Za-z_][\w']*"
_id_re = re.compile(_ID + r"$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse(text: str) -> InputDocument:
    section = None
    seen_sections = set()
    name = "unnamed"
    k = None
    vertices: list[str] = []
    edges: list[Edge] = []
    squares = []
    backend = None
    amenable = True
    t_elements: list[str] = []
    t_rows: dict[str, list[str]] = {}
    t_gens = None
    actions = []
    current = None
    options: dict[str, str] = {}
    ids: set[str] = set()
    edge_ids: dict[str, Edge] = {}
    pending_refs = []  # (line, kind, ref)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        if m := re.fullmatch(r"\[(\w+)\]", line):
            section = m.group(1)
            if section not in ("kgraph", "group", "action", "options"):
                raise InputSyntaxError(f"unknown section [{section}]", lineno)
            if section in seen_sections:
                raise DuplicateId(f"section [{section}] repeated", lineno)
            seen_sections.add(section)
            continue
        if section is None:
            raise InputSyntaxError("content before the first section header", lineno)
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if section == "kgraph":
            if key == "name":
                name = rest
            elif key == "k":
                if not rest.isdigit() or int(rest) < 1:
                    raise InputSyntaxError(f"k must be a positive integer, got {rest!r}", lineno)
                k = int(rest)
            elif key in ("vertex", "vertices"):
                for v in rest.split():
                    if not _id_re.match(v):
                        raise InputSyntaxError(f"bad vertex id {v!r}", lineno)
                    if v in ids:
                        raise DuplicateId(f"id {v!r} already used", lineno)
                    ids.add(v)
                    vertices.append(v)
            elif key == "edge":
                parts = rest.split()
                if len(parts) != 4 or not parts[1].isdigit():
                    raise InputSyntaxError("expected: edge <id> <colour> <range> <source>", lineno)
                eid, c, r, s = parts
                if eid in ids:
                    raise DuplicateId(f"id {eid!r} already used", lineno)
                for v in (r, s):
                    if v not in vertices:
                        raise UnknownReference(f"unknown vertex {v!r}", lineno)
                ids.add(eid)
                e = Edge(eid, int(c), r, s)
                edges.append(e)
                edge_ids[eid] = e
            elif key == "square":
                m = re.fullmatch(rf"({_ID})\.({_ID})\s*=\s*({_ID})\.({_ID})", rest)
                if not m:
                    raise InputSyntaxError("expected: square e.f = f'.e'", lineno)
                for x in m.groups():
                    if x not in edge_ids:
                        raise UnknownReference(f"unknown edge {x!r}", lineno)
                squares.append(m.groups())
            else:
                raise InputSyntaxError(f"unknown key {key!r} in [kgraph]", lineno)
        elif section == "group":
            if key == "backend":
                backend = rest.replace(" ", "")
            elif key == "amenable":
                if rest not in ("true", "false"):
                    raise InputSyntaxError("amenable must be true or false", lineno)
                amenable = rest == "true"
            elif key == "elements":
                t_elements = rest.split()
            elif key == "row":
                head, _, body = rest.partition(":")
                if head.strip() not in t_elements:
                    raise UnknownReference(f"row for unknown element {head.strip()!r}", lineno)
                t_rows[head.strip()] = body.split()
            elif key == "generators":
                t_gens = rest.split()
            else:
                raise InputSyntaxError(f"unknown key {key!r} in [group]", lineno)
        elif section == "action":
            if key == "generator":
                current = (rest, {}, {})
                actions.append(current)
            elif current is None:
                raise InputSyntaxError("action data before any 'generator' line", lineno)
            elif key == "vertex":
                m = re.fullmatch(rf"({_ID})\s*->\s*({_ID})", rest)
                if not m:
                    raise InputSyntaxError("expected: vertex v -> w", lineno)
                for v in m.groups():
                    if v not in vertices:
                        raise UnknownReference(f"unknown vertex {v!r}", lineno)
                current[1][m.group(1)] = m.group(2)
            elif key == "edge":
                m = re.fullmatch(rf"({_ID})\s*->\s*({_ID})\s*\|\s*(\S+)", rest)
                if not m:
                    raise InputSyntaxError("expected: edge e -> f | restriction", lineno)
                for x in m.groups()[:2]:
                    if x not in edge_ids:
                        raise UnknownReference(f"unknown edge {x!r}", lineno)
                current[2][m.group(1)] = (m.group(2), m.group(3))
            else:
                raise InputSyntaxError(f"unknown key {key!r} in [action]", lineno)
        elif section == "options":
            if key not in OPTION_KEYS:
                raise InputSyntaxError(f"unknown option {key!r}", lineno)
            options[key] = rest

    if "kgraph" not in seen_sections:
        raise InputSyntaxError("missing [kgraph] section")
    if k is None:
        raise InputSyntaxError("missing 'k' in [kgraph]")
    if backend is None:
        backend = "trivial"
    if backend == "table":
        for el in t_elements:
            if el not in t_rows or len(t_rows[el]) != len(t_elements):
                raise InputSyntaxError(f"table row for {el!r} missing or wrong length")
    for g, vm, em in actions:
        for v in vertices:
            vm.setdefault(v, v)
    return InputDocument(name, k, vertices, edges, squares, backend, amenable,
                         t_elements, t_rows, t_gens, actions, options)


def emit(doc: InputDocument) -> str:
    out = ["[kgraph]", f"name {doc.name}", f"k {doc.k}", "vertices " + " ".join(doc.vertices)]
    out += [f"edge {e.id} {e.color} {e.range} {e.source}" for e in doc.edges]
    out += [f"square {e}.{f} = {f2}.{e2}" for e, f, f2, e2 in doc.squares]
    out += ["[group]", f"backend {doc.backend}", f"amenable {'true' if doc.amenable else 'false'}"]
    if doc.backend == "table":
        out.append("elements " + " ".join(doc.table_elements))
        out += [f"row {a} : " + " ".join(doc.table_rows[a]) for a in doc.table_elements]
        if doc.table_generators is not None:
            out.append("generators " + " ".join(doc.table_generators))
    if doc.actions:
        out.append("[action]")
        for g, vm, em in doc.actions:
            out.append(f"generator {g}")
            out += [f"  vertex {v} -> {w}" for v, w in vm.items()]
            out += [f"  edge {e} -> {f} | {r}" for e, (f, r) in em.items()]
    if doc.options:
        out.append("[options]")
        out += [f"{k} {v}" for k, v in doc.options.items()]
    return "\n".join(out) + "\n"

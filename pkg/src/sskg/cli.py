"""Command line entry point: ``sskg <subcommand> TARGET ...``.

TARGET is a built-in corpus name or a path to an input file."""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import __version__, corpus
from .algebra import Algebra
from .classify import Classifier, PeriodicityWitness, fmt_pf
from .errors import InternalInconsistency, SSKGError, ValidationError
from .fileformat import InputDocument, emit, parse
from .groupoid import BisectionSet, Groupoid

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INCONSISTENT = 0, 1, 2, 3


def load_document(target: str) -> InputDocument:
    if target in corpus.names():
        return corpus.document(target)
    if not os.path.exists(target):
        raise ValidationError(f"{target!r} is neither a corpus name nor a file")
    with open(target, encoding="utf-8") as fh:
        return parse(fh.read())


def _degree(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree {text!r}; expected p1,...,pk")


def _bounds(args, doc: InputDocument, k: int) -> dict:
    def pick(flag, key, default, conv=int):
        val = getattr(args, flag, None)
        if val is not None:
            return val
        opt = doc.option(key)
        return conv(opt) if opt is not None else default
    degree = pick("degree", "degree", (2,) * k, _degree)
    if len(degree) != k:
        raise ValidationError(f"--degree needs {k} entries")
    return {"ball": pick("ball", "ball", 6), "cycle_len": pick("cycle_len", "cycle-len", 2),
            "degree": degree, "depth": pick("depth", "depth", 5)}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, tuple):
        return "(" + ",".join(map(str, x)) + ")"
    return str(x)


# subcommands
def cmd_validate(args, out):
    doc = load_document(args.target)
    graph, group, action = doc.build()
    out(f"kgraph: ok (k={graph.k}, vertices={len(graph.vertices)}, "
        f"edges={len(graph.edges)}, squares={len(graph.squares)})")
    out(f"group: ok ({doc.backend}, amenable={_fmt(doc.amenable)})")
    out(f"action: ok (generators={len(action.generators)})")


def cmd_classify(args, out):
    doc = load_document(args.target)
    _, _, action = doc.build()
    b = _bounds(args, doc, action.graph.k)
    rep = Classifier(action).classify(ball=b["ball"], cycle_len=b["cycle_len"], degree=b["degree"],
                                      depth=b["depth"], amenable=doc.amenable)
    if args.format == "structured":
        payload = {name: value for name, value in rep.fields()}
        payload["provenance"] = {"name": doc.name, "tool_version": __version__,
                                 "bounds": {k: list(v) if isinstance(v, tuple) else v
                                            for k, v in b.items()}}
        out(json.dumps(payload, indent=2))
        return
    for name, value in rep.fields():
        if name == "metadata":
            for mk, mv in value.items():
                out(f"metadata.{mk}: {json.dumps(mv, sort_keys=True)}")
        else:
            out(f"{name}: {_fmt(value)}")
    out(f"summary: {doc.name} is {rep.simplicity}; dichotomy {rep.dichotomy}; "
        f"kirchberg {_fmt(rep.kirchberg)}")


def cmd_trace(args, out):
    _, _, action = load_document(args.target).build()
    tr = Classifier(action).graph_traces()
    if not tr.existence:
        out("no nonzero graph trace")
        return
    vals = " ".join(f"gt({v})={x}" for v, x in tr.witness.items())
    out(f"{vals} faithful={_fmt(tr.faithful_exists)}")


def cmd_cofinal(args, out):
    _, _, action = load_document(args.target).build()
    res = Classifier(action).cofinality()
    if res.value:
        out("true")
    else:
        v, w = res.failing_pair
        out(f"false: pair ({v}, {w})")


def cmd_witness(args, out):
    doc = load_document(args.target)
    _, _, action = doc.build()
    b = _bounds(args, doc, action.graph.k)
    out(f"pseudo_free: {fmt_pf(action.pseudo_free_check(b['ball']))}")
    per = Classifier(action).periodicity_witness(b["cycle_len"], min(b["ball"], 4), b["degree"])
    out(f"periodicity: {per}")
    if isinstance(per, PeriodicityWitness):
        out(f"periodicity.vertex: {per.vertex}")


def cmd_minpairs(args, out):
    graph, _, _ = load_document(args.target).build()
    pairs = graph.lambda_min(graph.path(args.mu), graph.path(args.nu))
    if not pairs:
        out("none")
    for a, c in pairs:
        out(f"({a}, {c})")


def cmd_groupoid(args, out):
    _, _, action = load_document(args.target).build()
    G = Groupoid(action)
    res = _GroupoidParser(G, args.expr).run()
    out(str(G.canonical(res) if args.canonical else res))


def cmd_algebra(args, out):
    _, _, action = load_document(args.target).build()
    out(str(Algebra(action).evaluate(args.expr)))


def cmd_corpus(args, out):
    if args.name is None:
        for n in corpus.names():
            out(n)
    elif args.name not in corpus.names():
        raise ValidationError(f"unknown corpus entry {args.name!r}")
    else:
        sys.stdout.write(emit(corpus.document(args.name)))


class _GroupoidParser:
    """expr := term ('&' term)*;  term := atom ('*' atom)*;
    atom := Z(mu, g, nu) | inv(expr) | (expr)."""
    _tok = re.compile(r"\s*(Z\(|inv\(|[()*&])")

    def __init__(self, groupoid: Groupoid, text: str):
        self.G = groupoid
        self.text = text
        self.pos = 0

    def run(self) -> BisectionSet:
        out = self.expr()
        if self.text[self.pos:].strip():
            raise ValidationError(f"unexpected input at column {self.pos + 1}")
        return out

    def _next(self):
        m = self._tok.match(self.text, self.pos)
        return m.group(1) if m else None

    def _eat(self):
        m = self._tok.match(self.text, self.pos)
        self.pos = m.end()
        return m.group(1)

    def expr(self):
        out = self.term()
        while self._next() == "&":
            self._eat()
            out = self.G.intersect_sets(out, self.term())
        return out

    def term(self):
        out = self.atom()
        while self._next() == "*":
            self._eat()
            out = self.G.compose_sets(out, self.atom())
        return out

    def atom(self):
        tok = self._next()
        if tok is None:
            raise ValidationError(f"expected a bisection at column {self.pos + 1}")
        self._eat()
        if tok == "Z(":
            end = self.text.find(")", self.pos)
            if end < 0:
                raise ValidationError("unbalanced parentheses")
            body = self.text[self.pos:end]
            self.pos = end + 1
            first, last = body.find(","), body.rfind(",")
            if first < 0 or first == last:
                raise ValidationError(f"Z() needs three arguments: {body!r}")
            mu, g, nu = body[:first].strip(), body[first + 1:last].strip(), body[last + 1:].strip()
            return BisectionSet.of([self.G.basic(mu, g, nu)])
        if tok in ("inv(", "("):
            inner = self.expr()
            if self._next() != ")":
                raise ValidationError(f"expected ')' at column {self.pos + 1}")
            self._eat()
            return self.G.inverse_set(inner) if tok == "inv(" else inner
        raise ValidationError(f"unexpected {tok!r} at column {self.pos + 1}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sskg", description="Self-similar k-graph toolkit")
    p.add_argument("--version", action="version", version=f"sskg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def bounded(sp):
        sp.add_argument("--ball", type=int)
        sp.add_argument("--cycle-len", type=int, dest="cycle_len")
        sp.add_argument("--degree", type=_degree)
        sp.add_argument("--depth", type=int)

    sp = sub.add_parser("validate", help="check the k-graph, group and action axioms")
    sp.add_argument("target")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classify", help="full classification report")
    sp.add_argument("target")
    bounded(sp)
    sp.add_argument("--format", choices=["text", "structured"], default="text")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("trace", help="graph trace witness")
    sp.add_argument("target")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("cofinal", help="decide G-cofinality")
    sp.add_argument("target")
    sp.set_defaults(func=cmd_cofinal)

    sp = sub.add_parser("witness", help="pseudo-freeness and periodicity searches")
    sp.add_argument("target")
    bounded(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("minpairs", help="list minimal common extensions")
    sp.add_argument("target")
    sp.add_argument("mu")
    sp.add_argument("nu")
    sp.set_defaults(func=cmd_minpairs)

    sp = sub.add_parser("groupoid", help="evaluate a bisection expression")
    sp.add_argument("target")
    sp.add_argument("expr")
    sp.add_argument("--canonical", action="store_true", help="expand to a common level")
    sp.set_defaults(func=cmd_groupoid)

    sp = sub.add_parser("algebra", help="evaluate an algebra expression")
    sp.add_argument("target")
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_algebra)

    sp = sub.add_parser("corpus", help="list built-in examples or print one")
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    out = lambda line: print(line)  # noqa: E731
    try:
        args.func(args, out)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except SSKGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

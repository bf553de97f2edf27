"""Formal *-algebra on finite sums of monomials s_mu u_g s_nu^* with exact
complex-rational coefficients, plus its evaluation on eventually periodic
basis vectors."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .action import SelfSimilarAction
from .boundary import Boundary, EventuallyPeriodicPath, TruncatedOrbit, Unknown
from .errors import ValidationError
from .group import GroupElement
from .kgraph import BadDegree, Path, deg_join, deg_le, deg_sub


class BadLevel(ValidationError):
    pass


class ExpressionError(ValidationError):
    pass


@dataclass(frozen=True)
class CQ:
    """Exact complex rational re + im*i."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "CQ":
        if isinstance(x, CQ):
            return x
        return CQ(Fraction(x), Fraction(0))

    def __add__(self, o):
        o = CQ.of(o)
        return CQ(self.re + o.re, self.im + o.im)

    def __neg__(self):
        return CQ(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-CQ.of(o))

    def __mul__(self, o):
        o = CQ.of(o)
        return CQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "CQ":
        return CQ(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imag(abs(self.im))})"


def _imag(x: Fraction) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    return f"{x}i"


ONE = CQ(Fraction(1))
I = CQ(Fraction(0), Fraction(1))


@dataclass(frozen=True, order=True)
class Monomial:
    mu: Path
    g: GroupElement
    nu: Path

    def __str__(self):
        return f"S({self.mu}) U({self.g}) S*({self.nu})"


class AlgebraElement:
    """Finitely supported map Monomial -> CQ; zero coefficients are dropped."""

    def __init__(self, algebra: "Algebra", terms=None):
        self.algebra = algebra
        self.terms: dict[Monomial, CQ] = {}
        for m, c in (terms or {}).items():
            c = CQ.of(c)
            if c:
                self.terms[m] = c

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, CQ()) + c
        return AlgebraElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            c = CQ.of(other)
            return AlgebraElement(self.algebra, {m: c * x for m, x in self.terms.items()})
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        return self * other

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        """Structural equality of the stored terms; use Algebra.equals for
        equality in the algebra."""
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if c == ONE:
                body = str(m)
            elif c == -ONE:
                body = f"-{m}"
            else:
                body = f"{c} {m}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = __str__


class Algebra:
    def __init__(self, action: SelfSimilarAction):
        self.action = action
        self.graph = action.graph
        self.group = action.group
        self.boundary = Boundary(self.graph, action)

    # constructors
    def mono(self, mu, g, nu, coeff=ONE) -> AlgebraElement:
        gr = self.graph
        mu = gr.path(mu) if isinstance(mu, str) else mu
        nu = gr.path(nu) if isinstance(nu, str) else nu
        g = self.group.parse(g)
        if gr.source(mu) != self.action.act_vertex(g, gr.source(nu)):
            return self.zero()
        return AlgebraElement(self, {Monomial(mu, g, nu): coeff})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self)

    def one(self) -> AlgebraElement:
        return self.scalar(ONE)

    def scalar(self, c) -> AlgebraElement:
        e = self.group.identity
        return AlgebraElement(self, {Monomial(Path(v), e, Path(v)): CQ.of(c) for v in self.graph.vertices})

    def s(self, mu) -> AlgebraElement:
        mu = self.graph.path(mu) if isinstance(mu, str) else mu
        return self.mono(mu, self.group.identity, Path(self.graph.source(mu)))

    def s_star(self, nu) -> AlgebraElement:
        nu = self.graph.path(nu) if isinstance(nu, str) else nu
        return self.mono(Path(self.graph.source(nu)), self.group.identity, nu)

    def u(self, g) -> AlgebraElement:
        g = self.group.parse(g)
        out = self.zero()
        for v in self.graph.vertices:
            out = out + self.mono(Path(self.action.act_vertex(g, v)), g, Path(v))
        return out

    # products
    def mono_mul(self, a: Monomial, b: Monomial) -> AlgebraElement:
        gr, act = self.graph, self.action
        g, h = a.g, b.g
        hinv = h.inverse()
        out: dict[Monomial, CQ] = {}
        for rho, tau in gr.lambda_min(a.nu, b.mu):
            grho, g_rho = act.act_restrict(g, rho)
            htau, hinv_tau = act.act_restrict(hinv, tau)
            mu = gr.compose(a.mu, grho)
            nu = gr.compose(b.nu, htau)
            k = g_rho * hinv_tau.inverse()
            if gr.source(mu) != act.act_vertex(k, gr.source(nu)):
                continue
            m = Monomial(mu, k, nu)
            out[m] = out.get(m, CQ()) + ONE
        return AlgebraElement(self, out)

    def mul(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        out: dict[Monomial, CQ] = {}
        for a, ca in x.terms.items():
            for b, cb in y.terms.items():
                for m, c in self.mono_mul(a, b).terms.items():
                    out[m] = out.get(m, CQ()) + ca * cb * c
        return AlgebraElement(self, out)

    def adjoint(self, x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self, {Monomial(m.nu, m.g.inverse(), m.mu): c.conj()
                                     for m, c in x.terms.items()})

    # grading and normal forms
    def gauge_degree(self, m: Monomial) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.graph.degree(m.mu), self.graph.degree(m.nu)))

    def gauge_components(self, x: AlgebraElement) -> dict[tuple[int, ...], AlgebraElement]:
        parts: dict[tuple[int, ...], dict] = {}
        for m, c in x.terms.items():
            parts.setdefault(self.gauge_degree(m), {})[m] = c
        return {d: AlgebraElement(self, t) for d, t in sorted(parts.items())}

    def expand_to_level(self, x: AlgebraElement, level) -> AlgebraElement:
        """Rewrite every monomial with d(nu) = level via
        s_mu u_g s_nu^* = sum_rho s_{mu(g.rho)} u_{g|_rho} s_{nu rho}^*."""
        gr, act = self.graph, self.action
        level = tuple(level)
        if len(level) != gr.k:
            raise BadLevel(f"level {level} has the wrong rank")
        out: dict[Monomial, CQ] = {}
        for m, c in x.terms.items():
            dnu = gr.degree(m.nu)
            if not deg_le(dnu, level):
                raise BadLevel(f"level {level} is below d({m.nu}) = {dnu}")
            for rho in gr.paths_from(gr.source(m.nu), deg_sub(level, dnu)):
                grho, g_rho = act.act_restrict(m.g, rho)
                n = Monomial(gr.compose(m.mu, grho), g_rho, gr.compose(m.nu, rho))
                out[n] = out.get(n, CQ()) + c
        return AlgebraElement(self, out)

    def canonical(self, x: AlgebraElement) -> dict[tuple[int, ...], AlgebraElement]:
        """Each gauge component expanded to the join of its d(nu)."""
        out = {}
        for d, comp in self.gauge_components(x).items():
            level = self.graph.zero()
            for m in comp.terms:
                level = deg_join(level, self.graph.degree(m.nu))
            expanded = self.expand_to_level(comp, level)
            if not expanded.is_zero():
                out[d] = expanded
        return out

    def equals(self, x: AlgebraElement, y: AlgebraElement, samples: int = 2):
        """"Equal", "Distinct" or an :class:`Unknown`."""
        diff = x - y
        if not self.canonical(diff):
            return "Equal"
        unknown = None
        for p in self.boundary.sample_paths(samples):
            img = self.apply_to_path(diff, p)
            if isinstance(img, Unknown):
                unknown = img
                continue
            if img:
                return "Distinct"
        return unknown or Unknown("canonical forms differ and no sample path separates them")

    # path representation
    def apply_to_path(self, x: AlgebraElement, p: EventuallyPeriodicPath):
        """The image of delta_p as {path: coefficient}, or Unknown on truncation."""
        gr, B = self.graph, self.boundary
        out: dict[EventuallyPeriodicPath, CQ] = {}
        for m, c in x.terms.items():
            dnu = gr.degree(m.nu)
            if B.path_segment(p, gr.zero(), dnu) != m.nu:
                continue
            z = B.act_on_path(m.g, B.shift(p, dnu))
            if isinstance(z, TruncatedOrbit):
                return Unknown(f"orbit of {p} under {m.g} was truncated")
            q = B.canonical(EventuallyPeriodicPath(gr.compose(m.mu, z.prefix), z.cycle))
            out[q] = out.get(q, CQ()) + c
        return {q: c for q, c in sorted(out.items()) if c}

    def apply_to_vector(self, x: AlgebraElement, vec: dict):
        out: dict[EventuallyPeriodicPath, CQ] = {}
        for p, c in vec.items():
            img = self.apply_to_path(x, p)
            if isinstance(img, Unknown):
                return img
            for q, d in img.items():
                out[q] = out.get(q, CQ()) + c * d
        return {q: c for q, c in sorted(out.items()) if c}

    # expressions
    def evaluate(self, text: str) -> AlgebraElement:
        return _Parser(self, text).run()


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?i?)|(?P<i>i\b)|(?P<mono>S\*|S|U)\("
                    r"|(?P<adj>adj)\(|(?P<exp>expand@(?P<lvl>\d+(?:,\d+)*))\("
                    r"|(?P<op>[-+*()]))")


class _Parser:
    def __init__(self, algebra: Algebra, text: str):
        self.A = algebra
        self.text = text
        self.pos = 0

    def run(self) -> AlgebraElement:
        out = self.expr()
        if self.text[self.pos:].strip():
            raise ExpressionError(f"unexpected input at column {self.pos + 1}: {self.text[self.pos:]!r}")
        return out

    def _peek(self):
        return _TOKEN.match(self.text, self.pos)

    def _take(self, op: str):
        m = self._peek()
        if not m or m.group("op") != op:
            raise ExpressionError(f"expected {op!r} at column {self.pos + 1}")
        self.pos = m.end()

    def _raw_arg(self) -> str:
        depth, start = 1, self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    arg = self.text[start:self.pos]
                    self.pos += 1
                    return arg.strip()
            self.pos += 1
        raise ExpressionError("unbalanced parentheses")

    def expr(self) -> AlgebraElement:
        out = self.term()
        while True:
            m = self._peek()
            if m and m.group("op") in ("+", "-"):
                self.pos = m.end()
                rhs = self.term()
                out = out + rhs if m.group("op") == "+" else out - rhs
            else:
                return out

    def _starts_factor(self, m) -> bool:
        return bool(m) and m.group("op") in (None, "(")

    def term(self) -> AlgebraElement:
        out = self.factor()
        while True:
            m = self._peek()
            if m and m.group("op") == "*":
                self.pos = m.end()
                out = out * self.factor()
            elif self._starts_factor(m):
                out = out * self.factor()
            else:
                return out

    def factor(self) -> AlgebraElement:
        m = self._peek()
        if not m:
            raise ExpressionError(f"expected a term at column {self.pos + 1}")
        self.pos = m.end()
        A = self.A
        try:
            if m.group("op") == "-":
                return -self.factor()
            if m.group("op") == "(":
                inner = self.expr()
                self._take(")")
                return inner
            if m.group("num"):
                lit = m.group("num")
                if lit.endswith("i"):
                    return A.scalar(I * Fraction(lit[:-1]))
                return A.scalar(Fraction(lit))
            if m.group("i"):
                return A.scalar(I)
            if m.group("mono"):
                arg = self._raw_arg()
                kind = m.group("mono")
                if kind == "S":
                    return A.s(arg)
                if kind == "S*":
                    return A.s_star(arg)
                return A.u(arg)
            if m.group("adj"):
                inner = self.expr()
                self._take(")")
                return A.adjoint(inner)
            if m.group("exp"):
                level = tuple(int(t) for t in m.group("lvl").split(","))
                inner = self.expr()
                self._take(")")
                return A.expand_to_level(inner, level)
        except (BadDegree, KeyError) as exc:
            raise ExpressionError(str(exc)) from exc
        raise ExpressionError(f"unexpected {m.group(0).strip()!r} at column {m.start() + 1}")

"""Parser for the small pp-formula language.

    formula := term ('+' term)*
    term    := 'ann(' relem ')' | 'div(' relem ')'
             | 'conj(' formula ',' formula ')' | 'pt(' module ',' relem ')'
    relem   := polynomial in x, y with rational coefficients (x^2 = 0)
    module  := 'R' | 'm' | 'I' digits | 'Iinf'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..cm import Indec


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Poly:
    """An element ``f + x*g`` of R with ``f, g`` polynomials in y (exponent -> coefficient)."""

    f: tuple
    g: tuple

    @staticmethod
    def _norm(d):
        return tuple(sorted((k, v) for k, v in d.items() if v != 0))

    @classmethod
    def make(cls, f: dict, g: dict):
        return cls(cls._norm(f), cls._norm(g))

    def __add__(self, o):
        f, g = dict(self.f), dict(self.g)
        for k, v in o.f:
            f[k] = f.get(k, 0) + v
        for k, v in o.g:
            g[k] = g.get(k, 0) + v
        return Poly.make(f, g)

    def __neg__(self):
        return Poly(tuple((k, -v) for k, v in self.f), tuple((k, -v) for k, v in self.g))

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        f, g = {}, {}
        for k1, v1 in self.f:
            for k2, v2 in o.f:
                f[k1 + k2] = f.get(k1 + k2, 0) + v1 * v2
            for k2, v2 in o.g:
                g[k1 + k2] = g.get(k1 + k2, 0) + v1 * v2
        for k1, v1 in self.g:
            for k2, v2 in o.f:
                g[k1 + k2] = g.get(k1 + k2, 0) + v1 * v2
        return Poly.make(f, g)

    def __pow__(self, n):
        out = Poly.make({0: 1}, {})
        for _ in range(n):
            out = out * self
        return out

    def __str__(self):
        def mono(k, v, xpart):
            ys = "" if k == 0 else ("y" if k == 1 else f"y^{k}")
            body = "*".join(t for t in (xpart, ys) if t)
            if not body:
                return str(v)
            if v == 1:
                return body
            if v == -1:
                return "-" + body
            return f"{v}*{body}"
        parts = [mono(k, v, "") for k, v in self.f] + [mono(k, v, "x") for k, v in self.g]
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


X_POLY = Poly.make({}, {0: 1})
Y_POLY = Poly.make({1: 1}, {})


@dataclass(frozen=True)
class Ann:
    r: Poly

    def __str__(self):
        return f"ann({self.r})"


@dataclass(frozen=True)
class Div:
    r: Poly

    def __str__(self):
        return f"div({self.r})"


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __str__(self):
        return " + ".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class Conj:
    left: object
    right: object

    def __str__(self):
        return f"conj({self.left}, {self.right})"


@dataclass(frozen=True)
class Point:
    module: Indec
    elem: Poly

    def __str__(self):
        return f"pt({self.module}, {self.elem})"


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokens(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif sym is not None and not sym.isspace():
            out.append(("sym", sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(f"expected {want} at token {self.i} in {self.text!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def done(self):
        return self.i >= len(self.toks)

    # formula level
    def formula(self):
        parts = [self.term()]
        while self.peek() == ("sym", "+"):
            self.take()
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def term(self):
        kind, name = self.take("name")
        self.take("sym", "(")
        if name == "ann":
            node = Ann(self.relem())
        elif name == "div":
            node = Div(self.relem())
        elif name == "conj":
            a = self.formula()
            self.take("sym", ",")
            b = self.formula()
            node = Conj(a, b)
        elif name == "pt":
            _, mod = self.take("name")
            try:
                d = Indec.parse(mod)
            except ValueError as e:
                raise ParseError(str(e)) from None
            self.take("sym", ",")
            node = Point(d, self.relem())
        else:
            raise ParseError(f"unknown formula constructor {name!r}")
        self.take("sym", ")")
        return node

    # ring elements
    def relem(self):
        sign = 1
        if self.peek() == ("sym", "-"):
            self.take()
            sign = -1
        acc = self.rterm()
        if sign < 0:
            acc = -acc
        while self.peek() in (("sym", "+"), ("sym", "-")):
            # a '+' followed by a formula constructor belongs to the formula level
            nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else (None, None)
            if nxt[0] == "name" and nxt[1] in ("ann", "div", "conj", "pt"):
                break
            _, op = self.take()
            t = self.rterm()
            acc = acc + t if op == "+" else acc - t
        return acc

    def rterm(self):
        acc = self.rfactor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("sym", "*"):
                self.take()
            elif not (kind == "num" or (kind == "name" and re.fullmatch(r"[xy]+", val))
                      or (kind, val) == ("sym", "(")):
                break
            acc = acc * self.rfactor()
        return acc

    def rfactor(self):
        kind, val = self.peek()
        if kind == "sym" and val == "(":
            self.take()
            base = self.relem()
            self.take("sym", ")")
        elif kind == "num":
            self.take()
            base = Poly.make({0: Fraction(val)}, {})
        elif kind == "name" and val in ("x", "y"):
            self.take()
            base = X_POLY if val == "x" else Y_POLY
        elif kind == "name" and re.fullmatch(r"[xy]+", val or ""):
            # juxtaposed variables such as "xy^2": the exponent binds to the last letter
            self.take()
            prefix = Poly.make({0: 1}, {})
            for ch in val[:-1]:
                prefix = prefix * (X_POLY if ch == "x" else Y_POLY)
            return prefix * self._power(X_POLY if val[-1] == "x" else Y_POLY)
        else:
            raise ParseError(f"unexpected {val!r} in ring element")
        return self._power(base)

    def _power(self, base):
        if self.peek() == ("sym", "^"):
            self.take()
            _, e = self.take("num")
            if "/" in e:
                raise ParseError("exponents must be natural numbers")
            base = base ** int(e)
        return base


def parse_pp(text: str):
    p = _Parser(text)
    if p.done():
        raise ParseError("empty formula")
    node = p.formula()
    if not p.done():
        raise ParseError(f"trailing input after {node}")
    return node


def parse_relem(text: str) -> Poly:
    p = _Parser(text)
    r = p.relem()
    if not p.done():
        raise ParseError(f"trailing input in ring element {text!r}")
    return r

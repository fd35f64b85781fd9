"""The pattern of ``x in I_inf`` and the antichain lattice of the interval [v=0, vx=0].

A node ``(I_a, i)`` is the formula "x y^i lies in I_a"; ``(Iinf, i)`` is
"x y^i lies in I_inf".  Every formula below ``vx = 0`` is a finite sum of
nodes, and the sum is unique once reduced to an antichain of maximal nodes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering

from ..cm import INF, Indec
from ..kernel import DEFAULT_PREC, QQ, Field, TruncSeries
from ..points import GPT, QPT, RTILDE, InfPoint, QX_FULL, XYpow, full_desc, qx_desc, zero_desc
from .realize import CMFormula, NotInInterval, node_formula


class BoundExceeded(ValueError):
    """A node lies outside the working window."""


@total_ordering
@dataclass(frozen=True)
class PatternNode:
    target: Indec
    shift: int

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("shift must be natural")

    @property
    def is_infinite(self):
        return self.target.is_infinite

    def _key(self):
        return (self.target._key(), self.shift)

    def __lt__(self, other):
        return self._key() < other._key()

    def __str__(self):
        mono = "x" if self.shift == 0 else ("xy" if self.shift == 1 else f"xy^{self.shift}")
        return f"{mono}∈{self.target}"

    def to_json(self):
        return ["I", "inf" if self.is_infinite else self.target.n, self.shift]

    @classmethod
    def from_json(cls, t):
        _, a, i = t
        return cls(INF if a == "inf" else Indec(int(a)), int(i))

    def within(self, bound: int) -> bool:
        return self.shift <= bound and (self.is_infinite or self.target.n <= bound)

    def formula(self, prec: int = DEFAULT_PREC, field: Field = QQ) -> CMFormula:
        return node_formula(self.target, self.shift, prec, field)


def N(a, i) -> PatternNode:
    """Shorthand: ``N(2, 1)`` is xy in I_2 and ``N(None, 0)`` is x in I_inf."""
    return PatternNode(Indec(a), i)


def node_geq(u: PatternNode, v: PatternNode) -> bool:
    """``u >= v``: there is a pointed morphism from the realization of ``u`` to that of ``v``."""
    i, j = u.shift, v.shift
    if u.is_infinite:
        return j >= i
    if v.is_infinite:
        return False
    return j >= i and u.target.n + j >= v.target.n + i


def node_leq(u: PatternNode, v: PatternNode) -> bool:
    return node_geq(v, u)


def node_meet(u: PatternNode, v: PatternNode) -> PatternNode:
    k = max(u.shift, v.shift)
    if u.is_infinite and v.is_infinite:
        return PatternNode(INF, k)
    if u.is_infinite:
        u, v = v, u
    if v.is_infinite:
        return PatternNode(Indec(u.target.n + k - u.shift), k)
    c = min(u.target.n + k - u.shift, v.target.n + k - v.shift)
    return PatternNode(Indec(c), k)


def window_nodes(bound: int) -> list:
    nodes = [N(a, i) for a in range(bound + 1) for i in range(bound + 1)]
    nodes += [N(None, i) for i in range(bound + 1)]
    return nodes


def pattern_poset(bound: int):
    """Nodes of the window and the cover relations ``(lower, upper)`` of the Hasse diagram."""
    nodes = window_nodes(bound)
    less = {u: [v for v in nodes if v != u and node_leq(u, v)] for u in nodes}
    covers = []
    for u in nodes:
        ups = set(less[u])
        for v in less[u]:
            if not any(w in ups and node_leq(w, v) and w != v for w in less[u]):
                covers.append((u, v))
    return nodes, covers


def pattern_dot(bound: int) -> str:
    nodes, covers = pattern_poset(bound)
    lines = ["digraph pattern {", "  rankdir=BT;"]
    ids = {u: f"n{k}" for k, u in enumerate(sorted(nodes))}
    for u in sorted(nodes):
        lines.append(f'  {ids[u]} [label="{u}"];')
    for u, v in sorted(covers):
        lines.append(f"  {ids[u]} -> {ids[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _maximal(nodes):
    nodes = set(nodes)
    return frozenset(u for u in nodes if not any(v != u and node_leq(u, v) for v in nodes))


@dataclass(frozen=True)
class AntichainFormula:
    """A reduced finite sum of pattern nodes; the empty sum is ``v = 0``."""

    nodes: frozenset

    @classmethod
    def of(cls, *nodes) -> "AntichainFormula":
        return cls(_maximal(nodes))

    def __post_init__(self):
        for u in self.nodes:
            for v in self.nodes:
                if u != v and node_leq(u, v):
                    raise ValueError(f"{u} and {v} are comparable")

    def sorted_nodes(self):
        return sorted(self.nodes)

    def __str__(self):
        if not self.nodes:
            return "v=0"
        return " + ".join(str(u) for u in self.sorted_nodes())

    def to_json(self):
        return [u.to_json() for u in self.sorted_nodes()]

    @classmethod
    def from_json(cls, data):
        return cls.of(*[PatternNode.from_json(t) for t in data])

    def within(self, bound: int) -> bool:
        return all(u.within(bound) for u in self.nodes)

    def formula(self, prec: int = DEFAULT_PREC, field: Field = QQ) -> CMFormula:
        comps = []
        for u in self.sorted_nodes():
            comps += u.formula(prec, field).components
        return CMFormula(comps, prec, field)

    def __le__(self, other):
        return ac_leq(self, other)


BOTTOM = AntichainFormula(frozenset())
TOP = AntichainFormula.of(N(None, 0))


def ac_leq(A: AntichainFormula, B: AntichainFormula) -> bool:
    return all(any(node_leq(u, v) for v in B.nodes) for u in A.nodes)


def ac_join(A: AntichainFormula, B: AntichainFormula) -> AntichainFormula:
    return AntichainFormula(_maximal(A.nodes | B.nodes))


def ac_meet(A: AntichainFormula, B: AntichainFormula, bound: int | None = None) -> AntichainFormula:
    out = set()
    for u in A.nodes:
        for v in B.nodes:
            w = node_meet(u, v)
            if bound is not None and not w.within(bound):
                raise BoundExceeded(f"{u} ∧ {v} = {w} leaves the window of size {bound}")
            out.add(w)
    return AntichainFormula(_maximal(out))


def antichain_of(phi: CMFormula) -> AntichainFormula:
    """Read off the antichain normal form of a realization whose point is killed by x."""
    nodes = []
    for d, coords in phi.components:
        if d.is_infinite:
            nodes.append(PatternNode(d, coords[0].valuation()))
        else:
            c1, c2 = coords
            if not c2.is_zero():
                raise NotInInterval(f"point has a nonzero y^{d.n}-coordinate in {d}")
            nodes.append(PatternNode(d, c1.valuation()))
    return AntichainFormula(_maximal(nodes))


# -- evaluation on the Ziegler points --------------------------------------------------

def node_value(u: PatternNode, P):
    """Closed-form trace of a node in a point.

    On a catalog module ``I_k`` (or I_inf) the result is the valuation ``v``
    of the submodule ``x y^v F[[y]]`` (``None`` for zero); on infinite points
    it is a ``SubmoduleDesc``.
    """
    if isinstance(P, InfPoint):
        if u.is_infinite:
            return full_desc(GPT) if P is GPT else qx_desc(P)
        if P is RTILDE:
            return XYpow(u.shift - u.target.n)
        return qx_desc(QPT) if P is QPT else zero_desc(GPT)
    if P.is_infinite:
        return u.shift if u.is_infinite else None
    if u.is_infinite:
        return u.shift
    return u.shift + max(0, P.n - u.target.n)


def evaluate_antichain(A: AntichainFormula, P):
    vals = [node_value(u, P) for u in A.nodes]
    if isinstance(P, InfPoint):
        out = zero_desc(P)
        for v in vals:
            out = out.join(v)
        return out
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def finite_value_leq(a, b) -> bool:
    """Containment of ``x y^a F[[y]]`` in ``x y^b F[[y]]`` (``None`` is the zero submodule)."""
    if a is None:
        return True
    if b is None:
        return False
    return a >= b


# -- intervals in the bounded antichain lattice -------------------------------------------

class OrderType(enum.Enum):
    FINITE = "finite"
    OMEGA_PLUS_ONE = "omega+1"
    ONE_PLUS_OMEGA_STAR = "1+omega*"
    UNCLASSIFIED = "unclassified"
    NOT_A_CHAIN = "not a chain"

    def __str__(self):
        return {"omega+1": "ω+1", "1+omega*": "1+ω*"}.get(self.value, self.value)


def _down_closed_antichains(elems):
    """All antichains of a finite poset given as a list of nodes (iterative search)."""
    n = len(elems)
    comp = [0] * n
    for a in range(n):
        m = 0
        for b in range(n):
            if a != b and (node_leq(elems[a], elems[b]) or node_leq(elems[b], elems[a])):
                m |= 1 << b
        comp[a] = m
    out = []
    stack = [(0, 0, 0)]  # (next index, chosen mask, blocked mask)
    while stack:
        start, chosen, blocked = stack.pop()
        out.append(chosen)
        for j in range(start, n):
            if not (blocked >> j) & 1:
                stack.append((j + 1, chosen | (1 << j), blocked | comp[j]))
    return [[elems[j] for j in range(n) if (mask >> j) & 1] for mask in out]


def interval_nodes(low: AntichainFormula, high: AntichainFormula, bound: int) -> list:
    """Window nodes below ``high`` and not below ``low``."""
    return [u for u in window_nodes(bound)
            if any(node_leq(u, v) for v in high.nodes) and not any(node_leq(u, v) for v in low.nodes)]


def interval_elements(low: AntichainFormula, high: AntichainFormula, bound: int) -> list:
    if not ac_leq(low, high):
        raise ValueError(f"{low} is not below {high}")
    if not (low.within(bound) and high.within(bound)):
        raise BoundExceeded(f"endpoints do not fit in the window of size {bound}")
    elems = interval_nodes(low, high, bound)
    return [ac_join(low, AntichainFormula(_maximal(ch))) for ch in _down_closed_antichains(elems)]


def _sort_chain(elems):
    # in a chain, a smaller element has fewer elements below it
    return sorted(elems, key=lambda a: sum(1 for b in elems if ac_leq(b, a)))


def is_chain(elems) -> bool:
    s = _sort_chain(elems)
    return all(ac_leq(s[k], s[k + 1]) for k in range(len(s) - 1))


def classify_chains(c1: list, c2: list) -> OrderType:
    """Compare the chains seen in two windows (the second one larger)."""
    if c1 == c2:
        return OrderType.FINITE
    n1 = len(c1)
    p = 0
    while p < min(n1, len(c2)) and c1[p] == c2[p]:
        p += 1
    s = 0
    while s < min(n1, len(c2)) - p and c1[-1 - s] == c2[-1 - s]:
        s += 1
    if p + s != n1 or len(c2) <= n1:
        return OrderType.UNCLASSIFIED
    if s == 1 and p > 1:
        return OrderType.OMEGA_PLUS_ONE
    if p == 1 and s > 1:
        return OrderType.ONE_PLUS_OMEGA_STAR
    return OrderType.UNCLASSIFIED


@dataclass
class IntervalReport:
    low: AntichainFormula
    high: AntichainFormula
    bound: int
    elements: list
    chain: bool
    counts: dict
    order_type: OrderType

    def to_json(self):
        return {"low": self.low.to_json(), "high": self.high.to_json(), "bound": self.bound,
                "elements": [str(e) for e in self.elements], "chain": self.chain,
                "counts": {str(k): v for k, v in self.counts.items()},
                "order_type": self.order_type.value,
                "note": "order type inferred by comparing windows; heuristic"}


def interval_report(low: AntichainFormula, high: AntichainFormula, bound: int, step: int = 2) -> IntervalReport:
    e1 = interval_elements(low, high, bound)
    e2 = interval_elements(low, high, bound + step)
    ch = is_chain(e1) and is_chain(e2)
    if ch:
        s1, s2 = _sort_chain(e1), _sort_chain(e2)
        typ = classify_chains(s1, s2)
    else:
        s1 = e1
        typ = OrderType.NOT_A_CHAIN
    return IntervalReport(low, high, bound, s1, ch, {bound: len(e1), bound + step: len(e2)}, typ)


def is_minimal_pair(low: AntichainFormula, high: AntichainFormula, bound: int) -> bool:
    if low == high or not ac_leq(low, high):
        return False
    return (len(interval_elements(low, high, bound)) == 2
            and len(interval_elements(low, high, bound + 2)) == 2)

"""m-dimension through the tower of derivatives.

Each derivative collapses every interval of finite length.  Infinite lattices
appear only as presentations that can produce finite windows of themselves
and decide finite length of an interval: exactly (finite lattices, catalog
chains, the pattern interval lattice) or by comparing two windows
(quotients).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .formulas.pattern import (BOTTOM, TOP, AntichainFormula, N, ac_join, ac_leq, ac_meet,
                               interval_elements, window_nodes)
from .formulas.realize import leq as formula_leq, realize
from .ordinals import SmallOrdinal


class UnsupportedPresentation(ValueError):
    pass


class NonTerminating(RuntimeError):
    """The derivative tower did not become trivial below omega*2."""


class Presentation:
    name = "lattice"

    def window(self, bound: int) -> list:
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def join(self, a, b):
        ups = [c for c in self.window_for(a, b) if self.leq(a, c) and self.leq(b, c)]
        return min_by_order(self, ups)

    def meet(self, a, b):
        downs = [c for c in self.window_for(a, b) if self.leq(c, a) and self.leq(c, b)]
        return max_by_order(self, downs)

    def window_for(self, a, b):
        return self.window(self.default_bound)

    default_bound = 8

    def finite_length(self, a, b) -> bool:
        raise NotImplementedError

    def class_key(self, a):
        """Label of the finite-length class of ``a``, if the presentation knows one."""
        return None


def min_by_order(L, elems):
    for c in elems:
        if all(L.leq(c, d) for d in elems):
            return c
    raise UnsupportedPresentation("no least element: not a lattice window")


def max_by_order(L, elems):
    for c in elems:
        if all(L.leq(d, c) for d in elems):
            return c
    raise UnsupportedPresentation("no greatest element: not a lattice window")


# -- finite lattices ---------------------------------------------------------------------

@dataclass(eq=False)
class FiniteLattice(Presentation):
    elements: list
    order: set          # pairs (a, b) with a <= b, reflexive pairs implied
    name: str = "finite"

    def __post_init__(self):
        if not self.elements:
            raise UnsupportedPresentation("empty lattice")

    @classmethod
    def chain(cls, labels, name="chain"):
        labels = list(labels)
        order = {(labels[i], labels[j]) for i in range(len(labels)) for j in range(i, len(labels))}
        return cls(labels, order, name)

    def window(self, bound=None):
        return list(self.elements)

    def leq(self, a, b):
        return a == b or (a, b) in self.order

    def finite_length(self, a, b):
        return True

    def check_lattice(self) -> bool:
        try:
            for a, b in itertools.product(self.elements, repeat=2):
                self.join(a, b)
                self.meet(a, b)
        except UnsupportedPresentation:
            return False
        return True

    def is_chain(self):
        return all(self.leq(a, b) or self.leq(b, a) for a, b in itertools.combinations(self.elements, 2))

    def length(self):
        """Length of the longest chain (number of covers)."""
        best = {}
        for a in sorted(self.elements, key=lambda e: sum(1 for d in self.elements if self.leq(d, e))):
            below = [best[d] for d in best if d != a and self.leq(d, a)]
            best[a] = 1 + max(below) if below else 0
        return max(best.values())

    @property
    def trivial(self):
        return len(self.elements) == 1


# -- catalog chains ------------------------------------------------------------------------

# parts in increasing order: "p" a single point, "w" an omega chain (going up), "s" an omega* chain (going down)
CHAIN_SHAPES = {
    "omega+1": ("w", "p"),
    "1+omega*": ("p", "s"),
    "omega*+1": ("s", "p"),
    "omega": ("w",),
    "omega*": ("s",),
    "1+omega": ("p", "w"),
}


@dataclass(eq=False)
class CatalogChain(Presentation):
    """A countable chain glued from single points and (reverse) omega chains."""

    tag: str
    default_bound: int = 8

    def __post_init__(self):
        if self.tag not in CHAIN_SHAPES:
            raise UnsupportedPresentation(f"unknown chain {self.tag!r}")
        self.name = f"chain {self.tag}"

    def window(self, bound=None):
        bound = self.default_bound if bound is None else bound
        out = []
        for idx, part in enumerate(CHAIN_SHAPES[self.tag]):
            if part == "p":
                out.append((idx, 0))
            elif part == "w":
                out += [(idx, k) for k in range(bound)]
            else:
                out += [(idx, -k) for k in reversed(range(bound))]
        return out

    def leq(self, a, b):
        return a <= b

    def _gap(self, idx):
        # no cover between part idx and part idx+1
        shape = CHAIN_SHAPES[self.tag]
        return shape[idx] == "w" or shape[idx + 1] == "s"

    def finite_length(self, a, b):
        lo, hi = min(a, b), max(a, b)
        return not any(self._gap(i) for i in range(lo[0], hi[0]))

    def class_key(self, a):
        return sum(1 for i in range(a[0]) if self._gap(i))


# -- the pattern interval lattice ----------------------------------------------------------

def _row_profile(A: AntichainFormula, j: int):
    """``(finite part, has I_inf)`` of row j (shift j) of the down-set of A.

    The finite part is the largest index ``b`` with ``(I_b, j)`` below A,
    ``None`` for all of them, ``-1`` for none.
    """
    if any(u.is_infinite and u.shift <= j for u in A.nodes):
        return None, True
    fin = [u.target.n + j - u.shift for u in A.nodes if not u.is_infinite and u.shift <= j]
    return (max(fin) if fin else -1), False


def _rows(*formulas):
    return max([0] + [u.shift for A in formulas for u in A.nodes])


def downset_difference(A: AntichainFormula, B: AntichainFormula):
    """Size of the part of the down-set of B that is not below A, or ``None`` when infinite."""
    J = _rows(A, B)
    total = 0
    for j in range(J + 1):
        fa, ia = _row_profile(A, j)
        fb, ib = _row_profile(B, j)
        if fb is None and fa is not None:
            return None
        if fb is not None and fa is not None:
            total += max(0, fb - fa)
        if ib and not ia:
            total += 1
    fa, _ = _row_profile(A, J)
    fb, _ = _row_profile(B, J)
    if fa is not None and fb is not None and fb > fa:
        # every later row adds the same positive amount
        return None
    return total


def exact_interval_length(a: AntichainFormula, b: AntichainFormula):
    """Length of ``[a, b]`` (a <= b) in the unbounded lattice, ``None`` when infinite."""
    return downset_difference(a, b)


def tail_signature(A: AntichainFormula):
    """Class label for the finite-length congruence.

    ``("inf", c)`` with c the least I_inf shift, else ``("fin", e)`` where row j
    of the down-set ends at index ``j + e`` for large j, else ``("zero",)``.
    """
    c = [u.shift for u in A.nodes if u.is_infinite]
    if c:
        return ("inf", min(c))
    e = [u.target.n - u.shift for u in A.nodes]
    if e:
        return ("fin", max(e))
    return ("zero",)


@dataclass(eq=False)
class PatternIntervalLattice(Presentation):
    """Antichain formulas between ``x = 0`` and ``x ∈ I_inf`` (that is vx = 0)."""

    default_bound: int = 8
    name: str = "pattern interval"

    def __post_init__(self):
        self._cache = {}

    def window(self, bound=None):
        bound = self.default_bound if bound is None else bound
        if bound not in self._cache:
            self._cache[bound] = interval_elements(BOTTOM, TOP, bound)
        return self._cache[bound]

    def generators(self, bound=None):
        """Join generators of the window: the bottom and single nodes."""
        bound = self.default_bound if bound is None else bound
        return [BOTTOM] + [AntichainFormula.of(u) for u in window_nodes(bound)]

    def leq(self, a, b):
        return ac_leq(a, b)

    def join(self, a, b):
        return ac_join(a, b)

    def meet(self, a, b):
        return ac_meet(a, b)

    def finite_length(self, a, b):
        return downset_difference(self.meet(a, b), self.join(a, b)) is not None

    def class_key(self, a):
        return tail_signature(a)


# -- quotients -------------------------------------------------------------------------------

@dataclass(eq=False)
class QuotientOf(Presentation):
    """The quotient of ``base`` by its finite-length congruence, labelled by ``base.class_key``.

    Finite length in the quotient is decided by comparing the interval in
    windows of two sizes.
    """

    base: Presentation
    default_bound: int = 8
    step: int = 2
    name: str = ""

    def __post_init__(self):
        self._reps = {}
        self.name = self.name or f"quotient of {self.base.name}"

    def _gens(self, bound):
        gen = getattr(self.base, "generators", None)
        return gen(bound) if gen else self.base.window(bound)

    def reps(self, bound=None):
        bound = self.default_bound if bound is None else bound
        if bound not in self._reps:
            reps = {}
            for a in self._gens(bound):
                reps.setdefault(self.base.class_key(a), a)
            # class keys of joins of generators are again keys of generators for a join-homomorphism
            self._reps[bound] = reps
        return self._reps[bound]

    def window(self, bound=None):
        keys = list(self.reps(bound))
        return sorted(keys, key=lambda k: sum(1 for d in keys if self.leq(d, k)))

    def _rep(self, k):
        b = self.default_bound
        while k not in self.reps(b):
            b += self.step
            if b > 4 * self.default_bound + 16:
                raise UnsupportedPresentation(f"class {k} not found in any window")
        return self.reps(b)[k]

    def leq(self, a, b):
        ra, rb = self._rep(a), self._rep(b)
        return self.base.class_key(self.base.join(ra, rb)) == b

    def join(self, a, b):
        return self.base.class_key(self.base.join(self._rep(a), self._rep(b)))

    def meet(self, a, b):
        return self.base.class_key(self.base.meet(self._rep(a), self._rep(b)))

    def interval_size(self, a, b, bound):
        lo, hi = self.meet(a, b), self.join(a, b)
        return sum(1 for k in self.reps(bound) if self.leq(lo, k) and self.leq(k, hi))

    def finite_length(self, a, b):
        B = self.default_bound
        while not {a, b} <= set(self.reps(B)):
            B += self.step
        return self.interval_size(a, b, B) == self.interval_size(a, b, B + self.step)


# -- derivatives ---------------------------------------------------------------------------------

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def finite_interval_congruence(L: Presentation, bound: int | None = None) -> dict:
    """Classes of the window under the least congruence collapsing finite-length intervals.

    Returns ``{label: [members]}``.  When the presentation supplies class keys,
    each class is confirmed to be connected by finite intervals and distinct
    classes are confirmed to be separated.
    """
    elems = L.window(bound)
    key = L.class_key(elems[0]) if elems else None
    if key is None:
        uf = _UnionFind(range(len(elems)))
        for i, j in itertools.combinations(range(len(elems)), 2):
            if L.finite_length(elems[i], elems[j]):
                uf.union(i, j)
        classes = {}
        for i, a in enumerate(elems):
            classes.setdefault(uf.find(i), []).append(a)
        return {min(m, key=str): m for m in classes.values()}
    classes = {}
    for a in elems:
        classes.setdefault(L.class_key(a), []).append(a)
    for k, members in classes.items():
        # every member is a finite interval away from the first one
        for b in members[1:]:
            if not L.finite_length(members[0], b):
                raise UnsupportedPresentation(f"class {k} is not connected by finite intervals")
    reps = [m[0] for m in classes.values()]
    for a, b in itertools.combinations(reps, 2):
        if L.finite_length(a, b):
            raise UnsupportedPresentation("two distinct classes are joined by a finite interval")
    return classes


@dataclass
class DerivativeStep:
    level: int
    name: str
    window_size: int
    chain: bool
    trivial: bool
    length: int | None = None
    labels: list = dc_field(default_factory=list)

    def to_json(self):
        d = {"level": self.level, "presentation": self.name, "window_size": self.window_size,
             "chain": self.chain, "trivial": self.trivial}
        if self.length is not None:
            d["length"] = self.length
        if self.labels:
            d["elements"] = [str(x) for x in self.labels]
        return d


def _is_chain(L: Presentation, elems) -> bool:
    return all(L.leq(a, b) or L.leq(b, a) for a, b in itertools.combinations(elems, 2))


def derivative(L: Presentation, bound: int | None = None) -> Presentation:
    if isinstance(L, FiniteLattice):
        return FiniteLattice([0], set(), f"derivative of {L.name}")
    if isinstance(L, PatternIntervalLattice):
        finite_interval_congruence(L, bound)
        return QuotientOf(L, bound or L.default_bound, name="L_1 (pattern interval)")
    B = bound or L.default_bound
    c1 = finite_interval_congruence(L, B)
    c2 = finite_interval_congruence(L, B + 2)
    if len(c1) != len(c2):
        raise UnsupportedPresentation(f"{L.name}: class count not stable between windows")
    labels = [_class_label(L, m) for m in c1.values()]
    rep = {lab: m[0] for lab, m in zip(labels, c1.values())}
    order = {(a, b) for a in labels for b in labels if L.leq(rep[a], rep[b])}
    out = FiniteLattice(sorted(labels, key=lambda lab: sum(1 for d in labels if (d, lab) in order or d == lab)),
                        order, f"derivative of {L.name}")
    out.members = {lab: m for lab, m in zip(labels, c1.values())}
    return out


# names for the classes met in the pattern tower
_PROBES = [("zero",), ("fin", 0), ("inf", 0)]
_PROBE_NAMES = {("zero",): "v=0", ("fin", 0): "x|v", ("inf", 0): "vx=0"}


def _class_label(L, members):
    for p in _PROBES:
        if p in members:
            return _PROBE_NAMES[p]
    return str(min(members))


@dataclass
class TowerReport:
    steps: list
    m_dim: SmallOrdinal | None
    bound: int

    @property
    def signature(self):
        return tuple((s.trivial, s.chain, s.length) for s in self.steps)

    def to_json(self):
        return {"bound": self.bound, "tower": [s.to_json() for s in self.steps],
                "m_dim": None if self.m_dim is None else str(self.m_dim)}


def _step(level, L, bound):
    elems = L.window(bound)
    fin = isinstance(L, FiniteLattice)
    return DerivativeStep(level, L.name, len(elems), _is_chain(L, elems), fin and len(elems) == 1,
                          L.length() if fin else None, list(elems) if fin or len(elems) <= 12 else [])


def tower(L: Presentation, bound: int | None = None, max_levels: int = 12) -> TowerReport:
    bound = bound or L.default_bound
    steps = [_step(0, L, bound)]
    cur = L
    while not steps[-1].trivial:
        if len(steps) > max_levels:
            raise NonTerminating("derivative tower is still nontrivial")
        cur = derivative(cur, bound)
        steps.append(_step(len(steps), cur, bound))
    last = len(steps) - 2
    return TowerReport(steps, SmallOrdinal.finite(last) if last >= 0 else None, bound)


def m_dim(L: Presentation, bound: int | None = None) -> SmallOrdinal | None:
    """Last index with a nontrivial derivative (``None`` for the one-element lattice)."""
    return tower(L, bound).m_dim


@dataclass(eq=False)
class WindowStable(Presentation):
    """``base`` with finite length decided only by comparing two window sizes."""

    base: Presentation
    sizes: tuple = (10, 14)

    def __post_init__(self):
        self.name = f"{self.base.name} (windows {self.sizes[0]}, {self.sizes[1]})"
        self.default_bound = self.sizes[0]

    def window(self, bound=None):
        return self.base.window(bound)

    def leq(self, a, b):
        return self.base.leq(a, b)

    def finite_length(self, a, b):
        lo, hi = min(a, b), max(a, b)
        first, gap = self.sizes[0], self.sizes[1] - self.sizes[0]
        while not {lo, hi} <= set(self.base.window(first)):
            first += gap
        counts = [sum(1 for c in self.base.window(s) if self.leq(lo, c) and self.leq(c, hi))
                  for s in (first, first + gap)]
        return counts[0] == counts[1]


# -- the second derivative of the pattern interval ----------------------------------------------

@dataclass
class SecondDerivativeReport:
    interval_chain: list
    interval_length: int
    adjoined_top: str
    full_chain: list
    full_length: int
    separation_chain: list
    separation_ok: bool
    stable: bool
    heuristic_n: int = 3

    @property
    def ok(self):
        return self.full_length == self.heuristic_n and self.separation_ok and self.stable

    def to_json(self):
        return {"interval_chain": self.interval_chain, "interval_length": self.interval_length,
                "adjoined_top": self.adjoined_top, "chain": self.full_chain, "length": self.full_length,
                "separation_chain": self.separation_chain, "separation_ok": self.separation_ok,
                "stable": self.stable, "heuristic_n": self.heuristic_n,
                "note": "the top v=v lies outside the implemented interval; its class is adjoined, "
                        "supported by an infinite descending chain between vx=0 and v=v"}


def second_derivative_report(bounds=(6, 8), depth: int = 5) -> SecondDerivativeReport:
    chains = []
    for b in bounds:
        L1 = derivative(PatternIntervalLattice(b), b)
        L2 = derivative(L1, b)
        chains.append((L2.window(), L2.length(), L2.is_chain()))
    stable = all(c == chains[0] for c in chains)
    labels, length, is_chain = chains[-1]
    # v=v sits above vx=0; the formulas y^k|v + vx=0 descend strictly between them
    top, floor = realize("div(1)"), realize("ann(x)")
    seps = [realize(f"div(y^{k}) + ann(x)") for k in range(1, depth + 1)]
    ok = formula_leq(floor, top) and not formula_leq(top, floor)
    prev = top
    for s in seps:
        ok = ok and formula_leq(s, prev) and not formula_leq(prev, s) and formula_leq(floor, s) \
            and not formula_leq(s, floor)
        prev = s
    full = list(labels) + ["v=v"]
    return SecondDerivativeReport(list(labels), length, "v=v", full, len(full) - 1,
                                  [f"y^{k}|v + vx=0" for k in range(1, depth + 1)], ok and is_chain,
                                  stable)

"""The CM-part of the Ziegler spectrum as a symbolic space.

Points are the catalog indecomposables ``I_n``, ``I_inf`` and the three
infinite points.  Open sets are described by a finite set of finite indices,
an optional cofinite tail ``{I_n : n >= m}`` and a set of special points.
The topology is generated by one explicit basis family per point, and every
basis entry is recomputed from its pp-pair by evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from .cm import INF, Indec
from .formulas.pattern import (BOTTOM, AntichainFormula, N, PatternNode, evaluate_antichain,
                               finite_value_leq, node_leq, node_value)
from .ordinals import SmallOrdinal
from .points import GPT, QPT, RTILDE, InfPoint


class CatalogMiss(ValueError):
    """A computed open set disagrees with the described basis set, or a point is not in the catalog."""


SPECIAL_KINDS = ("IInf", "Rt", "Qp", "Gp")


@dataclass(frozen=True, order=True)
class ZgPoint:
    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind == "Fin":
            if self.n is None or self.n < 0:
                raise CatalogMiss("finite points need a natural index")
        elif self.kind in SPECIAL_KINDS:
            if self.n is not None:
                raise CatalogMiss(f"{self.kind} takes no index")
        else:
            raise CatalogMiss(f"unknown point {self.kind!r}")

    @classmethod
    def fin(cls, n: int) -> "ZgPoint":
        return cls("Fin", n)

    @property
    def is_finite(self):
        return self.kind == "Fin"

    def target(self):
        """The object that formulas are evaluated on."""
        if self.kind == "Fin":
            return Indec(self.n)
        return {"IInf": INF, "Rt": RTILDE, "Qp": QPT, "Gp": GPT}[self.kind]

    def __str__(self):
        if self.kind == "Fin":
            return str(Indec(self.n))
        return {"IInf": "Iinf", "Rt": "R~", "Qp": "Q", "Gp": "G"}[self.kind]

    @classmethod
    def parse(cls, s: str) -> "ZgPoint":
        t = s.strip()
        aliases = {"iinf": "IInf", "i∞": "IInf", "inf": "IInf", "rt": "Rt", "r~": "Rt",
                   "rtilde": "Rt", "q": "Qp", "qp": "Qp", "g": "Gp", "gp": "Gp"}
        if t.lower() in aliases:
            return cls(aliases[t.lower()])
        if t.lower().startswith("fin(") and t.endswith(")"):
            return cls.fin(int(t[4:-1]))
        try:
            d = Indec.parse(t)
        except ValueError:
            raise CatalogMiss(f"unknown point {s!r}") from None
        return cls("IInf") if d.is_infinite else cls.fin(d.n)


I_INF, R_TILDE, Q_POINT, G_POINT = (ZgPoint(k) for k in SPECIAL_KINDS)
SPECIALS = (I_INF, R_TILDE, Q_POINT, G_POINT)


@dataclass(frozen=True)
class SymbolicOpenSet:
    """A set of points: ``fin_included``, plus all ``I_n`` with ``n >= cofinite_from``, plus ``specials``.

    Also used for the closed subspaces met during the derivative analysis.
    """

    fin_included: frozenset = frozenset()
    cofinite_from: int | None = None
    specials: frozenset = frozenset()

    @classmethod
    def make(cls, fin=(), cofinite_from=None, specials=()):
        fin = set(fin)
        m = cofinite_from
        if m is not None:
            fin = {k for k in fin if k < m}
            while m > 0 and (m - 1) in fin:
                m -= 1
                fin.discard(m)
        return cls(frozenset(fin), m, frozenset(specials))

    @classmethod
    def everything(cls):
        return cls.make((), 0, SPECIALS)

    @classmethod
    def empty(cls):
        return cls()

    @classmethod
    def of(cls, *points):
        return cls.make([p.n for p in points if p.is_finite], None, [p for p in points if not p.is_finite])

    def _horizon(self, *others):
        ks = [0]
        for s in (self,) + others:
            ks += list(s.fin_included)
            if s.cofinite_from is not None:
                ks.append(s.cofinite_from)
        return max(ks) + 1

    def has_finite(self, n: int) -> bool:
        return n in self.fin_included or (self.cofinite_from is not None and n >= self.cofinite_from)

    def __contains__(self, p: ZgPoint) -> bool:
        if p.is_finite:
            return self.has_finite(p.n)
        return p in self.specials

    def _combine(self, other, op):
        h = self._horizon(other)
        fin = [k for k in range(h) if op(self.has_finite(k), other.has_finite(k))]
        tail = op(self.cofinite_from is not None, other.cofinite_from is not None)
        specials = [p for p in SPECIALS if op(p in self.specials, p in other.specials)]
        return SymbolicOpenSet.make(fin, h if tail else None, specials)

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def is_empty(self) -> bool:
        return not self.fin_included and self.cofinite_from is None and not self.specials

    def is_singleton(self, p: ZgPoint) -> bool:
        return self == SymbolicOpenSet.of(p)

    def finite_points(self, upto: int):
        return [ZgPoint.fin(k) for k in range(upto + 1) if self.has_finite(k)]

    def sample(self, upto: int | None = None):
        """All special points and the finite points up to ``upto`` (default: one past the horizon)."""
        upto = self._horizon() + 1 if upto is None else upto
        return self.finite_points(upto) + [p for p in SPECIALS if p in self.specials]

    def __str__(self):
        parts = [str(Indec(k)) for k in sorted(self.fin_included)]
        if self.cofinite_from is not None:
            parts.append(f"O_{self.cofinite_from}")
        parts += [str(p) for p in SPECIALS if p in self.specials]
        return "{" + ", ".join(parts) + "}" if parts else "{}"

    def to_json(self):
        return {"fin_included": sorted(self.fin_included), "fin_cofinite_from": self.cofinite_from,
                "specials": [p.kind for p in SPECIALS if p in self.specials]}


def cofinite(m: int) -> SymbolicOpenSet:
    """``O_m``: the finite points ``I_n`` with ``n >= m``."""
    return SymbolicOpenSet.make((), m, ())


# -- open sets of pp-pairs -----------------------------------------------------------------

def point_in_pair(phi: AntichainFormula, psi: AntichainFormula, p: ZgPoint) -> bool:
    """Some element of ``p`` satisfies ``phi`` but not ``psi``."""
    P = p.target()
    a, b = evaluate_antichain(phi, P), evaluate_antichain(psi, P)
    if isinstance(P, InfPoint):
        return not (a <= b)
    return not finite_value_leq(a, b)


def _threshold(*formulas) -> int:
    # Past this index every antichain value on I_n is either constant or n + const,
    # and all pairwise comparisons between such values have settled.
    targets, consts, slopes = [0], [], []
    for A in formulas:
        for u in A.nodes:
            if u.is_infinite:
                consts.append(u.shift)
            else:
                targets.append(u.target.n)
                slopes.append(u.shift - u.target.n)
    cross = [c - d for c in consts for d in slopes]
    return max(targets + cross) + 1


def open_set_of_pair(phi: AntichainFormula, psi: AntichainFormula) -> SymbolicOpenSet:
    """The basic open set ``(phi / psi)``, exact in the finite family."""
    K = _threshold(phi, psi)
    fin = [k for k in range(K) if point_in_pair(phi, psi, ZgPoint.fin(k))]
    tail = point_in_pair(phi, psi, ZgPoint.fin(K))
    specials = [p for p in SPECIALS if point_in_pair(phi, psi, p)]
    return SymbolicOpenSet.make(fin, K if tail else None, specials)


# -- basis catalogs ------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisEntry:
    point: ZgPoint
    high: AntichainFormula
    low: AntichainFormula
    open_set: SymbolicOpenSet
    label: str

    def to_json(self):
        return {"point": str(self.point), "phi": self.high.to_json(), "psi": self.low.to_json(),
                "open_set": self.open_set.to_json(), "label": self.label}


def _ac(*nodes):
    return AntichainFormula.of(*nodes)


def _described(p: ZgPoint, max_param: int):
    """``(phi, psi, described set, label)`` for the basis family of ``p``."""
    everything = SymbolicOpenSet.everything()
    if p.is_finite:
        n = p.n
        if n == 0:
            return [(_ac(N(0, 0)), _ac(N(1, 1)), SymbolicOpenSet.of(p), "x∈R / xy∈m")]
        low = _ac(N(n - 1, 0), N(n + 1, 1))
        return [(_ac(N(n, 0)), low, SymbolicOpenSet.of(p), f"x∈{Indec(n)} / {low}")]
    if p.kind == "IInf":
        out = []
        for m in range(max_param + 1):
            low = _ac(N(None, 1), N(m, 0))
            out.append((_ac(N(None, 0)), low, cofinite(m + 1) | SymbolicOpenSet.of(I_INF),
                        f"x∈Iinf / {low}"))
        return out
    if p.kind == "Rt":
        return [(_ac(N(n, n)), _ac(N(0, 1)), cofinite(n) | SymbolicOpenSet.of(R_TILDE),
                 f"{N(n, n)} / xy∈R") for n in range(1, max_param + 1)]
    if p.kind == "Gp":
        out = []
        for m in range(max_param + 1):
            for n in range(max_param + 1):
                removed = SymbolicOpenSet.make(range(m + n + 1), None, [Q_POINT])
                out.append((_ac(N(None, n)), _ac(N(m, 0)), everything - removed,
                            f"{N(None, n)} / x∈{Indec(m)}"))
        return out
    # Q: R~ is kept; only G and I_inf are removed
    return [(_ac(N(0, n)), BOTTOM, everything - SymbolicOpenSet.of(G_POINT, I_INF),
             f"{N(0, n)} / x=0") for n in range(max_param + 1)]


def basis_catalog(p: ZgPoint, max_param: int = 8) -> list:
    """The basis family at ``p``; each set is recomputed from its pair and checked."""
    out = []
    for phi, psi, expected, label in _described(p, max_param):
        got = open_set_of_pair(phi, psi)
        if got != expected:
            raise CatalogMiss(f"{label}: computed {got}, described {expected}")
        if p not in got:
            raise CatalogMiss(f"{label} does not contain {p}")
        out.append(BasisEntry(p, phi, psi, got, label))
    return out


# -- Cantor-Bendixson analysis ---------------------------------------------------------------

@dataclass
class CBReport:
    space_rank: SmallOrdinal | None
    finite_rank: SmallOrdinal
    ranks: dict
    layers: list = dc_field(default_factory=list)

    def rank(self, p: ZgPoint) -> SmallOrdinal:
        return self.finite_rank if p.is_finite else self.ranks[p]

    def to_json(self):
        rows = [{"point": "I_n (all n)", "cb_rank": str(self.finite_rank)}]
        rows += [{"point": str(p), "cb_rank": str(r)} for p, r in self.ranks.items()]
        return {"space_rank": None if self.space_rank is None else str(self.space_rank), "points": rows}


def _isolated_in(p: ZgPoint, T: SymbolicOpenSet, max_param: int) -> bool:
    return any((e.open_set & T).is_singleton(p) for e in basis_catalog(p, max_param))


def cb_analysis(max_param: int = 8) -> CBReport:
    """Remove isolated points until nothing is left (or a perfect kernel remains)."""
    T = SymbolicOpenSet.everything()
    ranks, finite_rank, layers = {}, None, []
    level = 0
    while not T.is_empty():
        sweep = max(max_param, T._horizon() + 2)
        fin_iso = [q.n for q in T.finite_points(sweep) if _isolated_in(q, T, max(max_param, q.n + 2))]
        iso_specials = [q for q in SPECIALS if q in T.specials and _isolated_in(q, T, sweep)]
        # the finite basis family is uniform in n, so a tail that is isolated up to the sweep stays isolated
        tail = T.cofinite_from is not None and all(k in fin_iso for k in range(T.cofinite_from, sweep + 1))
        removed = SymbolicOpenSet.make(fin_iso, T.cofinite_from if tail else None, iso_specials)
        if removed.is_empty():
            return CBReport(None, finite_rank, ranks, layers)
        if fin_iso:
            finite_rank = SmallOrdinal.finite(level)
        for q in iso_specials:
            ranks[q] = SmallOrdinal.finite(level)
        layers.append(removed)
        T = T - removed
        level += 1
    return CBReport(SmallOrdinal.finite(level - 1), finite_rank, ranks, layers)


def closed_points(max_param: int = 8) -> set:
    """Points ``p`` such that every other point has a basis neighbourhood missing ``p``."""
    sample = [ZgPoint.fin(k) for k in range(max_param + 1)] + list(SPECIALS)
    out = set()
    for p in sample:
        if all(any(p not in e.open_set for e in basis_catalog(q, max_param)) for q in sample if q != p):
            out.add(p)
    return out


def closure_contains(p: ZgPoint, q: ZgPoint, max_param: int = 8) -> bool:
    """``q`` lies in the closure of ``p``: every basis neighbourhood of ``q`` contains ``p``."""
    return all(p in e.open_set for e in basis_catalog(q, max_param))


# documented flags, not computed
NEG_ISOLATED = {I_INF: False, R_TILDE: True}


def catalog_checks(max_param: int = 8) -> dict:
    """Shape checks on the basis catalogs: density, compact-filter shape, non-isolation of I_inf."""
    entries = [e for k in range(max_param + 1) for e in basis_catalog(ZgPoint.fin(k), max_param)]
    for p in SPECIALS:
        entries += basis_catalog(p, max_param)
    dense = all(e.open_set.is_empty() or e.open_set.fin_included or e.open_set.cofinite_from is not None
                for e in entries)
    g_shape = all(
        I_INF in e.open_set and R_TILDE in e.open_set and e.open_set.cofinite_from is not None
        for e in entries if G_POINT in e.open_set)
    q_shape = all(e.open_set.cofinite_from is not None for e in entries if Q_POINT in e.open_set)
    full = SymbolicOpenSet.everything()
    inf_not_isolated = not any((e.open_set & full).is_singleton(I_INF) for e in entries)
    return {"density": dense, "g_filter": g_shape, "q_filter": q_shape,
            "iinf_not_isolated": inf_not_isolated, "entries": len(entries)}


# -- pp-types and direct products --------------------------------------------------------------

@dataclass(frozen=True)
class PPTypeSequence:
    name: str
    generator: Callable[[int], PatternNode]
    start: int = 0

    def __call__(self, k: int) -> PatternNode:
        return self.generator(k)

    def is_decreasing(self, upto: int = 8) -> bool:
        return all(node_leq(self(k + 1), self(k)) for k in range(self.start, upto))


def rtilde_type() -> PPTypeSequence:
    """Generators ``xy^n ∈ I_n`` of the type of ``x`` in R~."""
    return PPTypeSequence("xy^n∈I_n", lambda n: N(n, n), 0)


def shifted_type() -> PPTypeSequence:
    """Generators ``xy^n ∈ I_{n-1}``."""
    return PPTypeSequence("xy^n∈I_(n-1)", lambda n: N(n - 1, n), 1)


def constant_type(node: PatternNode) -> PPTypeSequence:
    return PPTypeSequence(str(node), lambda n: node, 0)


@dataclass
class ProductReport:
    name: str
    bound: int
    finite: dict          # k -> (verdict, valuation or None)
    rtilde_values: list
    rtilde_meet: object

    @property
    def obstruction(self) -> bool:
        return all(v == "zero" for v, _ in self.finite.values()) and not self.rtilde_meet.is_zero

    def to_json(self):
        return {"type": self.name, "bound": self.bound,
                "finite": {str(Indec(k)): {"verdict": v, "valuation": val} for k, (v, val) in self.finite.items()},
                "rtilde": [str(d) for d in self.rtilde_values], "rtilde_meet": str(self.rtilde_meet),
                "obstruction": self.obstruction}


def product_realization_check(seq: PPTypeSequence, bound: int = 8) -> ProductReport:
    """Intersect the generator values on each finite point and on R~.

    The running intersection on ``I_k`` is ``x y^v F[[y]]``; it is followed up
    to index ``2*bound + 1`` and called ``zero`` if ``v`` keeps growing on the
    tail past ``bound``, ``stable`` if it is constant there.
    """
    horizon = 2 * bound + 1
    finite = {}
    for k in range(bound + 1):
        run, vals = 0, []
        for n in range(seq.start, horizon + 1):
            v = node_value(seq(n), Indec(k))
            run = None if (v is None or run is None) else max(run, v)
            vals.append((n, run))
        tail = [v for n, v in vals if n > bound]
        if tail[-1] is None:
            finite[k] = ("zero", None)
        elif all(b > a for a, b in zip(tail, tail[1:])):
            finite[k] = ("zero", None)
        elif len(set(tail)) == 1:
            finite[k] = ("stable", tail[-1])
        else:
            finite[k] = ("undetermined", tail[-1])
    rvals = [node_value(seq(n), RTILDE) for n in range(seq.start, bound + 1)]
    meet = rvals[0]
    for d in rvals[1:]:
        meet = meet.meet(d)
    return ProductReport(seq.name, bound, finite, rvals, meet)

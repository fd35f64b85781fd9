"""pp-formulas as pointed CM-modules.

A formula is represented by a free realization ``(M, m)``: ``m`` satisfies the
formula, and every other element satisfying it is the image of ``m`` under a
morphism out of ``M``.  Realizations are kept decomposed into catalog
indecomposables with normalized point coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..cm import (INF, FgCM, Indec, block_sum, canonical, decompose, direct_sum, echelon_basis,
                  hom_closed_form)
from ..kernel import (DEFAULT_PREC, QQ, Field, InsufficientPrecision, SeriesMatrix, TruncSeries,
                      inverse, smith_normal_form, solve_linear)
from ..points import InfPoint, trace as point_trace
from .dsl import Ann, Conj, Div, ParseError, Point, Poly, Sum, parse_pp


class NotInInterval(ValueError):
    """The formula is not below ``vx = 0``, so it has no antichain normal form."""


def poly_series(terms, prec, field):
    d = dict(terms)
    if not d:
        return TruncSeries.zero(prec, field)
    top = max(d)
    if min(d) < 0:
        raise ValueError("negative exponent in a ring element")
    return TruncSeries([d.get(k, 0) for k in range(top + 1)], prec, field, exact=True)


# -- pointed modules ---------------------------------------------------------------

def cmify(M: FgCM, gens, point):
    """Quotient of M by the saturation of the x-stable submodule spanned by ``gens``.

    Returns the torsion-free quotient and the image of ``point``.
    """
    fld, prec = M.field, M.prec
    gens = [g for g in gens if not all(e.is_exact_zero() for e in g)]
    if not gens:
        return M, list(point)
    S = SeriesMatrix.from_columns(gens, fld)
    snf = smith_normal_form(S)
    rho = snf.rank
    n = M.rank
    if rho == n:
        return FgCM(SeriesMatrix.zeros(0, 0, prec, fld)), []
    U = snf.raw_U
    pi = SeriesMatrix._of([list(r) for r in U.rows[rho:]], n, fld)
    sigma = inverse(U).cols(range(rho, n))
    X2 = pi @ M.X @ sigma
    return FgCM(X2), pi @ list(point)


def _normalize(d: Indec, coords):
    """Canonical representative of a point of I_n (or I_inf) up to automorphism."""
    if d.is_infinite:
        (c,) = coords
        return (TruncSeries.monomial(c.valuation(), c.prec, c.field),)
    c1, c2 = coords
    if c2.is_zero():
        if not c2.exact:
            raise InsufficientPrecision("point coordinate vanishes only to precision")
        return (TruncSeries.monomial(c1.valuation(), c1.prec, c1.field), TruncSeries.zero(c2.prec, c2.field))
    k = c2.valuation()
    p = TruncSeries.monomial(k, c2.prec, c2.field) / c2
    t = p * c1
    low = [t.coefficient(j) for j in range(k)]
    return (TruncSeries(low, c1.prec, c1.field, exact=True), TruncSeries.monomial(k, c2.prec, c2.field))


def _coords_key(coords):
    return tuple(tuple((k, str(v)) for k, v in c.terms()) for c in coords)


def _components_from(M: FgCM, point):
    if M.rank == 0:
        return []
    dec = decompose(M)
    c = inverse(dec.basis) @ list(point)
    comps = []
    pos = 0
    for d in dec.summands:
        r = 1 if d.is_infinite else 2
        comps.append((d, tuple(c[pos:pos + r])))
        pos += r
    return comps


def _minimize(comps):
    out = {}
    for d, coords in comps:
        if all(e.is_zero() for e in coords):
            if not all(e.exact for e in coords):
                raise InsufficientPrecision("cannot decide whether a point component vanishes")
            continue
        nc = _normalize(d, coords)
        out[(d, _coords_key(nc))] = (d, nc)
    return [out[k] for k in sorted(out, key=lambda k: (k[0], k[1]))]


@dataclass(eq=False)
class CMFormula:
    """A minimized free realization: a list of ``(Indec, coords)`` components."""

    components: list
    prec: int = DEFAULT_PREC
    field: Field = QQ

    @classmethod
    def from_pointed(cls, M: FgCM, point, prec=None):
        prec = prec or M.prec
        return cls(_minimize(_components_from(M, point)), prec, M.field)

    @property
    def module(self) -> FgCM:
        if not self.components:
            return FgCM(SeriesMatrix.zeros(0, 0, self.prec, self.field))
        return block_sum([d for d, _ in self.components], self.prec, self.field)

    @property
    def point(self):
        return [c for _, coords in self.components for c in coords]

    def is_zero(self) -> bool:
        return not self.components

    def x_kills_point(self) -> bool:
        return all(d.is_infinite or coords[1].is_zero() for d, coords in self.components)

    def __str__(self):
        if not self.components:
            return "v=0"
        parts = []
        for d, coords in self.components:
            cs = ", ".join(str(c) for c in coords)
            parts.append(f"({d}; {cs})")
        return " + ".join(parts)

    def to_json(self):
        return [{"module": str(d), "point": [c.to_json() for c in coords]} for d, coords in self.components]


def node_formula(d: Indec, shift: int, prec: int = DEFAULT_PREC, field: Field = QQ) -> CMFormula:
    """The pointed module ``(I_d, x y^shift)``."""
    c1 = TruncSeries.monomial(shift, prec, field)
    coords = (c1,) if d.is_infinite else (c1, TruncSeries.zero(prec, field))
    return CMFormula([(d, coords)], prec, field)


def _ring_point(r: Poly, prec, field):
    f = poly_series(r.f, prec, field)
    g = poly_series(r.g, prec, field)
    return [g, f]


def _raw(ast, prec, field):
    """Pointed module (not yet minimized) for a syntax tree."""
    R = canonical(Indec(0), prec, field)
    if isinstance(ast, Div):
        return R, _ring_point(ast.r, prec, field)
    if isinstance(ast, Ann):
        g, f = _ring_point(ast.r, prec, field)
        gens = [[g, f], [f, TruncSeries.zero(prec, field)]]
        one = [TruncSeries.zero(prec, field), TruncSeries.one(prec, field)]
        return cmify(R, gens, one)
    if isinstance(ast, Point):
        d = ast.module
        f = poly_series(ast.elem.f, prec, field)
        g = poly_series(ast.elem.g, prec, field)
        if d.is_infinite:
            if not f.is_zero():
                raise ParseError(f"{ast.elem} is not in Iinf = xR")
            return canonical(d, prec, field), [g]
        if f.val_lower() < d.n:
            raise ParseError(f"{ast.elem} is not in {d}")
        return canonical(d, prec, field), [g, f.shift(-d.n)]
    if isinstance(ast, Sum):
        mods, pts = [], []
        for p in ast.parts:
            M, m = _raw(p, prec, field)
            if M.rank:
                mods.append(M)
                pts += m
        if not mods:
            return FgCM(SeriesMatrix.zeros(0, 0, prec, field)), []
        return direct_sum(*mods), pts
    if isinstance(ast, Conj):
        M, m = _raw(ast.left, prec, field)
        N, n = _raw(ast.right, prec, field)
        return amalgam(M, m, N, n)
    raise TypeError(f"not a formula: {ast!r}")


def amalgam(M: FgCM, m, N: FgCM, n):
    """Pointed module for the conjunction: ``(M + N) / R(m, -n)`` made torsion-free, at ``(m, 0)``."""
    prec, fld = min(M.prec, N.prec), M.field
    if M.rank == 0 or N.rank == 0:
        return FgCM(SeriesMatrix.zeros(0, 0, prec, fld)), []
    S = direct_sum(M, N)
    rel = list(m) + [-e for e in n]
    xrel = S.X @ rel
    pt = list(m) + [TruncSeries.zero(prec, fld)] * N.rank
    return cmify(S, [rel, xrel], pt)


def realize(ast, prec: int = DEFAULT_PREC, field: Field = QQ) -> CMFormula:
    if isinstance(ast, str):
        ast = parse_pp(ast)
    M, m = _raw(ast, prec, field)
    return CMFormula.from_pointed(M, m, prec)


# -- order, sum, meet -----------------------------------------------------------------

def trace_generators(phi: CMFormula, target: Indec):
    """F[[y]]-generators of ``{f(point) : f in Hom(realization, target)}`` in canonical coordinates."""
    gens = []
    for d, coords in phi.components:
        for h in hom_closed_form(d, target, phi.prec, phi.field):
            gens.append(h.A @ list(coords))
    return gens


def _in_span(gens, v, allow_truncated=False) -> bool:
    if not gens:
        return all(e.is_zero() for e in v)
    S = SeriesMatrix.from_columns(gens, v[0].field)
    return bool(solve_linear(S, list(v), allow_truncated=allow_truncated))


def leq(psi: CMFormula, phi: CMFormula) -> bool:
    """``psi <= phi``: a pointed morphism from the realization of phi to that of psi exists."""
    for d, coords in psi.components:
        if not _in_span(trace_generators(phi, d), coords):
            return False
    return True


def equivalent(a: CMFormula, b: CMFormula) -> bool:
    return leq(a, b) and leq(b, a)


def formula_sum(phi: CMFormula, psi: CMFormula) -> CMFormula:
    return CMFormula(_minimize(phi.components + psi.components), min(phi.prec, psi.prec), phi.field)


def formula_meet(phi: CMFormula, psi: CMFormula) -> CMFormula:
    M, m = amalgam(phi.module, phi.point, psi.module, psi.point)
    return CMFormula.from_pointed(M, m, min(phi.prec, psi.prec))


# -- evaluation -------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSub:
    """An F[[y]]-submodule of a catalog module, by echelon generators (tuples of series)."""

    target: Indec
    gens: tuple

    def contains_vec(self, v) -> bool:
        return _in_span([list(g) for g in self.gens], list(v))

    def __le__(self, other) -> bool:
        return all(other.contains_vec(g) for g in self.gens)

    def __ge__(self, other) -> bool:
        return other <= self

    def same(self, other) -> bool:
        return self <= other and other <= self

    def x_valuation(self):
        """For submodules inside the x-line (second coordinate zero): the valuation of the generator."""
        if not self.gens:
            return None
        if any(not g[1].is_zero() for g in self.gens if len(g) == 2):
            return None
        return min(g[0].valuation() for g in self.gens)

    def __str__(self):
        if not self.gens:
            return "0"
        return "<" + "; ".join("(" + ", ".join(str(e) for e in g) + ")" for g in self.gens) + ">"

    def to_json(self):
        return {"module": str(self.target), "generators": [[e.to_json() for e in g] for g in self.gens]}


def finite_sub(target: Indec, vectors) -> FiniteSub:
    vectors = [v for v in vectors if not all(e.is_zero() for e in v)]
    if not vectors:
        return FiniteSub(target, ())
    fld = vectors[0][0].field
    mats = [SeriesMatrix.from_columns([v], fld) for v in vectors]
    ech = echelon_basis(mats)
    return FiniteSub(target, tuple(tuple(A.col(0)) for A in ech))


def evaluate(phi: CMFormula, P):
    """``phi(P)`` for a catalog indecomposable or one of the infinite points."""
    if isinstance(P, InfPoint):
        return point_trace(phi.components, P)
    return finite_sub(P, trace_generators(phi, P))

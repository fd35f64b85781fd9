"""The radical filtration of the category of finitely generated CM-modules.

Finite powers ``rad^n(X, Y)`` are computed as F[[y]]-spans.  For a finite
source X every radical map out of X factors through the left end of its
almost split sequence, so ``rad^n(X, Y)`` is spanned by ``h o p`` with ``p``
a length-n path of irreducible maps out of X and ``h`` a Hom generator.  For
a finite target the dual statement is used; between copies of I_inf the paths
are powers of the loop.  ``rad^omega`` and ``rad^(omega+1)`` use closed forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .cm import (INF, I, Indec, MorphCM, canonical, decompose, hom_closed_form, incl, loop_y,
                 mult_y, span_contains)
from .formulas.pattern import BoundExceeded
from .kernel import DEFAULT_PREC, QQ, Field, SeriesMatrix, inverse
from .ordinals import OMEGA, SmallOrdinal

MAX_POWER = 16


# -- paths of irreducible maps ------------------------------------------------------------

@dataclass(frozen=True)
class PathProduct:
    """``coeff * (a_k o ... o a_1)`` for irreducible maps listed in the order they are applied."""

    steps: tuple
    source: Indec
    coeff: object = None

    @property
    def target(self) -> Indec:
        d = self.source
        for s in self.steps:
            d = _step_target(d, s)
        return d

    def evaluate(self, prec: int = DEFAULT_PREC, field: Field = QQ) -> MorphCM:
        f = canonical(self.source, prec, field).identity()
        d = self.source
        for s in self.steps:
            f = _irreducible(s, prec, field) @ f
            d = _step_target(d, s)
        return f.scale(self.coeff) if self.coeff is not None else f

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        if not self.steps:
            return f"id_{self.source}"
        return " ; ".join(_step_name(s) for s in self.steps)


def _step_target(d: Indec, s):
    kind = s[0]
    if kind == "loop_y":
        if not d.is_infinite:
            raise ValueError("the loop lives on I_inf")
        return d
    n = s[1]
    if kind == "mult_y":
        if d != I(n):
            raise ValueError(f"mult_y({n}) does not start at {d}")
        return I(n + 1)
    if d != I(n + 1):
        raise ValueError(f"incl({n}) does not start at {d}")
    return I(n)


def _irreducible(s, prec, field) -> MorphCM:
    if s[0] == "loop_y":
        return loop_y(prec, field)
    return (mult_y if s[0] == "mult_y" else incl)(s[1], prec, field)


def _step_name(s):
    return "y:Iinf→Iinf" if s[0] == "loop_y" else f"{s[0]}({s[1]})"


def canonical_path(source: Indec, ups: int, downs: int) -> PathProduct:
    """Climb ``ups`` times with mult_y, then descend ``downs`` times with incl."""
    steps = [("mult_y", source.n + k) for k in range(ups)]
    top = source.n + ups
    steps += [("incl", top - 1 - k) for k in range(downs)]
    return PathProduct(tuple(steps), source)


def paths_from(source: Indec, length: int):
    """One path per endpoint; all paths with the same endpoint agree by the mesh relations."""
    if source.is_infinite:
        return [PathProduct((("loop_y",),) * length, source)]
    return [canonical_path(source, u, length - u) for u in range(length + 1) if source.n + 2 * u - length >= 0]


def paths_into(target: Indec, length: int):
    if target.is_infinite:
        return [PathProduct((("loop_y",),) * length, target)]
    out = []
    for u in range(length + 1):
        start = target.n - u + (length - u)
        if start >= 0:
            out.append(canonical_path(I(start), u, length - u))
    return out


# -- membership --------------------------------------------------------------------------------

def _endpoint(M) -> Indec:
    if len(M.label) != 1:
        raise ValueError("expected a catalog indecomposable")
    return M.label[0]


def rad_power_generators(X: Indec, Y: Indec, n: int, prec: int = DEFAULT_PREC, field: Field = QQ) -> list:
    """F[[y]]-generators of ``rad^n(X, Y)``."""
    if n < 0 or n > MAX_POWER:
        raise BoundExceeded(f"power {n} outside 0..{MAX_POWER}")
    if n == 0:
        return hom_closed_form(X, Y, prec, field)
    gens = []
    if not X.is_infinite:
        for p in paths_from(X, n):
            pm = p.evaluate(prec, field)
            gens += [h @ pm for h in hom_closed_form(p.target, Y, prec, field)]
    elif not Y.is_infinite:
        for q in paths_into(Y, n):
            qm = q.evaluate(prec, field)
            gens += [qm @ h for h in hom_closed_form(X, q.source, prec, field)]
    else:
        gens.append(PathProduct((("loop_y",),) * n, INF).evaluate(prec, field))
    return gens


def rad_power_membership(f: MorphCM, n: int, bound: int = 8) -> bool:
    X, Y = _endpoint(f.source), _endpoint(f.target)
    for d in (X, Y):
        if not d.is_infinite and d.n > bound:
            raise BoundExceeded(f"{d} is beyond the window {bound}")
    if f.is_zero():
        return True
    gens = rad_power_generators(X, Y, n, f.A.prec, f.A.field)
    return span_contains([g.A for g in gens], f.A)


def _blocks(f: MorphCM):
    """Conjugate f into decomposed bases; yield (source summand, target summand, block)."""
    if f.source.label and f.target.label:
        src, tgt, A = list(f.source.label), list(f.target.label), f.A
    else:
        ds, dt = decompose(f.source), decompose(f.target)
        src, tgt = ds.summands, dt.summands
        A = inverse(dt.basis) @ f.A @ ds.basis
    rs = [0]
    for d in src:
        rs.append(rs[-1] + (1 if d.is_infinite else 2))
    rt = [0]
    for d in tgt:
        rt.append(rt[-1] + (1 if d.is_infinite else 2))
    for i, a in enumerate(src):
        for j, b in enumerate(tgt):
            rows = [A.rows[r][rs[i]:rs[i + 1]] for r in range(rt[j], rt[j + 1])]
            yield a, b, SeriesMatrix._of([list(r) for r in rows], rs[i + 1] - rs[i], A.field)


def in_rad(f: MorphCM) -> bool:
    """Every component between isomorphic summands is a non-isomorphism."""
    for a, b, block in _blocks(f):
        if a == b and block.det().valuation() == 0:
            return False
    return True


def in_rad_omega(f: MorphCM) -> bool:
    """Closed form on indecomposables: finite-to-finite maps must kill x; I_inf to I_inf must vanish."""
    X, Y = _endpoint(f.source), _endpoint(f.target)
    if X.is_infinite and Y.is_infinite:
        return f.is_zero()
    if X.is_infinite or Y.is_infinite:
        return True
    return all(e.is_zero() for e in f.A.col(0))


def rad_omega_generators(X: Indec, Y: Indec, prec: int = DEFAULT_PREC, field: Field = QQ) -> list:
    if X.is_infinite and Y.is_infinite:
        return []
    if X.is_infinite or Y.is_infinite:
        return hom_closed_form(X, Y, prec, field)
    src, tgt = canonical(X, prec, field), canonical(Y, prec, field)
    return [MorphCM(src, tgt, SeriesMatrix([[0, 1], [0, 0]], prec, field))]


def in_rad_omega_plus_one(f: MorphCM, bound: int = 8) -> bool:
    """``(rad^omega)^2``: spanned by composites through some indecomposable in the window."""
    X, Y = _endpoint(f.source), _endpoint(f.target)
    if f.is_zero():
        return True
    mids = [I(k) for k in range(bound + 1)] + [INF]
    gens = [g @ h for Z in mids for h in rad_omega_generators(X, Z, f.A.prec, f.A.field)
            for g in rad_omega_generators(Z, Y, f.A.prec, f.A.field)]
    gens = [g.A for g in gens if not g.is_zero()]
    return span_contains(gens, f.A)


# -- layers ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class RadLayer:
    value: SmallOrdinal | None      # None marks the zero map

    @property
    def is_zero_map(self):
        return self.value is None

    def __str__(self):
        return "0 (zero map)" if self.value is None else str(self.value)


def layer(f: MorphCM, max_power: int = MAX_POWER, bound: int = 8) -> RadLayer:
    if f.is_zero():
        return RadLayer(None)
    if in_rad_omega(f):
        if in_rad_omega_plus_one(f, bound):
            return RadLayer(OMEGA.succ())
        return RadLayer(OMEGA)
    last = 0
    for n in range(1, max_power + 1):
        if not rad_power_membership(f, n, bound):
            return RadLayer(SmallOrdinal.finite(last))
        last = n
    raise BoundExceeded(f"map lies in rad^{max_power} but not in rad^omega: raise the power cap")


def stabilization(f: MorphCM, max_power: int = 12, bound: int = 8) -> list:
    return [rad_power_membership(f, n, bound) for n in range(max_power + 1)]


# -- nilpotency ---------------------------------------------------------------------------------

@dataclass
class NilpotencyReport:
    bound: int
    witness_f: MorphCM
    witness_g: MorphCM
    witness_nonzero: bool
    witness_in_omega: bool
    triples_checked: int
    nonzero_triples: list

    @property
    def ok(self):
        return self.witness_nonzero and self.witness_in_omega and not self.nonzero_triples

    def summary(self):
        if self.ok:
            return "omega+2 confirmed (witness gf ≠ 0; all triple rad^ω compositions zero)"
        return "omega+2 NOT confirmed"

    def to_json(self):
        return {"bound": self.bound, "witness": {"f": str(self.witness_f), "g": str(self.witness_g),
                                                 "gf": str((self.witness_g @ self.witness_f).A),
                                                 "gf_nonzero": self.witness_nonzero,
                                                 "in_rad_omega": self.witness_in_omega},
                "triples_checked": self.triples_checked,
                "nonzero_triples": [list(map(str, t)) for t in self.nonzero_triples],
                "nilpotency_index": "omega+2" if self.ok else None, "summary": self.summary()}


def verify_nilpotency(bound: int = 6, prec: int = DEFAULT_PREC, field: Field = QQ) -> NilpotencyReport:
    R = canonical(I(0), prec, field)
    Iinf = canonical(INF, prec, field)
    f = MorphCM(R, Iinf, SeriesMatrix([[0, 1]], prec, field), "x:R→Iinf")
    g = MorphCM(Iinf, R, SeriesMatrix([[1], [0]], prec, field), "incl:Iinf→R")
    gf = g @ f
    objs = [I(k) for k in range(bound + 1)] + [INF]
    gens = {(a, b): rad_omega_generators(a, b, prec, field) for a in objs for b in objs}
    checked, bad = 0, []
    for a, b, c, d in itertools.product(objs, repeat=4):
        for h1 in gens[(a, b)]:
            for h2 in gens[(b, c)]:
                h21 = h2 @ h1
                for h3 in gens[(c, d)]:
                    checked += 1
                    if not (h3 @ h21).is_zero():
                        bad.append((a, b, c, d))
    return NilpotencyReport(bound, f, g, not gf.is_zero(), in_rad_omega(f) and in_rad_omega(g), checked, bad)

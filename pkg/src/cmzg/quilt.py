"""Ringel's quilt for R: the two AR-components with their boundary points.

Layout.  The component of the ideals is drawn as a triangle of copies
``(t, n)`` of ``I_n`` with ``t, n >= 0`` and ``t + n < B``, so a bound ``B``
gives ``B * (B + 1) / 2`` grid nodes.  Arrows are ``mult_y: (t, n) -> (t, n+1)``
and ``incl: (t, n+1) -> (t+1, n)``.  Copies of R (n = 0) form the left side.
Each upward ray ``(t, 0) -> (t, 1) -> ...`` ends in a copy of R~.  The second
component is the line of copies of I_inf joined by ``y``; its limit is G.
Q sits at the vertex next to G.  The side of R-copies and the side of
R~-copies are identified in reverse order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .cm import INF, I, Indec, MorphCM, canonical, incl, inf_incl, loop_y, mult_y, x_to_inf
from .kernel import DEFAULT_PREC, QQ, Field, SeriesMatrix


class NotInSpan(ValueError):
    pass


@dataclass(frozen=True)
class QNode:
    kind: str          # "I", "Iinf", "Rt", "Q", "G", "zero"
    t: int = 0
    n: int | None = None

    @property
    def ident(self) -> str:
        if self.kind == "I":
            return f"I{self.n}_{self.t}"
        if self.kind in ("Iinf", "Rt"):
            return f"{self.kind}_{self.t}"
        return self.kind

    @property
    def module(self) -> Indec | None:
        if self.kind == "I":
            return I(self.n)
        if self.kind == "Iinf":
            return INF
        return None

    def label(self) -> str:
        return {"I": str(I(self.n)) if self.n is not None else "", "Iinf": "Iinf", "Rt": "R~",
                "Q": "Q", "G": "G", "zero": "0"}[self.kind]


@dataclass(frozen=True)
class QEdge:
    ident: str
    src: QNode
    dst: QNode
    kind: str          # mult_y, incl, loop_y, rt_y, rt_x, q_x, ray_limit, zero
    irreducible: bool = True
    catalog: tuple | None = None   # key into the cm irreducible catalog


@dataclass
class QuiltGraph:
    bound: int
    nodes: list
    edges: list
    meshes: list                # (node, walk_a, walk_b): pairs of edge-id tuples
    identification: dict        # side node ident -> (partner ident, port)
    orientation: str = "reversed"
    metadata: dict = dc_field(default_factory=dict)

    def node(self, ident):
        for v in self.nodes:
            if v.ident == ident:
                return v
        raise KeyError(ident)

    def edge(self, ident) -> QEdge:
        return self._edges[ident]

    def __post_init__(self):
        self._edges = {e.ident: e for e in self.edges}

    def grid_count(self) -> int:
        return sum(1 for v in self.nodes if v.kind == "I")

    def to_json(self):
        return {"bound": self.bound, "orientation": self.orientation, "metadata": self.metadata,
                "nodes": [{"id": v.ident, "label": v.label()} for v in self.nodes],
                "edges": [{"id": e.ident, "src": e.src.ident, "dst": e.dst.ident, "kind": e.kind,
                           "irreducible": e.irreducible} for e in self.edges],
                "meshes": [{"node": v.ident, "walks": [list(a), list(b)]} for v, a, b in self.meshes],
                "identification": {k: list(v) for k, v in self.identification.items()}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def grid_size(bound: int) -> int:
    return bound * (bound + 1) // 2


def build_quilt(bound: int) -> QuiltGraph:
    if bound < 2:
        raise ValueError("the quilt needs bound >= 2")
    B = bound
    grid = {(t, n): QNode("I", t, n) for t in range(B) for n in range(B) if t + n < B}
    nodes = [grid[k] for k in sorted(grid)]
    edges = []
    for (t, n), v in sorted(grid.items()):
        if (t, n + 1) in grid:
            edges.append(QEdge(f"y_{t}_{n}", v, grid[(t, n + 1)], "mult_y", True, ("mult_y", n)))
        if n >= 1 and (t + 1, n - 1) in grid:
            edges.append(QEdge(f"i_{t}_{n - 1}", v, grid[(t + 1, n - 1)], "incl", True, ("incl", n - 1)))
    rts = [QNode("Rt", t) for t in range(B)]
    infs = [QNode("Iinf", k) for k in range(B)]
    q, g, zero = QNode("Q"), QNode("G"), QNode("zero")
    nodes += rts + infs + [q, g, zero]
    for t in range(B):
        top = max(n for (s, n) in grid if s == t)
        edges.append(QEdge(f"lim_{t}", grid[(t, top)], rts[t], "ray_limit", False))
    for t in range(B - 1):
        edges.append(QEdge(f"rty_{t}", rts[t], rts[t + 1], "rt_y", True))
    for k in range(B - 1):
        edges.append(QEdge(f"loop_{k}", infs[k], infs[k + 1], "loop_y", True, ("loop_y",)))
    edges.append(QEdge("lim_inf", infs[-1], g, "ray_limit", False))
    # R~ enters the second component at the copy with index 0; the choice is arbitrary but fixed
    edges.append(QEdge("rtx", rts[0], infs[0], "rt_x", True))
    edges.append(QEdge("qx", q, g, "q_x", True))
    edges.append(QEdge("g0", g, zero, "zero", False))
    edges.append(QEdge("zinf", zero, infs[0], "zero", False))
    meshes = []
    for (t, n), v in sorted(grid.items()):
        if n >= 1 and (t, n + 1) in grid and (t + 1, n) in grid and (t, n - 1) in grid:
            # v -> I_{n+1} -> next copy of I_n, and v -> I_{n-1} -> next copy of I_n
            up = (f"y_{t}_{n}", f"i_{t}_{n}")
            down = (f"i_{t}_{n - 1}", f"y_{t + 1}_{n - 1}")
            meshes.append((v, up, down))
    ident = {}
    for t in range(B):
        port = f"p{t}"
        a, b = grid[(t, 0)].ident, rts[B - 1 - t].ident
        ident[a] = (b, port)
        ident[b] = (a, port)
    meta = {"grid_nodes": grid_size(B), "grid_formula": "B*(B+1)/2",
            "rtilde_entry": "Rt_0 -> Iinf_0", "orientation_note": "glide reflection"}
    return QuiltGraph(B, nodes, edges, meshes, ident, "reversed", meta)


def traverse_identification(g: QuiltGraph, ident: str, times: int = 1):
    """Follow the side gluing; returns the node reached and the orientation sign."""
    cur, sign = ident, 1
    for _ in range(times):
        cur = g.identification[cur][0]
        sign = -sign if g.orientation == "reversed" else sign
    return cur, sign


# -- walks ------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    """Steps in the order they are applied, with a coefficient."""

    steps: tuple
    source: Indec
    coeff: object = None

    @property
    def crossing(self) -> bool:
        return any(s[0] in ("cross_out", "cross_in") for s in self.steps)

    def evaluate(self, prec: int = DEFAULT_PREC, field: Field = QQ) -> MorphCM:
        f = canonical(self.source, prec, field).identity()
        for s in self.steps:
            f = _step_map(s, prec, field) @ f
        return f.scale(self.coeff) if self.coeff is not None else f

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        body = "[" + "; ".join(_step_label(s) for s in self.steps) + "]"
        if self.coeff is not None:
            body = f"({self.coeff}) * {body}"
        return body + (" (component-crossing)" if self.crossing else "")


def _step_map(s, prec, field) -> MorphCM:
    kind = s[0]
    if kind == "mult_y":
        return mult_y(s[1], prec, field)
    if kind == "incl":
        return incl(s[1], prec, field)
    if kind == "loop_y":
        return loop_y(prec, field)
    if kind == "cross_out":
        return x_to_inf(s[1], prec, field)
    return inf_incl(s[1], prec, field)


def _step_label(s):
    return {"mult_y": lambda: f"mult_y({s[1]})", "incl": lambda: f"incl({s[1]})",
            "loop_y": lambda: "y:Iinf→Iinf", "cross_out": lambda: f"x:{I(s[1])}→Iinf",
            "cross_in": lambda: f"incl:Iinf→{I(s[1])}"}[s[0]]()


def _moves(d: Indec, bound: int, crossed: bool):
    if d.is_infinite:
        yield ("loop_y",), INF
        if not crossed:
            return
        for n in range(bound + 1):
            yield ("cross_in", n), I(n)
        return
    n = d.n
    if n < bound:
        yield ("mult_y", n), I(n + 1)
    if n >= 1:
        yield ("incl", n - 1), I(n - 1)
    if not crossed:
        yield ("cross_out", n), INF


def _dist(a: Indec, b: Indec) -> int:
    if a.is_infinite or b.is_infinite:
        return 0 if a == b else 1
    return abs(a.n - b.n)


def walks_between(X: Indec, Y: Indec, length: int, bound: int):
    """All walks of exactly ``length`` steps in the window, crossing into I_inf at most once."""
    out = []

    def go(d, steps, crossed, left):
        if left == 0:
            if d == Y:
                out.append(Walk(tuple(steps), X))
            return
        for s, nxt in _moves(d, bound, crossed):
            was_out = s[0] == "cross_out"
            if s[0] == "cross_in" and not crossed:
                continue
            if not (nxt.is_infinite or Y.is_infinite) and _dist(nxt, Y) > left - 1:
                continue
            go(nxt, steps + [s], crossed or was_out, left - 1)

    go(X, [], X.is_infinite, length)
    return out


@dataclass
class FactorResult:
    target: MorphCM
    length: int
    walks: list           # walks that equal a unit multiple of the map
    decomposition: list   # coefficient-weighted walks summing to the map

    def to_json(self):
        return {"length": self.length, "walks": [str(w) for w in self.walks],
                "decomposition": [str(w) for w in self.decomposition]}


def _coeff_vector(A: SeriesMatrix, degree: int):
    out = []
    for row in A.rows:
        for e in row:
            t = dict(e.terms())
            out += [t.get(k, 0) for k in range(degree)]
    return out


def _f_solve(columns, target, fld):
    """Coefficients ``c`` in F with ``sum c_i columns_i == target``, or ``None``."""
    m, n = len(target), len(columns)
    a = [[fld(columns[j][i]) for j in range(n)] + [fld(target[i])] for i in range(m)]
    pivots, r = [], 0
    for j in range(n):
        k = next((i for i in range(r, m) if a[i][j]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = fld.one / a[r][j]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][j]:
                c = a[i][j]
                a[i] = [x - c * z for x, z in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    if any(a[i][n] for i in range(r, m)):
        return None
    sol = [fld.zero] * n
    for i, j in enumerate(pivots):
        sol[j] = a[i][n]
    return sol


def _endpoint(M) -> Indec:
    return M.label[0]


def factor_walks(f: MorphCM, max_len: int = 8, bound: int | None = None) -> FactorResult:
    """Shortest walks whose F-span contains ``f``, plus one explicit decomposition.

    Coefficients are scalars in F, so powers of y have to come from the walks.
    """
    X, Y = _endpoint(f.source), _endpoint(f.target)
    if f.is_zero():
        return FactorResult(f, 0, [], [])
    if not f.A.is_exact():
        raise NotInSpan("only polynomial maps can be written as finite sums of walks")
    fins = [d.n for d in (X, Y) if not d.is_infinite]
    bound = bound if bound is not None else (max(fins) if fins else 0) + max_len
    prec, fld = f.A.prec, f.A.field
    pool = []
    for L in range(max_len + 1):
        new = [(w, w.evaluate(prec, fld)) for w in walks_between(X, Y, L, bound)]
        pool += [(w, m) for w, m in new if not m.is_zero()]
        if not pool:
            continue
        deg = max(max((k for k, _ in e.terms()), default=0) for A in [f.A] + [m.A for _, m in pool]
                  for row in A.rows for e in row) + 1
        cols = [_coeff_vector(m.A, deg) for _, m in pool]
        target = _coeff_vector(f.A, deg)
        sol = _f_solve(cols, target, fld)
        if sol is None:
            continue
        deco = [Walk(w.steps, w.source, c) for (w, _), c in zip(pool, sol) if c]
        exact = [w for (w, m), v in zip(pool, cols) if len(w) == L and _f_solve([v], target, fld)]
        return FactorResult(f, L, exact, deco)
    raise NotInSpan(f"no combination of walks of length <= {max_len} gives the map")


def mesh_holds(g: QuiltGraph, prec: int = DEFAULT_PREC, field: Field = QQ) -> list:
    """Evaluate both length-2 walks around every mesh; returns the failing nodes."""
    bad = []
    for v, a, b in g.meshes:
        ma = [_step_map(g.edge(e).catalog, prec, field) for e in a]
        mb = [_step_map(g.edge(e).catalog, prec, field) for e in b]
        if not (ma[1] @ ma[0]) == (mb[1] @ mb[0]):
            bad.append(v.ident)
    return bad


# -- DOT --------------------------------------------------------------------------------------

_STYLE = {"mult_y": "", "incl": "", "loop_y": "", "rt_y": ' style=bold', "rt_x": ' style=bold color=blue',
          "q_x": ' style=bold color=blue', "ray_limit": ' style=dashed', "zero": ' style=dotted'}


def export_dot(g: QuiltGraph, overlay_pattern: bool = False) -> str:
    lines = ["digraph quilt {", "  rankdir=LR;", f'  label="quilt bound {g.bound} orientation {g.orientation}";']
    for v in g.nodes:
        extra = ""
        if v.ident in g.identification:
            extra = f' xlabel="{g.identification[v.ident][1]}"'
        shape = "circle" if v.kind == "I" else "box"
        lines.append(f'  {v.ident} [label="{v.label()}" shape={shape}{extra}];')
    for e in g.edges:
        lbl = {"mult_y": "y", "incl": "i", "loop_y": "y", "rt_y": "y", "rt_x": "x", "q_x": "x"}.get(e.kind, "")
        lab = f' label="{lbl}"' if lbl else ""
        flag = "" if e.irreducible else ' comment="not irreducible"'
        lines.append(f"  {e.src.ident} -> {e.dst.ident} [{(lab + _STYLE[e.kind] + flag).strip()}];")
    done = set()
    for a, (b, port) in sorted(g.identification.items()):
        if (b, a) in done:
            continue
        done.add((a, b))
        lines.append(f'  {a} -> {b} [dir=none style=invis comment="glue {port} reversed"];')
    if overlay_pattern:
        from .formulas.pattern import pattern_poset
        nodes, covers = pattern_poset(g.bound)
        ids = {u: f"pat{k}" for k, u in enumerate(sorted(nodes))}
        lines.append("  subgraph cluster_pattern {")
        lines.append('    label="pattern";')
        for u in sorted(nodes):
            lines.append(f'    {ids[u]} [label="{u}"];')
        for u, v in sorted(covers):
            lines.append(f"    {ids[u]} -> {ids[v]};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"

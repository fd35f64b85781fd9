"""Matrices over F[[y]], Smith normal form with certificates, and linear solving."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .field import QQ, Field
from .series import (DEFAULT_PREC, InsufficientPrecision, LaurentTrunc, TruncSeries,
                     as_laurent, as_trunc, const)


def _series(v, prec, fld):
    if isinstance(v, LaurentTrunc):
        return v
    if isinstance(v, (list, tuple)):
        # coefficient list of an exact polynomial
        return TruncSeries(v, prec, fld, exact=True)
    return const(v, prec, fld)


class SeriesMatrix:
    """A dense matrix of series, stored row-major."""

    __slots__ = ("rows", "ncols", "field")

    def __init__(self, rows, prec: int = DEFAULT_PREC, field: Field = QQ, ncols: int | None = None):
        self.rows = [[_series(v, prec, field) for v in r] for r in rows]
        self.ncols = ncols if ncols is not None else (len(self.rows[0]) if self.rows else 0)
        self.field = field
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def _of(cls, rows, ncols, field):
        m = object.__new__(cls)
        m.rows = rows
        m.ncols = ncols
        m.field = field
        return m

    @classmethod
    def identity(cls, n: int, prec: int = DEFAULT_PREC, field: Field = QQ):
        z = TruncSeries.zero(prec, field)
        o = TruncSeries.one(prec, field)
        return cls._of([[o if i == j else z for j in range(n)] for i in range(n)], n, field)

    @classmethod
    def zeros(cls, m: int, n: int, prec: int = DEFAULT_PREC, field: Field = QQ):
        z = TruncSeries.zero(prec, field)
        return cls._of([[z] * n for _ in range(m)], n, field)

    @classmethod
    def blockdiag(cls, blocks, prec: int = DEFAULT_PREC, field: Field = QQ):
        m = sum(b.nrows for b in blocks)
        n = sum(b.ncols for b in blocks)
        out = cls.zeros(m, n, prec, field)
        r = c = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    out.rows[r + i][c + j] = b.rows[i][j]
            r += b.nrows
            c += b.ncols
        return out

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def prec(self) -> int:
        ps = [e.prec for r in self.rows for e in r]
        return min(ps) if ps else DEFAULT_PREC

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy(self):
        return SeriesMatrix._of([list(r) for r in self.rows], self.ncols, self.field)

    def col(self, j: int):
        return [r[j] for r in self.rows]

    def cols(self, idx):
        idx = list(idx)
        return SeriesMatrix._of([[r[j] for j in idx] for r in self.rows], len(idx), self.field)

    def submatrix(self, ri, ci):
        ri, ci = list(ri), list(ci)
        return SeriesMatrix._of([[self.rows[i][j] for j in ci] for i in ri], len(ci), self.field)

    @classmethod
    def from_columns(cls, columns, field: Field = QQ):
        columns = list(columns)
        if not columns:
            raise ValueError("need at least one column")
        m = len(columns[0])
        return cls._of([[c[i] for c in columns] for i in range(m)], len(columns), field)

    def transpose(self):
        return SeriesMatrix._of([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                                self.nrows, self.field)

    def __matmul__(self, other):
        if isinstance(other, SeriesMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = []
            for r in self.rows:
                row = []
                for j in range(other.ncols):
                    acc = None
                    for k, a in enumerate(r):
                        if a.is_exact_zero():
                            continue
                        b = other.rows[k][j]
                        if b.is_exact_zero():
                            continue
                        t = a * b
                        acc = t if acc is None else acc + t
                    if acc is None:
                        acc = TruncSeries.zero(min(self.prec, other.prec), self.field)
                    row.append(acc)
                out.append(row)
            return SeriesMatrix._of(out, other.ncols, self.field)
        # column vector given as a list
        return [sum_series([a * b for a, b in zip(r, other) if not (a.is_exact_zero() or b.is_exact_zero())],
                           self.prec, self.field) for r in self.rows]

    def __add__(self, other):
        return SeriesMatrix._of([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                                self.ncols, self.field)

    def __sub__(self, other):
        return SeriesMatrix._of([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                                self.ncols, self.field)

    def __neg__(self):
        return SeriesMatrix._of([[-a for a in r] for r in self.rows], self.ncols, self.field)

    def scale(self, s):
        return SeriesMatrix._of([[s * a for a in r] for r in self.rows], self.ncols, self.field)

    def __eq__(self, other):
        """Entrywise agreement below each entry's certified precision."""
        return (isinstance(other, SeriesMatrix) and self.shape == other.shape
                and all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_exact(self) -> bool:
        return all(e.exact for r in self.rows for e in r)

    def det(self):
        """Determinant by elimination over the Laurent field (precision degrades with pivots)."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [[as_laurent(e) for e in r] for r in self.rows]
        d = LaurentTrunc.one(self.prec, self.field)
        for t in range(n):
            best = None
            for i in range(t, n):
                e = a[i][t]
                if e.c and (best is None or e.lo < a[best][t].lo):
                    best = i
            if best is None:
                return LaurentTrunc.zero(self.prec, self.field, exact=all(a[i][t].exact for i in range(t, n)))
            if best != t:
                a[t], a[best] = a[best], a[t]
                d = -d
            p = a[t][t]
            d = d * p
            pinv = p.inverse()
            for i in range(t + 1, n):
                if a[i][t].is_exact_zero():
                    continue
                f = a[i][t] * pinv
                a[i] = [a[i][j] - f * a[t][j] for j in range(n)]
        return d

    def to_json(self):
        return [[e.to_json() for e in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, prec: int = DEFAULT_PREC, field: Field = QQ):
        """Rows of entries: series dicts, constants (ints or "a/b" strings) or exact coefficient lists."""
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ValueError("a matrix is a list of rows")
        rows = [[TruncSeries.from_json(e, field) if isinstance(e, dict) else e for e in r] for r in data]
        return cls(rows, prec, field)

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def sum_series(terms, prec=DEFAULT_PREC, fld: Field = QQ):
    acc = None
    for t in terms:
        acc = t if acc is None else acc + t
    return acc if acc is not None else TruncSeries.zero(prec, fld)


# -- Smith normal form -----------------------------------------------------------

@dataclass
class SNF:
    """``U @ A @ V == D`` with ``D`` carrying monomials ``y^d`` on its diagonal.

    ``raw_U, raw_D, raw_V`` is the fraction-free certificate before the diagonal
    units are scaled away; it stays exact whenever the input is exact.
    """

    U: SeriesMatrix
    D: SeriesMatrix
    V: SeriesMatrix
    rank: int
    exponents: list
    raw_U: SeriesMatrix
    raw_D: SeriesMatrix
    raw_V: SeriesMatrix
    units: list = dc_field(default_factory=list)

    @property
    def invariants(self):
        m = min(self.D.shape)
        return list(self.exponents) + [math.inf] * (m - self.rank)


def smith_normal_form(A: SeriesMatrix) -> SNF:
    m, n = A.shape
    fld = A.field
    prec = A.prec
    a = [list(r) for r in A.rows]
    U = [list(r) for r in SeriesMatrix.identity(m, prec, fld).rows]
    V = [list(r) for r in SeriesMatrix.identity(n, prec, fld).rows]
    exps, units = [], []
    rank = 0
    for t in range(min(m, n)):
        best = None
        bv = math.inf
        ambiguous = math.inf
        for i in range(t, m):
            for j in range(t, n):
                e = a[i][j]
                if e.c:
                    # lowest valuation first, then the shortest unit part to limit growth
                    key = (e.lo, not e.exact, len(e.c))
                    if best is None or key < bkey:
                        best, bv, bkey = (i, j), e.lo, key
                elif not e.exact:
                    ambiguous = min(ambiguous, e.prec)
        if best is None:
            if ambiguous < math.inf:
                raise InsufficientPrecision(
                    f"residual block is zero only modulo y^{ambiguous}; rank undecidable at this precision")
            break
        if ambiguous <= bv:
            raise InsufficientPrecision(
                f"an entry known only modulo y^{ambiguous} could undercut the pivot valuation {bv}")
        i0, j0 = best
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for r in a:
                r[t], r[j0] = r[j0], r[t]
            for r in V:
                r[t], r[j0] = r[j0], r[t]
        p = a[t][t]
        u = p.shift(-bv)
        if u.exact and len(u.c) == 1 and u.c[0] != 1:
            # a constant unit: normalise the pivot row exactly instead of scaling the others
            cinv = fld.one / u.c[0]
            a[t] = [cinv * x for x in a[t]]
            U[t] = [cinv * x for x in U[t]]
            u = a[t][t].shift(-bv)
        unit_one = u.exact and len(u.c) == 1 and u.c[0] == 1
        for i in range(t + 1, m):
            b = a[i][t]
            if b.is_exact_zero():
                continue
            q = b.shift(-bv)
            if b.is_zero():
                a[i][t] = b
                continue
            if unit_one:
                a[i] = [x - q * z for x, z in zip(a[i], a[t])]
                U[i] = [x - q * z for x, z in zip(U[i], U[t])]
            else:
                a[i] = [u * x - q * z for x, z in zip(a[i], a[t])]
                U[i] = [u * x - q * z for x, z in zip(U[i], U[t])]
        for j in range(t + 1, n):
            b = a[t][j]
            if b.is_exact_zero() or b.is_zero():
                continue
            q = b.shift(-bv)
            for r in a:
                r[j] = r[j] - q * r[t] if unit_one else u * r[j] - q * r[t]
            for r in V:
                r[j] = r[j] - q * r[t] if unit_one else u * r[j] - q * r[t]
        exps.append(bv)
        units.append(u)
        rank += 1
    raw_U = SeriesMatrix._of([list(r) for r in U], m, fld)
    raw_D = SeriesMatrix._of([list(r) for r in a], n, fld)
    raw_V = SeriesMatrix._of([list(r) for r in V], n, fld)
    # scale the pivot rows so the diagonal becomes pure monomials
    Un = [list(r) for r in U]
    Dn = [list(r) for r in a]
    for t, u in enumerate(units):
        if u.exact and len(u.c) == 1 and u.c[0] == 1:
            continue
        ui = u.inverse()
        Un[t] = [ui * x for x in Un[t]]
        Dn[t] = [ui * x for x in Dn[t]]
        Dn[t][t] = TruncSeries.monomial(exps[t], prec, fld)
    return SNF(SeriesMatrix._of(Un, m, fld), SeriesMatrix._of(Dn, n, fld), raw_V, rank, exps,
               raw_U, raw_D, raw_V, units)


def _divide(c, d, u):
    q = c.shift(-d)
    if not (u.exact and len(u.c) == 1 and u.c[0] == 1):
        q = q * u.inverse()
    return as_trunc(q) if (not q.c or q.lo >= 0) else q


# -- linear systems --------------------------------------------------------------

@dataclass
class NoSolution:
    """Inconsistency witness: ``row @ A`` is divisible by ``y^exponent`` but ``row @ beta`` is not."""

    row: list
    index: int
    value: LaurentTrunc
    exponent: float

    def __bool__(self):
        return False


@dataclass
class SolutionFamily:
    particular: list
    homogeneous: list
    modulus: int

    def __bool__(self):
        return True

    def dimension(self) -> int:
        return len(self.homogeneous)


def solve_linear(A: SeriesMatrix, beta, snf: SNF | None = None, allow_truncated: bool = False):
    """Solve ``A xi = beta`` over F[[y]].

    Returns a ``SolutionFamily`` (particular solution, generators of the
    homogeneous solutions, and the exponent modulo which coordinates are
    determined) or a ``NoSolution`` certificate.  With ``allow_truncated`` a
    residual that vanishes only to working precision is accepted as zero.
    """
    m, n = A.shape
    if len(beta) != m:
        raise ValueError("right-hand side has the wrong length")
    fld = A.field
    prec = min([A.prec] + [b.prec for b in beta])
    if snf is None:
        snf = smith_normal_form(A)
    r = snf.rank
    c = snf.raw_U @ list(beta)
    eta = []
    for t in range(n):
        if t >= r:
            eta.append(TruncSeries.zero(prec, fld))
            continue
        d = snf.exponents[t]
        ct = c[t]
        if ct.c:
            if ct.lo < d:
                return NoSolution(snf.raw_U.rows[t], t, ct, d)
        elif not ct.exact and ct.prec <= d and not allow_truncated:
            raise InsufficientPrecision(f"cannot decide divisibility by y^{d} at precision {ct.prec}")
        eta.append(_divide(ct, d, snf.units[t]))
    for t in range(r, m):
        ct = c[t]
        if ct.c:
            return NoSolution(snf.raw_U.rows[t], t, ct, math.inf)
        if not ct.exact and not allow_truncated:
            raise InsufficientPrecision("consistency row vanishes only to working precision")
    xi = snf.raw_V @ eta
    homog = [snf.raw_V.col(j) for j in range(r, n)]
    slack = max(snf.exponents) if snf.exponents else 0
    return SolutionFamily(xi, homog, prec - slack)


def hstack(*ms):
    return SeriesMatrix._of([sum((m.rows[i] for m in ms), []) for i in range(ms[0].nrows)],
                            sum(m.ncols for m in ms), ms[0].field)


def vstack(*ms):
    return SeriesMatrix._of([list(r) for m in ms for r in m.rows], ms[0].ncols, ms[0].field)


def constant_terms(A: SeriesMatrix):
    """Reduction modulo y: the matrix of constant coefficients over F."""
    return [[e.coefficient(0) if e.eff > 0 else A.field.zero for e in r] for r in A.rows]


def f_row_echelon(rows, fld: Field):
    """Gaussian elimination over F; returns (pivot columns, pivot rows used)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    piv_cols, piv_rows = [], []
    order = list(range(m))
    r = 0
    for j in range(n):
        k = next((i for i in range(r, m) if a[i][j]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        order[r], order[k] = order[k], order[r]
        inv = fld.one / a[r][j]
        for i in range(r + 1, m):
            if a[i][j]:
                f = a[i][j] * inv
                a[i] = [x - f * z for x, z in zip(a[i], a[r])]
        piv_cols.append(j)
        piv_rows.append(order[r])
        r += 1
    return piv_cols, piv_rows


def is_unimodular(A: SeriesMatrix) -> bool:
    """Square with unit determinant, decided on constant terms."""
    if A.nrows != A.ncols:
        return False
    cols, _ = f_row_echelon(constant_terms(A), A.field)
    return len(cols) == A.nrows


def inverse(A: SeriesMatrix) -> SeriesMatrix:
    """Inverse of a unimodular matrix by Gauss-Jordan with unit pivots."""
    n = A.nrows
    if n != A.ncols:
        raise ValueError("inverse of a non-square matrix")
    prec = A.prec
    a = [list(r) + [TruncSeries.one(prec, A.field) if i == j else TruncSeries.zero(prec, A.field)
                    for j in range(n)] for i, r in enumerate(A.rows)]
    for t in range(n):
        k = next((i for i in range(t, n) if a[i][t].is_unit()), None)
        if k is None:
            raise ZeroDivisionError("matrix is not invertible over F[[y]]")
        a[t], a[k] = a[k], a[t]
        p = a[t][t]
        if not (p.exact and len(p.c) == 1 and p.c[0] == 1):
            pi = p.inverse()
            a[t] = [pi * x for x in a[t]]
        for i in range(n):
            if i != t and not a[i][t].is_exact_zero():
                f = a[i][t]
                a[i] = [x - f * z for x, z in zip(a[i], a[t])]
    return SeriesMatrix._of([r[n:] for r in a], n, A.field)

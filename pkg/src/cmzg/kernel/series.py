"""Truncated power series and Laurent series in ``y``, and elements of R and Q.

A series stores its nonzero window of coefficients together with an absolute
precision ``prec``: every coefficient of ``y^k`` with ``k < prec`` is known.
An *exact* series is a Laurent polynomial known completely; exactness is kept
through ring operations so that genuine zeros can be told apart from values
that merely vanish below the working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .field import QQ, Field

DEFAULT_PREC = 24

# exact Laurent polynomials above this many terms are demoted to truncated ones
MAX_EXACT_TERMS = 4096


class ZeroDivisor(ArithmeticError):
    """Raised when inverting something that is (or may be) a zero divisor."""


class InsufficientPrecision(ArithmeticError):
    """Raised when the working precision is too low to decide a question."""


class LaurentTrunc:
    __slots__ = ("field", "lo", "c", "prec", "exact")

    def __init__(self, val_offset: int, coeffs, prec: int = DEFAULT_PREC,
                 field: Field = QQ, exact: bool = False):
        c = [field(x) for x in coeffs]
        lo = val_offset
        if not exact:
            keep = max(0, prec - lo)
            c = c[:keep]
        i = 0
        while i < len(c) and not c[i]:
            i += 1
        c = c[i:]
        lo += i
        while c and not c[-1]:
            c.pop()
        if not c:
            lo = 0
        if exact and len(c) > MAX_EXACT_TERMS:
            exact = False
            c = c[:max(0, prec - lo)]
        self.field = field
        self.lo = lo
        self.c = tuple(c)
        self.prec = prec
        self.exact = exact

    # -- construction helpers ------------------------------------------------
    @classmethod
    def _raw(cls, field, lo, c, prec, exact):
        obj = object.__new__(cls)
        # c is a list that may carry zeros at either end
        i = 0
        n = len(c)
        if not exact:
            n = min(n, max(0, prec - lo))
        while i < n and not c[i]:
            i += 1
        while n > i and not c[n - 1]:
            n -= 1
        c = c[i:n]
        lo = lo + i if c else 0
        if exact and len(c) > MAX_EXACT_TERMS:
            exact = False
            c = c[:max(0, prec - lo)]
        obj.field = field
        obj.lo = lo
        obj.c = tuple(c)
        obj.prec = prec
        obj.exact = exact
        return obj

    @classmethod
    def monomial(cls, k: int, prec: int = DEFAULT_PREC, field: Field = QQ, coeff=1):
        return cls._raw(field, k, [field(coeff)], prec, True)

    @classmethod
    def zero(cls, prec: int = DEFAULT_PREC, field: Field = QQ, exact: bool = True):
        return cls._raw(field, 0, [], prec, exact)

    @classmethod
    def one(cls, prec: int = DEFAULT_PREC, field: Field = QQ):
        return cls.monomial(0, prec, field)

    def _like(self, lo, c, prec, exact, *others):
        cls = LaurentTrunc
        if isinstance(self, TruncSeries) and all(isinstance(o, TruncSeries) for o in others):
            cls = TruncSeries
        out = cls._raw(self.field, lo, c, prec, exact)
        if cls is TruncSeries and out.c and out.lo < 0:
            out = LaurentTrunc._raw(self.field, out.lo, list(out.c), out.prec, out.exact)
        return out

    # -- basic queries -------------------------------------------------------
    @property
    def val_offset(self) -> int:
        return self.lo

    @property
    def eff(self):
        """Absolute precision, infinite for an exact series."""
        return math.inf if self.exact else self.prec

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known (exact zero or zero to precision)."""
        return not self.c

    def is_exact_zero(self) -> bool:
        return not self.c and self.exact

    def valuation(self):
        """Least exponent with a nonzero coefficient; +inf when none is known."""
        return self.lo if self.c else math.inf

    def val_lower(self):
        """A certified lower bound on the valuation."""
        if self.c:
            return self.lo
        return math.inf if self.exact else self.prec

    def is_unit(self) -> bool:
        return bool(self.c) and self.lo == 0

    def coefficient(self, k: int):
        if k >= self.eff:
            raise InsufficientPrecision(f"coefficient of y^{k} beyond precision {self.prec}")
        i = k - self.lo
        if self.c and 0 <= i < len(self.c):
            return self.c[i]
        return self.field.zero

    def leading(self):
        if not self.c:
            raise ZeroDivisor("zero series has no leading coefficient")
        return self.c[0]

    def degree(self):
        return self.lo + len(self.c) - 1 if self.c else -math.inf

    def with_prec(self, prec: int):
        """Truncate (or, for exact series, demote) to absolute precision ``prec``."""
        return self._like(self.lo, list(self.c), int(min(prec, self.eff)), False)

    def inexact(self):
        return self.with_prec(self.prec) if self.exact else self

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentTrunc):
            if other.field != self.field:
                raise ValueError("series over different fields")
            return other
        if isinstance(other, int) or hasattr(other, "numerator") or hasattr(other, "p"):
            cls = TruncSeries if isinstance(self, TruncSeries) else LaurentTrunc
            return cls._raw(self.field, 0, [self.field(other)], self.prec, True)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._addsub(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other._addsub(self, -1)

    def _addsub(self, other, sign):
        eff = min(self.eff, other.eff)
        exact = eff == math.inf
        prec = min(self.prec, other.prec) if exact else eff
        if not self.c and not other.c:
            return self._like(0, [], prec, exact, other)
        los = [s.lo for s in (self, other) if s.c]
        lo = min(los)
        hi = max(s.lo + len(s.c) for s in (self, other) if s.c)
        if not exact:
            hi = min(hi, prec)
        if hi <= lo:
            return self._like(0, [], prec, exact, other)
        out = [self.field.zero] * (hi - lo)
        for i, x in enumerate(self.c):
            j = self.lo + i - lo
            if j >= len(out):
                break
            out[j] = x
        for i, x in enumerate(other.c):
            j = other.lo + i - lo
            if j >= len(out):
                break
            out[j] = out[j] + x if sign > 0 else out[j] - x
        return self._like(lo, out, prec, exact, other)

    def __neg__(self):
        return self._like(self.lo, [-x for x in self.c], self.prec, self.exact)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        v1, v2 = self.val_lower(), other.val_lower()
        eff = min(self.eff + v2, other.eff + v1)
        exact = eff == math.inf
        prec = min(self.prec, other.prec) if exact else int(eff)
        if not self.c or not other.c:
            return self._like(0, [], prec, exact, other)
        lo = self.lo + other.lo
        n = len(self.c) + len(other.c) - 1
        if not exact:
            n = min(n, prec - lo)
        if n <= 0:
            return self._like(0, [], prec, exact, other)
        zero = self.field.zero
        out = [zero] * n
        a, b = self.c, other.c
        lb = len(b)
        for i, x in enumerate(a):
            if i >= n:
                break
            if not x:
                continue
            top = min(lb, n - i)
            for j in range(top):
                y = b[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return self._like(lo, out, prec, exact, other)

    __rmul__ = __mul__

    def shift(self, k: int):
        """Multiply by ``y^k`` (``k`` may be negative)."""
        return self._like(self.lo + k, list(self.c), self.prec + k, self.exact)

    def inverse(self):
        """Multiplicative inverse; the absolute precision becomes ``prec - 2*valuation``."""
        if not self.c:
            raise ZeroDivisor("series is zero to working precision")
        v = self.lo
        cls = TruncSeries if (isinstance(self, TruncSeries) and v == 0) else LaurentTrunc
        if len(self.c) == 1 and self.exact:
            return cls._raw(self.field, -v, [self.field.one / self.c[0]], self.prec - 2 * v, True)
        rel = self.prec - v
        u = self.c
        inv0 = self.field.one / u[0]
        out = [inv0]
        for k in range(1, max(rel, 0)):
            s = self.field.zero
            for j in range(1, min(k, len(u) - 1) + 1):
                s = s + u[j] * out[k - j]
            out.append(-s * inv0)
        out = out[:max(rel, 0)]
        return cls._raw(self.field, -v, out, rel - v, False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self._like(0, [self.field.one], self.prec, True)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def unit_part(self):
        """The unit ``u`` with ``self = y^v * u``."""
        if not self.c:
            raise ZeroDivisor("zero has no unit part")
        return self.shift(-self.lo)

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        """Agreement of all coefficients below the shared precision."""
        if not isinstance(other, LaurentTrunc):
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        d = self - other
        return not d.c

    __hash__ = None

    def identical(self, other) -> bool:
        return (type(self) is type(other) and self.field == other.field and self.lo == other.lo
                and self.c == other.c and self.prec == other.prec and self.exact == other.exact)

    # -- display and serialization -------------------------------------------
    def terms(self):
        return [(self.lo + i, x) for i, x in enumerate(self.c) if x]

    def __str__(self):
        parts = []
        for k, x in self.terms():
            cs = self.field.fmt(x)
            if k == 0:
                mono = cs
            else:
                yk = "y" if k == 1 else f"y^{k}"
                mono = yk if cs == "1" else ("-" + yk if cs == "-1" else f"{cs}*{yk}")
            parts.append(mono)
        s = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if not self.exact:
            s += f" + O(y^{self.prec})"
        return s

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def to_json(self) -> dict:
        d = {"val_offset": self.lo, "coeffs": [self.field.fmt(x) for x in self.c], "prec": self.prec}
        if self.exact:
            d["exact"] = True
        return d

    @classmethod
    def from_json(cls, d: dict, field: Field = QQ):
        return LaurentTrunc(d.get("val_offset", 0), d["coeffs"], d["prec"], field, d.get("exact", False))


class TruncSeries(LaurentTrunc):
    """A power series in ``y`` known modulo ``y^prec`` (or exactly)."""

    __slots__ = ()

    def __init__(self, coeffs=(), prec: int = DEFAULT_PREC, field: Field = QQ, exact: bool = False):
        super().__init__(0, coeffs, prec, field, exact)

    @property
    def coeffs(self):
        """Coefficients indexed by exponent, padded to the working precision."""
        n = max(self.prec, self.lo + len(self.c)) if self.exact else self.prec
        out = [self.field.zero] * n
        for k, x in enumerate(self.c):
            out[self.lo + k] = x
        return out

    def to_json(self) -> dict:
        if self.exact and not self.c:
            return {"coeffs": [], "prec": self.prec, "exact": True}
        cs = self.coeffs
        if self.exact:
            cs = cs[:self.lo + len(self.c)]
        d = {"coeffs": [self.field.fmt(x) for x in cs], "prec": self.prec}
        if self.exact:
            d["exact"] = True
        return d

    @classmethod
    def from_json(cls, d: dict, field: Field = QQ):
        return TruncSeries(d["coeffs"], d["prec"], field, d.get("exact", False))


def as_trunc(s: LaurentTrunc) -> TruncSeries:
    """View a Laurent series without negative exponents as a power series."""
    if s.c and s.lo < 0:
        raise ValueError("series has negative exponents")
    return TruncSeries._raw(s.field, s.lo, list(s.c), s.prec, s.exact)


def as_laurent(s: LaurentTrunc) -> LaurentTrunc:
    return LaurentTrunc._raw(s.field, s.lo, list(s.c), s.prec, s.exact)


def ypow(k: int, prec: int = DEFAULT_PREC, field: Field = QQ) -> LaurentTrunc:
    if k >= 0:
        return TruncSeries.monomial(k, prec, field)
    return LaurentTrunc.monomial(k, prec, field)


def const(c, prec: int = DEFAULT_PREC, field: Field = QQ) -> TruncSeries:
    return TruncSeries.monomial(0, prec, field, c)


# -- elements of R = F[[x,y]]/(x^2) and of Q = R[1/y] ---------------------------

@dataclass(frozen=True, eq=False)
class RingElem:
    """``a + x*b`` with ``a, b`` power series in ``y``."""

    a: TruncSeries
    b: TruncSeries

    @classmethod
    def of(cls, a=0, b=0, prec: int = DEFAULT_PREC, field: Field = QQ):
        def conv(t):
            return t if isinstance(t, LaurentTrunc) else const(t, prec, field)
        return cls(conv(a), conv(b))

    def __add__(self, o):
        return type(self)(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return type(self)(self.a - o.a, self.b - o.b)

    def __neg__(self):
        return type(self)(-self.a, -self.b)

    def __mul__(self, o):
        if not isinstance(o, RingElem):
            return type(self)(self.a * o, self.b * o)
        return type(self)(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, RingElem) and self.a == o.a and self.b == o.b

    __hash__ = None

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __str__(self):
        if self.b.is_zero():
            return str(self.a)
        if self.a.is_zero():
            return f"x*({self.b})"
        return f"{self.a} + x*({self.b})"

    def to_json(self):
        return {"a": self.a.to_json(), "b": self.b.to_json()}


def ring_mul(u: RingElem, v: RingElem) -> RingElem:
    return u * v


@dataclass(frozen=True, eq=False)
class QElem(RingElem):
    """``a + x*b`` with Laurent components: an element of the total quotient ring."""

    a: LaurentTrunc
    b: LaurentTrunc

    def in_rtilde(self) -> bool:
        return self.a.val_lower() >= 0

    def in_r(self) -> bool:
        return self.a.val_lower() >= 0 and self.b.val_lower() >= 0


def q_invert(s: QElem) -> QElem:
    """Inverse of a non-zero-divisor: ``(a + x b)^-1 = a^-1 - x b a^-2``."""
    if s.a.is_zero():
        raise ZeroDivisor("the y-part vanishes: the element lies in xQ (or precision is too low)")
    ai = s.a.inverse()
    return QElem(as_laurent(ai), as_laurent(-(s.b * ai * ai)))

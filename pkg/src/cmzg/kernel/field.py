"""Coefficient fields: the rationals and odd prime fields."""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


class FpElem:
    """Residue class modulo an odd prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElem(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(o, self.p) / self

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElem({self.v}, {self.p})"

    def __str__(self):
        # symmetric representative reads better in printed series
        v = self.v if self.v <= self.p // 2 else self.v - self.p
        return str(v)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Either the rationals (``char == 0``) or the prime field F_p."""

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        if char == 2:
            raise FieldError("characteristic 2 is not supported")
        if char != 0 and not _is_prime(char):
            raise FieldError(f"{char} is not a prime")
        self.char = char

    def __call__(self, value):
        """Convert an int, Fraction, string or field element into this field."""
        if isinstance(value, FpElem):
            if self.char != value.p:
                raise FieldError("element of a different field")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.char == 0:
                raise FieldError(f"{value} has no image in F_{self.char}")
            return FpElem(value.numerator * pow(value.denominator, -1, self.char), self.char)
        return FpElem(int(value), self.char)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def elements(self):
        """All elements for a prime field; only meaningful for brute-force oracles."""
        if self.char == 0:
            raise FieldError("the rationals are infinite")
        return [FpElem(i, self.char) for i in range(self.char)]

    def fmt(self, c) -> str:
        if isinstance(c, Fraction):
            return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return str(c)

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def parse_field(name: str) -> Field:
    """Parse ``"Q"``/``"QQ"`` or ``"F5"``/``"GF(5)"``/``"Fp(5)"``-style field names."""
    s = name.strip().upper()
    if s in ("Q", "QQ", "RATIONALS"):
        return QQ
    for prefix in ("FP(", "GF(", "F_", "GF", "F"):
        if s.startswith(prefix):
            body = s[len(prefix):].rstrip(")")
            if body.isdigit():
                return Field(int(body))
    raise FieldError(f"unknown field {name!r}")

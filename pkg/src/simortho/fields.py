"""Exact fields: Q, GF(p) and Q(t).

A :class:`Field` describes the field and does arithmetic on *raw payloads*:
``Fraction`` for Q, ``int`` in ``[0, p)`` for GF(p), :class:`RatFunc` for
Q(t). Matrices and subspaces store raw payloads; :class:`FieldValue` is the
public scalar that carries its field along and refuses cross-field arithmetic.
"""

import re
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch, ParseError
from .ratfunc import RatFunc, parse_ratfunc

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_INT_RE = re.compile(r"^\s*([+-]?\d+)\s*$")


class Field:
    kind = None
    char = 0

    @property
    def params(self):
        return ()

    def __eq__(self, other):
        return (isinstance(other, Field) and self.kind == other.kind
                and self.params == other.params)

    def __hash__(self):
        return hash((self.kind, self.params))

    def __call__(self, value):
        return FieldValue(self, self.coerce(value))

    # raw arithmetic; subclasses override where Python operators differ
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return not a

    def from_int(self, n):
        return self.coerce(n)

    def elements(self, limit):
        """Candidate scalars: the whole field for GF(p), else ``0..limit-1``."""
        return [self.from_int(i) for i in range(limit)]

    def to_dict(self):
        return {"kind": self.kind}


class Rationals(Field):
    kind = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, FieldValue):
            _check_same(self, value.field)
            return value.raw
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"cannot interpret {value!r} as a rational")

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero in Q")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise DivisionByZero("division by zero in Q")
        return a / b

    def parse(self, text):
        m = _RATIONAL_RE.match(text)
        if not m:
            raise ParseError(f"malformed rational {text!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        # 0, 1, -1, 2, -2, ... with smaller magnitudes first
        return (abs(a), a < 0)

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    kind = "GF"
    zero = 0
    one = 1

    def __init__(self, p):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"GF(p) needs a prime modulus, got {p!r}")
        self.p = p
        self.char = p

    @property
    def params(self):
        return (self.p,)

    def coerce(self, value):
        if isinstance(value, FieldValue):
            _check_same(self, value.field)
            return value.raw
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"{value} has no image in GF({self.p})")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        raise TypeError(f"cannot interpret {value!r} in GF({self.p})")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if not a:
            raise DivisionByZero(f"inverse of zero in GF({self.p})")
        return pow(a, -1, self.p)

    def parse(self, text):
        m = _INT_RE.match(text)
        if not m:
            raise ParseError(f"malformed GF({self.p}) residue {text!r}")
        return int(m.group(1)) % self.p

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        return a

    def elements(self, limit=None):
        return list(range(self.p))

    def to_dict(self):
        return {"kind": "GF", "p": self.p}

    def __repr__(self):
        return f"GF({self.p})"


class RationalFunctions(Field):
    kind = "Qt"
    zero = RatFunc()
    one = RatFunc.constant(1)

    def coerce(self, value):
        if isinstance(value, FieldValue):
            _check_same(self, value.field)
            return value.raw
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Fraction)):
            return RatFunc.constant(value)
        raise TypeError(f"cannot interpret {value!r} in Q(t)")

    def inv(self, a):
        return a.inverse()

    def parse(self, text):
        return parse_ratfunc(text)

    def format(self, a):
        return str(a)

    def sort_key(self, a):
        return (len(a.den), len(a.num), tuple(abs(c) for c in reversed(a.num)),
                a.num, a.den)

    def __repr__(self):
        return "QQ(t)"


QQ = Rationals()
QQt = RationalFunctions()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_dict(d):
    kind = d.get("kind")
    if kind == "Q":
        return QQ
    if kind == "Qt":
        return QQt
    if kind == "GF":
        p = d.get("p")
        if not isinstance(p, int):
            raise ParseError("GF field needs an integer 'p'")
        try:
            return GF(p)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    raise ParseError(f"unknown field kind {kind!r}")


def enumerate_elements(field, limit):
    return [FieldValue(field, x) for x in field.elements(limit)]


def _check_same(a, b):
    if a is not b and a != b:
        raise FieldMismatch(f"{a!r} vs {b!r}")


def is_prime(n):
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldValue:
    """An exact scalar tagged with its field."""

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldValue):
            _check_same(self.field, other.field)
            return other.raw
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.add(self.raw, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.sub(self.raw, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.sub(b, self.raw))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.mul(self.raw, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.div(self.raw, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldValue(self.field, self.field.div(b, self.raw))

    def __neg__(self):
        return FieldValue(self.field, self.field.neg(self.raw))

    def __pow__(self, k):
        if k < 0:
            return (1 / self) ** (-k)
        out = FieldValue(self.field, self.field.one)
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        return FieldValue(self.field, self.field.inv(self.raw))

    def is_zero(self):
        return self.field.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldValue):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            try:
                return self.raw == self.field.coerce(other)
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __str__(self):
        return self.field.format(self.raw)

    def __repr__(self):
        return f"{self.field!r}({self.field.format(self.raw)})"


def field_op(a, b, op):
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two values of one field."""
    if not isinstance(a, FieldValue) or not isinstance(b, FieldValue):
        raise TypeError("field_op expects FieldValue operands")
    _check_same(a.field, b.field)
    f = a.field
    fn = {"add": f.add, "sub": f.sub, "mul": f.mul, "div": f.div}[op]
    return FieldValue(f, fn(a.raw, b.raw))

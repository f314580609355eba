"""Rational functions in one variable ``t`` with rational coefficients.

A value is stored as ``num / den`` where both are integer polynomials
(coefficient tuples, lowest degree first) such that

* ``gcd(num, den) == 1`` in Q[t],
* the integer contents of ``num`` and ``den`` are coprime,
* the leading coefficient of ``den`` is positive.

That representation is unique, so equality is tuple equality.
"""

from fractions import Fraction
from math import gcd

from .errors import DivisionByZero, ParseError

ZERO = ()
ONE = (1,)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a):
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def neg(a):
    return tuple(-c for c in a)


def sub(a, b):
    return add(a, neg(b))


def mul(a, b):
    if not a or not b:
        return ZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def scale(a, c):
    if not c:
        return ZERO
    return tuple(x * c for x in a)


def content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def primitive(a):
    """Primitive part with positive leading coefficient."""
    if not a:
        return ZERO
    g = content(a)
    if a[-1] < 0:
        g = -g
    return tuple(c // g for c in a)


def pseudo_rem(a, b):
    """Pseudo-remainder of ``a`` by ``b`` over the integers."""
    a = list(a)
    lb, db = b[-1], deg(b)
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def poly_gcd(a, b):
    """Primitive gcd in Z[t] (equivalently Q[t] up to a unit)."""
    a, b = primitive(a), primitive(b)
    while b:
        a, b = b, primitive(pseudo_rem(a, b))
    return a


def exact_div(a, b):
    """Quotient of ``a`` by ``b`` in Z[t]; ``b`` must divide ``a`` exactly."""
    a = list(a)
    db, lb = deg(b), b[-1]
    q = [0] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        shift = len(a) - 1 - db
        c, r = divmod(a[-1], lb)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        while a and a[-1] == 0:
            a.pop()
    if a:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _canonical(num, den):
    if not den:
        raise DivisionByZero("rational function with zero denominator")
    if not num:
        return ZERO, ONE
    if len(den) > 1:
        g = poly_gcd(num, den)
        if len(g) > 1:
            num, den = exact_div(num, g), exact_div(den, g)
    c = gcd(content(num), content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = tuple(x // c for x in num)
        den = tuple(x // c for x in den)
    return num, den


class RatFunc:
    """Immutable element of Q(t) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=ZERO, den=ONE):
        self.num, self.den = _canonical(_trim(num), _trim(den))
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def constant(cls, value):
        value = Fraction(value)
        if not value:
            return cls._raw(ZERO, ONE)
        return cls._raw((value.numerator,), (value.denominator,))

    @classmethod
    def t(cls):
        return cls._raw((0, 1), ONE)

    @classmethod
    def from_fraction_poly(cls, coeffs):
        """Polynomial with Fraction coefficients (lowest degree first)."""
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls([int(c * den) for c in coeffs], (den,))

    # predicates -----------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def as_fraction(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if not self.num:
            return Fraction(0)
        return Fraction(self.num[0], self.den[0])

    @property
    def degree(self):
        """deg(num) - deg(den); ``None`` for zero."""
        if not self.num:
            return None
        return deg(self.num) - deg(self.den)

    def leading_ratio(self):
        return Fraction(self.num[-1], self.den[-1])

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(add(self.num, other.num), self.den)
        return RatFunc(add(mul(self.num, other.den), mul(other.num, self.den)),
                       mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(mul(self.num, other.num), mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(t)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc._raw(ONE, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RatFunc.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __call__(self, x):
        d = evaluate(self.den, Fraction(x))
        if not d:
            raise DivisionByZero(f"pole at {x}")
        return Fraction(evaluate(self.num, Fraction(x))) / d

    def __str__(self):
        n = format_poly(self.num)
        if self.den == ONE:
            return n
        return f"({n})/({format_poly(self.den)})"

    def __repr__(self):
        return f"RatFunc({self})"


def format_poly(a, var="t"):
    if not a:
        return "0"
    out = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if k == 0:
            body = str(c)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if c == 1 else f"{c}*{mono}"
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(sign + body)
    return "".join(out)


# parsing -------------------------------------------------------------------

_TOKENS = set("+-*/^()")


def _tokenize(text):
    toks, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif ch == "t":
            toks.append(("t", None, i))
            i += 1
        elif ch in _TOKENS:
            toks.append((ch, None, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at offset {i} in {text!r}")
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            where = self.toks[self.pos][2] if self.pos < len(self.toks) else len(self.text)
            raise ParseError(f"expected {kind!r} at offset {where} in {self.text!r}")
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        value = self.expr()
        if self.pos != len(self.toks):
            raise ParseError(f"trailing input at offset {self.toks[self.pos][2]} "
                             f"in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take(self.peek())[0]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise ParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take("-")
            return -self.unary()
        if self.peek() == "+":
            self.take("+")
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            negative = False
            if self.peek() == "-":
                self.take("-")
                negative = True
            k = self.take("int")[1]
            if negative:
                if not base:
                    raise ParseError(f"zero to a negative power in {self.text!r}")
                k = -k
            base = base ** k
        return base

    def atom(self):
        kind = self.peek()
        if kind == "int":
            return RatFunc.constant(self.take("int")[1])
        if kind == "t":
            self.take("t")
            return RatFunc.t()
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        where = self.toks[self.pos][2] if self.pos < len(self.toks) else len(self.text)
        raise ParseError(f"unexpected token at offset {where} in {self.text!r}")


def parse_ratfunc(text):
    """Parse strings such as ``"(2*t+1)/(t^2)"`` exactly."""
    return _Parser(text).parse()

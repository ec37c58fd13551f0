"""Exact arithmetic in the real quadratic field Q(sqrt(d)).

A :class:`FieldScalar` is ``a + b*sqrt(d)`` with rational ``a``, ``b``.  The
value ``d = 0`` stands for plain rationals.  Scalars built with different
``d`` refuse to mix; plain ``int`` and ``Fraction`` operands are accepted
and live in every field.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from numbers import Rational

from .errors import FieldMismatchError


@functools.lru_cache(maxsize=None)
def _check_radicand(d: int) -> int:
    if not isinstance(d, int) or d < 0:
        raise ValueError(f"radicand must be a nonnegative integer, got {d!r}")
    if d == 1:
        raise ValueError("d = 1 is not a radicand; use d = 0 for the rationals")
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            raise ValueError(f"radicand {d} is not squarefree")
        k += 1
    return d


class FieldScalar:
    """Immutable element ``a + b*sqrt(d)`` of Q(sqrt(d)).

    >>> x = FieldScalar(1, 1, 5)
    >>> x * x.conjugate()
    FieldScalar('-4', d=5)
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 0):
        a = a if type(a) is Fraction else Fraction(a)
        b = b if type(b) is Fraction else Fraction(b)
        if d:
            _check_radicand(d)
        elif b:
            raise ValueError("a sqrt part needs a positive radicand d")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    def __reduce__(self):
        return (FieldScalar, (self.a, self.b, self.d))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> "FieldScalar":
        # trusted fast path: a, b already Fractions, d already validated
        x = object.__new__(cls)
        object.__setattr__(x, "a", a)
        object.__setattr__(x, "b", b)
        object.__setattr__(x, "d", d)
        return x

    def _coerce(self, other) -> "FieldScalar | None":
        if type(other) is FieldScalar and other.d == self.d:
            return other
        if isinstance(other, FieldScalar):
            if other.d != self.d:
                raise FieldMismatchError(
                    f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Rational)):
            return FieldScalar._make(Fraction(other), Fraction(0), self.d)
        return None

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._make(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldScalar._make(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FieldScalar._make(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.b and not o.b:
            return FieldScalar._make(self.a * o.a, self.b, self.d)
        return FieldScalar._make(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "FieldScalar":
        if not self:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        if not self.b:
            return FieldScalar._make(1 / self.a, self.b, self.d)
        n = self.norm()
        return FieldScalar._make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldScalar._make(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "FieldScalar":
        return FieldScalar._make(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    # -- order ----------------------------------------------------------------

    def sign(self) -> int:
        """Sign of the real embedding with sqrt(d) > 0, decided exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (-sa if diff < 0 else 0)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if type(other) is FieldScalar:
            # scalars of different fields are simply unequal, so mixed keys can share a dict
            return other.d == self.d and self.a == other.a and self.b == other.b
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    # -- conversion -----------------------------------------------------------

    def is_rational(self) -> bool:
        return not self.b

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"FieldScalar({format_scalar(self)!r}, d={self.d})"


def compare(x, y) -> int:
    """Return -1, 0 or 1 as ``x < y``, ``x == y`` or ``x > y``."""
    if not isinstance(x, FieldScalar):
        if not isinstance(y, FieldScalar):
            x = FieldScalar(x)
        else:
            x = y._coerce(x)
    diff = x - y
    return diff.sign()


def arith(x, y, op: str):
    """Apply one of ``+ - * /`` to two scalars."""
    if op == "+":
        return x + y
    if op in ("-", "−"):
        return x - y
    if op in ("*", "×"):
        return x * y
    if op in ("/", "÷"):
        return x / y
    raise ValueError(f"unknown operator {op!r}")


def scalar(value, d: int = 0) -> FieldScalar:
    """Coerce an int, Fraction, FieldScalar or text into Q(sqrt(d))."""
    if isinstance(value, FieldScalar):
        if value.d != d:
            if not value.b:
                raise FieldMismatchError(
                    f"scalar {value} lives in Q(sqrt({value.d})), session uses d={d}")
            raise FieldMismatchError(f"scalar {value} does not live in Q(sqrt({d}))")
        return value
    if isinstance(value, str):
        return parse_scalar(value, d)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return FieldScalar(value, 0, d)
    raise TypeError(f"cannot interpret {value!r} as a field scalar")


_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"""^
    (?:(?P<a>{_RATIONAL})(?=[+-]))?   # rational part, always followed by a sign
    (?P<op>[+-])?
    (?:(?P<b>{_RATIONAL})\*)?
    sqrt\((?P<d>\d+)\)
    $""",
    re.X,
)


def parse_scalar(text: str, d: int = 0) -> FieldScalar:
    """Parse ``"p/q"`` or ``"p/q+r/s*sqrt(d)"`` (spaces ignored)."""
    s = "".join(str(text).split())
    if "sqrt" not in s:
        try:
            return FieldScalar(Fraction(s), 0, d)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed scalar {text!r}") from exc
    m = _SCALAR_RE.match(s)
    if not m:
        raise ValueError(f"malformed scalar {text!r}")
    rad = int(m["d"])
    if rad != d:
        raise FieldMismatchError(f"scalar {text!r} uses sqrt({rad}) but the session field has d={d}")
    a = Fraction(m["a"]) if m["a"] else Fraction(0)
    b = Fraction(m["b"]) if m["b"] else Fraction(1)
    if m["op"] == "-":
        b = -b
    return FieldScalar(a, b, d)


def format_scalar(x: FieldScalar) -> str:
    if not x.b:
        return str(x.a)
    coeff = abs(x.b)
    term = f"sqrt({x.d})" if coeff == 1 else f"{coeff}*sqrt({x.d})"
    sign = "-" if x.b < 0 else "+"
    if not x.a:
        return term if sign == "+" else "-" + term
    return f"{x.a}{sign}{term}"

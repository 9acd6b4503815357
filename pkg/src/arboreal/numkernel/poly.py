"""Dense univariate polynomials over the rationals.

Coefficients are stored constant term first.  Products of large integer
polynomials go through Kronecker substitution so that Python's big-integer
multiplication does the heavy lifting.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import PreconditionError
from .ntheory import Rational, as_fraction, residue_mod

_SCHOOLBOOK_CUTOFF = 24


def _trim(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of integer coefficient lists."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < _SCHOOLBOOK_CUTOFF:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    return _kronecker_mul(a, b)


def _kronecker_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    width = nbytes * 8
    product = _pack(a, nbytes) * _pack(b, nbytes)
    n = len(a) + len(b) - 1
    # Shift every digit into [0, 2^width) so the result unpacks as unsigned bytes.
    half = 1 << (width - 1)
    offset = int.from_bytes(half.to_bytes(nbytes, "little") * n, "little")
    raw = (product + offset).to_bytes(nbytes * n, "little")
    return [int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(n)]


def _pack(cs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in cs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in cs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


class QPoly:
    """Immutable polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        self.coeffs: tuple[Fraction, ...] = tuple(_trim([as_fraction(c) for c in coeffs]))

    @classmethod
    def x(cls) -> "QPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Rational) -> "QPoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        return f"QPoly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == QPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other) -> "QPoly":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "QPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "QPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "QPoly":
        if isinstance(other, (int, Fraction)):
            return QPoly(c * other for c in self.coeffs)
        if not isinstance(other, QPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QPoly()
        da, a = self.integer_form()
        db, b = other.integer_form()
        den = da * db
        return QPoly(Fraction(c, den) for c in int_poly_mul(a, b))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QPoly":
        result, base = QPoly.const(1), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, x: Rational) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def integer_form(self) -> tuple[int, list[int]]:
        """(d, ints) with self = ints / d and d > 0 the lcm of denominators."""
        d = 1
        for c in self.coeffs:
            d = d * c.denominator // math.gcd(d, c.denominator)
        return d, [c.numerator * (d // c.denominator) for c in self.coeffs]

    def derivative(self) -> "QPoly":
        return QPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "QPoly":
        return self * (1 / self.lc)

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return QPoly(), self
        q = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        g = other.coeffs
        for i in range(dq, -1, -1):
            c = r[i + len(g) - 1] * inv
            q[i] = c
            if c:
                for j, gj in enumerate(g):
                    r[i + j] -= c * gj
        return QPoly(q), QPoly(r[: len(g) - 1])

    def __mod__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "QPoly") -> "QPoly":
        return self.divmod(other)[0]

    def mod_p(self, p: int) -> list[int]:
        """Reduction to a coefficient list over Z/pZ (trailing zeros trimmed)."""
        return _trim([residue_mod(c, p) for c in self.coeffs])


def _coerce(x) -> QPoly:
    if isinstance(x, QPoly):
        return x
    return QPoly.const(x)


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, over Z."""
    r = list(a)
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) >= len(b):
        lr = r[-1]
        shift = len(r) - len(b)
        r = [lb * c for c in r]
        for j, bj in enumerate(b):
            r[shift + j] -= lr * bj
        _trim(r)
        e -= 1
    return [c * lb**e for c in r] if e > 0 else r


def _content(cs: list[int]) -> int:
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    return g


def int_resultant(a: list[int], b: list[int]) -> int:
    """Resultant of integer polynomials by the subresultant algorithm."""
    a, b = _trim(list(a)), _trim(list(b))
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    ca, cb = _content(a), _content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        if da % 2 and db % 2:
            s = -1
    g = h = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _prem(a, b)
        a = b
        div = g * h**delta
        b = [c // div for c in r]
        g = a[-1]
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if not b:
            return 0
        if len(b) == 1:
            break
    da = len(a) - 1
    h = b[0] ** da // h ** (da - 1) if da >= 1 else h
    return s * t * h


def resultant(f: QPoly, g: QPoly) -> Fraction:
    """Classical resultant: lc(f)^deg(g) times the product of g over the roots of f."""
    if f.is_zero() or g.is_zero():
        raise PreconditionError("resultant of a zero polynomial")
    df, a = f.integer_form()
    dg, b = g.integer_form()
    return Fraction(int_resultant(a, b), df**g.degree * dg**f.degree)


def disc_direct(f: QPoly) -> Fraction:
    """(-1)^(d(d-1)/2) Res(f, f') / lc(f)."""
    d = f.degree
    if d < 1:
        raise PreconditionError("discriminant of a constant polynomial")
    if d == 1:
        return Fraction(1)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def product_over_roots(f: QPoly, g: QPoly) -> Fraction:
    """Product of g(alpha) over the roots alpha of f, with multiplicity."""
    return resultant(f, g) / f.lc**g.degree if g.degree > 0 else g.lc**f.degree

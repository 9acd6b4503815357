"""Quadratic rational maps and exact computation of their iterates.

Two map types are provided: ``AutQuadMap`` for the family k(x^2 + b)/x and
``GenQuadMap`` for an arbitrary degree-2 quotient p(x)/q(x).  Iterates are
computed through the homogeneous lift

    P_n(X, Y) = P(P_{n-1}, Q_{n-1}),   Q_n(X, Y) = Q(P_{n-1}, Q_{n-1}),

so p_n(x) = P_n(x, 1) and q_n(x) = Q_n(x, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PreconditionError, ResourceError
from .numkernel import QPoly, as_fraction, format_rational, gfp, is_square, residue_mod

EXACT_LEVEL_CAP = 12
MODP_DEGREE_CAP = 2**16


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^1(Q) as a content-free integer pair (u : w), w >= 0."""

    u: int
    w: int

    def __post_init__(self):
        u, w = self.u, self.w
        if u == 0 and w == 0:
            raise PreconditionError("(0, 0) is not a projective point")
        g = math.gcd(u, w)
        u, w = u // g, w // g
        if w < 0 or (w == 0 and u < 0):
            u, w = -u, -w
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @classmethod
    def of(cls, x) -> "ProjPoint":
        if x is None:
            return cls.infinity()
        x = as_fraction(x)
        return cls(x.numerator, x.denominator)

    @classmethod
    def infinity(cls) -> "ProjPoint":
        return cls(1, 0)

    @property
    def is_infinity(self) -> bool:
        return self.w == 0

    def value(self) -> Optional[Fraction]:
        return None if self.w == 0 else Fraction(self.u, self.w)

    def __str__(self) -> str:
        return "inf" if self.w == 0 else format_rational(Fraction(self.u, self.w))


def _coeff3(cs: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    cs = [as_fraction(c) for c in cs]
    if len(cs) > 3:
        if any(cs[3:]):
            raise PreconditionError("coefficient list has degree above 2")
        cs = cs[:3]
    return tuple(cs + [Fraction(0)] * (3 - len(cs)))  # type: ignore[return-value]


def _hom_resultant(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    # Sylvester determinant of two binary quadratic forms, leading coefficient first.
    a2, a1, a0 = p[2], p[1], p[0]
    b2, b1, b0 = q[2], q[1], q[0]
    return (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)


@dataclass(frozen=True)
class GenQuadMap:
    """phi(x) = p(x)/q(x) with max(deg p, deg q) = 2 and no common root on P^1."""

    p: tuple[Fraction, Fraction, Fraction]
    q: tuple[Fraction, Fraction, Fraction]

    def __init__(self, p: Sequence, q: Sequence):
        object.__setattr__(self, "p", _coeff3(p))
        object.__setattr__(self, "q", _coeff3(q))
        if self.p[2] == 0 and self.q[2] == 0:
            raise PreconditionError("map has degree below 2")
        if _hom_resultant(self.p, self.q) == 0:
            raise PreconditionError("p and q share a root; the map is degenerate")

    @classmethod
    def parse(cls, text: str) -> "GenQuadMap":
        """Parse 'p0,p1,p2/q0,q1,q2'."""
        try:
            ps, qs = text.split("/", 1) if text.count("/") == 1 else _split_map(text)
            return cls(ps.split(","), qs.split(","))
        except ValueError as exc:
            raise PreconditionError(f"cannot parse map {text!r}: {exc}") from exc

    @property
    def p_poly(self) -> QPoly:
        return QPoly(self.p)

    @property
    def q_poly(self) -> QPoly:
        return QPoly(self.q)

    @property
    def fixes_infinity(self) -> bool:
        return self.p_poly.degree > self.q_poly.degree

    def hom_resultant(self) -> Fraction:
        return _hom_resultant(self.p, self.q)

    def res_qp(self) -> Fraction:
        """Polynomial resultant Res(q, p) with their actual degrees."""
        from .numkernel import resultant

        return resultant(self.q_poly, self.p_poly)

    def wronskian(self) -> QPoly:
        p, q = self.p_poly, self.q_poly
        return q * p.derivative() - p * q.derivative()

    def hom(self, u, w):
        """(P(u, w), Q(u, w)) for the homogeneous lift."""
        p0, p1, p2 = self.p
        q0, q1, q2 = self.q
        uu, uw, ww = u * u, u * w, w * w
        return p2 * uu + p1 * uw + p0 * ww, q2 * uu + q1 * uw + q0 * ww

    def integer_lift(self) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
        """Integer coefficients of a scalar multiple of (P, Q); same map on P^1."""
        d = math.lcm(*(c.denominator for c in self.p + self.q))
        return (
            tuple(int(c * d) for c in self.p),  # type: ignore[return-value]
            tuple(int(c * d) for c in self.q),
        )

    def __call__(self, x):
        """Value at a rational x, with None standing for infinity."""
        u, w = (1, 0) if x is None else (as_fraction(x), 1)
        a, b = self.hom(u, w)
        return None if b == 0 else a / b

    def __str__(self) -> str:
        return f"({_fmt_poly(self.p)})/({_fmt_poly(self.q)})"


def _split_map(text: str) -> tuple[str, str]:
    # Coefficients may themselves be fractions, e.g. "1/2,0,1/2/0,1,0"; split on the
    # slash that sits between two comma groups of three entries.
    parts = text.split(",")
    if len(parts) != 5:
        raise ValueError("expected three coefficients on each side of '/'")
    mid = parts[2]
    for i, ch in enumerate(mid):
        if ch == "/":
            left, right = mid[:i], mid[i + 1 :]
            try:
                Fraction(left), Fraction(right)
            except (ValueError, ZeroDivisionError):
                continue
            ps = ",".join(parts[:2] + [left])
            qs = ",".join([right] + parts[3:])
            try:
                [Fraction(s) for s in ps.split(",") + qs.split(",")]
            except (ValueError, ZeroDivisionError):
                continue
            return ps, qs
    raise ValueError("no separating '/' found")


def _fmt_poly(cs: Sequence[Fraction]) -> str:
    terms = []
    for i, c in enumerate(cs):
        if c:
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coeff = format_rational(c)
            terms.append(coeff if not mono else (mono if c == 1 else f"{coeff}*{mono}"))
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class AutQuadMap:
    """phi(x) = k(x^2 + b)/x, which commutes with x -> -x."""

    k: Fraction
    b: Fraction = Fraction(1)

    def __init__(self, k, b=1):
        object.__setattr__(self, "k", as_fraction(k))
        object.__setattr__(self, "b", as_fraction(b))
        if self.k == 0 or self.b == 0:
            raise PreconditionError("k and b must be nonzero")

    @property
    def excluded_normal_form(self) -> bool:
        """k = -1/2 with b = 1 is excluded from the normal form of the family."""
        return self.b == 1 and self.k == Fraction(-1, 2)

    def general(self) -> GenQuadMap:
        return GenQuadMap((self.k * self.b, 0, self.k), (0, 1, 0))

    def __call__(self, x):
        return self.general()(x)


def as_general(m) -> GenQuadMap:
    return m.general() if isinstance(m, AutQuadMap) else m


@dataclass
class PointTrace:
    """Orbit of a point under the integer lift, with the content removed at each level."""

    points: list[ProjPoint] = field(default_factory=list)
    removed: list[int] = field(default_factory=list)


def iterate_point_trace(m, n: int, x0: ProjPoint) -> PointTrace:
    if n < 0:
        raise PreconditionError("level must be nonnegative")
    (p0, p1, p2), (q0, q1, q2) = as_general(m).integer_lift()
    u, w = x0.u, x0.w
    trace = PointTrace([x0], [1])
    for _ in range(n):
        uu, uw, ww = u * u, u * w, w * w
        u, w = p2 * uu + p1 * uw + p0 * ww, q2 * uu + q1 * uw + q0 * ww
        g = math.gcd(u, w)
        u, w = u // g, w // g
        pt = ProjPoint(u, w)
        u, w = pt.u, pt.w
        trace.points.append(pt)
        trace.removed.append(g)
    return trace


def iterate_point(m, n: int, x0: ProjPoint) -> ProjPoint:
    """phi^n(x0) as a content-free projective pair."""
    return iterate_point_trace(m, n, x0).points[-1]


def eval_iterate(m, n: int, t) -> tuple[Fraction, Fraction]:
    """(p_n(t), q_n(t)) exactly, from (p_0, q_0) = (t, 1); t = None means the point (1 : 0)."""
    g = as_general(m)
    u, w = (Fraction(1), Fraction(0)) if t is None else (as_fraction(t), Fraction(1))
    for _ in range(n):
        u, w = g.hom(u, w)
    return u, w


def iterate_poly(m, n: int, modulus: Optional[int] = None, level_cap: int = EXACT_LEVEL_CAP):
    """Numerator and denominator of phi^n.

    Over Q the result is a pair of ``QPoly``; with a prime modulus it is a pair
    of coefficient lists over Z/pZ.
    """
    if n < 0:
        raise PreconditionError("level must be nonnegative")
    g = as_general(m)
    if modulus is None:
        if n > level_cap:
            raise ResourceError(f"exact expansion capped at level {level_cap} (degree {2**level_cap})")
        p0, p1, p2 = g.p
        q0, q1, q2 = g.q
        P, Q = QPoly.x(), QPoly.const(1)
        for _ in range(n):
            PP, PQ, QQ = P * P, P * Q, Q * Q
            P, Q = PP * p2 + PQ * p1 + QQ * p0, PP * q2 + PQ * q1 + QQ * q0
        return P, Q
    if 2**n > MODP_DEGREE_CAP:
        raise ResourceError(f"mod-p expansion capped at degree {MODP_DEGREE_CAP}")
    p = modulus
    p0, p1, p2 = (residue_mod(c, p) for c in g.p)
    q0, q1, q2 = (residue_mod(c, p) for c in g.q)
    P, Q = [0, 1], [1]
    for _ in range(n):
        PP, PQ, QQ = gfp.mul(P, P, p), gfp.mul(P, Q, p), gfp.mul(Q, Q, p)
        P = gfp.add(gfp.add(gfp.scale(PP, p2, p), gfp.scale(PQ, p1, p), p), gfp.scale(QQ, p0, p), p)
        Q = gfp.add(gfp.add(gfp.scale(PP, q2, p), gfp.scale(PQ, q1, p), p), gfp.scale(QQ, q0, p), p)
    return P, Q


def leading_coefficients(m, n_max: int) -> list[Fraction]:
    """Coefficient of x^(2^n) in p_n for n = 1..n_max (zero when the degree drops)."""
    g = as_general(m)
    u, w = Fraction(1), Fraction(0)
    out = []
    for _ in range(n_max):
        u, w = g.hom(u, w)
        out.append(u)
    return out


def s_exp(n: int) -> int:
    return (2**n - (-1) ** n) // 3


def t_exp(n: int) -> int:
    return s_exp(n) - 1 if n % 2 else s_exp(n)


@dataclass
class OrbitTable:
    """Exact critical-orbit sequences of k(x^2 + 1)/x, indexed from level 1."""

    k: Fraction
    delta: list[Fraction]
    eps: list[Fraction]
    S: list[Fraction]
    T: list[Fraction]
    a: list[int]
    bseq: list[int]
    sigma: list[int]
    tau: list[int]

    def level(self, n: int) -> dict:
        i = n - 1
        return {
            "n": n,
            "delta": self.delta[i],
            "eps": self.eps[i],
            "S": self.S[i],
            "T": self.T[i],
            "s": s_exp(n),
            "t": t_exp(n),
        }


def delta_eps(k, n_max: int) -> tuple[list[Fraction], list[Fraction]]:
    k = as_fraction(k)
    if k == 0:
        raise PreconditionError("k must be nonzero")
    d, e = 2 * k * k, k
    ds, es = [d], [e]
    for _ in range(n_max - 1):
        d, e = d * d + e * e, d * e / k
        ds.append(d)
        es.append(e)
    return ds, es


def st_sequence(k, n_max: int, b=1) -> tuple[list[Fraction], list[Fraction]]:
    """S_n(1,1), T_n(1,1) from S_0 = T_0 = 1."""
    k, b = as_fraction(k), as_fraction(b)
    S, T = Fraction(1), Fraction(1)
    Ss, Ts = [], []
    for n in range(1, n_max + 1):
        lead = 1 if n % 2 else k * k
        S, T = lead * S * S + b * T * T, S * T
        Ss.append(S)
        Ts.append(T)
    return Ss, Ts


def ab_sequence(n_max: int) -> tuple[list[int], list[int]]:
    """a_n = P_n(1,1) and b_n = Q_n(1,1) at k = 1."""
    a, b = 2, 1
    As, Bs = [a], [b]
    for _ in range(n_max - 1):
        a, b = a * a + b * b, a * b
        As.append(a)
        Bs.append(b)
    return As, Bs


def sigma_tau(n_max: int) -> tuple[list[int], list[int]]:
    """sigma_n = S_n(1,1)|_{k=0} and tau_n = T_n(1,1)|_{k=0}."""
    if n_max < 1:
        raise PreconditionError("n_max must be at least 1")
    s, t = 2, 1
    ss, ts = [s], [t]
    for n in range(2, n_max + 1):
        s, t = (s * s + t * t if n % 2 else t * t), s * t
        ss.append(s)
        ts.append(t)
    return ss, ts


def orbit_table(k, n_max: int) -> OrbitTable:
    k = as_fraction(k)
    ds, es = delta_eps(k, n_max)
    Ss, Ts = st_sequence(k, n_max)
    a, b = ab_sequence(n_max)
    s, t = sigma_tau(n_max)
    return OrbitTable(k, ds, es, Ss, Ts, a, b, s, t)


@dataclass
class CriticalData:
    wronskian: QPoly
    #: rational critical points; None stands for infinity
    points: list[Optional[Fraction]]
    #: discriminant of the quadratic Wronskian; the points are irrational when it is a non-square
    disc: Optional[Fraction]
    rational: bool
    values: list[Optional[Fraction]]


def critical_data(m) -> CriticalData:
    g = as_general(m)
    c = g.wronskian()
    pts: list[Optional[Fraction]] = []
    disc = None
    rational = True
    if c.degree == 2:
        c0, c1, c2 = c.coeffs
        disc = c1 * c1 - 4 * c2 * c0
        if is_square(disc):
            r = Fraction(math.isqrt(disc.numerator), math.isqrt(disc.denominator))
            pts = sorted({(-c1 + r) / (2 * c2), (-c1 - r) / (2 * c2)})
            if len(pts) == 1:
                pts = pts * 2
        else:
            rational = False
    elif c.degree == 1:
        pts = [-c.coeffs[0] / c.coeffs[1], None]
    else:
        pts = [None, None]
    values = [g(x) for x in pts] if rational else []
    return CriticalData(c, pts, disc, rational, values)


def sqrtb_identity_check(k, b, n_max: int) -> bool:
    """p_n(sqrt b) == b^(2^(n-1)) p*_n(1) for n <= n_max, where p* is the b = 1 numerator."""
    b = as_fraction(b)
    if b == 0 or not is_square(b):
        raise PreconditionError("b must be a nonzero rational square")
    root = Fraction(math.isqrt(b.numerator), math.isqrt(b.denominator))
    phi, star = AutQuadMap(k, b), AutQuadMap(k, 1)
    for n in range(1, n_max + 1):
        lhs = eval_iterate(phi, n, root)[0]
        rhs = b ** (2 ** (n - 1)) * eval_iterate(star, n, 1)[0]
        if lhs != rhs:
            return False
    return True

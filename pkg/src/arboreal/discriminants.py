"""Closed-form discriminants of iterate numerators, checked against Res(f, f').

Every product over roots is evaluated as a resultant, so nothing leaves the
rationals.  Closed forms are returned as absolute values; the signed value
comes from the direct oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .numkernel import QPoly, as_fraction, disc_direct, resultant
from .quadmap import AutQuadMap, as_general, critical_data, eval_iterate, iterate_poly, leading_coefficients


@dataclass
class DiscReport:
    n: int
    closed_form: Optional[Fraction]
    oracle: Optional[Fraction]
    exponents: dict = field(default_factory=dict)
    branch: str = ""

    @property
    def match(self) -> bool:
        if self.closed_form is None or self.oracle is None:
            return False
        return abs(self.closed_form) == abs(self.oracle)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "closed_form": None if self.closed_form is None else str(self.closed_form),
            "oracle": None if self.oracle is None else str(self.oracle),
            "exponents": self.exponents,
            "branch": self.branch,
            "match": self.match,
        }


def _quadratic_disc(cs) -> Fraction:
    c0, c1, c2 = cs
    if c2 == 0:
        return Fraction(1)
    return c1 * c1 - 4 * c2 * c0


def disc_closed_aut(k, b, n: int) -> Fraction:
    """|Disc p_n| for k(x^2 + b)/x from the level recursion, starting at |Disc p_1| = 4|b|k^2."""
    k, b = as_fraction(k), as_fraction(b)
    if k == 0 or b == 0:
        raise PreconditionError("k and b must be nonzero")
    if n < 1:
        raise PreconditionError("level must be at least 1")
    star = AutQuadMap(k, 1)
    D = 4 * abs(b) * k * k
    for j in range(2, n + 1):
        pstar = eval_iterate(star, j, 1)[0]
        D = abs(k) ** (2**j * (2 ** (j - 1) - 1)) * abs(b) ** (2 ** (2 * j - 2)) * D * D * pstar * pstar
    return D


def critical_product(m, n: int) -> Fraction:
    """Product of p_n over the finite critical points, as Res(c, p_n) / lc(c)^deg p_n."""
    c = as_general(m).wronskian()
    pn, _ = iterate_poly(m, n)
    if c.degree < 1:
        return Fraction(1)
    return resultant(c, pn) / c.lc ** pn.degree


def general_exponents(m, n: int) -> dict:
    g = as_general(m)
    d = 2
    dp, dq, dc = g.p_poly.degree, g.q_poly.degree, g.wronskian().degree
    res_exp = d ** (n - 1) * (d ** (n - 1) - 2)
    if g.fixes_infinity:
        k1 = d ** (2 * n - 1) - dq * (d ** (2 * n - 2) - 2 * d ** (n - 1)) - dc * (1 - d**n) // (1 - d) - 2
        return {"k1": k1, "k3": d**n, "res": res_exp, "d": d}
    return {"k1": 2 * d - 2 - dc, "k2": d ** (n - 1) * (d - dp) * (d ** (n - 1) - 2), "k3": d**n, "res": res_exp, "d": d}


def _check_infinity(m, n: int) -> list[Fraction]:
    lcs = leading_coefficients(m, n)
    for j in (n, n - 1):
        if j >= 1 and lcs[j - 1] == 0:
            raise PreconditionError(f"phi^{j}(inf) = 0, so deg p_{j} < 2^{j}")
    return lcs


def disc_closed_general(m, n: int) -> Fraction:
    """|Disc p_n| for a general quadratic map, recursing on the level."""
    if n < 1:
        raise PreconditionError("level must be at least 1")
    g = as_general(m)
    if n == 1:
        return abs(_quadratic_disc(g.p))
    lcs = _check_infinity(g, n)
    e = general_exponents(g, n)
    c = g.wronskian()
    lc_c = abs(c.lc) if not c.is_zero() else Fraction(1)
    res = abs(g.res_qp())
    prev = disc_closed_general(g, n - 1)
    prod_crit = abs(critical_product(g, n))
    if g.fixes_infinity:
        head = abs(g.p_poly.lc) ** e["k1"]
    else:
        head = abs(lcs[n - 1]) ** e["k1"] * abs(g.q_poly.lc) ** e["k2"]
    return head * lc_c ** e["k3"] * prev ** e["d"] * res ** e["res"] * prod_crit


def disc_report_aut(k, b, n: int) -> DiscReport:
    pn, _ = iterate_poly(AutQuadMap(k, b), n)
    return DiscReport(
        n,
        disc_closed_aut(k, b, n),
        disc_direct(pn),
        {"k": 2**n * (2 ** (n - 1) - 1), "b": 2 ** (2 * n - 2)},
        "aut",
    )


def disc_report_general(m, n: int) -> DiscReport:
    g = as_general(m)
    pn, _ = iterate_poly(g, n)
    closed = disc_closed_general(g, n)
    branch = "fixes-infinity" if g.fixes_infinity else "moves-infinity"
    e = general_exponents(g, n) if n >= 2 else {}
    return DiscReport(n, closed, disc_direct(pn), e, branch)


@dataclass
class FiberDisc:
    t: Fraction
    value: Optional[Fraction]
    degenerate: bool
    #: C with Disc(p - tq) = C * prod (phi(gamma_i) - t) over finite critical values
    C: Optional[Fraction] = None
    product_form: Optional[Fraction] = None


def fiber_disc_poly(m) -> QPoly:
    """Disc_x(p - t q) as a polynomial in t."""
    g = as_general(m)
    p0, p1, p2 = g.p
    q0, q1, q2 = g.q
    A, B, C = QPoly((p2, -q2)), QPoly((p1, -q1)), QPoly((p0, -q0))
    return B * B - A * C * 4


def disc_fiber(m, t) -> FiberDisc:
    g = as_general(m)
    t = as_fraction(t)
    p0, p1, p2 = g.p
    q0, q1, q2 = g.q
    A, B, C0 = p2 - t * q2, p1 - t * q1, p0 - t * q0
    if A != 0:
        value, degenerate = B * B - 4 * A * C0, False
    else:
        value, degenerate = (Fraction(1) if B != 0 else None), True
    D = fiber_disc_poly(g)
    cd = critical_data(g)
    if not cd.rational or D.is_zero():
        return FiberDisc(t, value, degenerate)
    finite = [v for v in cd.values if v is not None]
    Cc = D.lc * (-1) ** D.degree
    prod = Cc
    for v in finite[: D.degree]:
        prod *= v - t
    return FiberDisc(t, value, degenerate, Cc, prod)

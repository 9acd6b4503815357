"""Polynomials over Z/pZ as plain coefficient lists [a_0, ..., a_n].

The empty list is the zero polynomial.  All functions return trimmed lists
with entries in [0, p).
"""

from __future__ import annotations

from typing import Sequence

Poly = list[int]


def trim(a: Sequence[int], p: int) -> Poly:
    out = [c % p for c in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(a: Sequence[int]) -> int:
    return len(a) - 1


def add(a: Poly, b: Poly, p: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out, p)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out, p)


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([x * c for x in a], p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero over GF(p)")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r, p)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1 - db, -1, -1):
        c = r[i + db] * inv % p
        q[i] = c
        if c:
            for j in range(db + 1):
                r[i + j] = (r[i + j] - c * b[j]) % p
    return trim(q, p), trim(r[:db], p)


def rem(a: Poly, b: Poly, p: int) -> Poly:
    return divmod_(a, b, p)[1]


def monic(a: Poly, p: int) -> Poly:
    if not a:
        return []
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = trim(a, p), trim(b, p)
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def derivative(a: Poly, p: int) -> Poly:
    return trim([i * c for i, c in enumerate(a)][1:], p)


def powmod(base: Poly, e: int, mod: Poly, p: int) -> Poly:
    result = [1]
    base = rem(base, mod, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), mod, p)
    return rem(result, mod, p)


def evaluate(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _pth_root(a: Poly, p: int) -> Poly:
    # f(x) = g(x^p) with coefficients in the prime field, so g is the p-th root
    return [a[i] for i in range(0, len(a), p)]


def squarefree_decomposition(f: Poly, p: int) -> list[tuple[Poly, int]]:
    """Pairs (g_i, i) of monic squarefree coprime factors with f = lc * prod g_i^i."""
    f = monic(trim(f, p), p)
    if len(f) <= 1:
        return []
    out: list[tuple[Poly, int]] = []
    _sqfree(f, p, 1, out)
    merged: dict[int, Poly] = {}
    for g, m in out:
        merged[m] = mul(merged.get(m, [1]), g, p)
    return sorted(((g, m) for m, g in merged.items()), key=lambda t: t[1])


def _sqfree(f: Poly, p: int, mult: int, out: list) -> None:
    # Yun's algorithm with the characteristic-p correction.
    df = derivative(f, p)
    if not df:
        _sqfree(_pth_root(f, p), p, mult * p, out)
        return
    c = gcd(f, df, p)
    w = divmod_(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c, p)
        z = divmod_(w, y, p)[0]
        if len(z) > 1:
            out.append((monic(z, p), i * mult))
        i += 1
        w = y
        c = divmod_(c, y, p)[0]
    if len(c) > 1:
        _sqfree(_pth_root(c, p), p, mult * p, out)


def distinct_degree(f: Poly, p: int) -> list[tuple[int, Poly]]:
    """Distinct-degree factorization of a monic squarefree f: pairs (d, product of degree-d factors)."""
    f = monic(f, p)
    out: list[tuple[int, Poly]] = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((d, g))
            f = divmod_(f, g, p)[0]
            h = rem(h, f, p)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def factor_degrees(f: Poly, p: int) -> dict[int, int]:
    """Multiset {degree: count} of irreducible factors of f, counted with multiplicity."""
    counts: dict[int, int] = {}
    for g, mult in squarefree_decomposition(f, p):
        for d, prod in distinct_degree(g, p):
            counts[d] = counts.get(d, 0) + mult * ((len(prod) - 1) // d)
    return dict(sorted(counts.items()))


def has_root(f: Poly, p: int) -> bool:
    """True iff f has a root in GF(p), via gcd(x^p - x, f)."""
    f = trim(f, p)
    if len(f) <= 1:
        return False
    if f[0] == 0:
        return True
    xp = powmod([0, 1], p, f, p)
    return len(gcd(f, sub(xp, [0, 1], p), p)) > 1

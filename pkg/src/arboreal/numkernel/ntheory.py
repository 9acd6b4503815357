"""Integer and rational number theory: valuations, squares, primes, factoring."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from ..errors import PreconditionError, ResourceError

Rational = Union[int, Fraction]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
# Strong-pseudoprime test to these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def as_fraction(x: Rational | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise PreconditionError(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"invalid rational {x!r}") from exc
    raise PreconditionError(f"not a rational number: {x!r}")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> list[int]:
    return list(_sieve(limit))


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    if hi < 2 or hi < lo:
        return []
    if hi <= 10**7:
        return [p for p in _sieve(hi) if p >= lo]
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


def v_p(x: Rational, p: int) -> int:
    """Exponent of the prime ``p`` in the rational ``x``."""
    x = as_fraction(x)
    if x == 0:
        raise PreconditionError("valuation of zero is undefined")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def is_square(x: Rational) -> bool:
    x = as_fraction(x)
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def legendre(a: int, p: int) -> int:
    """Legendre symbol via Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    return euler_symbol(a, p)


def euler_symbol(a: int, p: int) -> int:
    # No primality check; for hot loops where p is known to be an odd prime.
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def residue_mod(x: Rational, p: int) -> int:
    """Image of a p-integral rational in Z/pZ."""
    x = as_fraction(x)
    if x.denominator % p == 0:
        raise PreconditionError(f"{format_rational(x)} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


@dataclass(frozen=True)
class FactorBudget:
    trial_bound: int = 10**6
    rho_iterations: int = 200_000
    rho_attempts: int = 6


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of |n|; ``cofactor`` > 1 marks an unfactored composite part."""

    n: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1
    #: composite pieces the budget could not split, if any
    unfactored: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        out = self.cofactor
        for p, e in self.factors:
            out *= p**e
        return out

    def to_dict(self) -> dict:
        return {
            "n": str(self.n),
            "factors": [[str(p), e] for p, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
        }


def _pollard_brent(n: int, iterations: int, c: int) -> int | None:
    """Brent's variant of Pollard rho; returns a nontrivial factor or None."""
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        spent += r
        r *= 2
        if spent > iterations:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if 1 < g < n else None


def factor(n: int, budget: FactorBudget | None = None) -> Factorization:
    """Factor |n| by trial division, then Pollard-Brent on what is left.

    Composite pieces that survive the rho budget are multiplied into
    ``cofactor``; the result is never silently wrong.
    """
    if n == 0:
        raise PreconditionError("cannot factor zero")
    budget = budget or FactorBudget()
    m = abs(n)
    found: dict[int, int] = {}
    bound = budget.trial_bound
    for p in _sieve(bound):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    stack = [m] if m > 1 else []
    leftovers: list[int] = []
    while stack:
        x = stack.pop()
        if x < bound * bound or is_prime(x):
            # below bound^2 a trial-divided value has no smaller factor, so it is prime
            found[x] = found.get(x, 0) + 1
            continue
        r = math.isqrt(x)
        if r * r == x:
            stack.extend((r, r))
            continue
        d = None
        for c in range(1, budget.rho_attempts + 1):
            d = _pollard_brent(x, budget.rho_iterations, c)
            if d:
                break
        if d is None:
            leftovers.append(x)
        else:
            stack.extend((d, x // d))
    cof = math.prod(leftovers)
    return Factorization(abs(n), tuple(sorted(found.items())), cof, tuple(sorted(leftovers)))


def squarefree_part(n: int, budget: FactorBudget | None = None) -> int:
    """Product of the primes dividing |n| to an odd power."""
    f = factor(n, budget)
    if not f.complete:
        raise ResourceError(f"factoring budget exceeded; unfactored cofactor {f.cofactor}")
    return math.prod(p for p, e in f.factors if e % 2)


def odd_valuation_primes(f: Factorization) -> list[int]:
    return [p for p, e in f.factors if e % 2]


def rational_height(x: Fraction) -> int:
    return max(abs(x.numerator), x.denominator)

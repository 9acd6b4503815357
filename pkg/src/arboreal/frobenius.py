"""Frobenius cycle-type sampling for p_n of k(x^2 + b)/x over prime fields.

For a good prime p the degrees of the irreducible factors of p_n mod p give
the cycle type of Frobenius acting on the roots, so the proportion of primes
where p_n has a root estimates the proportion of the Galois group fixing a
leaf of the preimage tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .certify import MAXIMAL_TO, certify_maximality
from .config import RunConfig
from .errors import PreconditionError, VerificationError
from .numkernel import as_fraction, gfp, is_prime, primes_between
from .quadmap import AutQuadMap, iterate_poly
from .sieve import mod_orbit_general
from .treegroups import fixprop, fixprop_bounds

BAD_REDUCTION = "bad reduction"
INFINITY_TO_ZERO = "phi^n(inf) = 0 mod p"
RAMIFIED = "ramified"


@dataclass
class CycleTypeSample:
    p: int
    degrees: dict[int, int]
    has_root: Optional[bool]
    excluded: Optional[str] = None

    def to_row(self) -> dict:
        return {
            "p": self.p,
            "degrees": " ".join(f"{d}^{c}" for d, c in self.degrees.items()),
            "has_root": "" if self.has_root is None else int(self.has_root),
            "excluded": self.excluded or "",
        }


def _bad_prime(k, b, p: int) -> bool:
    return p == 2 or any(x.numerator % p == 0 or x.denominator % p == 0 for x in (k, b))


def factor_degrees_mod_p(k, b, n: int, p: int) -> CycleTypeSample:
    k, b = as_fraction(k), as_fraction(b)
    if n < 1:
        raise PreconditionError("level must be at least 1")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if _bad_prime(k, b, p):
        return CycleTypeSample(p, {}, None, BAD_REDUCTION)
    f, _ = iterate_poly(AutQuadMap(k, b), n, modulus=p)
    if gfp.deg(f) < 2**n:
        return CycleTypeSample(p, {}, None, INFINITY_TO_ZERO)
    degrees = gfp.factor_degrees(f, p)
    root = 1 in degrees
    if root != gfp.has_root(f, p):
        raise VerificationError(f"root tests disagree for p_{n} mod {p}")
    if sum(d * c for d, c in degrees.items()) != 2**n:
        raise VerificationError(f"factor degrees of p_{n} mod {p} do not add up")
    sqfree = gfp.deg(gfp.gcd(f, gfp.derivative(f, p), p)) == 0
    return CycleTypeSample(p, degrees, root, None if sqfree else RAMIFIED)


@dataclass
class DensityReport:
    k: str
    b: str
    level: int
    p_min: int
    p_max: int
    good: int
    with_root: int
    excluded: dict[str, list[int]]
    prediction: float
    prediction_exact: str
    prediction_kind: str
    sigma: float
    samples: list[CycleTypeSample] = field(default_factory=list, repr=False)

    @property
    def fraction(self) -> float:
        return self.with_root / self.good if self.good else float("nan")

    @property
    def z_score(self) -> float:
        return (self.fraction - self.prediction) / self.sigma if self.sigma else float("nan")

    def summary(self) -> dict:
        return {
            "k": self.k,
            "b": self.b,
            "level": self.level,
            "p_min": self.p_min,
            "p_max": self.p_max,
            "good_primes": self.good,
            "with_root": self.with_root,
            "fraction": self.fraction,
            "prediction": self.prediction,
            "prediction_exact": self.prediction_exact,
            "prediction_kind": self.prediction_kind,
            "sigma": self.sigma,
            "excluded": self.excluded,
        }


def _prediction(k, b, N: int, cfg: RunConfig) -> tuple[float, str, str]:
    if N - 1 <= 18:
        val = fixprop(N)
        num, exact = float(val), str(val)
    else:
        lo, hi = fixprop_bounds(N)
        num, exact = float((lo + hi) / 2), f"[{float(lo)}, {float(hi)}]"
    kind = "upper bound"
    if as_fraction(b) == 1 and N <= cfg.exact_level_cap:
        if certify_maximality(k, N, cfg).verdict == MAXIMAL_TO:
            kind = "exact"
    return num, exact, kind


def root_density_sample(k, b, N: int, p_min: int, p_max: int, config: Optional[RunConfig] = None) -> DensityReport:
    """Fraction of good primes in [p_min, p_max] at which p_N has a root mod p.

    The prediction is the fixed-point proportion of C_N; it is exact when
    maximality at level N is certified and otherwise only an upper bound.
    """
    cfg = config or RunConfig()
    k, b = as_fraction(k), as_fraction(b)
    primes = primes_between(max(p_min, 3), p_max)
    if not primes:
        raise PreconditionError(f"no odd primes in [{p_min}, {p_max}]")
    samples = [factor_degrees_mod_p(k, b, N, p) for p in primes]
    excluded: dict[str, list[int]] = {}
    good = roots = 0
    for s in samples:
        if s.excluded:
            excluded.setdefault(s.excluded, []).append(s.p)
        else:
            good += 1
            roots += s.has_root
    pred, exact, kind = _prediction(k, b, N, cfg)
    sigma = math.sqrt(pred * (1 - pred) / good) if good else 0.0
    return DensityReport(str(k), str(b), N, p_min, p_max, good, roots, excluded, pred, exact, kind, sigma, samples)


@dataclass
class OrbitDensity:
    considered: int
    hits: int
    excluded: list[int]
    horizon: int
    upper_bound: float

    @property
    def fraction(self) -> float:
        return self.hits / self.considered if self.considered else float("nan")

    def to_dict(self) -> dict:
        return {
            "considered": self.considered,
            "hits": self.hits,
            "fraction": self.fraction,
            "excluded": self.excluded,
            "horizon": self.horizon,
            "upper_bound": self.upper_bound,
        }


def orbit_prime_density(k, b, a0, N: int, p_min: int, p_max: int) -> OrbitDensity:
    """Fraction of good primes dividing the numerator of some phi^n(a0), 1 <= n <= N."""
    k, b = as_fraction(k), as_fraction(b)
    if N < 1:
        raise PreconditionError("horizon must be at least 1")
    phi = AutQuadMap(k, b)
    primes = primes_between(max(p_min, 2), p_max)
    if not primes:
        raise PreconditionError(f"no primes in [{p_min}, {p_max}]")
    hits = considered = 0
    excluded = []
    for p in primes:
        if _bad_prime(k, b, p):
            excluded.append(p)
            continue
        considered += 1
        rep = mod_orbit_general(phi, a0, p, projective=True)
        zeros = rep.zero_levels()
        # zero_levels lists first occurrences; the orbit is eventually periodic so that suffices
        if zeros and zeros[0] <= N:
            hits += 1
    bound = float(fixprop(N)) if N - 1 <= 18 else float(fixprop_bounds(N)[1])
    return OrbitDensity(considered, hits, excluded, N, bound)

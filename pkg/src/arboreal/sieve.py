"""Mod-p orbit engine and the congruence rules built on it.

The central object is the eventually periodic sequence (delta_n, eps_n) mod p,
iterated from (2k^2, k) by (d, e) -> (d^2 + e^2, d*e/k).  A level n is
*exceptional* at p when delta_n is not a quadratic non-residue there (a residue
or zero), since then the sequence says nothing about squareness of delta_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .numkernel import FactorBudget, as_fraction, euler_symbol, factor, is_prime, primes_between, residue_mod
from .quadmap import ProjPoint, as_general

APPLIES = "APPLIES"
NOT_APPLICABLE = "NOT_APPLICABLE"
UNKNOWN = "UNKNOWN"


@dataclass
class ModOrbitReport:
    p: int
    k_mod: Optional[int]
    tail_len: int
    cycle_len: int
    states: list[tuple[int, int]]
    qr_flags: list[int]
    neg_qr_flags: list[int]
    exceptional_levels: list[int]
    kind: str = "delta"
    #: level n of states[0]
    first_level: int = 1

    def index_of_level(self, n: int) -> int:
        i = n - self.first_level
        if i < 0:
            raise PreconditionError(f"level {n} precedes the first recorded level")
        if i < self.tail_len:
            return i
        return self.tail_len + (i - self.tail_len) % self.cycle_len

    def state_at_level(self, n: int) -> tuple[int, int]:
        return self.states[self.index_of_level(n)]

    @property
    def cycle_exceptional(self) -> list[int]:
        return [n for n in self.exceptional_levels if n - self.first_level >= self.tail_len]

    @property
    def tail_exceptional(self) -> list[int]:
        return [n for n in self.exceptional_levels if n - self.first_level < self.tail_len]

    def zero_levels(self) -> list[int]:
        """Levels (first occurrence) at which the first coordinate is 0 mod p."""
        return [self.first_level + i for i, s in enumerate(self.states) if s[0] == 0 and s[1] != 0]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "kind": self.kind,
            "k_mod": self.k_mod,
            "tail_len": self.tail_len,
            "cycle_len": self.cycle_len,
            "states": [list(s) for s in self.states],
            "exceptional_levels": self.exceptional_levels,
        }


def _require_unit(k: Fraction, p: int) -> int:
    if p == 2 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    if k.numerator % p == 0 or k.denominator % p == 0:
        raise PreconditionError(f"{p} divides the numerator or denominator of k")
    return residue_mod(k, p)


def _report(p, kmod, keys, states, repeat_at, flag_values, kind, first_level=1):
    tail = repeat_at
    cycle = len(keys) - repeat_at
    qr = [euler_symbol(v, p) for v in flag_values]
    nqr = [euler_symbol(-v, p) for v in flag_values]
    exc = [first_level + i for i, f in enumerate(qr) if f != -1]
    return ModOrbitReport(p, kmod, tail, cycle, states, qr, nqr, exc, kind, first_level)


def mod_orbit(k, p: int, kind: str = "delta") -> ModOrbitReport:
    """Orbit of (delta_n, eps_n) mod p, or of (S_n(1,1), T_n(1,1)) with ``kind='st'``.

    The S/T recursion alternates with the parity of n, so its state carries the
    parity; delta_n is a square mod p iff S_n(1,1) is, as k is a unit.
    """
    k = as_fraction(k)
    km = _require_unit(k, p)
    seen: dict = {}
    keys, states = [], []
    if kind == "delta":
        kinv = pow(km, -1, p)
        s = (2 * km * km % p, km)
        while s not in seen:
            seen[s] = len(keys)
            keys.append(s)
            states.append(s)
            d, e = s
            s = ((d * d + e * e) % p, d * e * kinv % p)
        return _report(p, km, keys, states, seen[s], [st[0] for st in states], kind)
    if kind == "st":
        k2 = km * km % p
        S, T, n = 2, 1, 1
        key = (S, T, 1)
        while key not in seen:
            seen[key] = len(keys)
            keys.append(key)
            states.append((S, T))
            n += 1
            lead = 1 if n % 2 else k2
            S, T = (lead * S * S + T * T) % p, S * T % p
            key = (S, T, n % 2)
        return _report(p, km, keys, states, seen[key], [st[0] for st in states], kind)
    raise PreconditionError(f"unknown orbit kind {kind!r}")


def mod_orbit_general(m, start, p: int, allow_bad: bool = False, projective: bool = False) -> ModOrbitReport:
    """Orbit of the pair (p_n(x0), q_n(x0)) mod p for n >= 1.

    The pair starts from (x0 mod p, 1), or from (1, 0) when x0 reduces to
    infinity, and follows (u, w) -> (P(u, w), Q(u, w)).  With ``projective``
    the states are normalized points of P^1(F_p): residue flags then carry no
    meaning, but zero detection does and the state space shrinks to p + 1.
    """
    g = as_general(m)
    if p < 2 or not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    res = g.hom_resultant()
    dens = [c.denominator for c in g.p + g.q]
    bad = any(d % p == 0 for d in dens) or res.numerator % p == 0
    if bad and not allow_bad:
        raise PreconditionError(f"{p} is a prime of bad reduction (homogeneous Res(p, q) = {res})")
    p0, p1, p2 = (residue_mod(c, p) for c in g.p)
    q0, q1, q2 = (residue_mod(c, p) for c in g.q)
    x0 = start if isinstance(start, ProjPoint) else ProjPoint.of(start)
    if x0.w % p:
        u, w = x0.u * pow(x0.w, -1, p) % p, 1
    else:
        u, w = 1, 0

    def step(u, w):
        uu, uw, ww = u * u, u * w, w * w
        return (p2 * uu + p1 * uw + p0 * ww) % p, (q2 * uu + q1 * uw + q0 * ww) % p

    def norm(u, w):
        if w:
            return u * pow(w, -1, p) % p, 1
        return (1, 0) if u else (0, 0)

    seen: dict = {}
    states = []
    s = step(u, w)
    if projective:
        s = norm(*s)
    while s not in seen:
        seen[s] = len(states)
        states.append(s)
        s = step(*s)
        if projective:
            s = norm(*s)
    flags = [st[0] for st in states]
    return _report(p, None, states, states, seen[s], flags, "projective" if projective else "general")


@dataclass
class RuleResult:
    rule: str
    verdict: str
    #: "all", "odd", "even", or "" when nothing is covered
    covers: str = ""
    witness_primes: list[int] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def applies(self) -> bool:
        return self.verdict == APPLIES

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "outcome": self.verdict,
            "covers": self.covers,
            "witness_primes": self.witness_primes,
            "params": self.params,
            "note": self.note,
        }


def rule_nosquare(k) -> RuleResult:
    """k a 2-adic unit: delta_n is a non-square for every n (n = 1 because 2 is not a square)."""
    k = as_fraction(k)
    if k.numerator % 2 and k.denominator % 2:
        return RuleResult("nosquare", APPLIES, "all", [2])
    return RuleResult("nosquare", NOT_APPLICABLE)


def rule_three(k) -> RuleResult:
    """Mod-3 argument: odd levels always, every level when v_3(k) = 0."""
    k = as_fraction(k)
    if k.denominator % 3 == 0:
        return RuleResult("three", NOT_APPLICABLE, note="3 divides the denominator of k")
    if k.numerator % 3:
        return RuleResult("three", APPLIES, "all", [3])
    return RuleResult("three", APPLIES, "odd", [3], note="v_3(k) > 0: odd levels only")


def rule_five(k) -> RuleResult:
    k = as_fraction(k)
    if k.denominator % 5 == 0:
        return RuleResult("five", NOT_APPLICABLE)
    r = residue_mod(k, 5)
    if r in (2, 3):
        return RuleResult("five", APPLIES, "all", [5], {"k_mod_5": r})
    return RuleResult("five", NOT_APPLICABLE, params={"k_mod_5": r})


def rule_fiveseven(k) -> RuleResult:
    """k = 2, 5 mod 7 covers all levels; k = 1, 6 mod 7 covers even levels and needs the odd-level mod-3 rule."""
    k = as_fraction(k)
    if k.denominator % 7 == 0:
        return RuleResult("fiveseven", NOT_APPLICABLE)
    r = residue_mod(k, 7)
    if r in (2, 5):
        return RuleResult("fiveseven", APPLIES, "all", [7], {"part": 1, "k_mod_7": r})
    if r in (1, 6):
        three = rule_three(k)
        if three.applies:
            return RuleResult("fiveseven", APPLIES, "all", [7, 3], {"part": 2, "k_mod_7": r, "three": three.covers})
        return RuleResult("fiveseven", NOT_APPLICABLE, "even", [7], {"part": 2, "k_mod_7": r}, "odd levels uncovered")
    return RuleResult("fiveseven", NOT_APPLICABLE, params={"k_mod_7": r})


def fixedpoint_integers(k) -> dict[str, int]:
    k = as_fraction(k)
    vals = {
        "2k-1": 2 * k - 1,
        "2k+1": 2 * k + 1,
        "2k^2-k+1": 2 * k * k - k + 1,
        "2k^2+k+1": 2 * k * k + k + 1,
    }
    return {name: v.numerator for name, v in vals.items()}


def rule_fixedpoint(k, budget: FactorBudget | None = None) -> RuleResult:
    """Stabilizing-sequence criteria: a prime dividing 2k +- 1 or 2k^2 -+ k + 1 with a non-residue."""
    k = as_fraction(k)
    ints = fixedpoint_integers(k)
    incomplete = []
    for case, names in ((1, ("2k-1", "2k+1")), (2, ("2k^2-k+1",)), (3, ("2k^2+k+1",))):
        for name in names:
            n = ints[name]
            if n == 0:
                continue
            f = factor(n, budget)
            if not f.complete:
                incomplete.append(name)
            for p in f.primes:
                if p == 2:
                    continue
                if case == 1:
                    ok = p % 8 in (3, 5)
                elif case == 2:
                    ok = euler_symbol(residue_mod(-k, p), p) == -1
                else:
                    ok = euler_symbol(residue_mod(k, p), p) == -1
                if ok:
                    return RuleResult("fixedpoint", APPLIES, "all", [p], {"case": case, "divides": name})
    if incomplete:
        return RuleResult("fixedpoint", UNKNOWN, note="factoring budget exceeded for " + ", ".join(incomplete))
    return RuleResult("fixedpoint", NOT_APPLICABLE)


def guard_levels(k) -> dict[int, str]:
    """Small levels whose non-squareness is known without a congruence."""
    k = as_fraction(k)
    guards = {1: "delta_1 = 2k^2 is never a square"}
    if k.denominator == 1 and k > 0:
        guards[2] = "delta_2 = k^2(4k^2 + 1) and 4k^2 + 1 is not a square for a positive integer k"
    if rule_three(k).applies:
        guards[3] = "odd levels are non-squares by the mod-3 argument"
    return guards


def orbit_certifies(report: ModOrbitReport, guards: dict[int, str]) -> bool:
    """No exceptional state in the cycle, and every exceptional tail level guarded."""
    return not report.cycle_exceptional and all(n in guards for n in report.tail_exceptional)


def rule_congruence(k, p: int, name: str = "congruence") -> RuleResult:
    k = as_fraction(k)
    if p != 2 and (k.numerator % p == 0 or k.denominator % p == 0):
        return RuleResult(name, NOT_APPLICABLE, params={"p": p})
    rep = mod_orbit(k, p)
    guards = guard_levels(k)
    params = {"p": p, "tail": rep.tail_len, "cycle": rep.cycle_len, "exceptional": rep.exceptional_levels}
    if orbit_certifies(rep, guards):
        used = {str(n): guards[n] for n in rep.tail_exceptional}
        return RuleResult(name, APPLIES, "all", [p], params | {"guards": used})
    return RuleResult(name, NOT_APPLICABLE, params=params)


def rule_mod11(k) -> RuleResult:
    k = as_fraction(k)
    if k.denominator % 11 == 0 or residue_mod(k, 11) not in (1, 10):
        return RuleResult("mod11", NOT_APPLICABLE)
    return rule_congruence(k, 11, "mod11")


@dataclass
class CustomSearchResult:
    p: int
    report: ModOrbitReport
    guards_used: dict[int, str]


def custom_search(
    k,
    prime_bound: int = 500,
    clean_below: int = 200,
    guards: Optional[dict[int, str]] = None,
) -> Optional[CustomSearchResult]:
    """First prime whose (delta, eps) orbit certifies every level.

    Primes below ``clean_below`` whose orbit has no exceptional level at all
    are preferred; failing that, the smallest prime up to ``prime_bound`` whose
    exceptional levels all sit in the tail and are guarded is returned.
    """
    k = as_fraction(k)
    guards = guard_levels(k) if guards is None else guards
    candidates = [p for p in primes_between(3, prime_bound) if k.numerator % p and k.denominator % p]
    fallback = None
    for p in candidates:
        rep = mod_orbit(k, p)
        if not rep.exceptional_levels and p < clean_below:
            return CustomSearchResult(p, rep, {})
        if fallback is None and orbit_certifies(rep, guards):
            fallback = CustomSearchResult(p, rep, {n: guards[n] for n in rep.tail_exceptional})
            if p >= clean_below:
                break
    return fallback

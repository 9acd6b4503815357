"""Certificates for the family k(x^2 + b)/x and verifiers for general maps.

A certificate records the verdict together with every rule that was tried,
in order, with enough witness data to re-check it without searching again
(see ``replay``).  UNKNOWN means no sufficient condition was found; it is
never a disproof.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .config import RunConfig
from .errors import PreconditionError, VerificationError
from .numkernel import (
    as_fraction,
    disc_direct,
    euler_symbol,
    factor,
    format_rational,
    is_square,
    primes_up_to,
    rational_height,
    residue_mod,
    v_p,
)
from .quadmap import (
    AutQuadMap,
    GenQuadMap,
    ProjPoint,
    ab_sequence,
    critical_data,
    delta_eps,
    eval_iterate,
    iterate_point,
    leading_coefficients,
)
from .sieve import (
    APPLIES,
    NOT_APPLICABLE,
    UNKNOWN,
    RuleResult,
    custom_search,
    fixedpoint_integers,
    guard_levels,
    mod_orbit,
    mod_orbit_general,
    orbit_certifies,
    rule_fiveseven,
    rule_five,
    rule_fixedpoint,
    rule_mod11,
    rule_nosquare,
    rule_three,
)

PCF = "PCF"
IRREDUCIBLE_ALL = "IRREDUCIBLE_ALL"
FINITE_INDEX = "FINITE_INDEX"
MAXIMAL_TO = "MAXIMAL_TO"
VERDICTS = (PCF, IRREDUCIBLE_ALL, FINITE_INDEX, MAXIMAL_TO, UNKNOWN)


@dataclass
class Certificate:
    k: Fraction
    b: Fraction
    verdict: str
    rule_chain: list[dict]
    exact_levels_checked: int
    created_at: Optional[str] = None
    max_level: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise PreconditionError(f"unknown verdict {self.verdict!r}")

    @property
    def label(self) -> str:
        return f"{MAXIMAL_TO}({self.max_level})" if self.verdict == MAXIMAL_TO else self.verdict

    def to_dict(self) -> dict:
        return {
            "k": format_rational(self.k),
            "b": format_rational(self.b),
            "verdict": self.verdict,
            "label": self.label,
            "max_level": self.max_level,
            "rule_chain": self.rule_chain,
            "exact_levels_checked": self.exact_levels_checked,
            "created_at": self.created_at,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(
            k=as_fraction(d["k"]),
            b=as_fraction(d["b"]),
            verdict=d["verdict"],
            rule_chain=d["rule_chain"],
            exact_levels_checked=d["exact_levels_checked"],
            created_at=d.get("created_at"),
            max_level=d.get("max_level"),
            notes=list(d.get("notes", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            return cls.from_dict(json.loads(text))
        except (KeyError, json.JSONDecodeError) as exc:
            raise PreconditionError(f"malformed certificate: {exc}") from exc


# -- post-critical finiteness ------------------------------------------------


@dataclass
class PcfResult:
    k: Fraction
    pcf: bool
    orbit: list[str]
    reason: str


def is_pcf(k, max_steps: int = 256) -> PcfResult:
    """Whether the critical point 1 of k(x^2 + 1)/x has a finite orbit.

    Only k of height at most 2 can qualify.  Writing k = r/s, once the orbit
    reaches a point of height above |r|*s the height grows at every step
    (it is at least H^2/s), so the orbit is infinite.
    """
    k = as_fraction(k)
    if k == 0:
        raise PreconditionError("k must be nonzero")
    if rational_height(k) > 2:
        return PcfResult(k, False, [], "height of k exceeds 2")
    phi = AutQuadMap(k)
    bound = abs(k.numerator) * k.denominator
    x = ProjPoint(1, 1)
    seen = {x}
    orbit = [str(x)]
    for _ in range(max_steps):
        x = iterate_point(phi, 1, x)
        orbit.append(str(x))
        if x in seen:
            return PcfResult(k, True, orbit, "orbit of 1 is finite")
        if max(abs(x.u), x.w) > bound:
            return PcfResult(k, False, orbit, f"orbit height exceeds {bound} and then grows without bound")
        seen.add(x)
    raise VerificationError(f"orbit of 1 undecided after {max_steps} steps")


def pcf_search(height_bound: int = 2) -> list[Fraction]:
    """All nonzero rationals of height at most ``height_bound`` with a finite critical orbit."""
    found = []
    for s in range(1, height_bound + 1):
        for r in range(-height_bound, height_bound + 1):
            if r and math.gcd(r, s) == 1 and is_pcf(Fraction(r, s)).pcf:
                found.append(Fraction(r, s))
    return sorted(found)


def _pcf_step(res: PcfResult) -> dict:
    return {
        "rule": "pcf",
        "outcome": APPLIES if res.pcf else NOT_APPLICABLE,
        "covers": "",
        "witness_primes": [],
        "params": {"orbit": res.orbit[:12]},
        "note": res.reason,
    }


# -- finite index and irreducibility ----------------------------------------


def exact_delta_check(k, levels: int) -> tuple[int, Optional[int]]:
    """Check delta_1..delta_levels exactly; returns (levels checked, first square level or None)."""
    ds, _ = delta_eps(k, levels)
    for n, d in enumerate(ds, start=1):
        if is_square(d):
            return n, n
    return levels, None


def _custom_step(k, cfg: RunConfig) -> RuleResult:
    res = custom_search(k, cfg.sieve_prime_bound, cfg.sieve_clean_below)
    params = {"prime_bound": cfg.sieve_prime_bound, "clean_below": cfg.sieve_clean_below}
    if res is None:
        return RuleResult("custom_search", NOT_APPLICABLE, params=params)
    rep = res.report
    params |= {
        "p": res.p,
        "tail": rep.tail_len,
        "cycle": rep.cycle_len,
        "exceptional": rep.exceptional_levels,
        "guards": {str(n): why for n, why in res.guards_used.items()},
    }
    return RuleResult("custom_search", APPLIES, "all", [res.p], params)


def _rule_sequence(cfg: RunConfig) -> list[tuple[str, Callable]]:
    return [
        ("nosquare", rule_nosquare),
        ("fixedpoint", lambda k: rule_fixedpoint(k, cfg.budget)),
        ("five", rule_five),
        ("fiveseven", rule_fiveseven),
        ("three", rule_three),
        ("mod11", rule_mod11),
        ("custom_search", lambda k: _custom_step(k, cfg)),
    ]


def _all_level_chain(k, cfg: RunConfig) -> tuple[list[dict], Optional[RuleResult]]:
    chain = []
    for _, rule in _rule_sequence(cfg):
        res = rule(k)
        chain.append(res.to_dict())
        if res.applies and res.covers == "all":
            return chain, res
    return chain, None


def certify_finite_index(k, b=1, config: Optional[RunConfig] = None) -> Certificate:
    """Run the rule chain; FINITE_INDEX needs a rule covering every level (b = 1 only)."""
    cfg = (config or RunConfig()).stamped()
    k, b = as_fraction(k), as_fraction(b)
    if k == 0 or b == 0:
        raise PreconditionError("k and b must be nonzero")
    if b != 1:
        return certify_irreducibility(k, b, cfg)
    notes = []
    if AutQuadMap(k).excluded_normal_form:
        notes.append("k = -1/2 is excluded from the normal form")
    pcf = is_pcf(k)
    chain = [_pcf_step(pcf)]
    checked, square_at = exact_delta_check(k, cfg.exact_levels)
    if pcf.pcf:
        return Certificate(k, b, PCF, chain, checked, cfg.created_at, notes=notes)
    more, fired = _all_level_chain(k, cfg)
    chain += more
    if fired is not None:
        if square_at is not None:
            raise VerificationError(f"rule {fired.rule} fired for k={k} but delta_{square_at} is a square")
        return Certificate(k, b, FINITE_INDEX, chain, checked, cfg.created_at, notes=notes)
    if square_at is not None:
        d = delta_eps(k, square_at)[0][-1]
        notes.append(
            f"delta_{square_at} = {format_rational(d)} is a square; the irreducibility criterion fails at level {square_at}"
        )
    return Certificate(k, b, UNKNOWN, chain, checked, cfg.created_at, notes=notes)


def certify_irreducibility(k, b=1, config: Optional[RunConfig] = None) -> Certificate:
    """IRREDUCIBLE_ALL when none of -b, -b*delta_n, delta_n can be a square for any n.

    For b > 0 the last two are negative or settled by the delta rules; for
    b < 0 only a level-bounded exact check is possible.
    """
    cfg = (config or RunConfig()).stamped()
    k, b = as_fraction(k), as_fraction(b)
    if k == 0 or b == 0:
        raise PreconditionError("k and b must be nonzero")
    ds, _ = delta_eps(k, cfg.exact_levels)
    notes = []
    if b > 0:
        chain, fired = _all_level_chain(k, cfg)
        checked, square_at = exact_delta_check(k, cfg.exact_levels)
        if fired is not None:
            if square_at is not None:
                raise VerificationError(f"rule {fired.rule} fired for k={k} but delta_{square_at} is a square")
            notes.append("-b and -b*delta_n are negative, hence non-squares")
            return Certificate(k, b, IRREDUCIBLE_ALL, chain, checked, cfg.created_at, notes=notes)
        if square_at is not None:
            notes.append(f"delta_{square_at} = {format_rational(ds[square_at - 1])} is a square")
        return Certificate(k, b, UNKNOWN, chain, checked, cfg.created_at, notes=notes)
    checked = 0
    if is_square(-b):
        notes.append(f"-b = {format_rational(-b)} is a square")
    else:
        for n in range(2, cfg.exact_levels + 1):
            d = ds[n - 1]
            if is_square(d) or is_square(-b * d):
                which = "delta" if is_square(d) else "-b*delta"
                notes.append(f"{which}_{n} is a square; the criterion fails at level {n}")
                break
            checked = n
        if checked:
            notes.append(f"p_n irreducible for n <= {checked} by exact checks")
    step = {"rule": "exact_levels", "outcome": UNKNOWN, "covers": "", "witness_primes": [], "params": {"levels": checked}, "note": ""}
    return Certificate(k, b, UNKNOWN, [step], checked, cfg.created_at, notes=notes)


# -- maximality --------------------------------------------------------------


def certify_maximality(k, m: Optional[int] = None, config: Optional[RunConfig] = None) -> Certificate:
    """Level-m maximality G_m = C_m for b = 1.

    Checks that delta_2..delta_m are non-squares and that k is a unit at
    every prime dividing a_n for n < m/2 + 1.  The second condition is a gcd
    test against num(k)*den(k), so no factoring of a_n is needed; factors are
    recorded when they come within budget.
    """
    cfg = (config or RunConfig()).stamped()
    m = cfg.max_level if m is None else m
    k = as_fraction(k)
    if k == 0:
        raise PreconditionError("k must be nonzero")
    if m < 1 or m > cfg.exact_level_cap:
        raise PreconditionError(f"maximality level must lie in 1..{cfg.exact_level_cap}")
    chain: list[dict] = []
    notes: list[str] = []
    _, fired = _all_level_chain(k, cfg)
    ds, _ = delta_eps(k, m)
    squares = [n for n in range(2, m + 1) if is_square(ds[n - 1])]
    chain.append(
        {
            "rule": "delta_nonsquare",
            "outcome": APPLIES if not squares else NOT_APPLICABLE,
            "covers": f"2..{m}",
            "witness_primes": [],
            "params": {"levels": m, "all_level_rule": fired.rule if fired else None},
            "note": "exact is_square on delta_n" + (f"; squares at {squares}" if squares else ""),
        }
    )
    top = (m + 1) // 2  # n < m/2 + 1
    a, _ = ab_sequence(max(top, 1))
    kk = abs(k.numerator) * k.denominator
    gcds = [math.gcd(kk, a_n) for a_n in a[:top]]
    primes: list[int] = []
    complete = True
    for a_n in a[:top]:
        f = factor(a_n, cfg.budget)
        complete &= f.complete
        primes += f.primes
    chain.append(
        {
            "rule": "a_n_coprime",
            "outcome": APPLIES if all(g == 1 for g in gcds) else NOT_APPLICABLE,
            "covers": f"1..{top}",
            "witness_primes": sorted(set(primes)),
            "params": {"a": [str(x) for x in a[:top]], "gcd": [str(g) for g in gcds], "factored": complete},
            "note": "gcd(num(k)*den(k), a_n) = 1 for each listed n",
        }
    )
    ok = not squares and all(g == 1 for g in gcds)
    if not ok:
        bad = [n + 1 for n, g in enumerate(gcds) if g != 1]
        if bad:
            notes.append(f"k shares a prime with a_n for n in {bad}")
        return Certificate(k, Fraction(1), UNKNOWN, chain, m, cfg.created_at, notes=notes)
    kf = factor(kk, cfg.budget)
    sigma = _sigma_cached(cfg.sigma_bound)
    if kf.complete and all(p <= sigma.bound and p not in sigma.first_hit for p in kf.primes):
        notes.append(f"no prime of k lies in Sigma (checked below {sigma.bound}); maximal at every level")
    return Certificate(k, Fraction(1), MAXIMAL_TO, chain, m, cfg.created_at, max_level=m, notes=notes)


# -- the Sigma prime set ------------------------------------------------------


@dataclass
class SigmaPrimeSet:
    bound: int
    primes: list[int]
    first_hit: dict[int, int]


def sigma_primes(bound: int) -> SigmaPrimeSet:
    """Primes p <= bound dividing some a_n: those where 0 occurs in the orbit of 1 mod p."""
    if bound < 2:
        raise PreconditionError("bound must be at least 2")
    phi = AutQuadMap(1)
    hits = {}
    for p in primes_up_to(bound):
        zeros = mod_orbit_general(phi, 1, p, projective=True).zero_levels()
        if zeros:
            hits[p] = zeros[0]
    return SigmaPrimeSet(bound, sorted(hits), hits)


@lru_cache(maxsize=8)
def _sigma_cached(bound: int) -> SigmaPrimeSet:
    return sigma_primes(bound)


def sigma_coprime(k, sigma: SigmaPrimeSet) -> bool:
    k = as_fraction(k)
    return all(k.numerator % p and k.denominator % p for p in sigma.primes)


# -- range scan --------------------------------------------------------------


@dataclass
class ScanSummary:
    k_from: int
    k_to: int
    total: int
    verdicts: dict[str, int]
    first_rule: dict[str, int]
    fixedpoint_survivors: list[int]
    fiveseven_removed: list[int]
    mod11_removed: list[int]
    remaining: list[int]
    remaining_certified: list[int]

    def partition(self) -> dict:
        return {
            "fixedpoint_survivors": len(self.fixedpoint_survivors),
            "fiveseven_removed": len(self.fiveseven_removed),
            "mod11_removed": len(self.mod11_removed),
            "remaining": len(self.remaining),
            "remaining_certified": len(self.remaining_certified),
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["partition"] = self.partition()
        return d


def _scan_one(args) -> tuple[int, str, dict]:
    k, cfg = args
    cert = certify_finite_index(k, 1, cfg)
    flags = {"fixedpoint": rule_fixedpoint(k, cfg.budget).applies}
    if not flags["fixedpoint"]:
        flags["fiveseven"] = rule_fiveseven(k).applies
        flags["mod11"] = rule_mod11(k).applies
    fired = next((s["rule"] for s in cert.rule_chain if s["outcome"] == APPLIES and s["covers"] in ("all", "")), None)
    flags["first_rule"] = fired or "none"
    return k, cert.to_json(), flags


def scan_range(k_from: int, k_to: int, config: Optional[RunConfig] = None, jobs: Optional[int] = None):
    """Certify every integer k in [k_from, k_to]; returns (summary, certificate lines sorted by k)."""
    if k_to < k_from:
        raise PreconditionError("empty range")
    cfg = (config or RunConfig()).stamped()
    jobs = jobs or cfg.jobs
    ks = [k for k in range(k_from, k_to + 1) if k != 0]
    work = [(k, cfg) for k in ks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_one, work, chunksize=max(1, len(work) // (8 * jobs))))
    else:
        results = [_scan_one(w) for w in work]
    results.sort(key=lambda t: t[0])
    verdicts: dict[str, int] = {}
    first_rule: dict[str, int] = {}
    fp_fail, fs, m11, rest, rest_ok = [], [], [], [], []
    for k, line, flags in results:
        v = json.loads(line)["verdict"]
        verdicts[v] = verdicts.get(v, 0) + 1
        first_rule[flags["first_rule"]] = first_rule.get(flags["first_rule"], 0) + 1
        if flags["fixedpoint"]:
            continue
        fp_fail.append(k)
        if flags["fiveseven"]:
            fs.append(k)
        elif flags["mod11"]:
            m11.append(k)
        else:
            rest.append(k)
            if v == FINITE_INDEX:
                rest_ok.append(k)
    summary = ScanSummary(
        k_from, k_to, len(results), dict(sorted(verdicts.items())), dict(sorted(first_rule.items())), fp_fail, fs, m11, rest, rest_ok
    )
    return summary, [line for _, line, _ in results]


# -- replay ------------------------------------------------------------------


def _replay_step(k: Fraction, step: dict, cfg: RunConfig) -> str:
    name, params = step["rule"], step.get("params", {})
    if name == "pcf":
        return APPLIES if is_pcf(k).pcf else NOT_APPLICABLE
    if name == "nosquare":
        return rule_nosquare(k).verdict
    if name == "three":
        return rule_three(k).verdict
    if name == "five":
        return rule_five(k).verdict
    if name == "fiveseven":
        return rule_fiveseven(k).verdict
    if name == "mod11":
        return rule_mod11(k).verdict
    if name == "fixedpoint":
        if step["outcome"] != APPLIES:
            return rule_fixedpoint(k, cfg.budget).verdict
        p = step["witness_primes"][0]
        n = fixedpoint_integers(k)[params["divides"]]
        if n % p:
            return NOT_APPLICABLE
        case = params["case"]
        if case == 1:
            ok = p % 8 in (3, 5)
        else:
            ok = euler_symbol(residue_mod(-k if case == 2 else k, p), p) == -1
        return APPLIES if ok else NOT_APPLICABLE
    if name == "custom_search":
        if step["outcome"] != APPLIES:
            return _custom_step(k, cfg).verdict
        p = params["p"]
        rep = mod_orbit(k, p)
        guards = guard_levels(k)
        if (rep.tail_len, rep.cycle_len) != (params["tail"], params["cycle"]):
            return NOT_APPLICABLE
        return APPLIES if orbit_certifies(rep, guards) else NOT_APPLICABLE
    if name == "delta_nonsquare":
        m = params["levels"]
        ds, _ = delta_eps(k, m)
        return APPLIES if not any(is_square(d) for d in ds[1:]) else NOT_APPLICABLE
    if name == "a_n_coprime":
        kk = abs(k.numerator) * k.denominator
        a = [int(x) for x in params["a"]]
        return APPLIES if all(math.gcd(kk, x) == 1 for x in a) else NOT_APPLICABLE
    if name == "exact_levels":
        return UNKNOWN
    raise PreconditionError(f"unknown rule {name!r} in certificate")


def replay(cert: Certificate, config: Optional[RunConfig] = None) -> bool:
    """Re-run every recorded rule and confirm that outcomes and verdict are reproduced."""
    cfg = config or RunConfig()
    for step in cert.rule_chain:
        if _replay_step(cert.k, step, cfg) != step["outcome"]:
            return False
    outcomes = {s["rule"]: s["outcome"] for s in cert.rule_chain}
    covering = any(s["outcome"] == APPLIES and s.get("covers") == "all" for s in cert.rule_chain)
    if cert.verdict == PCF:
        return outcomes.get("pcf") == APPLIES
    if cert.verdict in (FINITE_INDEX, IRREDUCIBLE_ALL):
        return covering and outcomes.get("pcf", NOT_APPLICABLE) == NOT_APPLICABLE
    if cert.verdict == MAXIMAL_TO:
        return outcomes.get("delta_nonsquare") == APPLIES and outcomes.get("a_n_coprime") == APPLIES
    return True


# -- general maps ------------------------------------------------------------


@dataclass
class Maxcor2Result:
    n: int
    witness: Optional[int]
    value: Fraction
    candidates: list[int]
    diagnostic: str = ""


def maxcor2_check(m: GenQuadMap, n: int, prime_bound: Optional[int] = None, config: Optional[RunConfig] = None) -> Maxcor2Result:
    """Search for a prime certifying that level n of the preimage tower is as large as possible.

    The prime must have odd valuation in p_n(g1) p_n(g2) for the two finite
    critical points g1, g2, and valuation zero in lc(p), lc(c), Res(q, p),
    Disc p and p_j(g_i) for 2 <= j <= n - 1.
    """
    cfg = config or RunConfig()
    if n < 2:
        raise PreconditionError("level must be at least 2")
    cd = critical_data(m)
    if not cd.rational or any(g is None for g in cd.points) or any(v is None for v in cd.values):
        raise PreconditionError("need two finite rational critical points with finite critical values")
    for j, lc in enumerate(leading_coefficients(m, n), start=1):
        if lc == 0:
            raise PreconditionError(f"phi^{j}(inf) = 0")
    g1, g2 = cd.points
    value = eval_iterate(m, n, g1)[0] * eval_iterate(m, n, g2)[0]
    if value == 0:
        return Maxcor2Result(n, None, value, [], "p_n vanishes at a critical point")
    fn, fd = factor(value.numerator, cfg.budget), factor(value.denominator, cfg.budget)
    odd = sorted({p for p, e in fn.factors + fd.factors if e % 2})
    diag = "" if fn.complete and fd.complete else "factoring incomplete; search restricted to the factored part"
    c = m.wronskian()
    fixed = [m.p_poly.lc, c.lc, m.res_qp(), disc_direct(m.p_poly) if m.p_poly.degree >= 1 else Fraction(1)]
    inner = [eval_iterate(m, j, g)[0] for j in range(2, n) for g in (g1, g2)]
    for p in odd:
        if prime_bound is not None and p > prime_bound:
            break
        if all(x != 0 and v_p(x, p) == 0 for x in fixed + inner):
            return Maxcor2Result(n, p, value, odd, diag)
    return Maxcor2Result(n, None, value, odd, diag or "no candidate prime meets the valuation conditions")


def phi_a(a) -> GenQuadMap:
    """The family (1 + a x + (3 + a) x^2) / (1 - (4 + a) x - (a + 1) x^2)."""
    a = as_fraction(a)
    if a == -2:
        raise PreconditionError("a = -2 is excluded")
    return GenQuadMap((1, a, 3 + a), (1, -(4 + a), -(a + 1)))


@dataclass
class CheckGroup:
    name: str
    passed: bool = True
    failures: list[str] = field(default_factory=list)
    details: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.passed = False
        self.failures.append(msg)


@dataclass
class NonpolyReport:
    levels: int
    groups: list[CheckGroup]

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.groups)

    def to_dict(self) -> dict:
        return {"levels": self.levels, "passed": self.passed, "groups": [asdict(g) for g in self.groups]}


def _oneco_check(a: Fraction, t: Fraction, k: int, levels: int, group: CheckGroup) -> None:
    m = phi_a(a)
    pk, qk = eval_iterate(m, k, t)
    if pk != qk:
        group.fail(f"a={a}, t={t}: p_{k}(t) != q_{k}(t)")
        return
    r = s = 0
    for i in range(1, levels - k + 1):
        r, s = (2 * r + 1, 2 * s + 1) if i % 2 else (2 * r + 2, 2 * s)
        want = pk ** (2**i) * 2**r * (2 + a) ** s
        got = eval_iterate(m, k + i, t)[0]
        if got != want:
            group.fail(f"a={a}, t={t}: p_{k + i}(t) != p_{k}(t)^(2^{i}) 2^{r} (2+a)^{s}")
            return
        if (r - s) % 2:
            group.fail(f"a={a}: r_{i} and s_{i} differ in parity")
            return
    group.details.append(f"a={format_rational(a)}, t={format_rational(t)}, k={k}: levels {k + 1}..{levels}")


def nonpoly_verify(levels: int, level_cap: int = 12, sample_a: Iterable = (0, 1, -1, 3, Fraction(1, 2), -5)) -> NonpolyReport:
    """Exact checks behind the non-polynomial example phi_0 = (1 + 3x^2)/(1 - 4x - x^2)."""
    if not 1 <= levels <= level_cap:
        raise PreconditionError(f"levels must lie in 1..{level_cap}")
    phi0 = phi_a(0)
    N = levels
    third = Fraction(-1, 3)

    g1 = CheckGroup("p_n(1) powers of 4")
    p1, q1 = eval_iterate(phi0, 1, 1)
    p2, q2 = eval_iterate(phi0, 2, 1)
    if p1 != 4:
        g1.fail(f"p_1(1) = {p1}, expected 4")
    if not (p2 == q2 == 64):
        g1.fail(f"(p_2(1), q_2(1)) = ({p2}, {q2}), expected (64, 64)")
    for n in range(1, N + 1):
        v = eval_iterate(phi0, n, 1)[0]
        if v.denominator != 1 or v <= 0 or v.numerator & (v.numerator - 1) or (v.numerator.bit_length() - 1) % 2:
            g1.fail(f"level {n}: p_n(1) is not an even power of 2")
    g1.details.append(f"levels 1..{N}")

    g2 = CheckGroup("valuations of p_n(-1/3)")
    if eval_iterate(phi0, 1, third) != (Fraction(4, 3), Fraction(20, 9)):
        g2.fail("(p(-1/3), q(-1/3)) != (4/3, 20/9)")
    odd_parts = []
    for n in range(1, N + 1):
        pn, qn = eval_iterate(phi0, n, third)
        if v_p(pn, 2) % 2:
            g2.fail(f"level {n}: v_2(p_n(-1/3)) is odd")
        if n >= 2 and v_p(pn, 3) % 2:
            g2.fail(f"level {n}: v_3(p_n(-1/3)) is odd")
        if n >= 2 and v_p(pn, 3) != v_p(qn, 3):
            g2.fail(f"level {n}: v_3(p_n(-1/3)) != v_3(q_n(-1/3))")
        num = abs(pn.numerator)
        while num % 2 == 0:
            num //= 2
        odd_parts.append(num)
    for i in range(len(odd_parts)):
        for j in range(i + 1, len(odd_parts)):
            if math.gcd(odd_parts[i], odd_parts[j]) != 1:
                g2.fail(f"an odd prime divides p_{i + 1}(-1/3) and p_{j + 1}(-1/3)")
    g2.details.append(f"levels 1..{N}; odd numerator parts pairwise coprime")

    g3 = CheckGroup("mod-5 orbit of -1/3")
    rep = mod_orbit_general(phi0, third, 5)
    seq = [rep.state_at_level(n) for n in range(1, 5)]
    if seq != [(3, 0), (2, 1), (3, 4), (3, 4)]:
        g3.fail(f"orbit mod 5 is {seq}")
    if any(f != -1 for f in rep.qr_flags + rep.neg_qr_flags):
        g3.fail("some +-p_n(-1/3) is a square mod 5")
    for n in range(1, N + 1):
        pn, qn = eval_iterate(phi0, n, third)
        if (residue_mod(pn, 5), residue_mod(qn, 5)) != rep.state_at_level(n):
            g3.fail(f"level {n}: exact values disagree with the orbit mod 5")
    g3.details.append(f"states {seq}")

    g4 = CheckGroup("mod-3 orbit of infinity")
    rep3 = mod_orbit_general(phi0, ProjPoint.infinity(), 3, projective=True)
    st = [rep3.state_at_level(n) for n in range(1, 6)]
    if st[0] != (0, 1):
        g4.fail(f"phi_0(inf) mod 3 is {st[0]}, expected 0")
    if st[1:] != [(1, 1), (2, 1), (1, 1), (2, 1)] or rep3.cycle_len != 2:
        g4.fail(f"orbit after the first step is {st[1:]}, expected the 2-cycle 1 <-> -1")
    inf_lcs = leading_coefficients(phi0, N)
    if any(lc == 0 for lc in inf_lcs):
        g4.fail("phi_0^n(inf) = 0 for some n <= N")
    g4.details.append(f"states {st}")

    g5 = CheckGroup("one-coordinate identities")
    for a in sample_a:
        a = as_fraction(a)
        m = phi_a(a)
        if eval_iterate(m, 2, 0)[0] != 4 + 2 * a:
            g5.fail(f"a={a}: p_2(0) != 4 + 2a")
        _oneco_check(a, Fraction(0), 1, N, g5)
        _oneco_check(a, Fraction(1), 2, N, g5)
    return NonpolyReport(N, [g1, g2, g3, g4, g5])

import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from arboreal.errors import PreconditionError
from arboreal.numkernel import is_square
from arboreal.quadmap import AutQuadMap, GenQuadMap, delta_eps
from arboreal.sieve import (
    APPLIES,
    NOT_APPLICABLE,
    UNKNOWN,
    custom_search,
    guard_levels,
    mod_orbit,
    mod_orbit_general,
    orbit_certifies,
    rule_congruence,
    rule_fiveseven,
    rule_five,
    rule_fixedpoint,
    rule_mod11,
    rule_nosquare,
    rule_three,
)
from arboreal.numkernel import FactorBudget
from arboreal.tables import CONGRUENCE_TABLE

PHI0 = GenQuadMap((1, 0, 3), (1, -4, -1))


def rotations(seq):
    return {tuple(seq[i:] + seq[:i]) for i in range(len(seq))}


def reduce_mod(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


# -- orbit engine ------------------------------------------------------------------


@pytest.mark.parametrize("k,p,tail,cycle,exc", CONGRUENCE_TABLE)
def test_congruence_table_row(k, p, tail, cycle, exc):
    res = custom_search(k)
    assert res is not None
    rep = res.report
    assert (res.p, rep.tail_len, rep.cycle_len, tuple(rep.exceptional_levels)) == (p, tail, cycle, exc)
    assert set(res.guards_used) == set(exc)


def test_guards_clear_4620():
    res = custom_search(4620)
    assert res.guards_used.keys() == {1, 2}
    assert "4k^2 + 1" in res.guards_used[2]


def test_five_orbit_states():
    for k in (2, -2, 7, 3, Fraction(1, 3)):
        rep = mod_orbit(k, 5, "st")
        assert rep.states == [(2, 1), (2, 2), (3, 4)]
        assert (rep.tail_len, rep.cycle_len) == (1, 2)
        assert not rep.exceptional_levels


def test_fiveseven_orbit_cycle():
    listed = [(6, 6), (5, 1), (5, 5), (6, 4), (3, 3), (3, 2)]
    for k in (2, -2, 5, 9):
        rep = mod_orbit(k, 7, "st")
        cyc = rep.states[rep.tail_len :]
        assert (rep.tail_len, rep.cycle_len) == (1, 6)
        assert tuple(cyc) in rotations(listed)
        # the listing above starts one step later, after (2, 1), (3, 2)
        assert rep.states[:2] == [(2, 1), (3, 2)]


def test_orbit_444_61():
    rep = mod_orbit(444, 61)
    assert (rep.tail_len, rep.cycle_len, rep.exceptional_levels) == (0, 4, [])


def test_mod11_orbit_shape():
    for k in (1, 10, 12, 21, -1, 34, Fraction(1, 10), Fraction(13, 2)):
        rep = mod_orbit(k, 11)
        assert (rep.tail_len, rep.cycle_len, rep.exceptional_levels) == (2, 4, [2]), k


def test_mod_orbit_requires_unit():
    with pytest.raises(PreconditionError):
        mod_orbit(22, 11)
    with pytest.raises(PreconditionError):
        mod_orbit(Fraction(1, 7), 7)
    with pytest.raises(PreconditionError):
        mod_orbit(3, 9)


def test_orbit_reduces_exact_sequence():
    rng = random.Random(31)
    primes = list(sympy.primerange(3, 400))
    for _ in range(20):
        k = Fraction(rng.randint(-500, 500) or 1, rng.randint(1, 40))
        p = rng.choice([q for q in primes if k.numerator % q and k.denominator % q])
        rep = mod_orbit(k, p)
        n_max = min(rep.tail_len + 2 * rep.cycle_len, 14)
        ds, es = delta_eps(k, n_max)
        for n in range(1, n_max + 1):
            assert rep.state_at_level(n) == (reduce_mod(ds[n - 1], p), reduce_mod(es[n - 1], p))
        assert rep.tail_len + rep.cycle_len <= p * p


@given(st.integers(1, 10**6), st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 101, 211]))
def test_cycle_well_formed(k, p):
    if k % p == 0:
        return
    rep = mod_orbit(k, p)
    d, e = rep.states[rep.tail_len]
    kinv = pow(k, -1, p)
    for _ in range(rep.cycle_len):
        d, e = (d * d + e * e) % p, d * e * kinv % p
    assert (d, e) == rep.states[rep.tail_len]
    flags = [sympy.legendre_symbol(s[0], p) if s[0] % p else 0 for s in rep.states]
    assert rep.qr_flags == flags
    assert rep.exceptional_levels == [i + 1 for i, f in enumerate(flags) if f != -1]


def test_custom_search_soundness():
    for k, *_ in CONGRUENCE_TABLE:
        ds, _ = delta_eps(k, 12)
        assert not any(is_square(d) for d in ds)


# -- general maps -----------------------------------------------------------------


def test_general_orbit_phi0_mod5():
    rep = mod_orbit_general(PHI0, Fraction(-1, 3), 5)
    assert [rep.state_at_level(n) for n in range(1, 5)] == [(3, 0), (2, 1), (3, 4), (3, 4)]
    assert all(f == -1 for f in rep.qr_flags + rep.neg_qr_flags)


def test_general_orbit_sigma_membership():
    phi = AutQuadMap(1)
    assert mod_orbit_general(phi, 1, 5, projective=True).zero_levels()
    assert not mod_orbit_general(phi, 1, 3, projective=True).zero_levels()


def test_general_orbit_bad_reduction():
    with pytest.raises(PreconditionError, match="bad reduction"):
        mod_orbit_general(PHI0, 1, 2)
    rep = mod_orbit_general(PHI0, 1, 2, allow_bad=True)
    assert rep.states


def test_mod3_orbit_of_infinity():
    rep = mod_orbit_general(PHI0, None, 3)
    assert rep.states[:3] == [(0, 2), (1, 1), (1, 2)]


# -- rules --------------------------------------------------------------------------


def test_rule_nosquare():
    assert rule_nosquare(1).applies
    assert rule_nosquare(Fraction(3, 5)).applies
    assert not rule_nosquare(444).applies
    assert not rule_nosquare(Fraction(2, 3)).applies


def test_rule_three():
    assert rule_three(1).covers == "all"
    assert rule_three(3).covers == "odd"
    assert rule_three(444).covers == "odd"
    assert rule_three(Fraction(1, 3)).verdict == NOT_APPLICABLE


def test_rule_five_and_fiveseven():
    assert rule_five(7).applies and rule_five(Fraction(3, 1)).applies
    assert not rule_five(4).applies
    assert rule_fiveseven(9).params["part"] == 1  # 9 = 2 mod 7
    r = rule_fiveseven(22)  # 1 mod 7, v_3 = 0
    assert r.applies and r.params["part"] == 2 and r.params["three"] == "all"
    r = rule_fiveseven(36)  # 1 mod 7, v_3 > 0: mod 3 still covers the odd levels
    assert r.applies and r.params["three"] == "odd"
    assert rule_fiveseven(3).verdict == NOT_APPLICABLE
    assert rule_fiveseven(Fraction(3, 7)).verdict == NOT_APPLICABLE
    # 22/3 = 5 mod 7
    assert rule_fiveseven(Fraction(22, 3)).params["part"] == 1


def test_fiveseven_is_sound():
    for k in range(1, 400):
        if rule_fiveseven(k).applies:
            ds, _ = delta_eps(k, 8)
            assert not any(is_square(d) for d in ds), k


def test_rule_fixedpoint_examples():
    r = rule_fixedpoint(1)
    assert r.applies and r.witness_primes == [3] and r.params["case"] == 1
    for k in range(1, 201):
        if k % 4:
            assert rule_fixedpoint(k).applies, k


def fixedpoint_oracle(k: int) -> bool:
    def ok(n, test):
        return any(test(p) for p in sympy.factorint(abs(n)) if p != 2)

    return (
        ok(2 * k - 1, lambda p: p % 8 in (3, 5))
        or ok(2 * k + 1, lambda p: p % 8 in (3, 5))
        or ok(2 * k * k - k + 1, lambda p: sympy.legendre_symbol(-k % p, p) == -1 if k % p else False)
        or ok(2 * k * k + k + 1, lambda p: sympy.legendre_symbol(k % p, p) == -1 if k % p else False)
    )


def test_rule_fixedpoint_against_oracle():
    for k in list(range(1, 1500)) + [-7, -100, -444]:
        assert rule_fixedpoint(k).applies == fixedpoint_oracle(k), k


def test_rule_fixedpoint_budget_unknown():
    tiny = FactorBudget(trial_bound=10, rho_iterations=1, rho_attempts=1)
    survivors = [k for k in range(1, 10001) if k % 4 == 0 and not rule_fixedpoint(k).applies]
    verdicts = [rule_fixedpoint(k, tiny).verdict for k in survivors]
    assert APPLIES not in verdicts
    assert UNKNOWN in verdicts


def test_rule_mod11():
    assert rule_mod11(12).applies
    assert rule_mod11(5).verdict == NOT_APPLICABLE
    # rational k = 10 mod 11 has no positive-integer guard for level 2
    assert rule_mod11(Fraction(1, 10)).verdict == NOT_APPLICABLE


def test_rule_congruence_json():
    r = rule_congruence(4620, 41)
    assert r.applies
    back = json.loads(json.dumps(r.to_dict()))
    assert back["params"]["guards"].keys() == {"1", "2"}


def test_guards():
    assert set(guard_levels(4620)) == {1, 2, 3}
    assert set(guard_levels(Fraction(1, 2))) == {1, 3}
    assert set(guard_levels(-6)) == {1, 3}
    assert set(guard_levels(Fraction(-1, 3))) == {1}


def test_orbit_certifies_rejects_cycle_exception():
    rep = mod_orbit(1, 7)
    assert rep.cycle_exceptional
    assert not orbit_certifies(rep, guard_levels(1))

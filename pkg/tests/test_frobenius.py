from fractions import Fraction

import pytest
import sympy

from arboreal.errors import PreconditionError
from arboreal.frobenius import (
    BAD_REDUCTION,
    INFINITY_TO_ZERO,
    RAMIFIED,
    factor_degrees_mod_p,
    orbit_prime_density,
    root_density_sample,
)
from arboreal.quadmap import AutQuadMap, iterate_poly

t = sympy.symbols("t")


def sympy_degrees(k, b, n, p):
    P, _ = iterate_poly(AutQuadMap(k, b), n)
    cs = [int(c.numerator * pow(c.denominator, -1, p)) % p for c in P.coeffs]
    _, facs = sympy.Poly(list(reversed(cs)), t, modulus=p).factor_list()
    out = {}
    for g, e in facs:
        out[g.degree()] = out.get(g.degree(), 0) + e
    return dict(sorted(out.items()))


def test_p2_mod_11():
    # x^4 + 3x^2 + 1 over GF(11): two irreducible quadratics
    s = factor_degrees_mod_p(1, 1, 2, 11)
    assert s.degrees == {2: 2} and s.has_root is False and s.excluded is None


@pytest.mark.parametrize("p", [3, 7, 11, 13, 17, 19, 23, 31, 37, 43, 101])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_degrees_against_sympy(p, n):
    s = factor_degrees_mod_p(Fraction(2, 5), 3, n, p)
    if s.excluded in (BAD_REDUCTION, INFINITY_TO_ZERO):
        return
    assert s.degrees == sympy_degrees(Fraction(2, 5), 3, n, p)


def test_level_one_root_iff_minus_b_square():
    # p_1 = k(x^2 + b)
    for p in sympy.primerange(3, 200):
        for b in (1, 2, 3):
            s = factor_degrees_mod_p(1, b, 1, p)
            if s.excluded:
                continue
            assert s.has_root == (sympy.legendre_symbol(-b % p, p) == 1)


def test_exclusions_carry_reasons():
    assert factor_degrees_mod_p(1, 1, 2, 2).excluded == BAD_REDUCTION
    assert factor_degrees_mod_p(3, 1, 2, 3).excluded == BAD_REDUCTION
    assert factor_degrees_mod_p(Fraction(1, 7), 1, 2, 7).excluded == BAD_REDUCTION
    # 5 divides a_2, so p_2 has a repeated root mod 5
    assert factor_degrees_mod_p(1, 1, 2, 5).excluded == RAMIFIED


def test_argument_checks():
    with pytest.raises(PreconditionError):
        factor_degrees_mod_p(1, 1, 0, 7)
    with pytest.raises(PreconditionError):
        factor_degrees_mod_p(1, 1, 2, 9)
    with pytest.raises(PreconditionError):
        root_density_sample(1, 1, 2, 24, 28)


def test_density_bookkeeping():
    rep = root_density_sample(1, 1, 2, 3, 3000)
    n_primes = len(list(sympy.primerange(3, 3001)))
    n_excluded = sum(len(v) for v in rep.excluded.values())
    assert rep.good + n_excluded == n_primes == len(rep.samples)
    assert all(reason in (BAD_REDUCTION, INFINITY_TO_ZERO, RAMIFIED) for reason in rep.excluded)
    assert rep.prediction_exact == "1/4" and rep.prediction_kind == "exact"
    assert abs(rep.z_score) < 4


def test_prediction_upper_bound_without_maximality():
    # k = 2 shares the prime 2 with a_1
    rep = root_density_sample(2, 1, 2, 3, 400)
    assert rep.prediction_kind == "upper bound"


def test_level3_density():
    rep = root_density_sample(1, 1, 3, 1000, 30000)
    assert rep.good >= 2000
    assert abs(rep.fraction - 3 / 16) <= 0.03
    assert rep.prediction_kind == "exact"


def test_orbit_density_direct_count():
    # primes dividing the numerator of phi^n(1) for n <= 3: numerators 2, 5, 29
    phi = AutQuadMap(1)
    x, nums = Fraction(1), set()
    for _ in range(3):
        x = phi(x)
        nums.add(x.numerator)
    want = [p for p in sympy.primerange(3, 1000) if any(v % p == 0 for v in nums)]
    rep = orbit_prime_density(1, 1, 1, 3, 3, 1000)
    assert rep.hits == len(want) == 2
    assert rep.considered == len(list(sympy.primerange(3, 1000)))


def test_orbit_density_below_bound():
    rep = orbit_prime_density(1, 1, 3, 6, 3, 20000)
    assert rep.fraction <= rep.upper_bound

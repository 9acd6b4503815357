import math
import random
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from arboreal.errors import PreconditionError, ResourceError
from arboreal.numkernel import (
    FactorBudget,
    QPoly,
    as_fraction,
    disc_direct,
    factor,
    gfp,
    int_poly_mul,
    int_resultant,
    is_prime,
    is_square,
    legendre,
    primes_up_to,
    product_over_roots,
    rational_height,
    resultant,
    squarefree_part,
    v_p,
)

from conftest import sylvester_resultant

rationals = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)
small_ints = st.integers(min_value=-(10**12), max_value=10**12).filter(bool)


# -- valuations and squares ---------------------------------------------------


def test_vp_examples():
    assert v_p(2 * 1**2, 2) == 1
    assert v_p(Fraction(4, 3), 3) == -1
    assert v_p(Fraction(100, 81), 5) == 2


def test_vp_errors():
    with pytest.raises(PreconditionError):
        v_p(0, 3)
    with pytest.raises(PreconditionError):
        v_p(12, 4)


@given(rationals, rationals, st.sampled_from([2, 3, 5, 7, 101]))
def test_vp_additive(x, y, p):
    assert v_p(x * y, p) == v_p(x, p) + v_p(y, p)


def test_is_square_examples():
    assert is_square(25)
    assert is_square(Fraction(100, 81))
    assert not is_square(5)
    assert not is_square(-4)
    assert is_square(0)


@given(rationals, st.sampled_from([2, 3, 5, 7]))
def test_is_square_property(x, s):
    assert is_square(x * x)
    assert not is_square(x * x * s)


def test_as_fraction_rejects_garbage():
    assert as_fraction("-2/4") == Fraction(-1, 2)
    for bad in ("abc", "1/0", 1.5, True):
        with pytest.raises(PreconditionError):
            as_fraction(bad)


def test_rational_height():
    assert rational_height(Fraction(-1, 2)) == 2
    assert rational_height(Fraction(3, 7)) == 7


# -- primes and factoring ------------------------------------------------------


def test_is_prime_against_sympy():
    rng = random.Random(11)
    for n in list(range(-5, 3000)) + [rng.randrange(10**20) for _ in range(300)]:
        assert is_prime(n) == sympy.isprime(n), n
    # strong pseudoprimes to small bases
    for n in (2047, 1373653, 3215031751, 3825123056546413051):
        assert not is_prime(n)


def test_primes_up_to():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(10**5)) == 9592


def test_factor_examples():
    assert factor(941).factors == ((941, 1),)
    assert factor(64).factors == ((2, 6),)
    f1 = factor(1)
    assert f1.factors == () and f1.complete


def test_factor_large_semiprime():
    p, q = 1000000007, 998244353
    f = factor(p * q * 12)
    assert f.factors == ((2, 2), (3, 1), (q, 1), (p, 1))


def test_factor_budget_flags_cofactor():
    n = 2**128 + 1  # 59649589127497217 * 5704689200685129054721
    f = factor(n, FactorBudget(trial_bound=1000, rho_iterations=10, rho_attempts=1))
    assert not f.complete
    assert f.value() == n
    with pytest.raises(ResourceError):
        squarefree_part(n, FactorBudget(trial_bound=1000, rho_iterations=10, rho_attempts=1))


@given(small_ints)
def test_factor_roundtrip(n):
    f = factor(n)
    assert f.complete
    assert math.prod(p**e for p, e in f.factors) == abs(n)
    ps = [p for p, _ in f.factors]
    assert ps == sorted(set(ps)) and all(is_prime(p) for p in ps)
    assert dict(f.factors) == sympy.factorint(abs(n))


def test_squarefree_part():
    assert squarefree_part(400) == 1
    assert squarefree_part(2 * 3**2) == 2
    assert squarefree_part(116) == 29


# -- Legendre symbol -----------------------------------------------------------


def brute_legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


def test_legendre_examples():
    assert legendre(2, 3) == -1
    assert legendre(0, 7) == 0
    assert legendre(2, 7) == 1
    with pytest.raises(PreconditionError):
        legendre(3, 9)


@given(st.integers(-1000, 1000), st.integers(-1000, 1000), st.sampled_from([3, 5, 7, 11, 13, 101]))
def test_legendre_properties(a, b, p):
    assert legendre(a, p) == legendre(a % p, p) == brute_legendre(a, p)
    if a % p and b % p:
        assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


# -- polynomials ---------------------------------------------------------------


def test_qpoly_arithmetic():
    x = QPoly.x()
    f = x**2 + 1
    assert f.degree == 2 and f.lc == 1
    assert f(Fraction(1, 2)) == Fraction(5, 4)
    q, r = (x**3 + 2).divmod(x + 1)
    assert q * (x + 1) + r == x**3 + 2 and r.degree < 1
    assert QPoly([]).degree == -1


@given(st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=60), st.lists(st.integers(-(10**30), 10**30), min_size=1, max_size=60))
def test_int_poly_mul_against_schoolbook(a, b):
    want = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            want[i + j] += x * y
    assert int_poly_mul(a, b) == want


def test_resultant_examples():
    k, b = 3, 7
    x = QPoly.x()
    assert resultant(x, QPoly([k * b, 0, k])) == k * b
    f = x**3 - 2 * x + 5
    assert resultant(f, f) == 0
    # q and p of phi_0 = (1 + 3x^2)/(1 - 4x - x^2)
    assert resultant(QPoly([1, -4, -1]), QPoly([1, 0, 3])) == 64


def test_resultant_against_sylvester():
    rng = random.Random(5)
    for _ in range(150):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(1, 7))] + [rng.choice([-3, -1, 1, 2])]
        g = [rng.randint(-9, 9) for _ in range(rng.randint(1, 7))] + [rng.choice([-2, 1, 5])]
        assert int_resultant(f, g) == sylvester_resultant(f, g)
        assert resultant(QPoly(f), QPoly(g)) == sylvester_resultant(f, g)


def test_resultant_rational_coefficients():
    f = [Fraction(1, 2), 3, Fraction(-2, 3)]
    g = [Fraction(5, 7), Fraction(1, 3)]
    assert resultant(QPoly(f), QPoly(g)) == sylvester_resultant(f, g)


def test_resultant_zero_poly():
    with pytest.raises(PreconditionError):
        resultant(QPoly([]), QPoly.x())


def test_disc_direct_examples():
    assert disc_direct(QPoly([1, 0, 1])) == -4
    assert disc_direct(QPoly([1, 0, 3, 0, 1])) == 400
    assert disc_direct(QPoly([5, -5, 1])) == 5
    with pytest.raises(PreconditionError):
        disc_direct(QPoly([3]))


def test_disc_direct_against_sympy():
    rng = random.Random(8)
    t = sympy.symbols("t")
    for _ in range(60):
        cs = [rng.randint(-20, 20) for _ in range(rng.randint(2, 7))] + [rng.choice([-4, 1, 3])]
        want = sympy.discriminant(sum(c * t**i for i, c in enumerate(cs)), t)
        assert disc_direct(QPoly(cs)) == Fraction(int(want))


@given(
    st.lists(st.integers(-6, 6), min_size=1, max_size=4),
    st.lists(st.integers(-6, 6), min_size=1, max_size=4),
)
def test_disc_of_product(fc, gc):
    f, g = QPoly(fc + [1]), QPoly(gc + [1])
    r = resultant(f, g)
    if r == 0:
        return
    assert disc_direct(f * g) == disc_direct(f) * disc_direct(g) * r**2


def test_product_over_roots():
    x = QPoly.x()
    f = (x - 2) * (x + 3)
    g = x**2 + 1
    assert product_over_roots(f, g) == (4 + 1) * (9 + 1)


# -- polynomials over GF(p) ------------------------------------------------------


def _irreducible_brute(f, p):
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    n = gfp.deg(f)
    for d in range(1, n // 2 + 1):
        for tail in product(range(p), repeat=d):
            g = list(tail) + [1]
            if not gfp.rem(f, g, p):
                return False
    return True


def _random_irreducible(rng, p, d):
    while True:
        f = [rng.randrange(p) for _ in range(d)] + [1]
        if _irreducible_brute(f, p):
            return f


def test_ddf_against_known_factorizations():
    """Products of brute-force certified irreducibles, degree <= 64, p <= 97."""
    rng = random.Random(2024)
    for case in range(110):
        p = rng.choice([3, 5, 7, 11, 13, 31, 97])
        max_d = 4 if p <= 13 else 2
        f, want, total = [1], {}, 0
        while True:
            d = rng.randint(1, max_d)
            if total + d > 64 or (total >= 8 and rng.random() < 0.2):
                break
            g = _random_irreducible(rng, p, d)
            e = 1 if rng.random() < 0.8 else 2
            for _ in range(e):
                f = gfp.mul(f, g, p)
            want[d] = want.get(d, 0) + e
            total += d * e
        if total == 0:
            continue
        f = gfp.scale(f, rng.randrange(1, p), p)
        assert gfp.factor_degrees(f, p) == dict(sorted(want.items())), (case, p)
        assert gfp.has_root(f, p) == (1 in want)


def test_ddf_against_sympy_random():
    rng = random.Random(99)
    t = sympy.symbols("t")
    for _ in range(100):
        p = rng.choice([2, 3, 5, 7, 13, 47, 97])
        n = rng.randint(1, 64)
        cs = [rng.randrange(p) for _ in range(n)] + [1]
        _, facs = sympy.Poly(list(reversed(cs)), t, modulus=p).factor_list()
        want = {}
        for g, e in facs:
            want[g.degree()] = want.get(g.degree(), 0) + e
        assert gfp.factor_degrees(cs, p) == dict(sorted(want.items()))


def test_has_root_against_brute_force():
    rng = random.Random(4)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 23])
        cs = [rng.randrange(p) for _ in range(rng.randint(1, 10))] + [1]
        assert gfp.has_root(cs, p) == any(gfp.evaluate(cs, x, p) == 0 for x in range(p))


def test_squarefree_decomposition_char_p():
    p = 3
    # (x + 1)^3 (x^2 + 1)^2 over GF(3): the cube has zero derivative
    f = gfp.mul(gfp.mul([1, 1], gfp.mul([1, 1], [1, 1], p), p), gfp.mul([1, 0, 1], [1, 0, 1], p), p)
    parts = gfp.squarefree_decomposition(f, p)
    assert parts == [([1, 0, 1], 2), ([1, 1], 3)]
    assert gfp.factor_degrees(f, p) == {1: 3, 2: 2}

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heisenrep.cyclo import (
    CycNum,
    CycloError,
    cyclotomic_poly,
    euler_phi,
    gauss_sum_quadratic,
    in_subfield,
    legendre,
    root_of_unity,
    sqrt_prime,
)

ODD_PRIMES_TO_50 = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def sympy_reduce(coeffs, n):
    """Independent oracle: polynomial arithmetic over Q via sympy."""
    import sympy

    x = sympy.symbols("x")
    poly = sum(sympy.Rational(c) * x ** i for i, c in enumerate(coeffs))
    phi = sympy.cyclotomic_poly(n, x)
    rem = sympy.rem(sympy.expand(poly), phi, x)
    return sympy.Poly(rem, x).all_coeffs()[::-1]


def test_zeta3_sum_is_minus_one():
    z = root_of_unity(3)
    assert z + z ** 2 == -1


def test_zeta12_inverse_pair():
    assert root_of_unity(12, 1) * root_of_unity(12, 11) == 1


def test_one_plus_two_zeta3_squared_matches_polynomial_oracle():
    z = root_of_unity(3)
    value = (1 + 2 * z) ** 2
    # oracle: expand (1 + 2x)^2 and reduce mod the third cyclotomic polynomial
    oracle = sympy_reduce([1, 4, 4], 3)
    expect = CycNum(3, [int(c) for c in (oracle + [0] * 2)[:2]])
    assert value == expect
    assert value == -3


def test_root_of_unity_order_and_identity():
    z = root_of_unity(3)
    assert z ** 3 == 1
    assert root_of_unity(12, 3) ** 2 == -1
    assert root_of_unity(1, 5) == 1
    assert root_of_unity(7, 0) == 1


def test_primitivity_up_to_100():
    for n in range(1, 101):
        z = root_of_unity(n)
        acc = z
        for k in range(1, n):
            assert acc != 1, (n, k)
            acc = acc * z
        assert acc == 1, n


def test_sqrt_prime_squares():
    for p in ODD_PRIMES_TO_50:
        s = sqrt_prime(p)
        assert s * s == p
        assert s.n in (p, 4 * p)


def test_sqrt_prime_rejects_bad_input():
    with pytest.raises(CycloError):
        sqrt_prime(2)
    with pytest.raises(CycloError):
        sqrt_prime(9)


def test_sqrt5_by_direct_expansion():
    # oracle: g_5 = 1 + 2 z5 + 2 z5^4, squared by hand via cyc arithmetic
    z = root_of_unity(5)
    g5 = 1 + 2 * z + 2 * z ** 4
    assert gauss_sum_quadratic(5) == g5
    assert g5 * g5 == 5
    assert sqrt_prime(5) == g5


def test_sqrt3_equals_z12_plus_inverse():
    lhs = sqrt_prime(3)
    rhs = root_of_unity(12) + root_of_unity(12, 11)
    assert lhs == rhs
    assert rhs * rhs == 3


def test_gauss_sum_examples():
    g3 = gauss_sum_quadratic(3)
    assert g3 == 1 + 2 * root_of_unity(3)
    assert g3 * g3 == -3
    for p in ODD_PRIMES_TO_50:
        g = gauss_sum_quadratic(p)
        assert g * g == (p if p % 4 == 1 else -p)
        assert g ** 4 == p * p


def test_conj_galois():
    z = root_of_unity(3)
    assert z.conj() == root_of_unity(3, 2)
    assert sqrt_prime(5).conj() == sqrt_prime(5)
    rng = random.Random(0)
    for _ in range(25):
        n = rng.choice([3, 4, 5, 12, 15, 20])
        num = [rng.randrange(-5, 6) for _ in range(euler_phi(n))]
        a = CycNum(n, num, rng.randrange(1, 5))
        assert a.conj().conj() == a


def test_descend_examples():
    down = root_of_unity(12, 4).descend(3)
    assert down is not None and down.n == 3 and down == root_of_unity(3)
    assert sqrt_prime(3).descend(3) is None
    r = CycNum.rational(Fraction(-7, 5), 12)
    one = r.descend(1)
    assert one is not None and one.as_rational() == Fraction(-7, 5)


def test_descend_lift_roundtrip():
    rng = random.Random(1)
    for _ in range(30):
        m = rng.choice([1, 3, 4, 6])
        n = m * rng.choice([2, 3, 5])
        num = [rng.randrange(-4, 5) for _ in range(euler_phi(m))]
        a = CycNum(m, num, rng.randrange(1, 4))
        lifted = a.lift(n)
        back = lifted.descend(m)
        assert back is not None and back == a


def test_division_errors():
    with pytest.raises(ZeroDivisionError):
        root_of_unity(3) / CycNum.zero(3)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_field_axioms(data):
    n = data.draw(st.sampled_from([3, 4, 5, 12]))
    phi = euler_phi(n)
    nums = st.lists(st.integers(-8, 8), min_size=phi, max_size=phi)
    dens = st.integers(1, 6)
    a = CycNum(n, data.draw(nums), data.draw(dens))
    b = CycNum(n, data.draw(nums), data.draw(dens))
    c = CycNum(n, data.draw(nums), data.draw(dens))
    assert (a + b) + c == a + (b + c)
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if not b.is_zero():
        assert (a / b) * b == a


def test_multiplication_against_sympy_oracle():
    rng = random.Random(7)
    import sympy

    x = sympy.symbols("x")
    for _ in range(10):
        n = rng.choice([5, 12])
        phi = euler_phi(n)
        av = [rng.randrange(-6, 7) for _ in range(phi)]
        bv = [rng.randrange(-6, 7) for _ in range(phi)]
        mine = CycNum(n, av) * CycNum(n, bv)
        pa = sum(c * x ** i for i, c in enumerate(av))
        pb = sum(c * x ** i for i, c in enumerate(bv))
        rem = sympy.rem(sympy.expand(pa * pb), sympy.cyclotomic_poly(n, x), x)
        coeffs = [0] * phi
        for i, c in enumerate(sympy.Poly(rem, x).all_coeffs()[::-1]):
            coeffs[i] = int(c)
        assert mine == CycNum(n, coeffs)


def test_cyclotomic_poly_values():
    assert cyclotomic_poly(1) == [-1, 1]
    assert cyclotomic_poly(3) == [1, 1, 1]
    assert cyclotomic_poly(4) == [1, 0, 1]
    assert cyclotomic_poly(12) == [1, 0, -1, 0, 1]


def test_serialization_roundtrip():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.choice([3, 12, 15])
        a = CycNum(n, [rng.randrange(-9, 10) for _ in range(euler_phi(n))],
                   rng.randrange(1, 8))
        assert CycNum.from_json(a.to_json()) == a


def test_in_subfield():
    s3 = sqrt_prime(3)
    z3 = root_of_unity(3)
    assert in_subfield(s3, [s3])
    assert in_subfield(z3, [root_of_unity(3)])
    assert not in_subfield(s3, [z3])
    assert in_subfield(s3 * z3, [z3, s3])


def test_legendre():
    assert legendre(2, 3) == -1
    assert legendre(4, 5) == 1
    assert legendre(0, 7) == 0
    assert legendre(3, 7) == -1

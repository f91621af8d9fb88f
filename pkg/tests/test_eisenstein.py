from fractions import Fraction

import pytest

from hilbertring.classical import eisenstein_level1, kronecker
from hilbertring.hilbert_eisenstein import EisensteinSpec, restrict_eisenstein, sigma_ideal, zeta_K_at
from hilbertring.quadfield import QuadField

from oracles import ideal_divisor_norms


def generalized_bernoulli_2(p):
    # B_{2,chi} = p * sum_a chi(a) B_2(a/p), B_2(x) = x^2 - x + 1/6
    total = Fraction(0)
    for a in range(1, p + 1):
        x = Fraction(a, p)
        total += kronecker(a, p) * (x * x - x + Fraction(1, 6))
    return p * total


@pytest.mark.parametrize("p", [5, 13, 29, 37])
def test_zeta_at_minus_one(p):
    want = Fraction(-1, 12) * (-generalized_bernoulli_2(p) / 2)
    assert zeta_K_at(QuadField(p), 2) == want


def test_zeta_of_q_sqrt5():
    assert zeta_K_at(QuadField(5), 2) == Fraction(1, 30)
    with pytest.raises(ValueError):
        zeta_K_at(QuadField(5), 3)


def codifferent_sample(K, count):
    out = []
    for y in range(-6, 7):
        for x in range(-12, 13):
            if (x - y) % 2:
                continue
            mu = K.from_half(x, y)
            if mu.norm() != 0:
                out.append(mu / K.sqrt_p)
    return out[:: max(1, len(out) // count)]


@pytest.mark.parametrize("p", [5, 29, 37])
def test_sigma_ideal_matches_divisor_search(p):
    K = QuadField(p)
    for nu in codifferent_sample(K, 40):
        norms = ideal_divisor_norms(nu)
        for k in (2, 4):
            assert sigma_ideal(nu, k, K) == sum(d ** (k - 1) for d in norms), nu


@pytest.mark.parametrize("p", [5, 29, 37])
def test_diagonal_restrictions_are_level_one(p):
    K = QuadField(p)
    prec = 12
    e4 = eisenstein_level1(4, prec)
    assert restrict_eisenstein(EisensteinSpec(K, 2), K(1), prec) == e4
    assert restrict_eisenstein(EisensteinSpec(K, 4), K(1), prec) == e4 * e4


def test_restriction_rejects_non_positive_points():
    K = QuadField(29)
    with pytest.raises(ValueError):
        restrict_eisenstein(EisensteinSpec(K, 2), K.from_half(5, 1).conj(), 5)

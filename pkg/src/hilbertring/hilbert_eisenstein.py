"""
Hecke Eisenstein series for K = Q(sqrt p) and their restrictions to curves.

    E_k = 1 + 4/zeta_K(1-k) * sum_{nu >> 0 in O_K^#} sigma_{k-1}(nu sqrt(p) O_K) q1^nu q2^nu'

Restricted along (lam tau, lam' tau) the coefficient of q^n collects every
nu with Tr(lam nu) = n.  Since K has class number one the ideal divisor sum
only depends on how each rational prime splits and, for split primes, on
how the exponent of the norm divides between the two conjugate primes.
"""

from dataclasses import dataclass
from fractions import Fraction

from .classical import DirichletChar, bernoulli, l_value, prime_factors
from .qseries import FracQSeries
from .quadfield import FieldElement, QuadField, _slice_coords

__all__ = [
    "EisensteinSpec",
    "restrict_eisenstein",
    "sigma_ideal",
    "zeta_K_at",
]


def zeta_K_at(field, k):
    """zeta_K(1 - k) = zeta(1 - k) L(1 - k, chi_p) for even k >= 2."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and at least 2")
    if not isinstance(field, QuadField):
        raise TypeError("zeta_K_at needs a real quadratic field")
    zeta = -bernoulli(k) / k
    return zeta * l_value(k, DirichletChar.quadratic(field.p))


@dataclass(frozen=True)
class EisensteinSpec:
    field: QuadField
    k: int

    @property
    def zeta_value(self):
        return zeta_K_at(self.field, self.k)


def _omega_coords(mu):
    """(s, t) with mu = s + t omega, omega = (1 + sqrt p)/2."""
    t = 2 * mu.b
    s = mu.a - t / 2
    if s.denominator != 1 or t.denominator != 1:
        raise ValueError(f"{mu} is not integral")
    return int(s), int(t)


def _valuation(n, q):
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def _geometric(q, top, step):
    return sum(q ** (step * i) for i in range(top + 1))


def sigma_ideal(nu, k, field=None):
    """sigma_{k-1} of the ideal nu sqrt(p) O_K, for nonzero nu in the codifferent."""
    field = field or nu.field
    p = field.p
    mu = nu * field.sqrt_p
    if mu == field(0):
        raise ValueError("nu must be nonzero")
    s, t = _omega_coords(mu)
    N = abs(int(mu.norm()))
    chi = DirichletChar.quadratic(p)
    w = k - 1
    total = 1
    for q, e in prime_factors(N).items():
        if q == p:
            total *= _geometric(q, e, w)
        elif chi(q) == -1:
            total *= _geometric(q, e // 2, 2 * w)
        else:
            # strip the rational content q^c, then the rest lies in one of the two primes over q
            c = min(_valuation(s, q) if s else e, _valuation(t, q) if t else e)
            total *= _geometric(q, e - c, w) * _geometric(q, c, w)
    return total


def restrict_eisenstein(spec, lam, prec):
    """E_k(lam tau, lam' tau) below q^prec."""
    if not isinstance(lam, FieldElement):
        raise TypeError("lam must be a FieldElement")
    if not lam.is_totally_positive():
        raise ValueError("lam must be totally positive")
    field = spec.field
    scale = Fraction(4) / spec.zeta_value
    coeffs = {0: Fraction(1)}
    for n in range(1, int(prec)):
        total = 0
        for _, nu in _slice_coords(lam, n, 1):
            total += sigma_ideal(nu, spec.k, field)
        if total:
            coeffs[n] = scale * total
    return FracQSeries(coeffs, prec=prec)

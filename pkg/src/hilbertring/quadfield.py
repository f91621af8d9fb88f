"""
Exact arithmetic in K = Q(sqrt p) for a prime p = 1 mod 4, and the lattice
enumerations behind every restriction computation.

Elements of the codifferent O_K^# = O_K / sqrt(p) are addressed by integer
pairs (x, y) with x = y mod 2 through mu = sqrt(p) nu = (x + y sqrt p)/2.
In these coordinates nu = y/2 + (x/2p) sqrt p, and for lambda = (u + w sqrt p)/2

    Tr(lambda nu) = (u y + w x) / 2,     p N(nu) = (p y^2 - x^2) / 4.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt, sqrt

__all__ = [
    "FieldElement",
    "QuadField",
    "enumerate_trace_slice",
    "separating_walls",
    "slice_pnorm_counts",
    "weyl_chamber_check",
]


class QuadField:
    """Q(sqrt p) with p = 1 mod 4 prime (class number one is assumed, and checked for shipped p)."""

    KNOWN_CLASS_NUMBER_ONE = frozenset({5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97})

    def __init__(self, p):
        if p % 4 != 1 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
            raise ValueError("p must be a prime congruent to 1 mod 4")
        self.p = p
        self.class_number_one = p in self.KNOWN_CLASS_NUMBER_ONE

    def __repr__(self):
        return f"QuadField({self.p})"

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.p == self.p

    def __hash__(self):
        return hash(("QuadField", self.p))

    def __call__(self, a, b=0):
        return FieldElement(Fraction(a), Fraction(b), self)

    def from_half(self, x, y):
        """(x + y sqrt p) / 2."""
        return FieldElement(Fraction(x, 2), Fraction(y, 2), self)

    @cached_property
    def fundamental_unit(self):
        """Smallest unit > 1, found by a Pell search x^2 - p y^2 = +-4 over half-integers."""
        y = 1
        while True:
            for sign in (-4, 4):
                x2 = self.p * y * y + sign
                x = isqrt(x2) if x2 >= 0 else -1
                if x >= 0 and x * x == x2:
                    return self.from_half(x, y)
            y += 1

    @property
    def sqrt_p(self):
        return FieldElement(Fraction(0), Fraction(1), self)

    def is_norm(self, n):
        """True iff n = N(a) for some a in O_K (class number one: principal ideals are everything)."""
        # x^2 - p y^2 = 4n with x = y mod 2; enough to search y up to the unit's size
        eps = self.fundamental_unit
        ybound = int(2 * sqrt(abs(n)) * float(eps.a + abs(eps.b) * sqrt(self.p))) + 2
        for y in range(0, ybound + 1):
            x2 = 4 * n + self.p * y * y
            if x2 < 0:
                continue
            x = isqrt(x2)
            if x * x == x2 and (x - y) % 2 == 0:
                return True
        return False


@dataclass(frozen=True)
class FieldElement:
    """a + b sqrt p with rational a, b."""

    a: Fraction
    b: Fraction
    field: QuadField

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return FieldElement(Fraction(other), Fraction(0), self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return FieldElement(self.a * o.a + p * self.b * o.b, self.a * o.b + self.b * o.a, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        return self * FieldElement(o.a / n, -o.b / n, self.field)

    def __pow__(self, e):
        out = self.field(1)
        base = self if e >= 0 else self.field(1) / self
        for _ in range(abs(e)):
            out = out * base
        return out

    def conj(self):
        return FieldElement(self.a, -self.b, self.field)

    def norm(self):
        return self.a * self.a - self.field.p * self.b * self.b

    def trace(self):
        return 2 * self.a

    def is_positive(self):
        """a + b sqrt p > 0, decided exactly."""
        a, b, p = self.a, self.b, self.field.p
        if a >= 0 and b >= 0:
            return a > 0 or b > 0
        if a <= 0 and b <= 0:
            return False
        if a > 0:
            return a * a > p * b * b
        return p * b * b > a * a

    def is_totally_positive(self):
        return self.is_positive() and self.conj().is_positive()

    def is_integral(self):
        x, y = 2 * self.a, 2 * self.b
        return x.denominator == 1 and y.denominator == 1 and (x - y) % 2 == 0

    def in_codifferent(self):
        return (self * self.field.sqrt_p).is_integral()

    def half_coords(self):
        """(x, y) with self = (x + y sqrt p)/2."""
        return 2 * self.a, 2 * self.b

    def codifferent_coords(self):
        """(x, y) with sqrt(p) * self = (x + y sqrt p)/2."""
        return (self * self.field.sqrt_p).half_coords()

    def __float__(self):
        return float(self.a) + float(self.b) * sqrt(self.field.p)

    def __repr__(self):
        x, y = self.half_coords()
        if x.denominator == 1 and y.denominator == 1 and (x % 2 or y % 2):
            return f"({_fmt(x)}{_surd(y, self.field.p)})/2"
        return f"{_fmt(self.a)}{_surd(self.b, self.field.p)}" if self.b else _fmt(self.a)


def _fmt(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _surd(x, p):
    sign = "+" if x >= 0 else "-"
    x = abs(x)
    return f"{sign}sqrt{p}" if x == 1 else f"{sign}{_fmt(x)}*sqrt{p}"


def _isqrt_ceil(n):
    r = isqrt(n)
    return r if r * r == n else r + 1


def enumerate_trace_slice(lam, n, min_pnorm, field=None):
    """All nu in O_K^# with Tr(lam nu) = n and p N(nu) >= min_pnorm.

    Returned as FieldElements sorted by p N(nu) then by the codifferent coordinate.
    """
    return [field_nu for _, field_nu in _slice_coords(lam, n, min_pnorm)]


def slice_pnorms(lam, n, min_pnorm):
    """p N(nu) (an integer) for each nu in the trace slice, as a list."""
    return [pn for pn, _ in _slice_coords(lam, n, min_pnorm)]


def _slice_coords(lam, n, min_pnorm):
    K = lam.field
    p = K.p
    if not lam.is_totally_positive():
        raise ValueError("lambda must be totally positive")
    u, w = lam.half_coords()
    n = Fraction(n)
    # u y + w x = 2n with x = y mod 2 and p y^2 - x^2 >= 4 m; lam in O_K so u, w integers
    if u.denominator != 1 or w.denominator != 1:
        raise ValueError("lambda must be integral")
    u, w = int(u), int(w)
    two_n = 2 * n
    if two_n.denominator != 1:
        return []
    two_n = int(two_n)
    m = Fraction(min_pnorm)
    ell = Fraction(u * u - p * w * w, 4)
    out = []
    if w == 0:
        if two_n % u:
            return []
        y = two_n // u
        xmax2 = p * y * y - 4 * m
        if xmax2 < 0:
            return []
        xmax = isqrt(int(xmax2.__floor__()))
        xs = range(-xmax, xmax + 1)
        pairs = [(x, y) for x in xs]
    else:
        # y ranges over the roots of ell y^2 - n u y + n^2 + m w^2 <= 0
        disc = w * w * (p * n * n - 4 * ell * m)
        if disc < 0:
            return []
        r = isqrt(int(disc.__floor__())) + 1
        lo = ((n * u - r) / (2 * ell)).__floor__() - 1
        hi = ((n * u + r) / (2 * ell)).__ceil__() + 1
        pairs = []
        for y in range(lo, hi + 1):
            num = two_n - u * y
            if num % w:
                continue
            pairs.append((num // w, y))
    for x, y in pairs:
        if (x - y) % 2:
            continue
        pn = Fraction(p * y * y - x * x, 4)
        if pn < m:
            continue
        out.append((pn, x, y))
    out.sort()
    return [(int(pn), K.from_half(x, y) / K.sqrt_p) for pn, x, y in out]


def slice_pnorm_counts(lam, n, min_pnorm):
    """{p N(nu): count} over the trace slice, avoiding FieldElement construction."""
    counts = {}
    K = lam.field
    p = K.p
    u, w = (int(c) for c in lam.half_coords())
    two_n = int(2 * n)
    ell = (u * u - p * w * w) // 4
    m = min_pnorm
    if w == 0:
        if two_n % u:
            return counts
        y = two_n // u
        xmax2 = p * y * y - 4 * m
        if xmax2 < 0:
            return counts
        xmax = isqrt(xmax2)
        for x in range(-xmax, xmax + 1):
            if (x - y) % 2 == 0:
                pn = (p * y * y - x * x) // 4
                counts[pn] = counts.get(pn, 0) + 1
        return counts
    disc = w * w * (p * n * n - 4 * ell * m)
    if disc < 0:
        return counts
    r = isqrt(disc) + 1
    lo = (n * u - r) // (2 * ell) - 1
    hi = -((-(n * u + r)) // (2 * ell)) + 1
    for y in range(lo, hi + 1):
        num = two_n - u * y
        if num % w:
            continue
        x = num // w
        if (x - y) % 2:
            continue
        pn4 = p * y * y - x * x
        if pn4 < 4 * m:
            continue
        pn = pn4 // 4
        counts[pn] = counts.get(pn, 0) + 1
    return counts


def _pole_orders(pp):
    """Pole orders n > 0 (c(-n) != 0) from a PrincipalPart, a dict, or an iterable."""
    if hasattr(pp, "poles"):
        return [n for n, c in pp.poles if c]
    if isinstance(pp, dict):
        return [n for n, c in pp.items() if c]
    return list(pp)


def separating_walls(lam_ref, pp, lam_test):
    """Walls {Tr(lam nu) = 0}, p N(nu) = -n for a pole order n, that separate or touch the two points.

    Each wall is reported once as (n, nu) with nu normalized so that Tr(lam_ref nu) >= 0.
    """
    K = lam_ref.field
    p = K.p
    walls = []
    for n in sorted(set(_pole_orders(pp))):
        # nu nu' = -n/p; a sign change of Tr(lam nu) between the endpoints puts nu^2 between
        # lam'n/(lam p) for the two endpoints, which bounds |nu| and |nu'|
        ratios = [float(l.conj()) * n / (float(l) * p) for l in (lam_ref, lam_test)]
        nu_max = sqrt(max(ratios)) * 1.01 + 1e-9
        nu_min = sqrt(min(ratios)) / 1.01
        bound = max(nu_max, n / (p * nu_min))
        ymax = int(2 * bound) + 2
        seen = set()
        for y in range(-ymax, ymax + 1):
            x2 = 4 * n + p * y * y
            x = isqrt(x2)
            if x * x != x2 or (x - y) % 2:
                continue
            for xx in {x, -x}:
                nu = K.from_half(xx, y) / K.sqrt_p
                t_ref = (lam_ref * nu).trace()
                t_test = (lam_test * nu).trace()
                if t_ref < 0 or (t_ref == 0 and t_test < 0):
                    nu, t_ref, t_test = -nu, -t_ref, -t_test
                if t_test > 0 and t_ref > 0:
                    continue
                key = nu.half_coords()
                if key not in seen:
                    seen.add(key)
                    walls.append((n, nu))
    return walls


def weyl_chamber_check(lam_ref, pp, lam_test):
    """True iff no wall of the principal part pp separates or contains lam_ref, lam_test."""
    if not (lam_ref.is_totally_positive() and lam_test.is_totally_positive()):
        raise ValueError("both points must be totally positive")
    return not separating_walls(lam_ref, pp, lam_test)

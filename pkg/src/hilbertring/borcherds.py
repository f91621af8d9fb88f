"""
Borcherds products: Gamma0(l) lifts of half-integral plus-space forms and
restrictions of Hilbert modular Borcherds products to the curves
{(lam tau, lam' tau)}.

The restriction along a totally positive lam in a Weyl chamber W is

    q^{Tr(lam h_W)} prod_{n >= 1} (1 - q^n)^{b~(n^2)},
    b~(n^2) = sum over nu in O_K^# with Tr(lam nu) = n of c~(p N(nu)),

and for N(lam) = l equal to 1 or a prime it coincides with the Gamma0(l) lift
of the theta contraction of F.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .classical import gamma0_index, prime_factors
from .plus_space import (
    PlusForm,
    PrecisionTooLow,
    PrincipalPart,
    SupportViolation,
    check_half_integral_support,
    delta,
    realize,
    tilde_coeff,
)
from .qseries import FracQSeries, product_expansion
from .quadfield import QuadField, separating_walls, slice_pnorm_counts, weyl_chamber_check

__all__ = [
    "ChamberViolation",
    "HeegnerClassCount",
    "MissingLeadingExponent",
    "ProductSpec",
    "UnresolvableLeadingExponent",
    "divisor_of",
    "effective_order",
    "gamma0_lift",
    "heegner_orders",
    "is_cusp_form",
    "is_holomorphic",
    "lattice_exponents",
    "resolve_leading",
    "restrict_product",
    "theta_contract",
    "valence_leading",
    "weyl_vector",
]


class ChamberViolation(ValueError):
    pass


class MissingLeadingExponent(ValueError):
    pass


class UnresolvableLeadingExponent(ValueError):
    pass


def _principal(obj):
    return obj.principal if isinstance(obj, (PlusForm, ProductSpec)) else obj


# -- divisors ----------------------------------------------------------------------

def divisor_of(obj):
    """{n: c~(-n)}: the multiplicity of T_n in the divisor of the Hilbert product."""
    pp = _principal(obj)
    return {n: c * delta(pp.p, n) for n, c in pp.poles}


def effective_order(obj, n):
    """Order of the product along T_n: sum_{m >= 1} c~(-n m^2)."""
    div = divisor_of(obj)
    total = Fraction(0)
    m = 1
    top = max(div, default=0)
    while n * m * m <= top:
        total += div.get(n * m * m, 0)
        m += 1
    return total


def is_holomorphic(obj):
    div = divisor_of(obj)
    return all(
        (o := effective_order(obj, n)) >= 0 and o.denominator == 1
        for n in div
    )


def is_cusp_form(obj, field=None):
    """Some pole order is a norm from O_K (sufficient for class number one)."""
    pp = _principal(obj)
    K = field or QuadField(pp.p)
    return any(c and K.is_norm(n) for n, c in pp.poles)


# -- product specification ---------------------------------------------------------

@dataclass
class ProductSpec:
    """A Hilbert modular Borcherds product Psi_F, given by the principal part of F."""

    name: str
    principal: PrincipalPart
    constant: Fraction
    chamber_ref: object = None
    leading: dict = field(default_factory=dict)
    weyl_vector: object = None
    _forms: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return QuadField(self.principal.p)

    @property
    def weight(self):
        return Fraction(self.constant) / 2

    @property
    def divisor(self):
        return divisor_of(self.principal)

    def form(self, prec):
        """The input form F, realized below q^prec (memoized, largest precision wins)."""
        have = max((P for P in self._forms), default=-1)
        if have >= prec:
            return self._forms[have]
        F = realize(self.principal, prec)
        if self.constant is not None and F.constant_term != self.constant:
            raise ValueError(f"{self.name}: constant term {F.constant_term} differs from {self.constant}")
        self._forms = {prec: F}
        return F

    def coefficient_table(self, top):
        """c~(n) for -max_pole <= n <= top as a dict."""
        F = self.form(top + 1)
        return {n: tilde_coeff(F, n) for n in range(-self.principal.max_pole, top + 1)}


# -- theta contraction and lifts -------------------------------------------------

def theta_contract(F, ell, prec, halve=None):
    """Half-integral input f = sum b(m) q^m, b(m) = sum_{r: mp - r^2 = 0 (4l)} c~((mp - r^2)/(4l)).

    For l = p the coefficients of F are used without halving.  Known below q^prec.
    """
    p = F.p
    halve = (ell != p) if halve is None else halve
    coef = (lambda n: tilde_coeff(F, n)) if halve else (lambda n: F.series[n])
    m_min = -((F.principal.max_pole * 4 * ell) // p) - 1
    need = (prec * p) // (4 * ell) + 1
    if F.prec is not None and need > F.prec:
        raise PrecisionTooLow(f"contraction below q^{prec} needs F below q^{need}")
    out = {}
    for m in range(m_min, prec):
        total = Fraction(0)
        r = 0
        while m * p - r * r >= -4 * ell * F.principal.max_pole:
            num = m * p - r * r
            if num % (4 * ell) == 0:
                c = coef(num // (4 * ell))
                total += c if r == 0 else 2 * c
            r += 1
        if total:
            out[m] = total
    f = FracQSeries(out, prec=prec)
    check_half_integral_support(f, ell)
    return f


def lift_exponents(f, ell, top):
    """c~_f(n^2) = b(n^2) delta_l(n) for 1 <= n < top."""
    return {n: f[n * n] * delta(ell, n) for n in range(1, top) if f[n * n]}


def gamma0_lift(f, ell, A, prec):
    """q^A prod (1 - q^n)^{c~_f(n^2)}, known below q^{A + prec}... truncated at q^prec."""
    A = Fraction(A)
    rel = prec - A
    top = int(rel.__ceil__())
    if top <= 0:
        return FracQSeries.zero(prec)
    if f.prec is not None and (top - 1) ** 2 >= f.prec:
        raise PrecisionTooLow(f"lift below q^{prec} needs f below q^{(top - 1) ** 2 + 1}")
    exps = lift_exponents(f, ell, top)
    return product_expansion(exps, top, lead=A).truncate(prec)


# -- restriction by lattice enumeration -------------------------------------------------

def lattice_exponents(spec_or_form, lam, top):
    """b~(n^2) = sum_{Tr(lam nu) = n} c~(p N(nu)) for 1 <= n < top."""
    lam_norm = lam.norm()
    p = lam.field.p
    max_pn = (p * (top - 1) ** 2) // (4 * lam_norm) + 1
    if isinstance(spec_or_form, ProductSpec):
        F = spec_or_form.form(int(max_pn) + 1)
        pp = spec_or_form.principal
    else:
        F = spec_or_form
        pp = F.principal
    table = {}
    out = {}
    for n in range(1, top):
        total = Fraction(0)
        for pn, count in slice_pnorm_counts(lam, n, -pp.max_pole).items():
            if pn not in table:
                table[pn] = tilde_coeff(F, pn)
            total += count * table[pn]
        if total:
            out[n] = total
    return out


def walls_through(pp, lam):
    """{nu primitive direction: [(m, c~)]} over nu with Tr(lam nu) = 0 and c(p N(nu)) != 0."""
    hits = {}
    for n, nu in separating_walls(lam, pp, lam):
        x, y = nu.codifferent_coords()
        g = gcd(int(x), int(y))
        # direction nu0 with nu = m nu0 and nu0 in O_K^#: test the largest admissible m
        for m in sorted({d for d in range(1, g + 1) if g % d == 0}, reverse=True):
            x0, y0 = int(x) // m, int(y) // m
            if (x0 - y0) % 2 == 0:
                break
        key = (x0, y0) if (x0, y0) > (-x0, -y0) else (-x0, -y0)
        hits.setdefault(key, []).append((m, tilde_coeff(pp, -n)))
    return hits


def restrict_product(spec, lam, prec, leading=None, strict_chamber=False):
    """Res_lam Psi_F below q^prec on the Weyl chamber containing lam.

    Returns the zero series when the curve lies in the divisor.  With
    strict_chamber the point must share the chamber of spec.chamber_ref.
    """
    pp = spec.principal
    walls = walls_through(pp, lam)
    scale = Fraction(1)
    for direction, terms in walls.items():
        total = sum(c for _, c in terms)
        if total > 0:
            return FracQSeries.zero(prec)
        if total < 0:
            raise ValueError(f"{spec.name} has a pole along the curve of {lam}")
        for m, c in terms:
            scale *= Fraction(m) ** c if c.denominator == 1 else 1
    if strict_chamber and spec.chamber_ref is not None:
        if not weyl_chamber_check(spec.chamber_ref, pp, lam):
            raise ChamberViolation(f"{lam} is not in the chamber of {spec.chamber_ref}")
    if leading is None:
        leading, _ = resolve_leading(spec, lam)
    A = Fraction(leading)
    top = int((prec - A).__ceil__())
    if top <= 0:
        return FracQSeries.zero(prec)
    exps = lattice_exponents(spec, lam, top)
    return (product_expansion(exps, top, lead=A) * scale).truncate(prec)


# -- Heegner points and the valence formula ----------------------------------------------

@dataclass(frozen=True)
class HeegnerClassCount:
    level: int
    discriminant: int
    count: int
    elliptic_weight: Fraction
    order: Fraction


def reduced_forms(D):
    """Reduced positive definite forms [a, b, c] of discriminant D < 0 (any content)."""
    if D >= 0 or D % 4 not in (0, 1):
        return []
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.append((a, b, c))
        a += 1
    return out


def _stabilizer(Q):
    """Generator of the stabilizer in PSL2(Z) of a reduced form, and its order."""
    a, b, c = Q
    if a == c and b == 0:
        return (lambda x, y: (-y, x)), 2
    if a == b == c:
        return (lambda x, y: (-y, x + y)), 3
    return None, 1


def _projective_line(ell):
    """Canonical representatives of P^1(Z/l)."""
    if ell == 1:
        return [(0, 0)]
    if _is_prime(ell):
        return [(x, 1) for x in range(ell)] + [(1, 0)]
    pts = {
        _normalize_point(x, y, ell)
        for x in range(ell)
        for y in range(ell)
        if gcd(gcd(x, y), ell) == 1
    }
    return sorted(pts)


def _normalize_point(x, y, ell):
    if ell == 1:
        return (0, 0)
    x, y = x % ell, y % ell
    if _is_prime(ell):
        if y:
            return ((x * pow(y, -1, ell)) % ell, 1)
        return (1, 0)
    return min(((t * x) % ell, (t * y) % ell) for t in range(1, ell) if gcd(t, ell) == 1)


def _point_orbits(Q, ell, roots):
    """Orbit sizes of the stabilizer of Q acting on a set of points of P^1(Z/l)."""
    gen, w = _stabilizer(Q)
    remaining = set(roots)
    sizes = []
    while remaining:
        pt = remaining.pop()
        size = 1
        if gen is not None:
            cur = pt
            while True:
                cur = _normalize_point(*gen(*cur), ell)
                if cur == pt:
                    break
                remaining.discard(cur)
                size += 1
        sizes.append(size)
    return sizes, w


def _heegner_points(D, ell):
    """Gamma0(l)-classes of points whose minimal form with l | a has discriminant D.

    Returns a list of elliptic weights 1/|stabilizer| (one per class).
    """
    P1 = _projective_line(ell)
    weights = []
    for Q in reduced_forms(D):
        a, b, c = Q
        if gcd(gcd(a, b), c) != 1:
            continue
        roots = [pt for pt in P1 if (a * pt[0] ** 2 + b * pt[0] * pt[1] + c * pt[1] ** 2) % ell == 0]
        sizes, w = _point_orbits(Q, ell, roots)
        weights += [Fraction(s, w) for s in sizes]
    if ell > 1 and D % (ell * ell) == 0:
        # l * Q0 with Q0 primitive of discriminant D / l^2 and l not dividing Q0(x, y)
        for Q in reduced_forms(D // (ell * ell)):
            a, b, c = Q
            if gcd(gcd(a, b), c) != 1:
                continue
            rest = [pt for pt in P1 if (a * pt[0] ** 2 + b * pt[0] * pt[1] + c * pt[1] ** 2) % ell != 0]
            sizes, w = _point_orbits(Q, ell, rest)
            weights += [Fraction(s, w) for s in sizes]
    return weights


def heegner_orders(f, ell):
    """Zeros and poles of the Gamma0(l) lift of f on the upper half plane, by discriminant."""
    negs = [int(n) for n, c in f.items() if n < 0 and c]
    if not negs:
        return []
    tc = {n: f[n] * delta(ell, n) for n in negs}
    candidates = set()
    for E in negs:
        m = 1
        while m * m <= -E:
            if E % (m * m) == 0 and (E // (m * m)) % 4 in (0, 1):
                candidates.add(E // (m * m))
            m += 1
    out = []
    for D in sorted(candidates, reverse=True):
        order = Fraction(0)
        m = 1
        while m * m * D >= min(negs):
            order += tc.get(m * m * D, 0)
            m += 1
        if not order:
            continue
        weights = _heegner_points(D, ell)
        if not weights:
            continue
        for w in sorted(set(weights)):
            out.append(HeegnerClassCount(ell, D, weights.count(w), w, order))
    return out


def number_of_cusps(ell):
    return sum(
        _euler_phi(gcd(d, ell // d)) for d in range(1, ell + 1) if ell % d == 0
    )


def _euler_phi(n):
    out = n
    for q in prime_factors(n):
        out = out // q * (q - 1)
    return out


def valence_leading(f, ell):
    """Order at infinity of the lift of f, from the valence formula (l = 1 or prime).

    The lift is an Atkin-Lehner eigenform, so it has the same order at both cusps.
    """
    if ell != 1 and len(prime_factors(ell)) != 1 or (ell > 1 and prime_factors(ell).get(ell) != 1):
        raise UnresolvableLeadingExponent(f"valence route needs l = 1 or prime, got {ell}")
    k = f[0]
    budget = k * gamma0_index(ell) / 12
    for h in heegner_orders(f, ell):
        budget -= h.order * h.count * h.elliptic_weight
    return budget / number_of_cusps(ell)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, isqrt(n) + 1))


def leading_at(spec, lam):
    """Valence-route leading exponent at a point of norm 1 or prime norm."""
    ell = int(lam.norm())
    F = spec.form(max(spec.principal.max_pole, lam.field.p // (4 * ell)) + 2)
    f = theta_contract(F, ell, 1)
    return valence_leading(f, ell)


def _prime_norm_points(spec, lam, how_many=3, search=60):
    """Totally positive integral points of norm 1 or prime in the chamber of lam."""
    K = lam.field
    pp = spec.principal
    found = []
    cands = []
    for u in range(1, search):
        for w in range(-u, u + 1):
            if (u - w) % 2:
                continue
            mu = K.from_half(u, w)
            if not mu.is_totally_positive():
                continue
            n = int(mu.norm())
            if n == 1 or _is_prime(n):
                cands.append((n, u, w, mu))
    cands.sort(key=lambda t: (t[0], t[1]))
    for n, _, _, mu in cands:
        if walls_through(pp, mu):
            continue
        if not weyl_chamber_check(lam, pp, mu):
            continue
        if any((mu / other).b == 0 for other in found):
            continue
        found.append(mu)
        if len(found) == how_many:
            break
    return found


def weyl_vector(spec, lam):
    """Weyl vector of the chamber containing lam, interpolated from two prime-norm points.

    A third point of prime norm in the chamber is used as a check.
    """
    pts = _prime_norm_points(spec, lam)
    if len(pts) < 2:
        raise UnresolvableLeadingExponent(f"{spec.name}: too few prime-norm points near {lam}")
    K = lam.field
    A = [leading_at(spec, mu) for mu in pts]
    # Tr(mu h) = 2 (mu.a h.a + p mu.b h.b): solve for (h.a, h.b)
    (a1, b1), (a2, b2) = [(m.a, m.b) for m in pts[:2]]
    det = 2 * (a1 * 2 * K.p * b2 - a2 * 2 * K.p * b1)
    ha = (A[0] * 2 * K.p * b2 - A[1] * 2 * K.p * b1) / det
    hb = (2 * a1 * A[1] - 2 * a2 * A[0]) / det
    h = K(ha, hb)
    for mu, a in zip(pts, A):
        if (mu * h).trace() != a:
            raise UnresolvableLeadingExponent(
                f"{spec.name}: leading exponents at {pts} are not linear in lambda"
            )
    return h, pts


def resolve_leading(spec, lam, tag=None):
    """(A, source): leading exponent of Res_lam Psi_F on the chamber containing lam.

    Sources, in order: configured values, the valence formula at norm 1 or a
    prime, and Weyl-vector interpolation from prime-norm points of the chamber.
    """
    if tag is not None and tag in spec.leading:
        return Fraction(spec.leading[tag]), "config"
    if spec.weyl_vector is not None and spec.chamber_ref is not None:
        if weyl_chamber_check(spec.chamber_ref, spec.principal, lam):
            return (lam * spec.weyl_vector).trace(), "config"
    ell = int(lam.norm())
    if ell == 1 or _is_prime(ell):
        return leading_at(spec, lam), "valence"
    try:
        h, _ = weyl_vector(spec, lam)
    except UnresolvableLeadingExponent:
        raise
    except (ValueError, PrecisionTooLow, SupportViolation) as exc:
        raise UnresolvableLeadingExponent(str(exc)) from exc
    return (lam * h).trace(), "weyl-interpolation"

"""
Weakly holomorphic forms of weight 0 for Gamma0(p) with character (./p) in the plus space.

A form F = sum c(n) q^n in the plus space has c(n) = 0 whenever chi(n) = -1.
It is pinned down by its principal part.  We realize F by clearing
denominators: with g0 = eta(p tau)^p / eta(tau) and D = Delta(p tau)^j,

    h = F * g0 * D  lies in  M_K(Gamma0(p)),  K = (p - 1)/2 + 12 j,

so F is found by solving a linear system over a spanning set of M_K.
"""

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from flint import fmpq, fmpq_mat

from .classical import (
    DirichletChar,
    _atoms,
    _evaluate_monomial,
    echelon_space,
    level_multiplier,
    sturm_bound,
    trivial_character_span,
)
from .qseries import FracQSeries, eta_product

__all__ = [
    "Obstructed",
    "PlusForm",
    "PrecisionTooLow",
    "PrincipalPart",
    "SupportViolation",
    "check_half_integral_support",
    "obstruction_pairing",
    "plus_cusp_forms",
    "realize",
    "realize_half_integral",
    "tilde_coeff",
]


class Obstructed(ValueError):
    pass


class PrecisionTooLow(ValueError):
    pass


class SupportViolation(ValueError):
    pass


def chi(p, n):
    return DirichletChar.quadratic(p)(n)


def delta(p, n):
    return Fraction(1) if n % p == 0 else Fraction(1, 2)


@dataclass(frozen=True)
class PrincipalPart:
    """Poles {n: c(-n)} of a plus-space form for (./p)."""

    p: int
    poles: tuple
    constant_known: object = None

    def __init__(self, p, poles, constant_known=None):
        items = tuple(sorted((int(n), Fraction(c)) for n, c in dict(poles).items() if c))
        for n, _ in items:
            if n <= 0:
                raise ValueError("pole orders must be positive")
            if chi(p, n) == -1:
                raise SupportViolation(f"q^-{n} is outside the plus space for p={p}")
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "poles", items)
        object.__setattr__(self, "constant_known", None if constant_known is None else Fraction(constant_known))

    def as_dict(self):
        return dict(self.poles)

    def coefficient(self, n):
        """c(n) for n < 0."""
        return self.as_dict().get(-n, Fraction(0))

    @property
    def max_pole(self):
        return max((n for n, _ in self.poles), default=0)

    def __add__(self, other):
        if self.p != other.p:
            raise ValueError("different fields")
        out = self.as_dict()
        for n, c in other.poles:
            out[n] = out.get(n, 0) + c
        return PrincipalPart(self.p, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return PrincipalPart(self.p, {n: c * s for n, c in self.poles})

    def to_dict(self):
        return {"p": self.p, "poles": {str(n): str(c) for n, c in self.poles}}


@dataclass
class PlusForm:
    p: int
    series: FracQSeries
    principal: PrincipalPart

    def coefficient(self, n):
        return self.series[n]

    @property
    def constant_term(self):
        return self.series[0]

    @property
    def prec(self):
        return self.series.prec

    def __add__(self, other):
        return PlusForm(self.p, self.series + other.series, self.principal + other.principal)

    def __sub__(self, other):
        return PlusForm(self.p, self.series - other.series, self.principal - other.principal)

    def scale(self, s):
        return PlusForm(self.p, self.series.scale(s), self.principal.scale(s))


def tilde_coeff(obj, n):
    """c~(n) = c(n) delta_p(n), with delta_p(n) = 1 if p | n and 1/2 otherwise."""
    if isinstance(obj, PlusForm):
        c = obj.series[n]
    elif n < 0:
        c = obj.coefficient(n)
    else:
        raise ValueError("a principal part only knows negative exponents")
    return c * delta(obj.p, n)


def plus_support_bound(p):
    """Sturm bound for weight 2 on Gamma0(p^2): the twist F - F(x)chi lives there."""
    return sturm_bound(2, p * p) + 1


@lru_cache(maxsize=8)
def plus_cusp_forms(p, prec=None):
    """Echelon basis of weight-2 cusp forms for (Gamma0(p), (./p)) in the plus space."""
    bound = plus_support_bound(p)
    prec = max(prec or 0, bound)
    space = echelon_space(p, 2, DirichletChar.quadratic(p), prec=prec)
    rows = [0] + [n for n in range(1, bound) if chi(p, n) == -1]
    kernel = _nullspace([[b[n] for b in space.basis] for n in rows], space.dimension)
    forms = [
        sum((b * x for b, x in zip(space.basis, vec) if x), FracQSeries.zero(prec))
        for vec in kernel
    ]
    return tuple(_echelon_series(forms))


def obstruction_pairing(pp, cusp):
    """sum_{n > 0} c~(-n) a(n)."""
    return sum((tilde_coeff(pp, -n) * cusp[n] for n, _ in pp.poles), Fraction(0))


# -- linear algebra --------------------------------------------------------------

def _to_fmpq(x):
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _from_fmpq(x):
    return Fraction(int(x.p), int(x.q))


def _nullspace(rows, ncols):
    """Basis of {x : rows * x = 0} as lists of Fractions."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    mat = fmpq_mat(len(rows), ncols, [_to_fmpq(x) for r in rows for x in r])
    red, rank = mat.rref()
    pivots = []
    for i in range(rank):
        j = next(j for j in range(ncols) if red[i, j] != 0)
        pivots.append(j)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, j in enumerate(pivots):
            vec[j] = -_from_fmpq(red[i, f])
        out.append(vec)
    return out


def _solve_unique(rows, rhs, ncols):
    """Unique x with rows * x = rhs; None if inconsistent, PrecisionTooLow if underdetermined."""
    m = len(rows)
    aug = fmpq_mat(m, ncols + 1, [_to_fmpq(x) for r, b in zip(rows, rhs) for x in list(r) + [b]])
    red, rank = aug.rref()
    pivots = []
    for i in range(rank):
        j = next(j for j in range(ncols + 1) if red[i, j] != 0)
        pivots.append(j)
    if ncols in pivots:
        return None
    if rank < ncols:
        raise PrecisionTooLow(f"solution not unique: rank {rank} < {ncols} unknowns")
    return [_from_fmpq(red[i, ncols]) for i in range(ncols)]


def _echelon_series(forms):
    out = []
    for f in forms:
        for b in out:
            c = f[b.valuation()]
            if c:
                f = f - b * c
        if not f.is_zero():
            f = f.scale(1 / f.leading_coefficient())
            out = [b - f * b[f.valuation()] if b[f.valuation()] else b for b in out]
            out.append(f)
    return sorted(out, key=lambda s: s.valuation())


# -- realization -------------------------------------------------------------------

def _cache_dir():
    root = os.environ.get("HILBERTRING_CACHE")
    if root == "":
        return None
    path = Path(root) if root else Path.home() / ".cache" / "hilbertring"
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError:
        return None
    return path


def _cache_key(pp, prec):
    blob = json.dumps({"p": pp.p, "poles": [[n, str(c)] for n, c in pp.poles], "prec": int(prec)})
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def realize(pp, prec=60, use_cache=True):
    """The unique plus-space form with principal part pp, known below q^prec."""
    p = pp.p
    prec = int(prec)
    path = None
    if use_cache and (root := _cache_dir()) is not None:
        path = root / f"plus-{p}-{_cache_key(pp, prec)}.json"
        if path.exists():
            return PlusForm(p, FracQSeries.from_text(path.read_text()), pp)
    for cusp in plus_cusp_forms(p):
        pairing = obstruction_pairing(pp, cusp)
        if pairing:
            raise Obstructed(f"principal part pairs to {pairing} with a weight-2 cusp form")
    if not pp.poles:
        return PlusForm(p, FracQSeries.zero(prec), pp)

    j_min = max((n // p for n, _ in pp.poles if n % p == 0), default=0)
    for j in (j_min, j_min + 1):
        series = _realize_with(pp, j, prec)
        if series is not None:
            break
    else:
        raise Obstructed("no form with this principal part in the plus space")
    bad = [n for n, c in series.items() if c and n >= 0 and chi(p, int(n)) == -1]
    if bad:
        raise SupportViolation(f"realized form violates the plus-space support at q^{bad[0]}")
    if path is not None:
        path.write_text(series.to_text())
    return PlusForm(p, series, pp)


def _realize_with(pp, j, prec):
    p = pp.p
    K = (p - 1) // 2 + 12 * j
    shift = (p * p - 1) // 24 + p * j  # ord_infinity of g0 * Delta(p tau)^j
    if shift < pp.max_pole:
        return None
    bound = plus_support_bound(p)
    short = bound + 2 * shift  # 1/g0 loses shift in relative precision
    length = sturm_bound(K, p) + 1
    atoms, chosen = trivial_character_span(p, K, length)

    def multiplier(n):
        return (level_multiplier(p, n) * eta_product([(p, 24)], n).pow_int(j)).truncate(n)

    cache = {}
    short_atoms = _atoms(p, short)
    g_short = multiplier(short)
    quotients = [(_evaluate_monomial(short_atoms, e, short, cache) / g_short) for e in chosen]
    # equations: negative exponents match pp, chi(n) = -1 exponents vanish
    target = pp.as_dict()
    rows, rhs = [], []
    for n in range(-shift, bound):
        if n < 0 or chi(p, n) == -1:
            rows.append([f[n] for f in quotients])
            rhs.append(target.get(-n, Fraction(0)))
    x = _solve_unique(rows, rhs, len(chosen))
    if x is None:
        return None
    full = prec + 2 * shift
    full_atoms = _atoms(p, full)
    cache = {}
    h = FracQSeries.zero(full)
    for xi, e in zip(x, chosen):
        if xi:
            h = h + _evaluate_monomial(full_atoms, e, full, cache) * xi
    return (h / multiplier(full)).truncate(prec)


def check_half_integral_support(f, level, upto=None):
    """Raise SupportViolation unless c(n) = 0 whenever n is not a square mod 4*level."""
    m = 4 * level
    squares = {(r * r) % m for r in range(m)}
    for n, c in f.items():
        if upto is not None and n >= upto:
            break
        if c and n.denominator != 1:
            raise SupportViolation(f"non-integral exponent {n}")
        if c and int(n) % m not in squares:
            raise SupportViolation(f"coefficient of q^{n} is nonzero but {n} is not a square mod {m}")
    return True


def realize_half_integral(prefix, level, weight, eta_factors, prec, plus_level=None):
    """Weight-1/2 input g * prod eta(m tau)^r, with g in M_weight(Gamma0(level)) fixed by a prefix.

    The prefix must reach the Sturm bound so that g is unique; g is then
    extended through its echelon coordinates and the product is checked
    against the plus-space support at 4 * plus_level.
    """
    bound = sturm_bound(weight, level) + 1
    if prefix.prec < bound:
        raise PrecisionTooLow(f"prefix known below q^{prefix.prec}; the Sturm bound needs q^{bound}")
    lead = sum(Fraction(m * r, 24) for m, r in eta_factors)
    need = prec - lead + 1
    space = echelon_space(level, weight, prec=max(need, prefix.prec, bound))
    xs = space.coordinates(prefix, upto=prefix.prec)
    g = sum((b * x for b, x in zip(space.basis, xs) if x), FracQSeries.zero(space.prec))
    f = (g * eta_product(eta_factors, need)).truncate(prec)
    if plus_level is not None:
        check_half_integral_support(f, plus_level)
    return f

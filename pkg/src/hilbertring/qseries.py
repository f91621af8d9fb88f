"""
Exact truncated Laurent series in a fractional power of q.

A :class:`FracQSeries` stores the coefficients of q^{n/d} for integers n in a
contiguous window, together with a precision bound: every coefficient with
exponent >= prec is unknown.  ``prec=None`` marks an exact (finite) Laurent
polynomial.  Coefficients are rationals; dense storage uses ``flint.fmpq_poly``.
"""

from fractions import Fraction
from math import ceil, gcd, lcm
import json

from contextlib import contextmanager

from flint import ctx, fmpq, fmpq_poly, fmpq_series, fmpz_poly

__all__ = [
    "FracQSeries",
    "InversionOfZeroSeries",
    "eta_product",
    "product_expansion",
]


class InversionOfZeroSeries(ZeroDivisionError):
    pass


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


def _fmpq(x):
    x = _frac(x)
    return fmpq(x.numerator, x.denominator)


def _inflate(poly, k):
    if k == 1 or poly.is_zero():
        return poly
    return fmpq_poly(poly.numer().inflate(k)) / poly.denom()


def _min_prec(*precs):
    known = [p for p in precs if p is not None]
    return min(known) if known else None


class FracQSeries:
    """Sum of c_n q^{n/denom} for n >= start, known below ``prec``."""

    __slots__ = ("_d", "_v", "_c", "_prec")

    def __init__(self, coeffs=None, prec=None, denom=1):
        # coeffs: mapping exponent -> coefficient, exponents rational
        coeffs = dict(coeffs or {})
        prec = None if prec is None else _frac(prec)
        exps = [_frac(e) for e in coeffs]
        d = denom
        for e in exps:
            d = lcm(d, e.denominator)
        if prec is not None:
            d = lcm(d, prec.denominator) if prec.denominator != 1 else d
        items = {}
        for e, c in coeffs.items():
            e = _frac(e)
            c = _frac(c)
            if c == 0 or (prec is not None and e >= prec):
                continue
            items[int(e * d)] = c
        if items:
            v = min(items)
            n = max(items) - v + 1
            arr = [0] * n
            for k, c in items.items():
                arr[k - v] = _fmpq(c)
            poly = fmpq_poly(arr)
        else:
            v, poly = 0, fmpq_poly([])
        self._set(d, v, poly, prec)

    # -- construction helpers -------------------------------------------------
    def _set(self, d, v, poly, prec):
        self._d, self._v, self._c, self._prec = d, v, poly, prec
        self._normalize()

    @classmethod
    def _raw(cls, d, v, poly, prec):
        obj = cls.__new__(cls)
        obj._set(d, v, poly, None if prec is None else _frac(prec))
        return obj

    @classmethod
    def from_list(cls, coeffs, start=0, denom=1, prec=None):
        """Coefficients of q^{(start+i)/denom} for i = 0, 1, ..."""
        poly = fmpq_poly([_fmpq(c) for c in coeffs])
        return cls._raw(denom, start, poly, prec)

    @classmethod
    def from_poly(cls, poly, start=0, denom=1, prec=None):
        if isinstance(poly, fmpz_poly):
            poly = fmpq_poly(poly)
        return cls._raw(denom, start, poly, prec)

    @classmethod
    def zero(cls, prec=None):
        return cls._raw(1, 0, fmpq_poly([]), prec)

    @classmethod
    def one(cls, prec=None):
        return cls._raw(1, 0, fmpq_poly([1]), prec)

    @classmethod
    def monomial(cls, exponent, coeff=1, prec=None):
        return cls({exponent: coeff}, prec=prec)

    def _normalize(self):
        d, v, c, prec = self._d, self._v, self._c, self._prec
        if prec is not None:
            # keep exponents (v+i)/d < prec
            top = ceil(prec * d) - v
            if top <= 0:
                c = fmpq_poly([])
            elif c.length() > top:
                c = c.truncate(top)
        if c.is_zero():
            v = 0
            c = fmpq_poly([])
        else:
            # strip leading zeros
            coeffs = c.coeffs()
            k = 0
            while coeffs[k] == 0:
                k += 1
            if k:
                c = fmpq_poly(coeffs[k:])
                v += k
        # minimal denominator
        if d > 1:
            g = d
            if not c.is_zero():
                g = gcd(g, v)
                nz = [i for i, x in enumerate(c.coeffs()) if x != 0]
                for i in nz:
                    g = gcd(g, i)
                    if g == 1:
                        break
            if g > 1:
                if not c.is_zero():
                    coeffs = c.coeffs()
                    c = fmpq_poly(coeffs[::g])
                    v //= g
                d //= g
        self._d, self._v, self._c, self._prec = d, v, c, prec

    # -- basic accessors -------------------------------------------------------
    @property
    def denom(self):
        return self._d

    @property
    def prec(self):
        return self._prec

    @property
    def is_exact(self):
        return self._prec is None

    def is_zero(self):
        return self._c.is_zero()

    def valuation(self):
        """Exponent of the first nonzero coefficient (prec for a zero series)."""
        if self._c.is_zero():
            return self._prec
        return Fraction(self._v, self._d)

    def leading_coefficient(self):
        if self._c.is_zero():
            return Fraction(0)
        return _frac(self._c[0])

    @property
    def coeffs(self):
        """Sparse dict {exponent (Fraction): coefficient (Fraction)}."""
        out = {}
        for i, x in enumerate(self._c.coeffs()):
            if x != 0:
                out[Fraction(self._v + i, self._d)] = _frac(x)
        return out

    def items(self):
        return sorted(self.coeffs.items())

    def __getitem__(self, exponent):
        e = _frac(exponent)
        if self._prec is not None and e >= self._prec:
            raise IndexError(f"coefficient of q^{e} is beyond precision {self._prec}")
        k = e * self._d
        if k.denominator != 1:
            return Fraction(0)
        i = int(k) - self._v
        if i < 0 or i >= self._c.length():
            return Fraction(0)
        return _frac(self._c[i])

    def coefficient_list(self, start, stop):
        """[c(start), ..., c(stop-1)] for integer exponents."""
        return [self[n] for n in range(start, stop)]

    def integer_coefficients(self, stop):
        """Coefficients of q^0 .. q^{stop-1} (integral exponents) as Fractions."""
        return [self[n] for n in range(0, stop)]

    # -- alignment -------------------------------------------------------------
    def _with_denom(self, d):
        if d == self._d:
            return self._v, self._c
        k = d // self._d
        return self._v * k, _inflate(self._c, k)

    # -- ring operations -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FracQSeries):
            other = FracQSeries({0: other})
        prec = _min_prec(self._prec, other._prec)
        d = lcm(self._d, other._d)
        va, ca = self._with_denom(d)
        vb, cb = other._with_denom(d)
        if ca.is_zero():
            return FracQSeries._raw(d, vb, cb, prec)
        if cb.is_zero():
            return FracQSeries._raw(d, va, ca, prec)
        v = min(va, vb)
        return FracQSeries._raw(d, v, ca.left_shift(va - v) + cb.left_shift(vb - v), prec)

    __radd__ = __add__

    def __neg__(self):
        return FracQSeries._raw(self._d, self._v, -self._c, self._prec)

    def __sub__(self, other):
        if not isinstance(other, FracQSeries):
            other = FracQSeries({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _fmpq(c)
        return FracQSeries._raw(self._d, self._v, self._c * c, self._prec)

    def __mul__(self, other):
        if not isinstance(other, FracQSeries):
            return self.scale(other)
        if (self._c.is_zero() and self._prec is None) or (other._c.is_zero() and other._prec is None):
            return FracQSeries.zero()
        ord_a, ord_b = self.valuation(), other.valuation()
        precs = []
        if self._prec is not None:
            precs.append(self._prec + ord_b)
        if other._prec is not None:
            precs.append(other._prec + ord_a)
        prec = min(precs) if precs else None
        if self._c.is_zero() or other._c.is_zero():
            return FracQSeries.zero(prec)
        d = lcm(self._d, other._d)
        va, ca = self._with_denom(d)
        vb, cb = other._with_denom(d)
        if prec is None:
            prod = ca * cb
        else:
            n = ceil(prec * d) - (va + vb)
            if n <= 0:
                return FracQSeries.zero(prec)
            prod = ca.mul_low(cb, n)
        return FracQSeries._raw(d, va + vb, prod, prec)

    __rmul__ = __mul__

    def shift(self, exponent):
        """Multiply by q^exponent."""
        e = _frac(exponent)
        d = lcm(self._d, e.denominator)
        v, c = self._with_denom(d)
        prec = None if self._prec is None else self._prec + e
        return FracQSeries._raw(d, v + int(e * d), c, prec)

    def truncate(self, prec):
        prec = _frac(prec)
        new = _min_prec(self._prec, prec)
        return FracQSeries._raw(self._d, self._v, self._c, new)

    def inverse(self, prec=None):
        """1/self.  Exact inputs need an explicit ``prec`` for the result."""
        if self._c.is_zero():
            raise InversionOfZeroSeries("cannot invert a series that is zero to its precision")
        v = Fraction(self._v, self._d)
        if self._prec is None:
            if prec is None:
                if self._c.length() == 1:
                    return FracQSeries._raw(self._d, -self._v, fmpq_poly([1 / self._c[0]]), None)
                raise ValueError("inverse of a non-monomial exact series needs prec")
            rel = _frac(prec) + v
        else:
            rel = self._prec - v
            if prec is not None:
                rel = min(rel, _frac(prec) + v)
        # relative precision in units 1/d
        n = ceil(rel * self._d)
        if n <= 0:
            return FracQSeries.zero(-v + Fraction(n, self._d))
        with _series_cap(n):
            inv = fmpq_series(self._c.coeffs()[:n], prec=n).inv()
        poly = fmpq_poly(inv.coeffs()).truncate(n)
        return FracQSeries._raw(self._d, -self._v, poly, rel - v)

    def __truediv__(self, other):
        if not isinstance(other, FracQSeries):
            return self.scale(Fraction(1) / _frac(other))
        if other._prec is not None:
            return self * other.inverse()
        if self._prec is None:
            raise ValueError("exact division needs an explicit precision")
        vb = other.valuation()
        if self._c.is_zero():
            return FracQSeries.zero(self._prec - vb)
        return self * other.inverse(prec=self._prec - self.valuation() - vb)

    def pow_int(self, e, prec=None):
        """self**e; negative e inverts (needs a nonzero leading term)."""
        if e < 0:
            return self.inverse(prec=prec).pow_int(-e)
        result = FracQSeries.one()
        if e == 0:
            return result
        if self._c.is_zero():
            return self * self.pow_int(e - 1) if e > 1 else self
        # leading-term factored power: q^{ev} * u^e
        v = self._v
        if self._prec is None:
            poly = self._c ** e
            return FracQSeries._raw(self._d, v * e, poly, None)
        rel = self._prec - Fraction(v, self._d)
        n = ceil(rel * self._d)
        poly = self._c.truncate(n)
        out = poly.pow_trunc(e, n) if e > 1 else poly
        lead = Fraction(v * e, self._d)
        return FracQSeries._raw(self._d, v * e, out, lead + rel)

    def __pow__(self, e):
        return self.pow_int(e)

    # -- exponent transforms ---------------------------------------------------
    def substitute_scale(self, m):
        """q -> q^m for a positive rational m."""
        m = _frac(m)
        if m <= 0:
            raise ValueError("scale must be positive")
        # exponent (v+i)/d -> m(v+i)/d = num (v+i) / (d den)
        num, den = m.numerator, m.denominator
        d = self._d * den
        poly = _inflate(self._c, num)
        prec = None if self._prec is None else self._prec * m
        return FracQSeries._raw(d, self._v * num, poly, prec)

    def integer_part(self):
        """Keep only the terms with integral exponent."""
        prec = self._prec
        if self._d == 1:
            return self
        out = {}
        for e, c in self.coeffs.items():
            if e.denominator == 1:
                out[e] = c
        return FracQSeries(out, prec=None if prec is None else Fraction(ceil(prec)))

    def map_coefficients(self, func):
        """Apply func(exponent, coeff) -> new coeff termwise."""
        return FracQSeries({e: func(e, c) for e, c in self.coeffs.items()}, prec=self._prec)

    # -- comparison / display --------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FracQSeries({0: other})
        if not isinstance(other, FracQSeries):
            return NotImplemented
        return (
            self._prec == other._prec
            and self._d == other._d
            and self._v == other._v
            and self._c == other._c
        ) or (self._c.is_zero() and other._c.is_zero() and self._prec == other._prec)

    def __hash__(self):
        return hash((self._d, self._v, str(self._c), self._prec))

    def agrees_with(self, other, upto=None):
        """True if the two series agree below min(precs, upto)."""
        bound = _min_prec(self._prec, other._prec, None if upto is None else _frac(upto))
        diff = self - other
        if bound is not None:
            diff = diff.truncate(bound)
        return diff.is_zero()

    def __repr__(self):
        terms = []
        for e, c in self.items()[:12]:
            if e == 0:
                terms.append(f"{c}")
            else:
                terms.append(f"{c}*q^{e}")
        body = " + ".join(terms) if terms else "0"
        if len(self.coeffs) > 12:
            body += " + ..."
        if self._prec is not None:
            body += f" + O(q^{self._prec})"
        return body

    # -- serialization ---------------------------------------------------------
    def to_dict(self):
        return {
            "denom": self._d,
            "prec": None if self._prec is None else str(self._prec),
            "coeffs": [[int(e * self._d), str(c)] for e, c in self.items()],
        }

    def to_text(self):
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data):
        d = int(data["denom"])
        prec = data.get("prec")
        coeffs = {Fraction(int(n), d): Fraction(c) for n, c in data["coeffs"]}
        return cls(coeffs, prec=None if prec is None else Fraction(prec), denom=d)

    @classmethod
    def from_text(cls, text):
        return cls.from_dict(json.loads(text))


def _euler_poly(n):
    """prod_{k>=1} (1 - x^k) mod x^n via the pentagonal number theorem."""
    coeffs = [0] * n
    k = 0
    while True:
        done = True
        for kk in ((k,), (-k,)) if k else ((0,),):
            kk = kk[0]
            e = kk * (3 * kk - 1) // 2
            if e < n:
                coeffs[e] = -1 if kk % 2 else 1
                done = False
        if done and k > 0:
            break
        k += 1
    return fmpz_poly(coeffs)


@contextmanager
def _series_cap(n):
    # flint truncates series arithmetic at ctx.cap regardless of the operands' precision
    old = ctx.cap
    ctx.cap = max(old, n)
    try:
        yield
    finally:
        ctx.cap = old


def eta_product(factors, prec):
    """prod eta(m tau)^r over (m, r) in factors, known below q^prec."""
    factors = [(int(m), int(r)) for m, r in factors if r]
    if not factors:
        return FracQSeries.one(prec)
    prec = _frac(prec)
    lead = Fraction(sum(m * r for m, r in factors), 24)
    n = ceil(prec - lead)
    if n <= 0:
        return FracQSeries.zero(prec)
    total = fmpq_poly([1])
    for m, r in factors:
        base = fmpq_poly(_euler_poly(n // m + 1).inflate(m).truncate(n) if m > 1 else _euler_poly(n))
        if r < 0:
            with _series_cap(n):
                base = fmpq_poly(fmpq_series(base.coeffs(), prec=n).inv().coeffs()).truncate(n)
        total = total.mul_low(base.pow_trunc(abs(r), n), n)
    body = FracQSeries.from_poly(total, prec=n)
    return body.shift(lead)


def product_expansion(exponents, prec, lead=0):
    """q^lead * prod_{n>=1} (1 - q^n)^{exponents[n]} (exponents: dict n -> rational).

    The result is known below q^{lead+prec}; factors with n >= prec are ignored.
    """
    n = int(prec)
    if n <= 0:
        return FracQSeries.zero(_frac(lead) + prec)
    # log prod = sum_n e_n log(1 - q^n) = -sum_m (sum_{d|m} d e_d) q^m / m
    logc = [Fraction(0)] * n
    for d, e in exponents.items():
        e = _frac(e)
        if e == 0 or d >= n:
            continue
        for m in range(d, n, d):
            logc[m] -= e * d / m
    with _series_cap(n):
        ex = fmpq_series([_fmpq(c) for c in logc], prec=n).exp()
    body = FracQSeries.from_poly(fmpq_poly(ex.coeffs()).truncate(n), prec=n)
    return body.shift(_frac(lead))

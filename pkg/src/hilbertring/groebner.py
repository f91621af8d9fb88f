"""
Buchberger completion for weight- and character-homogeneous ideals, and the
graded Hilbert series of the quotient ring.

Polynomials are dicts {exponent tuple: coefficient}.  Monomials are ordered
by weighted degree, ties broken reverse-lexicographically.  Hilbert series
live in the group ring Z[t][Z/m]: dicts {(degree, character): integer}.
"""

import heapq
from fractions import Fraction
from itertools import combinations
from math import gcd

__all__ = [
    "GrobnerTimeout",
    "HilbertSeriesResult",
    "MonomialOrder",
    "groebner",
    "hilbert_numerator",
    "hilbert_series",
    "normal_form",
    "series_expand",
    "trivial_projection",
]


class GrobnerTimeout(RuntimeError):
    pass


class MonomialOrder:
    """Weighted degree, then reverse lexicographic."""

    def __init__(self, weights):
        self.weights = tuple(weights)

    def degree(self, e):
        return sum(a * w for a, w in zip(e, self.weights))

    def key(self, e):
        return (self.degree(e), tuple(-a for a in reversed(e)))

    def leading(self, poly):
        return max(poly, key=self.key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _shift(poly, e, c):
    return {tuple(x + y for x, y in zip(m, e)): v * c for m, v in poly.items()}


def _axpy(target, poly, e, c):
    for m, v in poly.items():
        key = tuple(x + y for x, y in zip(m, e))
        new = target.get(key, 0) + v * c
        if new:
            target[key] = new
        else:
            target.pop(key, None)


def _monic(poly, order):
    lead = poly[order.leading(poly)]
    return {m: v / lead for m, v in poly.items()}


def normal_form(poly, basis, order):
    """Full reduction of poly modulo a list of monic polynomials."""
    poly = {m: Fraction(v) for m, v in poly.items() if v}
    leads = [(order.leading(g), g) for g in basis]
    out = {}
    while poly:
        m = order.leading(poly)
        c = poly[m]
        for lm, g in leads:
            if _divides(lm, m):
                _axpy(poly, g, _sub(m, lm), -c)
                break
        else:
            out[m] = c
            del poly[m]
    return out


def groebner(polys, weights, max_pairs=200000):
    """Reduced Groebner basis (monic, sorted by leading monomial)."""
    order = MonomialOrder(weights)
    basis, leads = [], []
    for f in polys:
        f = {tuple(m): Fraction(v) for m, v in f.items() if v}
        r = normal_form(f, basis, order) if basis else f
        if r:
            basis.append(_monic(r, order))
            leads.append(order.leading(r))
    # homogeneous input: treat pairs in increasing lcm degree
    heap = []
    pending = set()

    def push(i, j):
        heapq.heappush(heap, (order.key(_lcm(leads[i], leads[j])), i, j))
        pending.add((i, j))

    for i, j in combinations(range(len(basis)), 2):
        push(i, j)
    done = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        done += 1
        if done > max_pairs:
            raise GrobnerTimeout(f"more than {max_pairs} S-pairs")
        lf, lg = leads[i], leads[j]
        L = _lcm(lf, lg)
        if all(min(x, y) == 0 for x, y in zip(lf, lg)):
            continue  # coprime leading monomials
        if _chain_criterion(i, j, L, leads, pending):
            continue
        s = _shift(basis[i], _sub(L, lf), 1)
        _axpy(s, basis[j], _sub(L, lg), -1)
        r = normal_form(s, basis, order)
        if r:
            basis.append(_monic(r, order))
            leads.append(order.leading(r))
            k = len(basis) - 1
            for a in range(k):
                push(a, k)
    return _reduce(basis, order)


def _chain_criterion(i, j, L, leads, pending):
    for k in range(len(leads)):
        if k in (i, j) or not _divides(leads[k], L):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def _reduce(basis, order):
    minimal = []
    leads = [order.leading(g) for g in basis]
    for i, g in enumerate(basis):
        li = leads[i]
        if any(j != i and _divides(leads[j], li) and (leads[j] != li or j < i) for j in range(len(basis))):
            continue
        minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        lead = order.leading(g)
        tail = {m: v for m, v in g.items() if m != lead}
        r = normal_form(tail, others, order) if tail else {}
        r[lead] = Fraction(1)
        out.append(r)
    return sorted(out, key=lambda g: order.key(order.leading(g)))


# -- Hilbert series -------------------------------------------------------------------

def _gmul(a, b, modulus):
    out = {}
    for (d1, c1), v1 in a.items():
        for (d2, c2), v2 in b.items():
            key = (d1 + d2, (c1 + c2) % modulus)
            out[key] = out.get(key, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def _gsub(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _minimalize(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(_divides(o, m) for o in out):
            out.append(m)
    return out


def hilbert_numerator(leads, weights, characters, modulus):
    """K(t, e) with H = K / prod (1 - t^w_i e^c_i) for the monomial ideal of leads."""
    deg = lambda e: (sum(a * w for a, w in zip(e, weights)), sum(a * c for a, c in zip(e, characters)) % modulus)

    def rec(monos):
        monos = _minimalize(monos)
        if not monos:
            return {(0, 0): 1}
        if all(sum(1 for a in m if a) == 1 for m in monos):
            # pure powers of distinct variables: product of (1 - t^deg)
            out = {(0, 0): 1}
            for m in monos:
                out = _gmul(out, {(0, 0): 1, deg(m): -1}, modulus)
            return out
        *rest, last = monos
        colon = [tuple(max(a - b, 0) for a, b in zip(m, last)) for m in rest]
        return _gsub(rec(rest), _gmul({deg(last): 1}, rec(colon), modulus))

    return rec([tuple(m) for m in leads])


class HilbertSeriesResult:
    """numerator / prod (1 - t^w e^c) over the denominator factors, in Z[t][Z/m]."""

    def __init__(self, numerator, denominator, modulus):
        self.numerator = {k: v for k, v in numerator.items() if v}
        self.denominator = tuple(denominator)
        self.modulus = modulus

    def denominator_poly(self):
        out = {(0, 0): 1}
        for w, c in self.denominator:
            out = _gmul(out, {(0, 0): 1, (w, c % self.modulus): -1}, self.modulus)
        return out

    def rebase(self, denominator):
        """Same series over another denominator; raises if the quotient is not polynomial."""
        target = HilbertSeriesResult({(0, 0): 1}, denominator, self.modulus).denominator_poly()
        num = _gmul(self.numerator, target, self.modulus)
        new = _divide_exact(num, self.denominator_poly(), self.modulus)
        return HilbertSeriesResult(new, denominator, self.modulus)

    def equals(self, other):
        left = _gmul(self.numerator, other.denominator_poly(), self.modulus)
        right = _gmul(other.numerator, self.denominator_poly(), self.modulus)
        return left == right

    def to_dict(self):
        return {
            "numerator": [[d, c, v] for (d, c), v in sorted(self.numerator.items())],
            "denominator": [list(f) for f in self.denominator],
            "modulus": self.modulus,
        }

    def format(self, symbol="e"):
        def body(d, c):
            mono = "" if d == 0 else ("t" if d == 1 else f"t^{d}")
            ch = "" if c == 0 else f"{symbol}{c}"
            return "*".join(x for x in (mono, ch) if x)

        parts = []
        for (d, c), v in sorted(self.numerator.items()):
            b = body(d, c)
            mag = abs(v)
            text = (f"{mag}*{b}" if mag != 1 else b) if b else str(mag)
            parts.append(("- " if v < 0 else "+ ") + text)
        num = " ".join(parts).removeprefix("+ ").replace("- ", "-", 1 if parts and parts[0].startswith("-") else 0) or "0"
        den = "".join(f"(1 - {body(w, c % self.modulus)})" for w, c in self.denominator)
        return f"({num}) / {den}"


def _divide_exact(num, den, modulus):
    """num / den in Z[t][Z/m] for den with constant term 1; ValueError unless exact."""
    if den.get((0, 0)) != 1 or any(d == 0 for (d, c) in den if (d, c) != (0, 0)):
        raise ValueError("denominator must have constant term 1")
    num = dict(num)
    top = max((d for d, _ in num), default=0)
    out = {}
    while num and min(d for d, _ in num) <= top:
        d = min(k[0] for k in num)
        for c in range(modulus):
            v = num.get((d, c), 0)
            if v:
                out[(d, c)] = v
                num = _gsub(num, _gmul({(d, c): v}, den, modulus))
    if num:
        raise ValueError("quotient is not a polynomial")
    return out


def hilbert_series(basis, weights, characters, modulus=3):
    order = MonomialOrder(weights)
    leads = [order.leading(g) for g in basis]
    num = hilbert_numerator(leads, weights, characters, modulus)
    den = [(w, c % modulus) for w, c in zip(weights, characters)]
    return HilbertSeriesResult(num, den, modulus)


def series_expand(hsr, top):
    """{(degree, character): dimension} for degrees < top."""
    inv = {(0, 0): 1}
    for w, c in hsr.denominator:
        geo = {(w * i, (c * i) % hsr.modulus): 1 for i in range(top // w + 1)}
        inv = {k: v for k, v in _gmul(inv, geo, hsr.modulus).items() if k[0] < top}
    out = _gmul(hsr.numerator, inv, hsr.modulus)
    return {k: v for k, v in out.items() if k[0] < top}


def trivial_projection(hsr):
    """The character-0 part, as numerator over prod (1 - t^{w * order(c)})."""
    m = hsr.modulus
    num = dict(hsr.numerator)
    den = []
    for w, c in hsr.denominator:
        c %= m
        if c == 0:
            den.append((w, 0))
            continue
        k = m // gcd(c, m)
        # 1/(1 - x) = (1 + x + ... + x^(k-1)) / (1 - x^k)
        num = _gmul(num, {(w * i, (c * i) % m): 1 for i in range(k)}, m)
        den.append((w * k, 0))
    num = {(d, 0): v for (d, ch), v in num.items() if ch == 0}
    return HilbertSeriesResult(num, den, m)

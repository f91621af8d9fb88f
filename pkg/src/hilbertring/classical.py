"""
Elliptic modular forms as q-series.

Eisenstein series for SL2(Z), Gamma0(N) and with quadratic Nebentypus,
(generalized) Bernoulli numbers, and echelon bases of M_k(Gamma0(N), chi)
obtained by saturating a spanning set of products.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from flint import fmpq, fmpq_mat, fmpq_poly, fmpz_poly, nmod_mat

from .qseries import FracQSeries, eta_product

__all__ = [
    "DirichletChar",
    "FormSpace",
    "ParityMismatch",
    "SaturationFailure",
    "bernoulli",
    "char_eisenstein",
    "dimension_formula",
    "echelon_space",
    "eisenstein_level1",
    "gamma0_3_generators",
    "gamma0_5_generators",
    "gamma0_eisenstein",
    "gamma0_index",
    "gen_bernoulli",
    "kronecker",
    "l_value",
    "sturm_bound",
]


class ParityMismatch(ValueError):
    pass


class SaturationFailure(RuntimeError):
    pass


# -- arithmetic helpers --------------------------------------------------------

def kronecker(a, n):
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def prime_factors(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def gamma0_index(N):
    """[SL2(Z) : Gamma0(N)]."""
    idx = N
    for q in prime_factors(N):
        idx = idx * (q + 1) // q
    return idx


def _phi(n):
    out = n
    for q in prime_factors(n):
        out = out // q * (q - 1)
    return out


def dimension_formula(N, k):
    """dim M_k(Gamma0(N)) for even k >= 2 from the genus, elliptic points and cusps."""
    if k % 2 or k < 2:
        raise ValueError("even weight >= 2 only")
    fac = prime_factors(N)
    e2 = 0 if N % 4 == 0 else _prod(1 + kronecker(-4, q) for q in fac)
    e3 = 0 if N % 9 == 0 else _prod(1 + kronecker(-3, q) for q in fac)
    cusps = sum(_phi(gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)
    genus = 1 + Fraction(gamma0_index(N), 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(cusps, 2)
    if k == 2:
        return int(genus) + cusps - 1
    return int((k - 1) * (genus - 1) + (k // 4) * e2 + (k // 3) * e3 + (k // 2) * cusps)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def sturm_bound(k, N):
    """Vanishing of coefficients q^0..q^B (B = floor(k*index/12)) forces zero."""
    return (Fraction(k) * gamma0_index(N) / 12).__floor__()


@lru_cache(maxsize=None)
def bernoulli(k):
    """Bernoulli number B_k with B_1 = -1/2."""
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(-1, 2)
    if k % 2:
        return Fraction(0)
    return -sum(comb(k + 1, j) * bernoulli(j) for j in range(k)) / (k + 1)


def bernoulli_poly(k, x):
    return sum(comb(k, j) * bernoulli(j) * Fraction(x) ** (k - j) for j in range(k + 1))


@dataclass(frozen=True)
class DirichletChar:
    """n -> (disc/n) on integers coprime to ``modulus``, 0 otherwise.

    ``disc`` is 1 (trivial) or a fundamental discriminant such as p, -4, -3.
    """

    modulus: int = 1
    disc: int = 1

    def __call__(self, n):
        if gcd(n, self.modulus) != 1:
            return 0
        return kronecker(self.disc, n)

    @property
    def conductor(self):
        return abs(self.disc)

    @property
    def is_trivial(self):
        return self.disc == 1

    def parity(self):
        return self(-1) if self.modulus > 1 or self.disc != 1 else 1

    @property
    def tag(self):
        return "trivial" if self.is_trivial else f"kronecker({self.disc})"

    @classmethod
    def trivial(cls, modulus=1):
        return cls(modulus, 1)

    @classmethod
    def quadratic(cls, p):
        """(./p) for a prime p = 1 mod 4, equal to the Kronecker symbol (p/.)."""
        return cls(p, p)


def gen_bernoulli(k, chi):
    """B_{k,chi} = f^{k-1} sum_{a=1}^{f} chi(a) B_k(a/f)."""
    f = max(chi.modulus, 1)
    if f == 1:
        return bernoulli_poly(k, 1)
    return Fraction(f) ** (k - 1) * sum(chi(a) * bernoulli_poly(k, Fraction(a, f)) for a in range(1, f + 1))


def l_value(k, chi):
    """L(1-k, chi) = -B_{k,chi}/k."""
    return -gen_bernoulli(k, chi) / k


# -- Eisenstein series ---------------------------------------------------------

def _divisor_power_sums(n, power, weight=None):
    """s[m] = sum_{d | m} weight(d, m // d) d^power for 1 <= m < n."""
    s = [0] * n
    for d in range(1, n):
        dp = d ** power
        for m in range(d, n, d):
            if weight is None:
                s[m] += dp
            else:
                s[m] += weight(d, m // d) * dp
    return s


@lru_cache(maxsize=64)
def _eisenstein_poly(k, n):
    s = _divisor_power_sums(n, k - 1)
    c = Fraction(-2 * k) / bernoulli(k)
    s[0] = 0
    scale = fmpq(c.numerator, c.denominator)
    return fmpq_poly(fmpz_poly(s)) * scale + 1


def eisenstein_level1(k, prec):
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, known below q^prec."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    n = int(prec)
    return FracQSeries.from_poly(_eisenstein_poly(k, max(n, 1)), prec=n)


def gamma0_eisenstein(N, k, prec):
    """(N E_2(N tau) - E_2)/(N - 1) for k = 2, (N^2 E_4(N tau) - E_4)/(N^2 - 1) for k = 4."""
    if k == 2:
        c = N
    elif k == 4:
        c = N * N
    else:
        raise ValueError("only weights 2 and 4")
    e = eisenstein_level1(k, prec)
    return (e.substitute_scale(N).truncate(prec) * c - e) / (c - 1)


def char_eisenstein(k, chi, psi, prec):
    """E_k^{chi,psi} = delta(chi) L(1-k,psi)/2 + sum_n (sum_{d|n} psi(d) chi(n/d) d^{k-1}) q^n."""
    if chi(-1) * psi(-1) != (-1) ** k:
        raise ParityMismatch(f"chi*psi(-1) must equal (-1)^{k}")
    if k == 1 and chi.is_trivial and psi.is_trivial:
        raise ParityMismatch("weight 1 needs a nontrivial character")
    n = int(prec)
    s = _divisor_power_sums(n, k - 1, lambda d, e: psi(d) * chi(e))
    const = Fraction(0)
    if chi.is_trivial:
        const = l_value(k, psi) / 2
    coeffs = {m: s[m] for m in range(1, n) if s[m]}
    if const:
        coeffs[0] = const
    return FracQSeries(coeffs, prec=n)


def theta_series(prec):
    """1 + 2 sum q^{n^2}."""
    n = int(prec)
    coeffs = {0: 1}
    r = 1
    while r * r < n:
        coeffs[r * r] = 2
        r += 1
    return FracQSeries(coeffs, prec=n)


# -- spanning sets and echelon bases -------------------------------------------

def level_multiplier(p, prec):
    """eta(p tau)^p / eta(tau): weight (p-1)/2, character (./p), no zeros except at infinity."""
    return eta_product([(p, p), (1, -1)], prec)


def _atoms(N, prec):
    """Holomorphic forms on Gamma0(N) with trivial character, as (name, weight, series)."""
    divisors = [d for d in range(1, N + 1) if N % d == 0]
    out = []
    e2 = eisenstein_level1(2, prec)
    for d in divisors[1:]:
        out.append((f"E2-{d}E2({d})", 2, (e2 - e2.substitute_scale(d).truncate(prec) * d) / (1 - d)))
    for k in (4, 6):
        ek = eisenstein_level1(k, prec)
        for d in divisors:
            out.append((f"E{k}({d})", k, ek.substitute_scale(d).truncate(prec)))
    if N > 1:
        # eta quotients eta^r eta(N)^s with trivial character, holomorphic at both cusps (prime N)
        if len(divisors) == 2:
            for w in (2, 4, 6, 8, 10, 12):
                for s in range(-2 * w, 2 * w + 1, 2):
                    r = 2 * w - s
                    if (r + N * s) % 24 or (N * r + s) % 24:
                        continue
                    if r + N * s < 0 or N * r + s < 0:
                        continue
                    if r == 0 or s == 0:
                        continue
                    out.append((f"eta^{r}eta({N})^{s}", w, eta_product([(1, r), (N, s)], prec)))
    return out


def _monomials(weights, target):
    """Exponent vectors e with sum e_i w_i = target."""
    n = len(weights)

    def rec(i, remaining):
        if i == n:
            if remaining == 0:
                yield ()
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            for tail in rec(i + 1, remaining - e * w):
                yield (e,) + tail

    # favour monomials with few factors first (cheaper, better conditioned)
    return sorted(rec(0, target), key=lambda e: (sum(e), e))


_PRIME = 2**61 - 1


def _mod_row(series, length):
    row = []
    for n in range(length):
        c = series[n]
        row.append(c.numerator * pow(c.denominator, -1, _PRIME) % _PRIME)
    return row


def _poly_window(series, length):
    return [series[n] for n in range(length)]


@dataclass
class FormSpace:
    level: int
    weight: int
    character: DirichletChar
    basis: list
    prec: object
    spanning: list = field(default_factory=list, repr=False)

    @property
    def dimension(self):
        return len(self.basis)

    def leading_exponents(self):
        return [b.valuation() for b in self.basis]

    def to_dict(self):
        return {
            "level": self.level,
            "weight": self.weight,
            "character": self.character.tag,
            "basis": [b.to_dict() for b in self.basis],
        }

    def coordinates(self, series, upto=None):
        """Coefficients x with series = sum x_i basis_i (echelon back-substitution)."""
        rest = series
        xs = []
        for b in self.basis:
            e = b.valuation()
            c = rest[e]
            xs.append(c)
            if c:
                rest = rest - b * c
        bound = self.prec if upto is None else upto
        if not rest.truncate(bound).is_zero():
            raise ValueError("series is not in the space")
        return xs


def _spanning_products(N, k, prec):
    atoms = _atoms(N, prec)
    weights = [w for _, w, _ in atoms]
    return atoms, _monomials(weights, k)


def _evaluate_monomial(atoms, expo, prec, cache):
    result = FracQSeries.one()
    for (name, w, s), e in zip(atoms, expo):
        if not e:
            continue
        key = (name, e, prec)
        if key not in cache:
            cache[key] = s.truncate(prec).pow_int(e) if e > 1 else s.truncate(prec)
        result = result * cache[key]
    return result.truncate(prec)


@lru_cache(maxsize=32)
def trivial_character_span(N, k, length, batch=None):
    """Independent spanning products for M_k(Gamma0(N)).

    Products are added in batches until the rank on the first ``length``
    coefficients reaches the dimension; running out of products first raises
    SaturationFailure.  Returns (atoms, exponent vectors of the chosen products).
    """
    atoms, monos = _spanning_products(N, k, length)
    expected = dimension_formula(N, k)
    cache = {}
    batch = batch or max(8, length // 2)
    chosen = []
    rows = []
    rank = 0
    rank_history = []
    for start in range(0, len(monos), batch):
        chunk = monos[start:start + batch]
        cand_rows = [
            _mod_row(_evaluate_monomial(atoms, e, length, cache), length) for e in chunk
        ]
        all_rows = rows + cand_rows
        mat = nmod_mat(len(all_rows), length, [x for r in all_rows for x in r], _PRIME)
        # independent rows = pivot columns of the transpose
        red, rank = mat.transpose().rref()
        pivots = []
        col = 0
        for i in range(rank):
            while red[i, col] == 0:
                col += 1
            pivots.append(col)
        combined = chosen + list(chunk)
        chosen = [combined[c] for c in pivots]
        rows = [all_rows[c] for c in pivots]
        rank_history.append(rank)
        if rank >= expected:
            break
    if rank != expected:
        raise SaturationFailure(
            f"spanning products of weight {k} on Gamma0({N}) reach rank {rank}, expected {expected}"
            f" (history {rank_history})"
        )
    # exact confirmation over Q
    exact = fmpq_mat(len(chosen), length, [
        fmpq(c.numerator, c.denominator)
        for e in chosen
        for c in _poly_window(_evaluate_monomial(atoms, e, length, cache), length)
    ])
    if exact.rank() != len(chosen):
        raise SaturationFailure("modular rank exceeds rational rank")
    return atoms, tuple(chosen)


def span_trivial(N, k, prec):
    """Spanning products of M_k(Gamma0(N)) evaluated to precision prec."""
    if k == 0:
        return [FracQSeries.one(prec)]
    length = sturm_bound(k, N) + 1
    atoms, chosen = trivial_character_span(N, k, length)
    full_atoms = _atoms(N, prec) if prec > length else atoms
    cache = {}
    return [_evaluate_monomial(full_atoms, e, prec, cache) for e in chosen]


def _echelonize(series_list, length, prec):
    """Row-reduced echelon form of the span (pivots = leading exponents)."""
    if not series_list:
        return []
    start = min(s.valuation() for s in series_list)
    start = int(start)
    cols = length - start
    mat = fmpq_mat(len(series_list), cols, [
        fmpq(c.numerator, c.denominator)
        for s in series_list
        for c in [s[n] for n in range(start, length)]
    ])
    aug = fmpq_mat(len(series_list), cols + len(series_list), [
        mat[i, j] if j < cols else (fmpq(1) if j - cols == i else fmpq(0))
        for i in range(len(series_list))
        for j in range(cols + len(series_list))
    ])
    red, rank = aug.rref()
    out = []
    n = len(series_list)
    for i in range(rank):
        if all(red[i, j] == 0 for j in range(cols)):
            break
        combo = FracQSeries.zero(prec)
        for j in range(n):
            c = red[i, cols + j]
            if c != 0:
                combo = combo + series_list[j] * Fraction(int(c.p), int(c.q))
        out.append(combo)
    return out


def echelon_space(N, k, chi=None, prec=None):
    """Echelon basis of M_k(Gamma0(N), chi), chi trivial or (./N) for prime N = 1 mod 4."""
    chi = chi or DirichletChar.trivial(N)
    if chi.is_trivial:
        if prec is None:
            prec = sturm_bound(k, N) + 1
        if prec < sturm_bound(k, N) + 1:
            raise ValueError("precision below the Sturm bound")
        if N == 1 and k % 2 == 0 and k >= 4:
            spans = _level_one_span(k, prec)
        else:
            spans = span_trivial(N, k, prec)
        basis = _echelonize(spans, sturm_bound(k, N) + 1, prec)
        return FormSpace(N, k, chi, basis, prec, spans)
    p = N
    if chi.disc != p or p % 4 != 1:
        raise ValueError("only the quadratic character (./p), p = 1 mod 4 prime, is supported")
    w0 = (p - 1) // 2
    v0 = (p * p - 1) // 24
    big = k + w0
    if prec is None:
        prec = sturm_bound(k, N) + 1
    inner = echelon_space(p, big, None, prec + v0)
    g = level_multiplier(p, prec + v0)
    basis = [b / g for b in inner.basis if b.valuation() >= v0]
    return FormSpace(N, k, chi, [b.truncate(prec) for b in basis], prec)


def _level_one_span(k, prec):
    e4 = eisenstein_level1(4, prec)
    e6 = eisenstein_level1(6, prec)
    out = []
    for a in range(k // 4 + 1):
        rest = k - 4 * a
        if rest % 6 == 0:
            out.append((e4.pow_int(a) * e6.pow_int(rest // 6)).truncate(prec))
    return out


# -- the rings M_*(Gamma0(3)) and M_*(Gamma0(5)) -------------------------------

def gamma0_5_generators(prec):
    """e_2, e_4, s_4 with e_4^2 = e_2^4 - 44 s_4 e_2^2 - 16 s_4^2."""
    return {
        "e2": gamma0_eisenstein(5, 2, prec),
        "e4": gamma0_eisenstein(5, 4, prec),
        "s4": eta_product([(1, 4), (5, 4)], prec),
    }


def gamma0_3_generators(prec):
    """e_2, e_4, s_6 with e_4^2 = e_2^4 - 108 e_2 s_6."""
    return {
        "e2": gamma0_eisenstein(3, 2, prec),
        "e4": gamma0_eisenstein(3, 4, prec),
        "s6": eta_product([(1, 6), (3, 6)], prec),
    }

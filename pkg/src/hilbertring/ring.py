"""
Graded rings given by generators and relations, checked on restriction images.

A relation is verified on a curve T_l by expanding it in the restricted
generator images.  The restriction of a weight-w form is a weight-2w form
on Gamma0(l), so vanishing below its Sturm bound proves it vanishes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from math import ceil, gcd, lcm

from flint import fmpq, fmpq_mat

from .classical import gamma0_index
from .groebner import MonomialOrder, groebner, hilbert_series, normal_form, trivial_projection
from .qseries import FracQSeries

__all__ = [
    "Generator",
    "Presentation",
    "RelationPoly",
    "VerificationReport",
    "eval_relation",
    "format_relations",
    "load_relations",
    "parse_relations",
    "strict_cutoff",
    "trivial_char_monomials",
    "verify_relation",
]

FAST_PREC = 40


class PrecisionTooLow(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    weight: int
    character: int = 0


@dataclass(frozen=True)
class RelationPoly:
    name: str
    terms: tuple  # ((exponents, Fraction), ...)
    weight: int
    character: int

    @classmethod
    def build(cls, name, terms, generators, modulus=3):
        terms = {tuple(e): Fraction(c) for e, c in dict(terms).items() if c}
        if not terms:
            raise ValueError(f"{name}: empty relation")
        degs = {_degree(e, generators, modulus) for e in terms}
        if len(degs) != 1:
            raise ValueError(f"{name} is not homogeneous: {sorted(degs)}")
        (w, ch), = degs
        den = lcm(*(c.denominator for c in terms.values()))
        ints = {e: int(c * den) for e, c in terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        order = MonomialOrder([gen.weight for gen in generators])
        lead = max(ints, key=order.key)
        if ints[lead] < 0:
            g = -g
        normed = tuple(sorted(((e, Fraction(v // g)) for e, v in ints.items()), key=lambda t: order.key(t[0]), reverse=True))
        return cls(name, normed, w, ch)

    def as_dict(self):
        return dict(self.terms)

    def perturbed(self, index=0, delta=1):
        terms = list(self.terms)
        e, c = terms[index]
        terms[index] = (e, c + delta)
        return RelationPoly(self.name + "*", tuple(terms), self.weight, self.character)


def _degree(e, generators, modulus):
    w = sum(a * g.weight for a, g in zip(e, generators))
    ch = sum(a * g.character for a, g in zip(e, generators)) % modulus
    return w, ch


@dataclass
class Presentation:
    generators: list
    relations: list
    modulus: int = 3
    images: dict = field(default_factory=dict)  # tag -> {name: FracQSeries}

    @property
    def names(self):
        return [g.name for g in self.generators]

    @property
    def weights(self):
        return [g.weight for g in self.generators]

    @property
    def characters(self):
        return [g.character for g in self.generators]

    def groebner_basis(self):
        return groebner([r.as_dict() for r in self.relations], self.weights)

    def hilbert_series(self, basis=None):
        basis = self.groebner_basis() if basis is None else basis
        return hilbert_series(basis, self.weights, self.characters, self.modulus)

    def trivial_hilbert_series(self, basis=None):
        return trivial_projection(self.hilbert_series(basis))


# -- relation files ------------------------------------------------------------------

def parse_relations(text):
    """Parse the relation wire format into (generators, relations).

    Header lines ``# generators ...``, ``# weights ...``, ``# characters ...``
    fix the variables; ``relation NAME`` opens a relation; every other line is
    ``weight character coeff e_1 ... e_n``.
    """
    names = weights = chars = None
    raw = []
    declared = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            head, *rest = line[1:].split()
            if head == "generators":
                names = rest
            elif head == "weights":
                weights = [int(x) for x in rest]
            elif head == "characters":
                chars = [int(x) for x in rest]
            continue
        if line.startswith("relation"):
            raw.append((line.split(maxsplit=1)[1], {}))
            continue
        if not raw:
            raise ValueError(f"line {lineno}: term before any relation header")
        w, ch, coeff, *expo = line.split()
        expo = tuple(int(x) for x in expo)
        raw[-1][1][expo] = raw[-1][1].get(expo, 0) + Fraction(coeff)
        declared.setdefault(raw[-1][0], set()).add((int(w), int(ch)))
    if names is None or weights is None:
        raise ValueError("relation file needs '# generators' and '# weights' headers")
    chars = chars or [0] * len(names)
    gens = [Generator(n, w, c) for n, w, c in zip(names, weights, chars)]
    rels = []
    for name, terms in raw:
        rel = RelationPoly.build(name, terms, gens)
        if declared.get(name, {(rel.weight, rel.character)}) != {(rel.weight, rel.character)}:
            raise ValueError(f"{name}: declared grading {declared[name]} disagrees with the terms")
        rels.append(rel)
    return gens, rels


def format_relations(generators, relations):
    lines = [
        "# generators " + " ".join(g.name for g in generators),
        "# weights " + " ".join(str(g.weight) for g in generators),
        "# characters " + " ".join(str(g.character) for g in generators),
    ]
    for rel in relations:
        lines.append(f"relation {rel.name}")
        for e, c in rel.terms:
            lines.append(f"{rel.weight} {rel.character} {c} " + " ".join(map(str, e)))
    return "\n".join(lines) + "\n"


def load_relations(source):
    """'builtin', 'printed' (the unamended table), or a path."""
    if source in ("builtin", "printed"):
        fname = "relations37.txt" if source == "builtin" else "relations37_printed.txt"
        text = resources.files("hilbertring.data").joinpath(fname).read_text()
    else:
        with open(source) as fh:
            text = fh.read()
    return parse_relations(text)


# -- evaluation ---------------------------------------------------------------------

def strict_cutoff(weight, ell):
    """Sturm bound for weight 2w on Gamma0(l), plus one."""
    return ceil(Fraction(2 * weight * gamma0_index(ell), 12)) + 1


def eval_relation(rel, pres, tag, prec):
    images = pres.images[tag]
    names = pres.names
    for n in names:
        if n in images and images[n].prec < prec:
            raise PrecisionTooLow(f"image of {n} at {tag} is known below q^{images[n].prec}, need {prec}")
    powers = {}

    def power(name, a):
        key = (name, a)
        if key not in powers:
            base = images[name].truncate(prec)
            powers[key] = base if a == 1 else power(name, a - 1) * base
        return powers[key]

    total = FracQSeries.zero(prec)
    for e, c in rel.terms:
        m = FracQSeries({0: Fraction(c)}, prec=prec)
        for name, a in zip(names, e):
            if a:
                m = m * power(name, a)
        total = total + m
    return total.truncate(prec)


@dataclass
class VerificationReport:
    name: str
    weight: int
    verified: bool
    checked: dict  # tag -> coefficients checked
    cutoff: dict  # tag -> strict cutoff
    first_nonzero: dict  # tag -> exponent or None

    @property
    def margin(self):
        return min(self.checked[t] - self.cutoff[t] for t in self.checked)

    def to_dict(self):
        return {
            "relation": self.name,
            "weight": self.weight,
            "verified": self.verified,
            "margin": self.margin,
            "checked": self.checked,
            "cutoff": self.cutoff,
            "first_nonzero": {t: (None if v is None else str(v)) for t, v in self.first_nonzero.items()},
        }


def verify_relation(rel, pres, tags, norms, strict=False, prec=None):
    """Check rel on each curve; strict mode uses the Sturm cutoff of the curve."""
    checked, cutoff, first = {}, {}, {}
    ok = True
    for tag in tags:
        cutoff[tag] = strict_cutoff(rel.weight, norms[tag])
        n = cutoff[tag] if strict else (prec or FAST_PREC)
        value = eval_relation(rel, pres, tag, n)
        checked[tag] = n
        first[tag] = None if value.is_zero() else value.valuation()
        ok = ok and value.is_zero()
    return VerificationReport(rel.name, rel.weight, ok, checked, cutoff, first)


# -- trivial-character generators ---------------------------------------------------

def _trivial_candidates(pres):
    """Minimal nonconstant monomials of trivial character (total degree <= modulus)."""
    m = pres.modulus
    n = len(pres.generators)
    cands = []
    for e in product(range(m + 1), repeat=n):
        if not 0 < sum(e) <= m:
            continue
        if sum(a * c for a, c in zip(e, pres.characters)) % m:
            continue
        cands.append(e)
    minimal = []
    for e in sorted(cands, key=sum):
        if not any(all(x <= y for x, y in zip(o, e)) for o in minimal):
            minimal.append(e)
    return minimal


def _monomials_of(weights, chars, w, modulus):
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            if left == 0 and sum(a * c for a, c in zip(acc, chars)) % modulus == 0:
                out.append(tuple(acc))
            return
        for a in range(left // weights[i] + 1):
            rec(i + 1, left - a * weights[i], acc + [a])

    rec(0, w, [])
    return out


def _rank(vectors, columns):
    if not vectors:
        return 0
    idx = {c: i for i, c in enumerate(columns)}
    mat = fmpq_mat(len(vectors), len(columns))
    for r, v in enumerate(vectors):
        for mono, c in v.items():
            mat[r, idx[mono]] = fmpq(c.numerator, c.denominator)
    return mat.rank()


def _binomial_leads(basis, order):
    """Leading monomials of basis elements m - m' identifying two monomials."""
    out = set()
    for g in basis:
        if len(g) == 2 and sorted(g.values()) == [-1, 1]:
            out.add(order.leading(g))
    return out


def trivial_char_monomials(pres, basis=None):
    """Monomial algebra generators of the trivial-character subring, minimal modulo the relations.

    Candidates are the indecomposable trivial-character monomials.  A candidate
    equal to another monomial through a binomial relation is replaced by that
    monomial.  In each weight a candidate is kept when its normal form is
    independent of the decomposable part and of the candidates kept before it;
    lower degree in the first generator goes first, then fewer factors.
    """
    basis = pres.groebner_basis() if basis is None else basis
    order = MonomialOrder(pres.weights)
    weights, chars, m = pres.weights, pres.characters, pres.modulus
    cands = _trivial_candidates(pres)
    skip = _binomial_leads(basis, order)
    kept = []
    for w in sorted({order.degree(c) for c in cands}):
        layer = sorted(
            (c for c in cands if order.degree(c) == w and c not in skip),
            key=lambda e: (e[0], sum(e), tuple(-a for a in e)),
        )
        monos = _monomials_of(weights, chars, w, m)
        span = [v for v in (normal_form({e: 1}, basis, order) for e in monos if e not in cands) if v]
        for c in layer:
            nf = normal_form({c: 1}, basis, order)
            if not nf:
                continue
            cols = sorted({k for v in span + [nf] for k in v}, key=order.key)
            if _rank(span + [nf], cols) > _rank(span, cols):
                span.append(nf)
                kept.append(c)
    return kept

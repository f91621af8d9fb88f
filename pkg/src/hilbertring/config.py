"""
Field configurations: lambda catalog, Borcherds product catalog and the
printed anchors used by the self test.  Shipped as JSON in hilbertring.data.
"""

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .borcherds import ProductSpec, divisor_of, restrict_product
from .classical import eisenstein_level1, gamma0_3_generators, gamma0_5_generators
from .hilbert_eisenstein import EisensteinSpec, restrict_eisenstein
from .plus_space import PrincipalPart
from .qseries import FracQSeries, eta_product
from .quadfield import QuadField
from .ring import Presentation, load_relations

__all__ = [
    "FieldConfig",
    "evaluate_identity",
    "identity_atoms",
    "load_field",
    "series_from_coeffs",
]


def series_from_coeffs(coeffs, through, shift=0):
    """Series with the given {exponent: value}, zero elsewhere, known below q^through.

    With a shift the dict is read relative to q^shift.
    """
    shift = Fraction(shift)
    data = {Fraction(int(n)) + shift: Fraction(v) for n, v in coeffs.items()}
    return FracQSeries(data, prec=Fraction(through) + shift)


# -- classical identities ----------------------------------------------------------

def identity_atoms(level, prec):
    """Named classical forms available to identity strings at the given level."""
    atoms = {
        "E4": eisenstein_level1(4, prec),
        "E6": eisenstein_level1(6, prec),
        "Delta": eta_product([(1, 24)], prec),
        "eta8": eta_product([(1, 8)], prec),
    }
    if level == 3:
        atoms.update(gamma0_3_generators(prec))
        atoms["s2"] = eta_product([(1, 2), (3, 2)], prec)
    elif level == 5:
        atoms.update(gamma0_5_generators(prec))
    return atoms


def evaluate_identity(expr, level, prec):
    """Evaluate a polynomial expression like 'e2^2-4*s4' in the classical atoms."""
    atoms = identity_atoms(level, prec)
    tree = ast.parse(expr.replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in atoms:
                raise KeyError(f"unknown form {node.id!r} at level {level}")
            return atoms[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return _scale(ev(node.operand), -1)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return _lift(a, prec) + _lift(b, prec)
            if isinstance(node.op, ast.Sub):
                return _lift(a, prec) - _lift(b, prec)
            if isinstance(node.op, ast.Mult):
                if isinstance(a, Fraction):
                    return _scale(b, a)
                if isinstance(b, Fraction):
                    return _scale(a, b)
                return (a * b).truncate(prec)
            if isinstance(node.op, ast.Pow) and isinstance(b, Fraction) and b.denominator == 1:
                return a.pow_int(int(b)).truncate(prec)
        raise ValueError(f"unsupported expression: {ast.dump(node)}")

    return _lift(ev(tree), prec)


def _scale(x, c):
    return x * c if isinstance(x, Fraction) else x.scale(c)


def _lift(x, prec):
    return FracQSeries({0: x}, prec=prec) if isinstance(x, Fraction) else x


# -- configuration -----------------------------------------------------------------

@dataclass
class FieldConfig:
    p: int
    unit: tuple
    lambdas: dict  # tag -> FieldElement
    specs: dict  # name -> ProductSpec
    expected_divisors: dict  # name -> {n: multiplicity}
    characters: dict = field(default_factory=dict)
    relation_pair: tuple = ()
    modulus: int = 1
    auxiliary: dict = field(default_factory=dict)
    anchors: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return QuadField(self.p)

    def lam(self, tag):
        """A configured tag, or "x,y" for the point (x + y sqrt p)/2."""
        if tag in self.lambdas:
            return self.lambdas[tag]
        if "," in tag:
            x, y = (Fraction(t) for t in tag.split(","))
            lam = QuadField(self.p).from_half(x, y)
            if not lam.is_totally_positive():
                raise ValueError(f"{tag} is not totally positive")
            return lam
        raise KeyError(f"unknown lambda tag {tag!r}; known: {sorted(self.lambdas)}")

    def norm(self, tag):
        return int(self.lam(tag).norm())

    def spec(self, name):
        if name in self.specs:
            return self.specs[name]
        if name in self.auxiliary:
            return self.auxiliary[name]
        raise KeyError(f"unknown product {name!r}; known: {sorted(self.specs) + sorted(self.auxiliary)}")

    def to_dict(self):
        return self.raw

    def image(self, name, tag, prec):
        """Restriction of a configured product or of E_k (names 'E2', 'E4', ...) at a lambda tag."""
        lam = self.lam(tag)
        if name.startswith("E") and name[1:].isdigit():
            return restrict_eisenstein(EisensteinSpec(self.field, int(name[1:])), lam, prec)
        return restrict_product(self.spec(name), lam, prec)

    def presentation(self, source="builtin", precs=None):
        """Presentation with images at the relation pair; precs maps tag -> precision."""
        gens, rels = load_relations(source)
        pres = Presentation(gens, rels, modulus=self.modulus)
        for tag, prec in (precs or {}).items():
            pres.images[tag] = {g.name: self.image(g.name, tag, prec) for g in gens}
        return pres


def _spec_from(name, entry, p, specs):
    if "combination" in entry:
        pp = PrincipalPart(p, {})
        const = Fraction(0)
        for other, mult in entry["combination"].items():
            pp = pp + specs[other].principal.scale(mult)
            const += specs[other].constant * mult
    else:
        pp = PrincipalPart(p, {int(n): Fraction(c) for n, c in entry["poles"].items()})
        const = Fraction(entry["constant"])
    return ProductSpec(name, pp, const)


def _divisor(entry):
    return {int(n): Fraction(c) for n, c in entry.get("divisor", {}).items()}


def load_field(source):
    """Load a field configuration by prime (5, 29, 37) or from a JSON path."""
    if isinstance(source, int) or str(source).isdigit():
        text = resources.files("hilbertring.data").joinpath(f"field{int(source)}.json").read_text()
    else:
        text = Path(source).read_text()
    raw = json.loads(text)
    p = int(raw["p"])
    K = QuadField(p)
    unit = K(Fraction(raw["unit"][0]), Fraction(raw["unit"][1]))
    if unit != K.fundamental_unit:
        raise ValueError(f"configured unit {unit} is not the fundamental unit {K.fundamental_unit}")
    lambdas = {}
    for tag, (x, y) in raw["lambdas"].items():
        lam = K.from_half(x, y)
        if not lam.is_totally_positive():
            raise ValueError(f"{tag} = {lam} is not totally positive")
        lambdas[tag] = lam
    specs, expected, chars = {}, {}, {}
    for name, entry in raw["generators"].items():
        specs[name] = _spec_from(name, entry, p, specs)
        expected[name] = _divisor(entry)
        chars[name] = int(entry.get("character", 0))
    aux = {}
    for name, entry in raw.get("auxiliary", {}).items():
        aux[name] = _spec_from(name, entry, p, specs)
        expected[name] = _divisor(entry)
    for name, want in expected.items():
        got = divisor_of(specs.get(name) or aux[name])
        got = {n: c for n, c in got.items() if c}
        if want and got != want:
            raise ValueError(f"{name}: divisor {got} differs from the configured {want}")
    return FieldConfig(
        p=p,
        unit=unit,
        lambdas=lambdas,
        specs=specs,
        expected_divisors=expected,
        characters=chars,
        relation_pair=tuple(raw.get("relation_pair", ())),
        modulus=int(raw.get("modulus", 1)),
        auxiliary=aux,
        anchors=raw.get("anchors", {}),
        raw=raw,
    )

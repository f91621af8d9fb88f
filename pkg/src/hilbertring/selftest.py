"""
Anchor checks for a field configuration: every printed expansion, identity,
divisor, relation and Hilbert series in the config is recomputed and compared.
"""

import time
from dataclasses import dataclass
from fractions import Fraction

from .borcherds import (
    gamma0_lift,
    heegner_orders,
    is_cusp_form,
    is_holomorphic,
    resolve_leading,
    restrict_product,
    theta_contract,
    valence_leading,
    weyl_vector,
)
from .config import evaluate_identity, series_from_coeffs
from .groebner import HilbertSeriesResult
from .plus_space import obstruction_pairing, plus_cusp_forms, realize_half_integral
from .qseries import FracQSeries
from .ring import FAST_PREC, strict_cutoff, trivial_char_monomials, verify_relation

__all__ = ["CheckResult", "parse_monomial", "proportional", "run_selftest", "theta_of_form"]

RESTRICTION_PREC = 21


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self):
        return {"check": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 2)}


def proportional(a, b, upto=None):
    """True when a and b are nonzero and a = c b below q^upto for one scalar c."""
    if a.is_zero() or b.is_zero():
        return False
    upto = min(a.prec, b.prec) if upto is None else upto
    a, b = a.truncate(upto), b.truncate(upto)
    return (a.scale(b.leading_coefficient()) - b.scale(a.leading_coefficient())).is_zero()


def theta_of_form(a, b, c, prec):
    """Representation numbers of a x^2 + b xy + c y^2 (positive definite) below q^prec."""
    disc = 4 * a * c - b * b
    bound = int((4 * c * prec / disc) ** 0.5) + 2
    counts = {}
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            n = a * x * x + b * x * y + c * y * y
            if n < prec:
                counts[n] = counts.get(n, 0) + 1
    return FracQSeries(counts, prec=prec)


def parse_monomial(text, names):
    """'phi1*psi1^3' -> exponent vector over names."""
    e = [0] * len(names)
    for factor in text.split("*"):
        base, _, power = factor.partition("^")
        e[names.index(base)] += int(power or 1)
    return tuple(e)


def _hsr(entry, modulus):
    num = {(d, c): v for d, c, v in entry["numerator"]}
    return HilbertSeriesResult(num, [tuple(f) for f in entry["denominator"]], modulus)


class _Runner:
    def __init__(self):
        self.results = []

    def check(self, name, fn):
        t = time.time()
        try:
            ok, detail = fn()
        except Exception as exc:  # report, do not abort the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.results.append(CheckResult(name, bool(ok), detail, time.time() - t))


def _erratum(entry):
    note = entry.get("erratum")
    return f" (known erratum: {note})" if note else ""


def run_selftest(cfg, strict=False):
    """Run every anchor in cfg; returns a list of CheckResult."""
    run = _Runner()
    A = cfg.anchors
    p = cfg.p

    for name, entry in A.get("inputs", {}).items():
        def _input(name=name, entry=entry):
            F = cfg.spec(name).form(entry["through"])
            want = series_from_coeffs(entry["coeffs"], entry["through"])
            diff = F.series.truncate(entry["through"]) - want
            return diff.is_zero(), f"constant term {F.constant_term}"

        run.check(f"p={p} input {entry['label']} through q^{entry['through'] - 1}", _input)

    if "cusp_form" in A:
        entry = A["cusp_form"]

        def _cusp():
            forms = plus_cusp_forms(p, prec=entry["through"])
            want = series_from_coeffs(entry["coeffs"], entry["through"])
            return len(forms) == 1 and (forms[0].truncate(entry["through"]) - want).is_zero(), f"{len(forms)} cusp form(s)"

        run.check(f"p={p} weight-2 plus-space cusp form prefix", _cusp)

        def _pairings():
            (cusp,) = plus_cusp_forms(p)
            names = list(cfg.specs) + list(cfg.auxiliary)
            bad = [n for n in names if obstruction_pairing(cfg.spec(n).principal, cusp)]
            return not bad, "nonzero pairing: " + ", ".join(bad) if bad else f"{len(names)} principal parts pair to 0"

        run.check(f"p={p} obstruction pairings vanish", _pairings)

    if cfg.expected_divisors:
        def _divisors():
            bad = []
            for name, want in cfg.expected_divisors.items():
                spec = cfg.spec(name)
                if not is_holomorphic(spec):
                    bad.append(f"{name} not holomorphic")
            return not bad, "; ".join(bad) or f"{len(cfg.expected_divisors)} divisors match and are effective"

        run.check(f"p={p} divisors and holomorphy", _divisors)

        if p == 29:
            def _cusp_forms():
                bad = [n for n in cfg.specs if not is_cusp_form(cfg.spec(n))]
                return not bad, ", ".join(bad) or "all ten products vanish at the cusp"

            run.check(f"p={p} products are cusp forms", _cusp_forms)

    for name, spec in cfg.auxiliary.items():
        def _aux(spec=spec):
            F = spec.form(2)
            return F.constant_term == spec.constant, f"constant term {F.constant_term}"

        run.check(f"p={p} auxiliary input {name} with constant {spec.constant}", _aux)

    prec = RESTRICTION_PREC
    for entry in A.get("restrictions", []):
        def _identity(entry=entry):
            got = restrict_product(cfg.spec(entry["gen"]), cfg.lam(entry["lambda"]), prec)
            want = evaluate_identity(entry["identity"], cfg.norm(entry["lambda"]), prec)
            if got.is_zero():
                return False, "restriction is identically zero"
            return proportional(got, want, prec), f"leading term {got.leading_coefficient()} q^{got.valuation()}"

        run.check(f"p={p} Res_{entry['lambda']} {entry['gen']} ~ {entry['identity']}{_erratum(entry)}", _identity)

    for entry in A.get("restriction_prefixes", []):
        def _prefix(entry=entry):
            through = max(int(n) for n in entry["coeffs"]) + 1
            shift = Fraction(entry.get("shift", 0))
            want = series_from_coeffs(entry["coeffs"], through, shift)
            got = restrict_product(cfg.spec(entry["gen"]), cfg.lam(entry["lambda"]), through + shift)
            if got.is_zero():
                return False, "restriction is identically zero"
            return proportional(got, want), f"normalized by {got.leading_coefficient()}"

        run.check(f"p={p} printed prefix of Res_{entry['lambda']} {entry['gen']}{_erratum(entry)}", _prefix)

    for tag, names in A.get("zero_restrictions", {}).items():
        def _zeros(tag=tag, names=names):
            nonzero = [n for n in names if not restrict_product(cfg.spec(n), cfg.lam(tag), prec).is_zero()]
            return not nonzero, "nonzero: " + ", ".join(nonzero) if nonzero else ", ".join(names)

        run.check(f"p={p} restrictions to {tag} listed as zero", _zeros)

    for entry in A.get("eisenstein", []):
        def _eis(entry=entry):
            got = cfg.image("E2", entry["lambda"], prec)
            want = evaluate_identity(entry["identity"], cfg.norm(entry["lambda"]), prec)
            ok = (got - want).is_zero()
            if "coeffs" in entry:
                through = max(int(n) for n in entry["coeffs"]) + 1
                ok = ok and (got.truncate(through) - series_from_coeffs(entry["coeffs"], through)).is_zero()
            return ok, f"exact through q^{prec - 1}"

        run.check(f"p={p} Res_{entry['lambda']} E_2 = {entry['identity']}", _eis)

    for entry in A.get("contractions", []):
        def _contract(entry=entry):
            F = cfg.spec(entry["gen"]).form(entry["through"] * p // (4 * entry["ell"]) + 2)
            got = theta_contract(F, entry["ell"], entry["through"])
            want = series_from_coeffs(entry["coeffs"], entry["through"])
            lo = min(int(n) for n in entry["coeffs"])
            return (got - want).is_zero() and got.valuation() == lo, f"valence h = {valence_leading(got, entry['ell'])}"

        run.check(f"p={p} theta contraction at l={entry['ell']}", _contract)

    for entry in A.get("lifts", []):
        def _lift(entry=entry):
            spec, lam = cfg.spec(entry["gen"]), cfg.lam(entry["lambda"])
            spec.leading.clear()
            A_, source = resolve_leading(spec, lam)
            through = max(int(n) for n in entry["coeffs"]) + 1
            got = restrict_product(spec, lam, through)
            want = series_from_coeffs(entry["coeffs"], through)
            ok = A_ == Fraction(entry["leading"]) and source == "valence" and (got - want).is_zero()
            if "identity" in entry:
                ident = evaluate_identity(entry["identity"], cfg.norm(entry["lambda"]), 16)
                ok = ok and proportional(restrict_product(spec, lam, 16), ident, 16)
            return ok, f"leading exponent {A_} from {source}"

        run.check(f"p={p} lift of {entry['gen']} at {entry['lambda']}", _lift)

    if "weyl_vector" in A:
        entry = A["weyl_vector"]

        def _weyl():
            spec, lam = cfg.spec(entry["gen"]), cfg.lam(entry["chamber"])
            h = cfg.field(Fraction(entry["h"][0]), Fraction(entry["h"][1]))
            tags = [t for t in cfg.lambdas if t != "lambda1"]
            got = {t: resolve_leading(spec, cfg.lam(t))[0] for t in tags}
            want = {t: (cfg.lam(t) * h).trace() for t in tags}
            interpolated, _ = weyl_vector(spec, lam)
            return got == want and interpolated == h, f"interpolated h = {interpolated}"

        run.check(f"p={p} Weyl vector {entry['h'][0]} + ({entry['h'][1]}) sqrt{p}", _weyl)

    if "level3_lift" in A:
        ex = A["level3_lift"]
        through = ex["input"]["through"]

        def _ex5_input():
            prefix = series_from_coeffs(ex["prefix"]["coeffs"], ex["prefix"]["through"])
            f = realize_half_integral(prefix, ex["level"], ex["weight"], ex["eta"], through, plus_level=ex["plus_level"])
            want = series_from_coeffs(ex["input"]["coeffs"], through)
            return (f - want).is_zero(), f"input known below q^{through}"

        run.check("Gamma0(3) example: weight-4 form times eta quotient", _ex5_input)

        def _ex5_lift():
            prefix = series_from_coeffs(ex["prefix"]["coeffs"], ex["prefix"]["through"])
            need = (ex["lift_through"] - 1) ** 2 + 1
            f = realize_half_integral(prefix, ex["level"], ex["weight"], ex["eta"], need, plus_level=ex["plus_level"])
            lift = gamma0_lift(f, ex["plus_level"], valence_leading(f, ex["plus_level"]), ex["lift_through"])
            theta = theta_of_form(*ex["theta_form"], ex["lift_through"])
            return (lift - theta).is_zero(), f"theta series of {ex['theta_form']} through q^{ex['lift_through'] - 1}"

        run.check("Gamma0(3) example: lift is a theta series", _ex5_lift)

        def _ex5_heegner():
            f = series_from_coeffs(ex["input"]["coeffs"], through)
            got = [(h.discriminant, h.count, str(h.elliptic_weight), str(h.order)) for h in heegner_orders(f, ex["plus_level"])]
            want = [tuple(x) for x in ex["heegner"]]
            return got == want, f"{got}"

        run.check("Gamma0(3) example: Heegner divisor", _ex5_heegner)

    if "relations" in A:
        _relation_checks(run, cfg, A["relations"], strict)

    if "hilbert_series" in A or "trivial_char_monomials" in A:
        _ring_checks(run, cfg, A)

    return run.results


def _relation_checks(run, cfg, entry, strict):
    tags = cfg.relation_pair
    norms = {t: cfg.norm(t) for t in tags}
    pres = cfg.presentation(entry["source"])
    if strict:
        top = max(r.weight for r in pres.relations)
        precs = {t: strict_cutoff(top, norms[t]) for t in tags}
    else:
        precs = {t: FAST_PREC for t in tags}
    cfg_images = cfg.presentation(entry["source"], precs).images
    pres.images = cfg_images
    mode = "strict Sturm cutoffs" if strict else f"{FAST_PREC} coefficients"

    for rel in pres.relations:
        def _rel(rel=rel):
            rep = verify_relation(rel, pres, tags, norms, strict=strict)
            return rep.verified, f"checked {rep.checked}, cutoff {rep.cutoff}"

        run.check(f"relation {rel.name} at {', '.join(tags)} ({mode})", _rel)

    def _controls():
        survived = []
        for rel in pres.relations:
            for i in range(len(rel.terms)):
                rep = verify_relation(rel.perturbed(i, 1), pres, tags, norms, prec=FAST_PREC)
                if rep.verified:
                    survived.append(f"{rel.name}[{i}]")
        return not survived, "survivors: " + ", ".join(survived) if survived else "every single-coefficient perturbation fails"

    run.check("relation perturbations fail", _controls)

    typeset = cfg.presentation(entry["typeset"])
    typeset.images = cfg_images
    errata = entry.get("erratum", {})
    for rel in typeset.relations:
        builtin = next(r for r in pres.relations if r.name == rel.name)
        if rel.terms == builtin.terms:
            continue
        note = errata.get(rel.name, "differs from the builtin table")

        def _typeset(rel=rel):
            rep = verify_relation(rel, typeset, tags, norms, strict=strict)
            return rep.verified, f"first nonzero exponents {rep.to_dict()['first_nonzero']}"

        run.check(f"relation {rel.name} as typeset (known erratum: {note})", _typeset)


def _ring_checks(run, cfg, A):
    pres = cfg.presentation(A.get("relations", {}).get("source", "builtin"))
    basis = pres.groebner_basis()
    m = pres.modulus
    if "hilbert_series" in A:
        def _hs():
            got = pres.hilbert_series(basis)
            want = _hsr(A["hilbert_series"], m)
            return got.equals(want), got.rebase(want.denominator).format()

        run.check("character-graded Hilbert series", _hs)
    if "trivial_hilbert_series" in A:
        def _trivial():
            got = pres.trivial_hilbert_series(basis)
            want = _hsr(A["trivial_hilbert_series"], m)
            return got.equals(want), got.rebase(want.denominator).format()

        run.check("trivial-character Hilbert series", _trivial)
    if "trivial_char_monomials" in A:
        def _monos():
            want = [parse_monomial(s, pres.names) for s in A["trivial_char_monomials"]]
            got = trivial_char_monomials(pres, basis)
            return sorted(got) == sorted(want), f"{len(got)} monomials"

        run.check("trivial-character generator monomials", _monos)

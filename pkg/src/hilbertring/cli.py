"""Command line entry point: ``hilbertring <subcommand> ...``."""

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .borcherds import (
    MissingLeadingExponent,
    UnresolvableLeadingExponent,
    divisor_of,
    is_cusp_form,
    is_holomorphic,
    resolve_leading,
    restrict_product,
    theta_contract,
    valence_leading,
    walls_through,
)
from .config import load_field
from .groebner import series_expand
from .plus_space import Obstructed, PrincipalPart, realize
from .ring import FAST_PREC, strict_cutoff, trivial_char_monomials, verify_relation
from .selftest import run_selftest

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY = 2
EXIT_LEADING = 3
EXIT_OBSTRUCTED = 4


class VerificationFailed(Exception):
    pass


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _input_hash(spec):
    blob = json.dumps({"p": spec.principal.p, "poles": [[n, _fmt(c)] for n, c in spec.principal.poles], "constant": _fmt(spec.constant)})
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _emit(args, header, series=None, payload=None):
    if args.json:
        out = {"hilbertring": __version__, **header}
        if series is not None:
            out["series"] = series.to_dict()
        if payload is not None:
            out.update(payload)
        out = {k.replace("-", "_").replace(" ", "_"): v for k, v in out.items()}
        print(json.dumps(out, indent=1, default=str))
        return
    print(f"# hilbertring {__version__} {args.command}")
    for key, value in header.items():
        print(f"# {key}: {value}")
    if payload is not None:
        for key, value in payload.items():
            if isinstance(value, list):
                print(f"{key}:")
                for item in value:
                    print(f"  {item}")
            else:
                print(f"{key}: {value}")
    if series is not None:
        print(f"# expansion: {series!r}")
        print(series.to_text())


def _gen_header(cfg, spec):
    return {
        "field": f"Q(sqrt{cfg.p})",
        "product": spec.name,
        "weight": _fmt(spec.weight),
        "input": f"sha256:{_input_hash(spec)}",
    }


# -- subcommands -------------------------------------------------------------------

def cmd_realize(args):
    cfg = load_field(args.field)
    if args.poles:
        poles = {}
        for item in args.poles.split(","):
            n, c = item.split(":")
            poles[int(n)] = Fraction(c)
        F = realize(PrincipalPart(cfg.p, poles), args.prec)
        header = {"field": f"Q(sqrt{cfg.p})", "poles": args.poles}
    else:
        spec = cfg.spec(args.gen)
        F = spec.form(args.prec)
        header = _gen_header(cfg, spec)
    header["constant term"] = _fmt(F.constant_term)
    _emit(args, header, F.series.truncate(args.prec))


def cmd_restrict(args):
    cfg = load_field(args.field)
    spec = cfg.spec(args.gen)
    lam = cfg.lam(args.lam)
    if args.strict and cfg.relation_pair:
        spec.chamber_ref = cfg.lam(cfg.relation_pair[0])
    walls = walls_through(spec.principal, lam)
    if any(sum(c for _, c in terms) > 0 for terms in walls.values()):
        A, source = None, "curve lies in the divisor"
    else:
        A, source = resolve_leading(spec, lam, tag=args.lam)
    series = restrict_product(spec, lam, args.prec, leading=A, strict_chamber=args.strict)
    header = _gen_header(cfg, spec)
    header.update({
        "lambda": f"{args.lam} = {lam} (norm {int(lam.norm())})",
        "chamber ref": f"chamber of {args.lam}" if spec.chamber_ref is None else f"chamber of {spec.chamber_ref}",
        "leading exponent": source if A is None else f"{_fmt(A)} ({source})",
    })
    _emit(args, header, series)


def cmd_contract(args):
    cfg = load_field(args.field)
    spec = cfg.spec(args.gen)
    F = spec.form(args.prec * cfg.p // (4 * args.ell) + 2)
    f = theta_contract(F, args.ell, args.prec)
    header = _gen_header(cfg, spec)
    header.update({"ell": args.ell, "halved": args.ell != cfg.p})
    try:
        header["valence leading exponent"] = _fmt(valence_leading(f, args.ell))
    except ValueError as exc:
        header["valence leading exponent"] = f"unavailable ({exc})"
    _emit(args, header, f)


def cmd_divisor(args):
    cfg = load_field(args.field)
    names = [args.gen] if args.gen else list(cfg.specs) + list(cfg.auxiliary)
    rows = []
    for name in names:
        spec = cfg.spec(name)
        div = {n: c for n, c in sorted(divisor_of(spec).items()) if c}
        text = " + ".join(f"{_fmt(c)}*T{n}" for n, c in div.items()) or "0"
        flags = []
        if is_holomorphic(spec):
            flags.append("holomorphic")
        if is_cusp_form(spec):
            flags.append("cusp form")
        rows.append(f"{name}: weight {_fmt(spec.weight)}, div = {text}" + (f" [{', '.join(flags)}]" if flags else ""))
    payload = {"divisors": rows}
    if args.json:
        payload = {"divisors": {n: {str(k): _fmt(v) for k, v in divisor_of(cfg.spec(n)).items() if v} for n in names}}
    _emit(args, {"field": f"Q(sqrt{cfg.p})"}, payload=payload)


def cmd_eisenstein(args):
    cfg = load_field(args.field)
    lam = cfg.lam(args.lam)
    series = cfg.image(f"E{args.k}", args.lam, args.prec)
    header = {"field": f"Q(sqrt{cfg.p})", "weight": args.k, "lambda": f"{args.lam} = {lam} (norm {int(lam.norm())})"}
    _emit(args, header, series)


def _relation_precs(cfg, pres, args):
    tags = cfg.relation_pair
    if args.strict:
        top = max(r.weight for r in pres.relations)
        return {t: strict_cutoff(top, cfg.norm(t)) for t in tags}
    return {t: args.prec or FAST_PREC for t in tags}


def cmd_verify(args):
    cfg = load_field(args.field)
    if not cfg.relation_pair:
        raise ValueError(f"no relation-checking pair configured for p={cfg.p}")
    base = cfg.presentation(args.relations)
    precs = _relation_precs(cfg, base, args)
    pres = cfg.presentation(args.relations, precs)
    tags = cfg.relation_pair
    norms = {t: cfg.norm(t) for t in tags}
    reports = [verify_relation(r, pres, tags, norms, strict=args.strict, prec=precs[tags[0]]) for r in pres.relations]
    header = {"field": f"Q(sqrt{cfg.p})", "relations": args.relations, "curves": ", ".join(f"{t} (norm {norms[t]})" for t in tags),
              "mode": "strict Sturm cutoffs" if args.strict else f"{precs[tags[0]]} coefficients"}
    if args.json:
        _emit(args, header, payload={"reports": [r.to_dict() for r in reports]})
    else:
        lines = []
        for r in reports:
            status = "verified" if r.verified else "FAILED"
            first = ", ".join(f"{t}: q^{_fmt(v)}" for t, v in r.first_nonzero.items() if v is not None)
            lines.append(f"{r.name} (weight {r.weight}): {status}, margin {r.margin}" + (f", first nonzero {first}" if first else ""))
        _emit(args, header, payload={"results": lines, "summary": f"{sum(r.verified for r in reports)}/{len(reports)} verified"})
    if not all(r.verified for r in reports):
        raise VerificationFailed("some relations do not vanish")


def cmd_hilbert_series(args):
    cfg = load_field(args.field)
    pres = cfg.presentation(args.relations)
    hsr = pres.hilbert_series() if args.sector == "all" else pres.trivial_hilbert_series()
    key = "hilbert_series" if args.sector == "all" else "trivial_hilbert_series"
    if key in cfg.anchors:
        # present over the configured denominator when it divides
        try:
            hsr = hsr.rebase([tuple(f) for f in cfg.anchors[key]["denominator"]])
        except ValueError:
            pass
    header = {"field": f"Q(sqrt{cfg.p})", "relations": args.relations, "sector": args.sector}
    dims = series_expand(hsr, args.expand)
    table = []
    for d in range(args.expand):
        row = [dims.get((d, c), 0) for c in range(hsr.modulus)] if args.sector == "all" else [dims.get((d, 0), 0)]
        table.append(f"t^{d}: " + " ".join(map(str, row)))
    payload = {"series": hsr.format()} if not args.json else {"hilbert_series": hsr.to_dict()}
    payload["dimensions"] = table
    _emit(args, header, payload=payload)


def cmd_generators(args):
    cfg = load_field(args.field)
    pres = cfg.presentation(args.relations)
    header = {"field": f"Q(sqrt{cfg.p})", "relations": args.relations}
    if args.trivial_char:
        monos = trivial_char_monomials(pres)
        lines = [_monomial_text(e, pres.names) for e in monos]
        _emit(args, header, payload={"trivial-character generators": lines, "count": len(lines)})
    else:
        lines = [f"{g.name}: weight {g.weight}, character chi^{g.character}" for g in pres.generators]
        _emit(args, header, payload={"generators": lines})


def _monomial_text(e, names):
    parts = []
    for a, n in zip(e, names):
        if a:
            parts.append(n if a == 1 else f"{n}^{a}")
    return "*".join(parts)


def cmd_selftest(args):
    fields = [args.field] if args.field else [5, 29, 37]
    failed = 0
    records = []
    for p in fields:
        results = run_selftest(load_field(p), strict=args.strict)
        for r in results:
            failed += not r.passed
            records.append(r)
            if not args.json:
                print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  [{r.detail}]")
    if args.json:
        print(json.dumps({"hilbertring": __version__, "results": [r.to_dict() for r in records]}, indent=1))
    else:
        print(f"{len(records) - failed}/{len(records)} checks passed")
    if failed:
        raise VerificationFailed(f"{failed} check(s) failed")


# -- parser ------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="hilbertring", description="Hilbert modular forms via restricted Borcherds products.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, help="the prime p of Q(sqrt p): 5, 29 or 37")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=func)
        return p

    p = add("realize", cmd_realize, help="weakly holomorphic input form of a product")
    p.add_argument("--gen")
    p.add_argument("--poles", help="explicit principal part, e.g. '4:2,1:6'")
    p.add_argument("--prec", type=int, default=20)

    p = add("restrict", cmd_restrict, help="restriction of a product to a curve")
    p.add_argument("--gen", required=True)
    p.add_argument("--lambda", dest="lam", required=True, help="configured tag or x,y for (x + y sqrt p)/2")
    p.add_argument("--prec", type=Fraction, default=Fraction(20))
    p.add_argument("--strict", action="store_true", help="require the chamber of the relation pair")

    p = add("contract", cmd_contract, help="theta contraction to a half-integral input")
    p.add_argument("--gen", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--prec", type=int, default=20)

    p = add("divisor", cmd_divisor, help="Hirzebruch-Zagier divisor of products")
    p.add_argument("--gen")

    p = add("eisenstein", cmd_eisenstein, help="restricted Hecke Eisenstein series")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--lambda", dest="lam", required=True, help="configured tag or x,y for (x + y sqrt p)/2")
    p.add_argument("--prec", type=int, default=20)

    p = add("verify", cmd_verify, help="check relations on the relation pair of curves")
    p.add_argument("--relations", default="builtin", help="builtin, printed or a file path")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="check to the Sturm cutoff of each curve")
    mode.add_argument("--fast", action="store_true", help=f"check {FAST_PREC} coefficients (default)")
    p.add_argument("--prec", type=int)

    p = add("hilbert-series", cmd_hilbert_series, help="Hilbert series of the presented ring")
    p.add_argument("--relations", default="builtin")
    p.add_argument("--sector", choices=["all", "trivial"], default="all")
    p.add_argument("--expand", type=int, default=13, help="dimension table below t^N")

    p = add("generators", cmd_generators, help="generators, or trivial-character monomials")
    p.add_argument("--relations", default="builtin")
    p.add_argument("--trivial-char", action="store_true")

    p = add("selftest", cmd_selftest, help="recompute every configured anchor")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true")
    mode.add_argument("--fast", action="store_true")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command not in ("selftest",) and args.field is None:
        parser.error("--field is required")
    if args.command == "realize" and not (args.gen or args.poles):
        parser.error("realize needs --gen or --poles")
    try:
        args.func(args)
    except VerificationFailed as exc:
        return _fail(EXIT_VERIFY, exc)
    except (UnresolvableLeadingExponent, MissingLeadingExponent) as exc:
        return _fail(EXIT_LEADING, exc)
    except Obstructed as exc:
        return _fail(EXIT_OBSTRUCTED, exc)
    except (ValueError, KeyError, OSError) as exc:
        return _fail(EXIT_ERROR, exc)
    return EXIT_OK


def _fail(code, exc):
    record = {"error": type(exc).__name__, "message": str(exc).strip("'\""), "exit": code}
    print(json.dumps(record), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

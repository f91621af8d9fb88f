"""The ring of symmetric-character Hilbert modular forms for Q(sqrt 37).

Checks the relations on T21 and T33, then derives the Hilbert series and
the trivial-character generators.  Run: python3 demos/sqrt37_ring.py
"""

from hilbertring import load_field, trivial_char_monomials, verify_relation

cfg = load_field(37)
tags = cfg.relation_pair
norms = {t: cfg.norm(t) for t in tags}

for source in ("printed", "builtin"):
    pres = cfg.presentation(source, {t: 40 for t in tags})
    print(f"{source} relations, 40 coefficients:")
    for rel in pres.relations:
        rep = verify_relation(rel, pres, tags, norms, prec=40)
        where = {t: str(v) for t, v in rep.first_nonzero.items() if v is not None}
        print(f"  {rel.name:9s} weight {rel.weight:2d}  {'ok' if rep.verified else 'fails, first nonzero ' + str(where)}")

pres = cfg.presentation("builtin")
basis = pres.groebner_basis()
print(f"\nGroebner basis: {len(basis)} elements")
print("Hilbert series:", pres.hilbert_series(basis).rebase([(1, 1), (1, 2), (2, 0)]).format())
print("trivial part:  ", pres.trivial_hilbert_series(basis).rebase([(1, 0), (2, 0), (3, 0)]).format())
names = pres.names
monos = trivial_char_monomials(pres, basis)
print(f"{len(monos)} trivial-character generators:")
print("  " + ", ".join("*".join(f"{n}^{a}" if a > 1 else n for n, a in zip(names, e) if a) for e in monos))

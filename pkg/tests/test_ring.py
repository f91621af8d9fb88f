from fractions import Fraction

import pytest

from hilbertring.classical import gamma0_5_generators
from hilbertring.config import load_field
from hilbertring.ring import (
    Generator,
    Presentation,
    RelationPoly,
    format_relations,
    load_relations,
    parse_relations,
    strict_cutoff,
    trivial_char_monomials,
    verify_relation,
)


def test_builtin_relations_round_trip():
    gens, rels = load_relations("builtin")
    assert [g.name for g in gens] == ["phi1", "psi1", "E2", "phi2", "psi2", "phi4", "psi7"]
    assert [r.name for r in rels] == ["R_3_1", "R_4_1", "R_4_chi", "R_8_1", "R_8_chi", "R_8_chi2", "R_9_chi", "R_11_1", "R_14_chi"]
    again = parse_relations(format_relations(gens, rels))
    assert again == (gens, rels)


def test_relations_are_normalized():
    gens = [Generator("x", 1), Generator("y", 2)]
    a = RelationPoly.build("a", {(2, 0): Fraction(1, 2), (0, 1): Fraction(-3, 2)}, gens, modulus=1)
    b = RelationPoly.build("a", {(2, 0): -4, (0, 1): 12}, gens, modulus=1)
    assert a == b
    assert a.weight == 2


def test_malformed_relations_are_rejected():
    gens = [Generator("x", 1), Generator("y", 2)]
    with pytest.raises(ValueError):
        RelationPoly.build("bad", {(1, 0): 1, (0, 1): 1}, gens, modulus=1)
    with pytest.raises(ValueError):
        RelationPoly.build("empty", {}, gens, modulus=1)
    text = "# generators x y\n# weights 1 2\nrelation r\n3 0 1 2 0\n3 0 -1 0 1\n"
    with pytest.raises(ValueError):
        parse_relations(text)
    with pytest.raises(ValueError):
        parse_relations("relation r\n2 0 1 2 0\n")


def gamma0_5_presentation(prec):
    gens = [Generator("e2", 2), Generator("e4", 4), Generator("s4", 4)]
    # e4^2 = e2^4 - 44 s4 e2^2 - 16 s4^2
    rel = RelationPoly.build(
        "classical",
        {(0, 2, 0): 1, (4, 0, 0): -1, (2, 0, 1): 44, (0, 0, 2): 16},
        gens,
        modulus=1,
    )
    pres = Presentation(gens, [rel], modulus=1, images={"level5": gamma0_5_generators(prec)})
    return pres, rel


def test_verification_on_classical_images():
    pres, rel = gamma0_5_presentation(30)
    ok = verify_relation(rel, pres, ["level5"], {"level5": 5}, prec=30)
    assert ok.verified and ok.first_nonzero == {"level5": None}
    bad = verify_relation(rel.perturbed(1, 1), pres, ["level5"], {"level5": 5}, prec=30)
    assert not bad.verified
    assert bad.first_nonzero["level5"] == 0


def test_strict_cutoffs():
    assert strict_cutoff(14, 33) == 113
    assert strict_cutoff(7, 23) == 29
    assert strict_cutoff(3, 21) == 17


def test_zero_relation_is_verified():
    pres, _ = gamma0_5_presentation(20)
    zero = RelationPoly("zero", (), 4, 0)
    assert verify_relation(zero, pres, ["level5"], {"level5": 5}, prec=20).verified


def test_trivial_character_monomials_toys():
    g = Presentation([Generator("g", 1, 1)], [], modulus=3)
    assert trivial_char_monomials(g) == [(3,)]
    two = Presentation([Generator("g1", 1, 1), Generator("g2", 1, 2)], [], modulus=3)
    assert sorted(trivial_char_monomials(two)) == sorted([(3, 0), (0, 3), (1, 1)])


def test_user_relation_file(tmp_path):
    # phi5 phi2 and psi3 phi4 share a principal part, so they are the same product
    path = tmp_path / "rel29.txt"
    path.write_text(
        "# generators phi2 psi3 phi4 phi5\n"
        "# weights 2 3 4 5\n"
        "relation product_identity\n"
        "7 0 1 1 0 0 1\n"
        "7 0 -1 0 1 1 0\n"
    )
    cfg = load_field(29)
    tags = cfg.relation_pair
    pres = cfg.presentation(str(path), {t: 12 for t in tags})
    norms = {t: cfg.norm(t) for t in tags}
    (rel,) = pres.relations
    assert verify_relation(rel, pres, tags, norms, prec=12).verified
    assert not verify_relation(rel.perturbed(), pres, tags, norms, prec=12).verified

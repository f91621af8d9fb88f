from fractions import Fraction
from itertools import permutations

from hilbertring.groebner import HilbertSeriesResult, groebner, hilbert_series, series_expand, trivial_projection

from oracles import quotient_dims


def test_cusp_relation_is_its_own_basis():
    f = {(3, 0): -1, (0, 2): 1}  # y^2 - x^3 with x, y of weights 2, 3
    basis = groebner([f], [2, 3])
    # revlex: x^3 leads since it has the lower power of the last variable
    assert basis == [{(3, 0): 1, (0, 2): -1}]
    hs = hilbert_series(basis, [2, 3], [0, 0], 1)
    assert hs.equals(HilbertSeriesResult({(0, 0): 1, (6, 0): -1}, [(2, 0), (3, 0)], 1))


def test_product_of_variables():
    hs = hilbert_series(groebner([{(1, 1): 1}], [1, 1]), [1, 1], [0, 0], 1)
    assert hs.equals(HilbertSeriesResult({(0, 0): 1, (1, 0): 1}, [(1, 0)], 1))


def test_free_ring():
    hs = hilbert_series([], [2, 3, 3], [0, 1, 2], 3)
    assert hs.numerator == {(0, 0): 1}
    assert series_expand(hs, 7) == {(0, 0): 1, (2, 0): 1, (3, 1): 1, (3, 2): 1, (4, 0): 1, (5, 1): 1, (5, 2): 1, (6, 0): 2, (6, 1): 1, (6, 2): 1}


# weights 1, 2, 3 and characters 0, 1, 2 mod 3
WEIGHTS = [1, 2, 3]
CHARS = [0, 1, 2]
IDEAL = [
    {(2, 1, 0): 1, (0, 2, 0): -1, (1, 0, 1): 3},
    {(0, 0, 2): 1, (3, 0, 1): -2, (0, 3, 0): 1, (2, 2, 0): Fraction(1, 2)},
    {(1, 1, 1): 1, (0, 3, 0): 5, (6, 0, 0): -1},
]


def homogeneous_parts(polys):
    # the test ideal is only weight-homogeneous; split each generator by character
    out = []
    for f in polys:
        parts = {}
        for e, c in f.items():
            ch = sum(a * x for a, x in zip(e, CHARS)) % 3
            parts.setdefault(ch, {})[e] = c
        out.extend(parts.values())
    return out


def test_standard_monomials_match_linear_algebra():
    polys = homogeneous_parts(IDEAL)
    basis = groebner(polys, WEIGHTS)
    hs = hilbert_series(basis, WEIGHTS, CHARS, 3)
    top = 16
    assert series_expand(hs, top) == quotient_dims(polys, WEIGHTS, CHARS, 3, top)


def test_basis_does_not_depend_on_input_order():
    polys = homogeneous_parts(IDEAL)
    want = groebner(polys, WEIGHTS)
    for perm in permutations(polys):
        assert groebner(list(perm), WEIGHTS) == want


def test_trivial_projection_keeps_character_zero():
    polys = homogeneous_parts(IDEAL)
    hs = hilbert_series(groebner(polys, WEIGHTS), WEIGHTS, CHARS, 3)
    triv = trivial_projection(hs)
    top = 20
    full = series_expand(hs, top)
    assert series_expand(triv, top) == {k: v for k, v in full.items() if k[1] == 0}


def test_rebase_and_format():
    hs = HilbertSeriesResult({(0, 0): 1}, [(1, 0)], 1)
    wide = hs.rebase([(1, 0), (2, 0)])
    assert wide.numerator == {(0, 0): 1, (2, 0): -1}
    assert wide.equals(hs)
    assert wide.format() == "(1 - t^2) / (1 - t)(1 - t^2)"

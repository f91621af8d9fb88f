from fractions import Fraction

import pytest

from hilbertring.quadfield import QuadField, enumerate_trace_slice, slice_pnorm_counts, weyl_chamber_check

from oracles import trace_slice_box


@pytest.mark.parametrize("p,unit", [(5, (1, 1)), (29, (5, 1)), (37, (12, 2))])
def test_fundamental_unit(p, unit):
    K = QuadField(p)
    eps = K.fundamental_unit
    assert eps == K.from_half(*unit)
    assert abs(eps.norm()) == 1


def test_rejects_bad_primes():
    for p in (3, 7, 21):
        with pytest.raises(ValueError):
            QuadField(p)


def test_arithmetic_and_positivity():
    K = QuadField(29)
    a = K.from_half(7, 1)
    assert a.norm() == 5 and a.trace() == 7
    assert a.is_totally_positive()
    assert not K.from_half(5, 1).conj().is_totally_positive()
    assert (a * a.conj()) == K(5)
    assert (a / a) == K(1)
    assert K.from_half(7, 1).is_integral() and not K(Fraction(1, 2)).is_integral()
    assert (K(1) / K.sqrt_p).in_codifferent()


@pytest.mark.parametrize(
    "p,lam,n,m",
    [(29, (2, 0), 3, 1), (29, (7, 1), 4, 1), (29, (11, 1), 5, -10), (37, (13, 1), 6, 1), (37, (7, 1), 3, -12), (5, (5, 1), 7, 1)],
)
def test_trace_slice_matches_box_search(p, lam, n, m):
    K = QuadField(p)
    lam = K.from_half(*lam)
    got = sorted(((int(p * nu.norm()), nu) for nu in enumerate_trace_slice(lam, n, m)), key=lambda t: (t[0], t[1].a, t[1].b))
    want = trace_slice_box(lam, n, m, box=60)
    assert [(pn, nu) for pn, nu in got] == want
    counts = {}
    for pn, _ in want:
        counts[pn] = counts.get(pn, 0) + 1
    assert slice_pnorm_counts(lam, n, m) == counts


def test_norm_detection():
    K = QuadField(29)
    # 2 and 3 are inert, 5 and 7 split
    assert not K.is_norm(2) and not K.is_norm(3)
    assert K.is_norm(5) and K.is_norm(7) and K.is_norm(-1)


def test_chamber_check_for_relation_pairs():
    K = QuadField(37)
    poles = {3: 2, 1: 2}
    assert weyl_chamber_check(K.from_half(11, 1), poles, K.from_half(13, 1))
    K = QuadField(29)
    assert weyl_chamber_check(K.from_half(11, 1), {16: 2, 6: 2, 5: 2, 1: -2}, K.from_half(13, 1))


def _walls_by_box(lam_a, lam_b, poles, box=80):
    K = lam_a.field
    p = K.p
    hits = []
    for n in poles:
        for y in range(-box, box + 1):
            for x in range(-box, box + 1):
                if (x - y) % 2 or p * y * y - x * x != -4 * n:
                    continue
                nu = K.from_half(x, y) / K.sqrt_p
                ta, tb = (lam_a * nu).trace(), (lam_b * nu).trace()
                if ta * tb <= 0:
                    hits.append((n, x, y))
    return hits


@pytest.mark.parametrize("p,a,b,poles", [
    (37, (11, 1), (13, 1), [1, 3, 4, 10, 12, 37]),
    (29, (11, 1), (13, 1), [1, 4, 5, 6, 16, 29]),
    (29, (7, 1), (11, 1), [1, 4, 5, 6]),
    (5, (5, 1), (7, 1), [1]),
])
def test_chamber_check_matches_box_search(p, a, b, poles):
    K = QuadField(p)
    lam_a, lam_b = K.from_half(*a), K.from_half(*b)
    want = not _walls_by_box(lam_a, lam_b, poles)
    assert weyl_chamber_check(lam_a, poles, lam_b) == want

"""Restrict the weight-5 cusp form for Q(sqrt 5) to the curves T5 and T11.

Run: python3 demos/gundlach_s5.py
"""

from hilbertring import PrincipalPart, ProductSpec, gamma0_lift, resolve_leading, restrict_product, theta_contract
from hilbertring.borcherds import weyl_vector
from hilbertring.quadfield import QuadField

K = QuadField(5)
s5 = ProductSpec("s5", PrincipalPart(5, {1: 2}), 10)
F = s5.form(60)
print("input F:", F.series.truncate(11))

for x in (5, 7):
    lam = K.from_half(x, 1)
    ell = int(lam.norm())
    f = theta_contract(F, ell, 50)
    A, source = resolve_leading(s5, lam)
    lift = gamma0_lift(f, ell, A, A + 7)
    direct = restrict_product(s5, lam, A + 7, leading=A)
    print(f"\nlambda = {lam}, norm {ell}")
    print("  contracted input:", f.truncate(21))
    print(f"  leading exponent {A} from {source}")
    print("  lift of the contraction:", lift)
    print("  lattice restriction agrees:", lift == direct)

h, pts = weyl_vector(s5, K.from_half(5, 1))
print("\nWeyl vector", h, "interpolated from", ", ".join(map(str, pts)))

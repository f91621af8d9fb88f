"""Restrictions of the Q(sqrt 29) products to T1 and T5, against Gamma0(5) forms.

Run: python3 demos/sqrt29_restrictions.py
"""

from hilbertring import load_field
from hilbertring.borcherds import walls_through
from hilbertring.classical import gamma0_5_generators

PREC = 21
cfg = load_field(29)
g = gamma0_5_generators(PREC)
e2, e4, s4 = g["e2"], g["e4"], g["s4"]
targets = {"phi2": s4, "phi3": s4 * e2, "phi4": s4 * s4, "phi6": s4 * s4 * e4, "phi7": e2 * e4 * s4 * s4}


def ratio(a, b):
    if a.is_zero():
        return "zero"
    v = b.valuation()
    c = a[v] / b[v]
    return c if (a - b.scale(c)).is_zero() else "not proportional"


lam5 = cfg.lam("lambda5")
for name in ("phi2", "phi3", "psi3", "phi4", "phi5", "phi6", "psi6", "phi7", "phi8", "phi9"):
    spec = cfg.spec(name)
    res = cfg.image(name, "lambda5", PREC)
    on_wall = bool(walls_through(spec.principal, lam5))
    line = f"Res_lambda5 {name:5s} valuation {'-' if res.is_zero() else res.valuation()}"
    if name in targets:
        line += f"  ratio to expected {ratio(res, targets[name])}"
    if on_wall:
        line += "  (curve lies in the divisor)"
    print(line)

print("\nRes_lambda1 psi6:", cfg.image("psi6", "lambda1", 8))
print("Res_lambda1 phi9:", cfg.image("phi9", "lambda1", 8))
print("Res_lambda5 E2  :", cfg.image("E2", "lambda5", 8))

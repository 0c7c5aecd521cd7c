import time

from germkit.poly import Ring, parse_polynomial, gcd_many
from germkit.groebner import eliminate, milnor_number, groebner_basis

R4 = Ring(("x", "y", "x'", "y'"))
R2 = Ring(("x", "y"))


def p4(s):
    return parse_polynomial(s, R4)


f = ["x^2", "x^2 y + x y^2 + y^3", "x^5 + y^5"]


def subst_primed(s):
    return s.replace("x", "x'").replace("y", "y'")


t0 = time.monotonic()
diffs = []
for c in f:
    diffs.append(p4(c) - p4(subst_primed(c)))

# divided differences: a_i1 = (f_i(x,y)-f_i(x',y))/(x-x'), a_i2 = (f_i(x',y)-f_i(x',y'))/(y-y')
xm = p4("x - x'")
ym = p4("y - y'")
alpha = []
for c in f:
    fxy = p4(c)
    fxpy = p4(c.replace("x", "x'"))
    fxpyp = p4(subst_primed(c))
    a1 = (fxy - fxpy).exact_div(xm)
    a2 = (fxpy - fxpyp).exact_div(ym)
    alpha.append((a1, a2))
    assert fxy - fxpyp == a1 * xm + a2 * ym

minors = [
    alpha[0][0] * alpha[1][1] - alpha[1][0] * alpha[0][1],
    alpha[0][0] * alpha[2][1] - alpha[2][0] * alpha[0][1],
    alpha[1][0] * alpha[2][1] - alpha[2][0] * alpha[1][1],
]
gens = diffs + minors
t1 = time.monotonic()
print(f"I2 built in {t1-t0:.3f}s; gens degrees {[g.total_degree() for g in gens]}")

elim = eliminate(gens, ["x'", "y'"])
t2 = time.monotonic()
print(f"eliminate done in {t2-t1:.3f}s; {len(elim)} generators, degrees {[g.total_degree() for g in elim]}")

lam = gcd_many(elim).normalized()
t3 = time.monotonic()
print(f"gcd in {t3-t2:.3f}s; lambda degree {lam.total_degree()}, terms {len(lam.terms)}")

COEFFS = [3, 4, 8, 22, 57, 120, 154, 82, -141, -484, -790, -988, -1064,
          -1098, -1102, -1026, -837, -578, -333, -160, -65, -20, -5]
lam_paper = sum(
    (R2.monomial((22 - i, i), c) for i, c in enumerate(COEFFS)),
    R2.zero(),
)
from germkit.poly import equal_up_to_unit
print("lambda matches paper:", equal_up_to_unit(lam, lam_paper))

mu = milnor_number(lam)
t4 = time.monotonic()
print(f"milnor in {t4-t3:.3f}s; mu = {mu}")

# image equation elimination
R5 = Ring(("x", "y", "X", "Y", "Z"))
gens_img = [
    parse_polynomial("X", R5) - parse_polynomial(f[0], R5),
    parse_polynomial("Y", R5) - parse_polynomial(f[1], R5),
    parse_polynomial("Z", R5) - parse_polynomial(f[2], R5),
]
elim2 = eliminate(gens_img, ["x", "y"])
t5 = time.monotonic()
print(f"image eliminate in {t5-t4:.3f}s; {len(elim2)} gens, degrees {[g.total_degree() for g in elim2]}")
if len(elim2) == 1:
    F = elim2[0]
    print(f"F terms={len(F.terms)} ord={F.order_at_origin()}")
    # weighted homogeneity check (2,3,5)
    print("weighted-homog (2,3,5):", F.is_weighted_homogeneous((2, 3, 5)))
    # vanishing on graph
    sub = {"X": parse_polynomial(f[0], R2), "Y": parse_polynomial(f[1], R2), "Z": parse_polynomial(f[2], R2)}
    print("F(f) == 0:", F.substitute(sub, R2).is_zero)
print(f"TOTAL {t5-t0:.3f}s")

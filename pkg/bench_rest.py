import time

from fractions import Fraction

from germkit.poly import Ring, parse_polynomial, gcd_many, equal_up_to_unit, poly_gcd
from germkit.groebner import (
    eliminate, milnor_number, local_quotient_dim, module_kernel, standard_basis,
)

R2 = Ring(("x", "y"))


def dpc_gens(f, ring4):
    def pr(s):
        return parse_polynomial(s, ring4)

    xm = ring4.var("x") - ring4.var("x'")
    ym = ring4.var("y") - ring4.var("y'")
    diffs, alpha = [], []
    for c in f:
        fxy = pr(c)
        fxpy = fxy.substitute({"x": ring4.var("x'")})
        fxpyp = fxpy.substitute({"y": ring4.var("y'")})
        diffs.append(fxy - fxpyp)
        alpha.append(((fxy - fxpy).exact_div(xm), (fxpy - fxpyp).exact_div(ym)))
    minors = [
        alpha[0][0] * alpha[1][1] - alpha[1][0] * alpha[0][1],
        alpha[0][0] * alpha[2][1] - alpha[2][0] * alpha[0][1],
        alpha[1][0] * alpha[2][1] - alpha[2][0] * alpha[1][1],
    ]
    return diffs + minors


R4 = Ring(("x", "y", "x'", "y'"))

# ---- Example 5.3 germ at t=0
f53 = ["x^3", "y^5", "x^2 - x y + y^2"]
t0 = time.monotonic()
gens = dpc_gens(f53, R4)
elim = eliminate(gens, ["x'", "y'"])
lam = gcd_many(elim).normalized()
t1 = time.monotonic()
print(f"5.3 lambda: {t1-t0:.2f}s deg={lam.total_degree()} nterms={len(lam.terms)}")

c16 = [81, -324, 945, -1971, 3384, -4716, 5625, -5664, 5026, -3900, 2810,
       -1840, 1155, -625, 300, -100, 25]
f16 = sum((R2.monomial((16 - i, i), c) for i, c in enumerate(c16)), R2.zero())
f4 = parse_polynomial("x^4 - 3x^3 y + 4x^2 y^2 - 2x y^3 + y^4", R2)
f2q = parse_polynomial("x^2 - x y + y^2", R2)
print("5.3 lambda == paper product:", equal_up_to_unit(lam, f16 * f4 * f2q))
print("5.3 mu_D:", milnor_number(lam))

# ---- 5.3 image equation at t=0 via elimination
R5 = Ring(("x", "y", "X", "Y", "Z"))
t1 = time.monotonic()
gi = [R5.var("X") - parse_polynomial(f53[0], R5),
      R5.var("Y") - parse_polynomial(f53[1], R5),
      R5.var("Z") - parse_polynomial(f53[2], R5)]
elim2 = eliminate(gi, ["x", "y"])
t2 = time.monotonic()
print(f"5.3 image elim: {t2-t1:.2f}s ngens={len(elim2)} degs={[g.total_degree() for g in elim2]}")
F = elim2[0]
print("   terms:", len(F.terms), "ord:", F.order_at_origin)

# paper-displayed F at t=0: h1=15, h2=2, h3=90, h4=15, h5=245, h6=1, h7=15,
# h8=300, h9=-80, h10=-5, h11=72, h12=-345, h13=10, h14=-270, h15=-10, h16=-60, h17=5
RT = Ring(("X", "Y", "Z"))
Fp = parse_polynomial(
    "Y^6 + 15 X Y^5 Z + 2 X^5 Y^3 + 90 X^2 Y^4 Z^2 + 15 X^6 Y^2 Z + 245 X^3 Y^3 Z^3"
    " - 3 Y^4 Z^5 + X^10 + 15 X^7 Y Z^2 + 300 X^4 Y^2 Z^4 - 80 X Y^3 Z^6 - 5 X^8 Z^3"
    " + 72 X^5 Y Z^5 - 345 X^2 Y^2 Z^7 + 10 X^6 Z^6 - 270 X^3 Y Z^8 + 3 Y^2 Z^10"
    " - 10 X^4 Z^9 - 60 X Y Z^11 + 5 X^2 Z^12 - Z^15", RT)
print("5.3 F == paper (t=0):", equal_up_to_unit(F.in_ring(RT), Fp))

# section: generic plane restriction, paper used H = V(X - Z): substitute X := Z
t2b = time.monotonic()
RYZ = Ring(("U", "W"))
# plane X = Z: param X=U... paper coords: (U, W) with X->U? Y->W, Z->U
sub = {"X": RYZ.var("U"), "Y": RYZ.var("W"), "Z": RYZ.var("U")}
Fh = F.in_ring(RT).substitute(sub, RYZ)
print("5.3 mu(Y0) via X=Z plane:", milnor_number(Fh), f"({time.monotonic()-t2b:.2f}s)")

# generic-ish plane: Z -> -(aX+bY)/c
t2c = time.monotonic()
a, b, c = Fraction(2), Fraction(-3), Fraction(5)
subg = {"X": RYZ.var("U"), "Y": RYZ.var("W"),
        "Z": (RYZ.var("U") * (-a) + RYZ.var("W") * (-b)) * (1 / c)}
Fg = F.in_ring(RT).substitute(subg, RYZ)
print("5.3 mu(Y0) generic plane:", milnor_number(Fg), f"({time.monotonic()-t2c:.2f}s)")

# ---- worst Table 1 row: (x, y^6, x^13 y + x y^13 + y^14)
t3 = time.monotonic()
fw = ["x", "y^6", "x^13 y + x y^13 + y^14"]
gens = dpc_gens(fw, R4)
elim = eliminate(gens, ["x'", "y'"])
lam_w = gcd_many(elim).normalized()
t4 = time.monotonic()
print(f"table1-worst lambda: {t4-t3:.2f}s deg={lam_w.total_degree()}")
print("   mu_D:", milnor_number(lam_w), f"({time.monotonic()-t4:.2f}s)")

# image via elimination (fast path det comes later)
t5 = time.monotonic()
gi = [R5.var("X") - parse_polynomial(fw[0], R5),
      R5.var("Y") - parse_polynomial(fw[1], R5),
      R5.var("Z") - parse_polynomial(fw[2], R5)]
elim2 = eliminate(gi, ["x", "y"])
t6 = time.monotonic()
print(f"table1-worst image elim: {t6-t5:.2f}s ngens={len(elim2)} deg={elim2[0].total_degree() if len(elim2)==1 else '?'}")
Fw = elim2[0].in_ring(RT)
t6b = time.monotonic()
subg = {"X": RYZ.var("U"), "Y": RYZ.var("W"),
        "Z": (RYZ.var("U") * (-a) + RYZ.var("W") * (-b)) * (1 / c)}
Fwg = Fw.substitute(subg, RYZ)
mu1w = milnor_number(Fwg)
print(f"table1-worst mu1 generic plane: {mu1w} ({time.monotonic()-t6b:.2f}s)  -> m0_fD = {(mu1w - 0) // 2}")

# ---- module kernel: presentation of f_*O2 for 5.1
t7 = time.monotonic()
f51 = [parse_polynomial(s, R2) for s in ("x^2", "x^2 y + x y^2 + y^3", "x^5 + y^5")]
sb = standard_basis(f51)
print("5.1 local algebra dim:", local_quotient_dim(f51))
# staircase monomials: dim 6 expected -> need enumeration; hand-derive from sb leads
from germkit.groebner import DEFAULT_LIMITS
mons = []
for i in range(8):
    for j in range(8):
        m = R2.monomial((i, j))
        mons.append((i + j, i, j))
# brute staircase via lead exponents
leads = []
for g in sb:
    from germkit.groebner import NEGDEGREVLEX
    leads.append(g.leading(NEGDEGREVLEX)[0])
stair = []
for d, i, j in sorted(mons):
    if not any(i >= a and j >= b for a, b in leads):
        stair.append((i, j))
print("5.1 staircase:", stair)
gens_mod = [R2.monomial(e) for e in stair]
RT3 = Ring(("X", "Y", "Z"))
rows = module_kernel(gens_mod, f51, RT3)
t8 = time.monotonic()
print(f"5.1 module_kernel: {t8-t7:.2f}s nrows={len(rows)} ncols={len(gens_mod)}")
for r in rows[:8]:
    print("   ", [str(e)[:24] for e in r])

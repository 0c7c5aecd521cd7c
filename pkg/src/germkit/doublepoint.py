"""Double point spaces of a map germ.

The lifted double point scheme lives in (C^2 x C^2, 0) with coordinates
(x, y, x', y'): its ideal combines the component differences
f_i(x,y) - f_i(x',y') with the 2x2 minors of the divided-difference
matrix.  Eliminating (x', y') lands back in the source plane and yields
the double point curve V(lambda), whose Milnor number decides finite
determinacy.  Components of V(lambda) are classified as identification
or fold branches through exact arithmetic in the field cut out by each
irreducible factor.
"""

from fractions import Fraction
from math import gcd as _int_gcd

from .errors import NonPrincipalError, ResourceCapExceeded
from .germs import MapGerm, SOURCE_RING, TARGET_RING
from .groebner import eliminate, ideal_equal, milnor_number, INFINITE
from .poly import PolyMatrix, Polynomial, Ring, gcd_many, poly_gcd

PAIR_RING = Ring(("x", "y", "x'", "y'"))


class DividedDifferenceMatrix:
    """3x2 matrix alpha with f_i(x,y) - f_i(x',y') =
    alpha_i1 (x - x') + alpha_i2 (y - y')."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        self.matrix = matrix

    def rows(self):
        return self.matrix.rows


class DoublePointIdeal:
    """Generators of the lifted double point ideal in (x, y, x', y')."""

    __slots__ = ("pullback_gens", "minor_gens")

    def __init__(self, pullback_gens, minor_gens):
        self.pullback_gens = tuple(pullback_gens)
        self.minor_gens = tuple(minor_gens)

    @property
    def generators(self):
        return self.pullback_gens + self.minor_gens


class DoublePointCurve:
    """The plane curve V(lambda) in the source, with its Q-factors.

    components_over_Q lists only factors vanishing at the origin (the
    others are units as germs); multiplicities refer to lambda itself.
    """

    __slots__ = ("equation", "reduced", "components_over_Q")

    def __init__(self, equation, reduced, components_over_Q):
        self.equation = equation
        self.reduced = reduced
        self.components_over_Q = tuple(components_over_Q)

    def __repr__(self):
        return f"DoublePointCurve({self.equation}, reduced={self.reduced})"


class ComponentRecord:
    """One Q-irreducible factor of lambda with its classification.

    branches is the number of C-components the factor carries (its
    degree in the homogeneous linear case, else 1 per rational branch).
    image_gens, when present, generate the common image curve ideal.
    """

    __slots__ = ("factor", "tag", "branches", "fiber_deg", "image_gens")

    def __init__(self, factor, tag, branches, fiber_deg=None, image_gens=None):
        self.factor = factor
        self.tag = tag
        self.branches = branches
        self.fiber_deg = fiber_deg
        self.image_gens = image_gens

    def __repr__(self):
        return f"<{self.factor}: {self.tag} x{self.branches}>"


class ComponentClassification:
    __slots__ = ("records", "identification_pairs")

    def __init__(self, records, identification_pairs):
        self.records = tuple(records)
        self.identification_pairs = tuple(identification_pairs)

    def count(self, tag):
        return sum(r.branches for r in self.records if r.tag == tag)

    @property
    def n_identification(self):
        return self.count("identification")

    @property
    def n_fold(self):
        return self.count("fold")

    @property
    def n_unclassified(self):
        return self.count("unclassified")


def divided_differences(f: MapGerm) -> DividedDifferenceMatrix:
    """Canonical alpha: difference quotients first in x, then in y."""
    xv, yv = PAIR_RING.var("x"), PAIR_RING.var("y")
    xp, yp = PAIR_RING.var("x'"), PAIR_RING.var("y'")
    rows = []
    for c in f.components:
        fxy = c.in_ring(PAIR_RING)
        fxpy = fxy.substitute({"x": xp})
        fxpyp = fxpy.substitute({"y": yp})
        a1 = (fxy - fxpy).exact_div(xv - xp) if fxy != fxpy else PAIR_RING.zero()
        a2 = (fxpy - fxpyp).exact_div(yv - yp) if fxpy != fxpyp else PAIR_RING.zero()
        assert fxy - fxpyp == a1 * (xv - xp) + a2 * (yv - yp)
        rows.append([a1, a2])
    return DividedDifferenceMatrix(PolyMatrix(PAIR_RING, rows))


def double_point_ideal(f: MapGerm) -> DoublePointIdeal:
    """Difference generators plus the 2x2 minors of alpha."""
    alpha = divided_differences(f).rows()
    diffs = []
    for c in f.components:
        fxy = c.in_ring(PAIR_RING)
        diffs.append(fxy - fxy.substitute({"x": PAIR_RING.var("x'"),
                                           "y": PAIR_RING.var("y'")}))
    minors = []
    for i in range(3):
        for j in range(i + 1, 3):
            minors.append(alpha[i][0] * alpha[j][1] - alpha[j][0] * alpha[i][1])
    return DoublePointIdeal(diffs, minors)


def _factor_rational(p: Polynomial):
    """Q-irreducible factors of a bivariate polynomial, via sympy."""
    import sympy

    sx, sy = sympy.symbols("x y")
    expr_dict = {e: sympy.Rational(c.numerator, c.denominator)
                 for e, c in p.terms.items()}
    sp = sympy.Poly.from_dict(expr_dict, sx, sy, domain="QQ")
    _, factors = sp.factor_list()
    out = []
    for fac, mult in factors:
        terms = {}
        for e, c in fac.as_dict().items():
            cc = Fraction(int(sympy.numer(c)), int(sympy.denom(c)))
            terms[tuple(int(v) for v in e)] = cc
        out.append((Polynomial(p.ring, terms).normalized(), int(mult)))
    out.sort(key=lambda fm: (fm[0].total_degree(), str(fm[0])))
    return out


def dpc_equation(f: MapGerm, limits=None) -> DoublePointCurve:
    """Eliminate (x', y') from the double point ideal.

    The contraction of a curve germ's ideal is principal; the single
    generator is recovered as the gcd of the elimination generators.
    A zero elimination ideal (the map identifies whole surfaces, e.g.
    a generically 2-to-1 cover of a plane) and a genuinely non-principal
    contraction are reported as distinct NonPrincipalError cases.
    """
    ideal = double_point_ideal(f)
    elim = eliminate(list(ideal.generators), ["x'", "y'"], limits)
    if not elim:
        raise NonPrincipalError(
            "elimination ideal is zero: map is not generically one-to-one")
    if any(g.is_constant() for g in elim):
        # empty double locus (an embedding); the unit curve has no factors
        return DoublePointCurve(SOURCE_RING.one(), True, ())
    lam = gcd_many(elim).normalized()
    if lam.is_constant():
        raise NonPrincipalError(
            "elimination ideal is not principal: "
            f"{len(elim)} generators with unit gcd")
    lam = lam.in_ring(SOURCE_RING)
    dx = lam.derivative("x")
    dy = lam.derivative("y")
    reduced = poly_gcd(poly_gcd(lam, dx), dy).is_constant()
    comps = [(g, m) for g, m in _factor_rational(lam)
             if not g.constant_term]
    return DoublePointCurve(lam, reduced, comps)


def is_finitely_determined(f: MapGerm, limits=None):
    """True / False / None (None when resource caps leave it undecided).

    Finite determinacy is equivalent to the double point curve being
    reduced with finite Milnor number.
    """
    try:
        curve = dpc_equation(f, limits)
    except NonPrincipalError:
        return False
    except ResourceCapExceeded:
        return None
    if not curve.reduced:
        return False
    if curve.equation.is_constant():
        return True
    try:
        mu = milnor_number(curve.equation, limits)
    except ResourceCapExceeded:
        return None
    return mu != INFINITE


def fiber_degree(exponents) -> int:
    """gcd of the exponent list of a monomial curve parametrization."""
    exps = list(exponents)
    if not exps:
        raise ValueError("empty exponent list")
    out = 0
    for e in exps:
        out = _int_gcd(out, e)
    return out


def _poly1d_rem(num, den):
    """Remainder of dense Fraction coefficient lists (ascending order)."""
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    while len(num) - 1 >= dn and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) - 1 < dn:
            break
        q = num[-1] / lead
        shift = len(num) - 1 - dn
        for i, c in enumerate(den):
            num[shift + i] -= q * c
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return num


def _image_ideal(gamma, limits=None):
    """Ideal of the curve s -> (gamma_1, gamma_2, gamma_3) in the target."""
    big = Ring(("s",) + TARGET_RING.vars)
    gens = []
    for v, g in zip(TARGET_RING.vars, gamma):
        gens.append(big.var(v) - g.in_ring(big))
    out = eliminate(gens, ["s"], limits)
    return tuple(g.in_ring(TARGET_RING) for g in out)


def _bundle_image(f, factor, limits=None):
    """Image ideal of the whole branch bundle V(factor) under f.

    Eliminating the source variables from the graph restricted to
    V(factor) gives the union of the conjugate branch images as an
    ideal over Q, with no need to name the irrational slopes.
    """
    big = Ring(("x", "y") + TARGET_RING.vars)
    gens = [factor.in_ring(big)]
    for v, c in zip(TARGET_RING.vars, f.components):
        gens.append(big.var(v) - c.in_ring(big))
    out = eliminate(gens, ["x", "y"], limits)
    return tuple(g.in_ring(TARGET_RING) for g in out)


def _line_parametrization(factor):
    """Point (b, -a) spanning the line V(ax + by)."""
    a = factor.coeff((1, 0))
    b = factor.coeff((0, 1))
    return b, -a


def classify_components(f: MapGerm, D: DoublePointCurve, limits=None,
                        images=True):
    """Tag the Q-factors of lambda as identification or fold branches.

    Rational lines are parametrized and composed with f directly.  An
    irreducible factor of higher degree is handled as one conjugate
    bundle when every f_i is homogeneous: on the branch y = s, x = a*s
    the composition is f_i(a,1)*s^(deg f_i), and whether f_i(a,1)
    vanishes is decided exactly in the field Q[a]/(factor(a,1)), so the
    surviving degrees give the fiber degree of every conjugate branch
    at once.  Image ideals (for pairing) are computed over Q, per line
    or per bundle; anything outside these cases stays unclassified.
    """
    SR = Ring(("s",))
    sv = SR.var("s")
    records = []
    degs = [c.total_degree() for c in f.components]
    for factor, _mult in D.components_over_Q:
        if factor.total_degree() == 1:
            b, ma = _line_parametrization(factor)
            images = {"x": SR.constant(b) * sv, "y": SR.constant(ma) * sv}
            gamma = [c.substitute(images, SR) for c in f.components]
            nonzero = [g for g in gamma if not g.is_zero]
            if not nonzero or any(len(g.terms) > 1 for g in nonzero):
                # no parametrization, or one that may hide deck symmetry
                records.append(ComponentRecord(factor, "unclassified", 1))
                continue
            d = fiber_degree([g.total_degree() for g in nonzero])
            tag = "identification" if d == 1 else "fold"
            image = (_image_ideal(gamma, limits)
                     if images and tag == "identification" else None)
            records.append(ComponentRecord(factor, tag, 1, d, image))
        elif all(c.is_homogeneous() for c in f.components):
            k = factor.total_degree()
            # minimal polynomial of the slope a = x/y, ascending
            minpoly = [factor.coeff((i, k - i)) for i in range(k + 1)]
            cs = []
            for c, dc in zip(f.components, degs):
                cs.append(_poly1d_rem(
                    [c.coeff((i, dc - i)) for i in range(dc + 1)], minpoly))
            nonzero_degs = [dc for ci, dc in zip(cs, degs) if ci]
            if not nonzero_degs:
                records.append(ComponentRecord(factor, "unclassified", k))
                continue
            d = fiber_degree(nonzero_degs)
            tag = "identification" if d == 1 else "fold"
            image = None
            if images and tag == "identification":
                try:
                    image = _bundle_image(f, factor, limits)
                except ResourceCapExceeded:
                    image = None
            records.append(ComponentRecord(factor, tag, k, d, image))
        else:
            records.append(ComponentRecord(
                factor, "unclassified",
                factor.total_degree() if factor.is_homogeneous() else 1))
    return ComponentClassification(records, _pair_up(records, limits))


def _pair_up(records, limits=None):
    """Group identification components by equal image ideal, then pair.

    Within one image class: a lone record pairs its branches among
    themselves (conjugate bundle swapped by the deck involution); two
    records of equal branch count pair across; mixtures pair internally
    first and then match leftovers in order.
    """
    withim = [i for i, r in enumerate(records)
              if r.tag == "identification" and r.image_gens is not None]
    classes = []
    for i in withim:
        gi = list(records[i].image_gens)
        for cls in classes:
            gj = list(records[cls[0]].image_gens)
            if (not gi and not gj) or (
                    gi and gj and ideal_equal(gi, gj, limits=limits)):
                cls.append(i)
                break
        else:
            classes.append([i])
    pairs = []
    for cls in classes:
        members = [(i, records[i].branches) for i in cls]
        if len(members) == 1:
            i, b = members[0]
            pairs.extend([(i, i)] * (b // 2))
        elif len(members) == 2 and members[0][1] == members[1][1]:
            pairs.extend([(members[0][0], members[1][0])] * members[0][1])
        else:
            loose = []
            for i, b in members:
                pairs.extend([(i, i)] * (b // 2))
                if b % 2:
                    loose.append(i)
            pairs.extend(zip(loose[::2], loose[1::2]))
    return sorted(pairs)

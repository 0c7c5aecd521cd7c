"""Double point ideal, curve equation, determinacy test, classification."""

import pytest

from germkit.doublepoint import (
    PAIR_RING,
    classify_components,
    divided_differences,
    double_point_ideal,
    dpc_equation,
    fiber_degree,
    is_finitely_determined,
)
from germkit.errors import NonPrincipalError
from germkit.germs import SOURCE_RING, parse_germ
from germkit.groebner import ideal_equal, milnor_number
from germkit.poly import equal_up_to_unit, parse_polynomial, poly_gcd

CROSSCAP = "(x, y^2, x*y)"
C3 = "(x, y^2, x*y^3 - x^3*y)"
# corank 2, homogeneous component degrees (2, 3, 5)
H235 = "(x^2, x^2*y + x*y^2 + y^3, x^5 + y^5)"
# corank 1 with n=4, m=6 (both even: one fold line expected)
H46 = "(x, y^4, x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6)"
# conjugate identification pair x^2 - x*y + y^2
H352 = "(x^3, y^5, x^2 - x*y + y^2)"
# n, m not both even: every component is an identification branch
ODD23 = "(x, y^2, x^2*y + y^3)"
ODD35 = "(x, y^3, x^4*y + x*y^4 + y^5)"

CORPUS = [CROSSCAP, C3, H235, H46, H352, ODD23, ODD35]


def PP(s):
    return parse_polynomial(s, PAIR_RING)


def qn(w, wp, n):
    """w^n + w^(n-1) wp + ... + wp^n in the doubled ring."""
    a, b = PP(w), PP(wp)
    return sum((a ** (n - i) * b ** i for i in range(n + 1)), PAIR_RING.zero())


@pytest.fixture(scope="module")
def curves():
    return {s: dpc_equation(parse_germ(s)) for s in CORPUS}


class TestDividedDifferences:
    def test_crosscap_matrix(self):
        alpha = divided_differences(parse_germ(CROSSCAP)).rows()
        want = [["1", "0"], ["0", "y + y'"], ["y", "x'"]]
        assert [[str(p) for p in row] for row in alpha] == want

    def test_cubic_row(self):
        alpha = divided_differences(parse_germ(H235)).rows()
        assert alpha[1][0] == PP("(x + x') y + y^2")
        assert alpha[1][1] == PP("x' (x' + y + y') + y^2 + y y' + y'^2")

    def test_linear_component_gives_constant_row(self):
        alpha = divided_differences(parse_germ(C3)).rows()
        assert str(alpha[0][0]) == "1" and alpha[0][1].is_zero

    def test_defining_identity(self):
        xs = [PP(v) for v in ("x", "y", "x'", "y'")]
        for s in CORPUS:
            f = parse_germ(s)
            alpha = divided_differences(f).rows()
            for c, row in zip(f.components, alpha):
                lhs = c.in_ring(PAIR_RING)
                lhs = lhs - lhs.substitute({"x": xs[2], "y": xs[3]})
                assert lhs == row[0] * (xs[0] - xs[2]) + row[1] * (xs[1] - xs[3])


class TestDoublePointIdeal:
    def test_crosscap_ideal(self):
        gens = double_point_ideal(parse_germ(CROSSCAP)).generators
        assert ideal_equal(list(gens), [PP("x"), PP("x - x'"), PP("y + y'")])

    def test_homogeneous_235_matches_six_generators(self):
        # independently published generating set for the same germ
        h1 = PP("(x + x') (x - x')")
        h2 = qn("y", "y'", 4) * PP("x + x'")
        h3 = qn("x", "x'", 4) * PP("x - x'") + qn("y", "y'", 4) * PP("y - y'")
        a21 = PP("(y + y') (x + x') + y^2 + y'^2")
        a22 = 2 * qn("y", "y'", 2) + PP("(x + x') (y + y') + x^2 + x'^2")
        h4 = PP("x + x'") * a22
        h5 = qn("y", "y'", 4) * a21 - qn("x", "x'", 4) * a22
        h6 = a21 * PP("x - x'") + a22 * PP("y - y'")
        gens = double_point_ideal(parse_germ(H235)).generators
        assert ideal_equal(list(gens), [h1, h2, h3, h4, h5, h6])

    def test_swap_symmetry(self):
        swap = {"x": PP("x'"), "y": PP("y'"), "x'": PP("x"), "y'": PP("y")}
        for s in [CROSSCAP, C3, H235, ODD23]:
            gens = list(double_point_ideal(parse_germ(s)).generators)
            swapped = [g.substitute(swap) for g in gens]
            assert ideal_equal(gens, gens + swapped)


DEG22 = [3, 4, 8, 22, 57, 120, 154, 82, -141, -484, -790, -988, -1064,
         -1098, -1102, -1026, -837, -578, -333, -160, -65, -20, -5]

# the three factors of the (x^3, y^5, x^2-x*y+y^2) curve equation
H352_FACTORS = [
    "x^2 - x*y + y^2",
    "x^4 - 3*x^3*y + 4*x^2*y^2 - 2*x*y^3 + y^4",
    "81*x^16 - 324*x^15*y + 945*x^14*y^2 - 1971*x^13*y^3 + 3384*x^12*y^4"
    " - 4716*x^11*y^5 + 5625*x^10*y^6 - 5664*x^9*y^7 + 5026*x^8*y^8"
    " - 3900*x^7*y^9 + 2810*x^6*y^10 - 1840*x^5*y^11 + 1155*x^4*y^12"
    " - 625*x^3*y^13 + 300*x^2*y^14 - 100*x*y^15 + 25*y^16",
]


class TestCurveEquation:
    def test_crosscap(self, curves):
        D = curves[CROSSCAP]
        assert str(D.equation) == "x" and D.reduced

    def test_c3(self, curves):
        D = curves[C3]
        assert equal_up_to_unit(D.equation, parse_polynomial("x*y^2 - x^3", SOURCE_RING))
        assert D.reduced and milnor_number(D.equation) == 4

    def test_degree_22_curve(self, curves):
        lam = curves[H235].equation
        want = SOURCE_RING.zero()
        for i, c in enumerate(DEG22):
            want = want + SOURCE_RING.constant(c) * SOURCE_RING.monomial((22 - i, i))
        assert equal_up_to_unit(lam, want)

    def test_conjugate_product(self, curves):
        D = curves[H352]
        got = sorted(str(g) for g, _ in D.components_over_Q)
        want = sorted(str(parse_polynomial(s, SOURCE_RING).normalized())
                      for s in H352_FACTORS)
        assert got == want
        assert all(m == 1 for _, m in D.components_over_Q)

    def test_two_to_one_cover_fails(self):
        with pytest.raises(NonPrincipalError, match="not generically one-to-one"):
            dpc_equation(parse_germ("(x, y^2, 0)"))

    def test_nonreduced_equation(self):
        D = dpc_equation(parse_germ("(x, y^2, x^2*y)"))
        assert str(D.equation) == "x^2" and not D.reduced


class TestFinitelyDetermined:
    def test_true_cases(self):
        for s in [CROSSCAP, C3, H235]:
            assert is_finitely_determined(parse_germ(s)) is True

    def test_false_cases(self):
        for s in ["(x, y^2, 0)", "(x, y^2, y^3)", "(x, y^2, x^2*y)"]:
            assert is_finitely_determined(parse_germ(s)) is False


class TestFiberDegree:
    def test_values(self):
        assert fiber_degree([2, 4, 6]) == 2
        assert fiber_degree((2, 3)) == 1
        # fold line of the C3 germ: t -> (0, t^2, 0)
        assert fiber_degree([2]) == 2

    def test_empty(self):
        with pytest.raises(ValueError):
            fiber_degree([])


def _records_by_factor(cl):
    return {str(r.factor): r for r in cl.records}


class TestClassification:
    def test_c3(self, curves):
        f = parse_germ(C3)
        cl = classify_components(f, curves[C3])
        recs = _records_by_factor(cl)
        assert recs["x"].tag == "fold" and recs["x"].fiber_deg == 2
        plus, minus = recs["x + y"], recs["x - y"]
        assert plus.tag == minus.tag == "identification"
        assert cl.n_identification == 2 and cl.n_fold == 1
        assert len(cl.identification_pairs) == 1

    def test_c3_common_image(self, curves):
        from germkit.germs import TARGET_RING

        cl = classify_components(parse_germ(C3), curves[C3])
        recs = _records_by_factor(cl)
        want = [parse_polynomial("Z", TARGET_RING),
                parse_polynomial("X^2 - Y", TARGET_RING)]
        for key in ("x + y", "x - y"):
            assert ideal_equal(list(recs[key].image_gens), want)

    def test_one_fold_when_both_even(self, curves):
        cl = classify_components(parse_germ(H46), curves[H46])
        recs = _records_by_factor(cl)
        assert recs["x"].tag == "fold" and recs["x"].fiber_deg == 2
        assert cl.n_fold == 1 and cl.n_identification == 14
        assert cl.n_unclassified == 0
        assert len(cl.identification_pairs) == 7

    def test_real_pairs_by_image(self, curves):
        cl = classify_components(parse_germ(H46), curves[H46])
        recs = _records_by_factor(cl)
        assert ideal_equal(list(recs["x + y"].image_gens),
                           list(recs["x - y"].image_gens))
        assert ideal_equal(list(recs["x + 2*y"].image_gens),
                           list(recs["x - 2*y"].image_gens))
        assert not ideal_equal(list(recs["x + y"].image_gens),
                               list(recs["x + 2*y"].image_gens))

    def test_conjugate_pair(self, curves):
        from germkit.germs import TARGET_RING

        cl = classify_components(parse_germ(H352), curves[H352])
        recs = _records_by_factor(cl)
        rec = recs["x^2 - x*y + y^2"]
        assert rec.tag == "identification" and rec.branches == 2
        i = cl.records.index(rec)
        assert (i, i) in cl.identification_pairs
        # branch (s^3, a^5 s^5, 0) with a^6 = 1; u = a^5 s turns it
        # into (-u^3, u^5, 0), so both conjugates share V(Z, X^5 + Y^3)
        want = [parse_polynomial("Z", TARGET_RING),
                parse_polynomial("X^5 + Y^3", TARGET_RING)]
        assert ideal_equal(list(rec.image_gens), want)

    def test_all_identification_otherwise(self, curves):
        for s, d in [(ODD23, 2), (ODD35, 8)]:
            cl = classify_components(parse_germ(s), curves[s])
            assert cl.n_fold == 0 and cl.n_unclassified == 0
            assert cl.n_identification == d
            assert len(cl.identification_pairs) == d // 2

    def test_identification_parity(self, curves):
        for s in CORPUS:
            cl = classify_components(parse_germ(s), curves[s], images=False)
            assert cl.n_identification % 2 == 0

    def test_unclassifiable_factor_not_guessed(self):
        # mixed-degree components defeat the slope-field certificate
        f = parse_germ("(x, y^2, x^2*y + y^3 + y^4)")
        D = dpc_equation(f)
        assert str(D.equation) == "x^2 + y^2"
        cl = classify_components(f, D)
        assert cl.records[0].tag == "unclassified"
        assert cl.records[0].branches == 2


class TestDegreeAndParity:
    def test_degree_formula(self, curves):
        # corank 1 (x, y^n, q_m) with q homogeneous: deg = nm - n - m + 1
        for s, n, m in [(C3, 2, 4), (H46, 4, 6), (ODD23, 2, 3), (ODD35, 3, 5)]:
            lam = curves[s].equation
            assert lam.is_homogeneous()
            assert lam.total_degree() == n * m - n - m + 1
            assert curves[s].reduced

    def test_parity_grid(self):
        for n in range(2, 9):
            for m in range(n, 9):
                d = n * m - n - m + 1
                assert (d % 2 == 1) == (n % 2 == 0 and m % 2 == 0)

    def test_homogeneous_milnor(self, curves):
        # mu of a reduced homogeneous curve of degree d is (d-1)^2
        for s, d in [(ODD23, 2), (C3, 3), (H235, 22)]:
            assert milnor_number(curves[s].equation) == (d - 1) ** 2


class TestSingularLocusOnCurve:
    def test_ramification_points_lie_on_curve(self, curves):
        # common roots of dp/dy, dq/dy at sampled x must be roots of lambda
        from fractions import Fraction

        for s in [C3, H46, ODD23, ODD35]:
            f = parse_germ(s)
            lam = curves[s].equation
            py = f.components[1].derivative("y")
            qy = f.components[2].derivative("y")
            for x0 in (0, 1, -1, Fraction(1, 2)):
                c = SOURCE_RING.constant(x0)
                g = poly_gcd(py.substitute({"x": c}), qy.substitute({"x": c}))
                if g.is_constant():
                    continue
                g = g.exact_div(poly_gcd(g, g.derivative("y")))  # squarefree
                lx = lam.substitute({"x": c})
                if lx.is_zero:
                    continue
                lx.exact_div(g)  # raises if some root escapes the curve

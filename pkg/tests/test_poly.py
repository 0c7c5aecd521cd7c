import random
from fractions import Fraction

import pytest

from germkit.errors import ParseError
from germkit.poly import (
    BlockOrder,
    DEGREVLEX,
    LEX,
    NEGDEGREVLEX,
    PolyMatrix,
    Ring,
    equal_up_to_unit,
    gcd_many,
    is_squarefree,
    parse_polynomial,
    poly_gcd,
)

R2 = Ring(["x", "y"])
R3 = Ring(["x", "y", "z"])


def p2(text):
    return parse_polynomial(text, R2)


def p3(text):
    return parse_polynomial(text, R3)


class TestParser:
    def test_integer_and_rational_literals(self):
        assert p2("7").constant_term == 7
        assert p2("3/4").constant_term == Fraction(3, 4)
        assert p2("-3/4 + 1").constant_term == Fraction(1, 4)

    def test_implicit_multiplication(self):
        assert p2("2x") == 2 * R2.var("x")
        assert p2("x y") == p2("x*y")
        assert p2("3(x+y)") == 3 * (R2.var("x") + R2.var("y"))
        assert p2("(x+y)(x-y)") == p2("x^2 - y^2")

    def test_powers_bind_tighter_than_products(self):
        assert p2("2x^3y") == 2 * R2.var("x") ** 3 * R2.var("y")
        assert p2("-x^2") == -(R2.var("x") ** 2)

    def test_primed_variables(self):
        R = Ring(["x", "y", "x'", "y'"])
        q = parse_polynomial("x'^2 + x'y' - y^2", R)
        assert q.degree_in("x'") == 2
        assert q.coeff((0, 0, 1, 1)) == 1

    def test_whitespace_insensitive(self):
        assert p2("x ^ 2+ y") == p2("x^2+y")

    def test_unknown_variable_rejected(self):
        with pytest.raises(ParseError):
            p2("x + w")

    def test_malformed_input_rejected(self):
        for bad in ["", "x +", "(x", "x^", "x^y", "2/x", "1/0", "x..y", "3 4"]:
            with pytest.raises(ParseError):
                p2(bad)

    def test_adjacent_number_not_implicit_product(self):
        # "x2" would be ambiguous with a variable name, so it is an error
        with pytest.raises(ParseError):
            p2("x2")


class TestArithmetic:
    def test_ring_axioms_randomized(self):
        rng = random.Random(20240311)

        def rand_poly():
            p = R3.zero()
            for _ in range(rng.randint(0, 5)):
                e = tuple(rng.randint(0, 3) for _ in range(3))
                p = p + R3.monomial(e, Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            return p

        for _ in range(60):
            a, b, c = rand_poly(), rand_poly(), rand_poly()
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) * c == a * c + b * c
            assert (a * b) * c == a * (b * c)
            assert a - a == 0

    def test_pow(self):
        x, y = R2.gens()
        assert (x + y) ** 0 == 1
        assert (x + y) ** 2 == x * x + 2 * x * y + y * y
        assert (x - y) ** 5 == p2("x^5 - 5x^4y + 10x^3y^2 - 10x^2y^3 + 5xy^4 - y^5")

    def test_scalar_ops(self):
        x, _ = R2.gens()
        assert x / 2 == Fraction(1, 2) * x
        assert 3 - x == -(x - 3)

    def test_exact_div_cyclotomic_like(self):
        q = p2("x^5 + y^5").exact_div(p2("x + y"))
        assert q == p2("x^4 - x^3y + x^2y^2 - xy^3 + y^4")

    def test_exact_div_failure(self):
        with pytest.raises(ValueError):
            p2("x^2 + y^2").exact_div(p2("x + y"))

    def test_substitute_partial(self):
        q = p3("x^2 + yz").substitute({"x": p3("y+z")})
        assert q == p3("y^2 + 2yz + z^2 + yz")

    def test_substitute_across_rings(self):
        R = Ring(["u"])
        u = R.var("u")
        q = p2("x^2 - y").substitute({"x": u + 1, "y": u})
        assert q == parse_polynomial("u^2 + u + 1", R)

    def test_in_ring_embeds_by_name(self):
        q = p2("x^2 + y").in_ring(R3)
        assert q == p3("x^2 + y")
        with pytest.raises(ValueError):
            p3("z").in_ring(R2)

    def test_derivative(self):
        assert p2("x^3y + y^2").derivative("x") == p2("3x^2y")
        assert p2("x^3y + y^2").derivative("y") == p2("x^3 + 2y")


class TestDegreesAndOrders:
    def test_total_degree_and_order_at_origin(self):
        q = p2("x^2y + x^5 + y^3")
        assert q.total_degree() == 5
        assert q.order_at_origin() == 3
        assert R2.zero().total_degree() == -1
        with pytest.raises(ValueError):
            R2.zero().order_at_origin()

    def test_degrevlex_tiebreak(self):
        # among degree-2 monomials in x,y: x^2 > xy > y^2
        q = p2("y^2 + xy + x^2")
        assert q.leading(DEGREVLEX)[0] == (2, 0)
        r = p2("y^2 + xy")
        assert r.leading(DEGREVLEX)[0] == (1, 1)

    def test_degrevlex_vs_lex_disagree(self):
        q = p3("x y z + y^4")
        assert q.leading(DEGREVLEX)[0] == (0, 4, 0)
        assert q.leading(LEX)[0] == (1, 1, 1)

    def test_local_order_prefers_low_degree(self):
        q = p2("x^3 + x")
        assert q.leading(NEGDEGREVLEX)[0] == (1, 0)

    def test_block_order_eliminates_front(self):
        order = BlockOrder(["x"])
        # any positive power of x beats everything without x
        q = p3("x + y^9")
        assert q.leading(order)[0] == (1, 0, 0)

    def test_order_key_additive_randomized(self):
        rng = random.Random(7)
        orders = [DEGREVLEX, LEX, NEGDEGREVLEX, BlockOrder(["y"])]
        for order in orders:
            k = order.key(R3)
            for _ in range(120):
                a = tuple(rng.randint(0, 6) for _ in range(3))
                b = tuple(rng.randint(0, 6) for _ in range(3))
                c = tuple(rng.randint(0, 4) for _ in range(3))
                ac = tuple(u + w for u, w in zip(a, c))
                bc = tuple(u + w for u, w in zip(b, c))
                # multiplying by a common monomial preserves comparisons
                assert (k(a) < k(b)) == (k(ac) < k(bc))

    def test_weighted_homogeneous(self):
        q = p2("x^2 + y^5")
        assert q.is_weighted_homogeneous((5, 2))
        assert not q.is_weighted_homogeneous((1, 1))


class TestNormalization:
    def test_content_and_primitive(self):
        q = p2("4x + 6y")
        assert q.content() == 2
        q = p2("1/2 x + 1/3 y")
        assert q.content() == Fraction(1, 6)

    def test_normalized_sign(self):
        assert p2("-2x - 4y").normalized() == p2("x + 2y")

    def test_equal_up_to_unit(self):
        assert equal_up_to_unit(p2("2x+2y"), p2("-3x-3y"))
        assert not equal_up_to_unit(p2("x"), p2("y"))
        assert equal_up_to_unit(R2.zero(), R2.zero())


class TestGcd:
    def test_trivial_cases(self):
        assert poly_gcd(p2("0"), p2("x^2")) == p2("x^2")
        assert poly_gcd(p2("3"), p2("x")) == 1

    def test_univariate(self):
        a = p2("x^4 - 1")
        b = p2("x^3 - 1")
        assert poly_gcd(a, b) == p2("x - 1")

    def test_no_common_factor(self):
        assert poly_gcd(p2("x^3 - xy^2"), p2("3x^2 - y^2")) == 1

    def test_homogeneous_bivariate(self):
        a = p2("(x^2+y^2)(x-y)^2 x")
        b = p2("(x^2+y^2)(x-y)(x+2y) y")
        assert poly_gcd(a, b) == p2("(x^2+y^2)(x-y)")

    def test_monomial_content(self):
        assert poly_gcd(p2("x^3y^2"), p2("x^2y^4")) == p2("x^2y^2")

    def test_multivariate_dense(self):
        g = p3("x + y + z")
        a = g * p3("x^2 - yz + 1")
        b = g * p3("y^3 + xz")
        assert poly_gcd(a, b) == g

    def test_gcd_randomized_products(self):
        rng = random.Random(991)

        def rand_poly(max_terms=4, max_e=2):
            p = R2.zero()
            while p.is_zero:
                for _ in range(rng.randint(1, max_terms)):
                    e = (rng.randint(0, max_e), rng.randint(0, max_e))
                    p = p + R2.monomial(e, rng.randint(-4, 4))
            return p

        for _ in range(25):
            g, a, b = rand_poly(), rand_poly(), rand_poly()
            got = poly_gcd(g * a, g * b)
            # the common factor must divide the computed gcd
            assert got.divides(g * a) and got.divides(g * b)
            assert g.normalized().divides(got * g.ring.one())
            # and the gcd divides both inputs
            q = (g * a).exact_div(got)
            assert poly_gcd(q, (g * b).exact_div(got)).total_degree() >= 0

    def test_gcd_many(self):
        ps = [p2("x^2y"), p2("x^3"), p2("x^2 + x^3")]
        assert gcd_many(ps) == p2("x^2")

    def test_squarefree(self):
        assert is_squarefree(p2("x^2 + y^2"))
        assert is_squarefree(p2("xy(x-y)"))
        assert not is_squarefree(p2("x^2y"))
        assert not is_squarefree(p2("(x+y)^2(x-y)"))


class TestMatrix:
    def test_det_2x2(self):
        m = PolyMatrix(R2, [[p2("x"), p2("y")], [p2("y"), p2("x")]])
        assert m.det() == p2("x^2 - y^2")
        assert m.det(method="bareiss") == m.det(method="laplace")

    def test_det_singular(self):
        m = PolyMatrix(R2, [[p2("x"), p2("y")], [p2("2x"), p2("2y")]])
        assert m.det().is_zero

    def test_det_agreement_randomized(self):
        rng = random.Random(5150)
        for n in (3, 4):
            for _ in range(6):
                rows = [
                    [
                        R2.monomial(
                            (rng.randint(0, 2), rng.randint(0, 2)),
                            rng.randint(-3, 3),
                        )
                        for _ in range(n)
                    ]
                    for _ in range(n)
                ]
                m = PolyMatrix(R2, rows)
                assert m.det(method="bareiss") == m.det(method="laplace")

    def test_det_multiplicative_numeric(self):
        rng = random.Random(8)
        R = Ring(["x"])
        for _ in range(10):
            a = [[R.constant(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
            b = [[R.constant(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
            ab = [
                [
                    sum((a[i][k] * b[k][j] for k in range(3)), R.zero())
                    for j in range(3)
                ]
                for i in range(3)
            ]
            det = PolyMatrix(R, ab).det()
            assert det == PolyMatrix(R, a).det() * PolyMatrix(R, b).det()

    def test_minors_memoized(self):
        m = PolyMatrix(
            R2,
            [
                [p2("x"), p2("y"), p2("0")],
                [p2("0"), p2("x"), p2("y")],
                [p2("y"), p2("0"), p2("x")],
            ],
        )
        got = dict(m.minors(2))
        assert got[((0, 1), (0, 1))] == p2("x^2")
        assert got[((0, 1), (1, 2))] == p2("y^2")
        assert len(got) == 9

    def test_minor_cap(self):
        m = PolyMatrix(R2, [[p2("x")] * 4 for _ in range(4)])
        with pytest.raises(ValueError):
            list(m.minors(2, cap=3))

    def test_submatrix_and_transpose(self):
        m = PolyMatrix(R2, [[p2("x"), p2("y")], [p2("1"), p2("0")]])
        assert m.transpose()[(0, 1)] == p2("1")
        s = m.submatrix([1], [0])
        assert s.nrows == 1 and s[(0, 0)] == p2("1")


class TestPrinting:
    def test_str_deterministic(self):
        q = p2("y + x^2 - 3xy")
        assert str(q) == "x^2 - 3*x*y + y"
        assert str(R2.zero()) == "0"
        assert str(p2("-x + 1/2")) == "-x + 1/2"

import random
from fractions import Fraction

import pytest

from polystrat.gaussian import GaussianRational, gr
from polystrat.polynomials import (MultiPoly, PolyMap, PolyError,
                                   PolyParseError, UnknownVariableError,
                                   exact_divide, format_poly, jacobian_det,
                                   parse_poly, poly_gcd, resultant,
                                   squarefree_part, sturm_real_root_count,
                                   sylvester_matrix, univariate_squarefree)

from oracles import leibniz_det

V = ("x", "y")


def P(text, variables=V):
    return parse_poly(text, variables)


class TestGaussianRational:
    def test_arith(self):
        a = gr(Fraction(1, 2), 3)
        b = gr(2, Fraction(-1, 3))
        assert (a + b) - b == a
        assert a * b == b * a
        assert (a / b) * b == a

    def test_inverse_and_norm(self):
        a = gr(3, 4)
        assert a.norm2() == Fraction(25)
        assert a * a.inverse() == gr(1)
        with pytest.raises(ZeroDivisionError):
            gr(0).inverse()

    def test_pow_negative(self):
        a = gr(0, 2)
        assert a ** -2 == gr(Fraction(-1, 4))


class TestParser:
    def test_expand_product(self):
        p = P("x^2*y*(y+2)")
        assert p == P("x^2*y^2 + 2*x^2*y")

    def test_zero(self):
        z = P("0")
        assert z.is_zero()
        assert z.degree() == -1

    def test_gaussian_product(self):
        assert P("(x+i*y)*(x-i*y)") == P("x^2 + y^2")

    def test_rational_literal(self):
        p = P("1/2*x + 3/4")
        assert p.evaluate([gr(2), gr(0)]) == gr(Fraction(7, 4))

    def test_syntax_error_has_position(self):
        with pytest.raises(PolyParseError) as ei:
            P("x + * y")
        assert ei.value.position == 4

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            P("x + z")

    def test_no_implicit_multiplication(self):
        with pytest.raises(PolyParseError):
            P("2x")

    def test_division_only_in_literals(self):
        with pytest.raises(PolyParseError):
            P("x/2")

    def test_exponent_must_be_integer(self):
        with pytest.raises(PolyParseError):
            P("x^(2)")

    def test_unary_minus(self):
        assert P("-x + - -y") == P("y - x")

    def test_i_reserved(self):
        with pytest.raises(PolyError):
            parse_poly("i", ("i", "x"))


class TestPrinting:
    def test_graded_lex_order(self):
        assert str(P("1 + x + x^2*y^2")) == "x^2*y^2 + x + 1"

    def test_roundtrip_examples(self):
        for text in ("x^2*y*(y+2)", "0", "(x+i*y)*(x-i*y)",
                     "1/2 - 3*x + i*y^4", "(1-2*i)*x*y - i"):
            p = P(text)
            assert parse_poly(str(p), V) == p

    def test_roundtrip_random(self):
        rng = random.Random(7)
        for _ in range(60):
            terms = {}
            for _ in range(rng.randint(0, 6)):
                e = (rng.randint(0, 4), rng.randint(0, 4))
                c = gr(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                       Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
                if not c.is_zero():
                    terms[e] = c
            p = MultiPoly(V, terms)
            assert parse_poly(format_poly(p), V) == p


class TestCalculus:
    def test_derivative_power_rule(self):
        p = P("x^2*y^2 + 2*x^2*y")
        # term-by-term oracle
        expected = MultiPoly(V, {})
        for e, c in p.terms.items():
            if e[1]:
                expected = expected + MultiPoly(
                    V, {(e[0], e[1] - 1): c * gr(e[1])})
        assert p.derivative("y") == expected
        assert p.derivative("y") == P("2*x^2*y + 2*x^2")

    def test_derivative_trivial(self):
        assert P("5").derivative("x").is_zero()
        assert P("x").derivative("x") == P("1")

    def test_derivative_unknown_var(self):
        with pytest.raises(UnknownVariableError):
            P("x").derivative("q")

    def test_finite_difference_cross_check(self):
        rng = random.Random(3)
        p = P("x^3*y - 2*x*y^2 + 7*x - 1/3")
        dp = p.derivative("x")
        for _ in range(10):
            a = [complex(rng.uniform(-2, 2)), complex(rng.uniform(-2, 2))]
            h = 1e-6
            up = p.evaluate_complex([a[0] + h, a[1]])
            dn = p.evaluate_complex([a[0] - h, a[1]])
            fd = (up - dn) / (2 * h)
            exact = dp.evaluate_complex(a)
            assert abs(fd - exact) <= 1e-6 * (1 + abs(exact))


class TestJacobian:
    def test_worked_example(self, worked_example):
        assert jacobian_det(worked_example) == P("2*x^2*y + 2*x^2")

    def test_identity(self):
        ident = PolyMap((P("x"), P("y")))
        assert jacobian_det(ident) == P("1")

    def test_triangular(self):
        F = PolyMap((P("x"), P("y + x^2")))
        assert jacobian_det(F) == P("1")


class TestLeadingForm:
    def test_top_degree_selection(self):
        assert P("x^2*y^2 + 2*x^2*y").leading_form() == P("x^2*y^2")

    def test_trivial(self):
        assert P("x").leading_form() == P("x")
        assert P("5").leading_form() == P("5")

    def test_zero_rejected(self):
        with pytest.raises(PolyError):
            P("0").leading_form()

    def test_multiplicative(self):
        rng = random.Random(11)
        for _ in range(25):
            def rand_poly():
                terms = {}
                for _ in range(rng.randint(1, 5)):
                    e = (rng.randint(0, 3), rng.randint(0, 3))
                    terms[e] = gr(rng.randint(-5, 5), rng.randint(-2, 2))
                q = MultiPoly(V, {e: c for e, c in terms.items()
                                  if not c.is_zero()})
                return q
            p, q = rand_poly(), rand_poly()
            if p.is_zero() or q.is_zero():
                continue
            assert (p * q).leading_form() == \
                p.leading_form() * q.leading_form()


class TestResultant:
    def test_examples(self):
        assert resultant(P("y^2 - x"), P("y - 1"), "y") == P("1 - x")
        va = ("x", "a", "b")
        r = resultant(parse_poly("x - a", va), parse_poly("x^2 - b", va), "x")
        assert r == parse_poly("a^2 - b", va)
        vb = ("y", "a", "b")
        r2 = resultant(parse_poly("y - a", vb), parse_poly("y - b", vb), "y")
        assert r2 == parse_poly("a - b", vb)

    def test_both_constant_rejected(self):
        with pytest.raises(PolyError):
            resultant(P("x"), P("x + 1"), "y")

    def test_swap_sign_property_against_leibniz(self):
        rng = random.Random(5)
        for _ in range(12):
            def rand_poly(max_deg):
                terms = {}
                for _ in range(rng.randint(1, 4)):
                    e = (rng.randint(0, max_deg), rng.randint(0, max_deg))
                    terms[e] = gr(rng.randint(-4, 4))
                q = MultiPoly(V, {e: c for e, c in terms.items()
                                  if not c.is_zero()})
                return q
            p, q = rand_poly(3), rand_poly(3)
            if p.degree_in("y") < 1 or q.degree_in("y") < 1:
                continue
            r_pq = resultant(p, q, "y")
            r_qp = resultant(q, p, "y")
            sign = (-1) ** (p.degree_in("y") * q.degree_in("y"))
            assert r_pq == (r_qp if sign > 0 else -r_qp)
            # independent oracle: Leibniz expansion of the Sylvester matrix
            assert r_pq == leibniz_det(sylvester_matrix(p, q, "y"))


class TestEvaluate:
    def test_examples(self):
        p = P("x^2*y^2 + 2*x^2*y")
        assert p.evaluate([gr(1), gr(1)]) == gr(3)
        q = P("x^2 + y^2 + 7")
        assert q.evaluate([gr(0), gr(0)]) == gr(7)
        assert P("x^2 + y^2").evaluate([gr(1), gr(0, 1)]) == gr(0)

    def test_dimension_mismatch(self):
        with pytest.raises(PolyError):
            P("x").evaluate([gr(1)])


class TestGcdAndSquarefree:
    def test_squarefree_of_jacobian(self, worked_example):
        assert squarefree_part(jacobian_det(worked_example)) == P("x*y + x")

    def test_gcd(self):
        p = P("x^2*y + x^2")
        q = P("x*y^2 + 2*x*y + x")
        g = poly_gcd(p, q)
        assert g == P("x*y + x")

    def test_exact_divide(self):
        p = P("x^2*y^2 - x^2")
        d = P("x*y - x")
        assert exact_divide(p, d) == P("x*y + x")
        with pytest.raises(PolyError):
            exact_divide(P("x^2 + 1"), P("y"))

    def test_squarefree_constant(self):
        assert squarefree_part(P("7")) == P("1")


class TestUnivariate:
    def test_sturm_counts(self):
        # y^2 + 2y - 1: two real roots
        assert sturm_real_root_count([Fraction(-1), Fraction(2),
                                      Fraction(1)]) == 2
        # y^2 + 2y + 2: no real roots
        assert sturm_real_root_count([Fraction(2), Fraction(2),
                                      Fraction(1)]) == 0
        # (y-1)^2 (y+3): distinct real roots = 2
        assert sturm_real_root_count([Fraction(3), Fraction(-5),
                                      Fraction(1), Fraction(1)]) == 2

    def test_univariate_squarefree(self):
        # (y-1)^2 -> y-1 monic
        sq = univariate_squarefree([gr(1), gr(-2), gr(1)])
        assert [c.re for c in sq] == [Fraction(-1), Fraction(1)]

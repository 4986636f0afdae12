from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from anosov_lie.errors import InvalidInputError, NotAUnitError
from anosov_lie.linalg import charpoly
from anosov_lie.poly import (
    CircleMethod,
    IntPolynomial,
    bareiss_det,
    chebyshev_transform,
    composed_product,
    exact_divide,
    irreducibility,
    is_irreducible,
    parse_poly,
    poly_gcd,
    power_min_poly,
    power_sum,
    power_sums,
    reciprocal,
    resultant,
    squarefree_part,
    sturm_count,
    sylvester_matrix,
    unit_circle_verdict,
)

X = sympy.Symbol("x")
P = IntPolynomial.parse


def to_sympy(f):
    return sympy.Poly(list(reversed(f.coeffs)), X)



coeff = st.integers(-6, 6)
monic = st.lists(coeff, min_size=1, max_size=5).map(lambda cs: IntPolynomial(cs + [1]))
unit_poly = st.tuples(st.sampled_from([-1, 1]), st.lists(coeff, min_size=0, max_size=4)).map(
    lambda t: IntPolynomial([t[0], *t[1], 1])
)


class TestIntPolynomial:
    def test_parse_and_print(self):
        f = P("x^2-3x+1")
        assert f.coeffs == (1, -3, 1)
        assert str(f) == "x^2-3x+1"
        assert str(P("x^3+x^2-2x-1")) == "x^3+x^2-2x-1"
        assert P("-x + 2").coeffs == (2, -1)
        assert P("x").coeffs == (0, 1)
        assert P("7").coeffs == (7,)
        assert P("x**2 - 3*x + 1") == f

    @pytest.mark.parametrize("bad", ["", "x^", "2y+1", "x^2-(3x)", "x^-1", "3x^2x"])
    def test_parse_rejects(self, bad):
        with pytest.raises(InvalidInputError):
            parse_poly(bad)

    def test_trailing_zeros_and_zero_poly(self):
        assert IntPolynomial([1, 2, 0, 0]).degree == 1
        z = IntPolynomial([0, 0])
        assert z.is_zero() and z.degree == -1
        assert str(z) == "0"

    def test_json_round_trip(self):
        f = P("x^2-3x+1")
        assert f.to_json() == ["1", "-3", "1"]
        assert IntPolynomial.from_json(f.to_json()) == f

    @given(monic, monic)
    def test_ring_ops_match_sympy(self, f, g):
        assert to_sympy(f * g) == to_sympy(f) * to_sympy(g)
        assert to_sympy(f + g) == to_sympy(f) + to_sympy(g)
        assert to_sympy(f - g) == to_sympy(f) - to_sympy(g)
        assert to_sympy(f.derivative()) == to_sympy(f).diff(X)

    @given(monic)
    def test_str_parse_round_trip(self, f):
        assert P(str(f)) == f

    def test_from_roots(self):
        assert IntPolynomial.from_roots([1, 2]) == P("x^2-3x+2")


class TestExactKernels:
    def test_bareiss_det_against_sympy(self):
        m = [[2, -1, 0, 3], [1, 4, -2, 0], [0, 5, 1, 1], [7, 0, 2, -3]]
        assert bareiss_det(m) == sympy.Matrix(m).det()
        assert bareiss_det([[0, 1], [1, 0]]) == -1
        assert bareiss_det([]) == 1

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_hessenberg_charpoly_against_det(self, m):
        x = sympy.Symbol("x")
        expected = sympy.Poly(sympy.Matrix(m).charpoly(x).as_expr(), x).all_coeffs()[::-1]
        assert list(charpoly(m).coeffs) == [int(c) for c in expected]
        # det(xI - M) at x = 0 is (-1)^n det M
        assert charpoly(m).coeffs[0] == (-1) ** len(m) * bareiss_det(m)

    @pytest.mark.parametrize(
        "f, g, expected",
        [("x-2", "x-3", -1), ("x^2-3x+1", "x^2-3x+1", 0), ("x^2-3x+1", "x-2", -1)],
    )
    def test_resultant_examples(self, f, g, expected):
        assert resultant(P(f), P(g)) == expected

    @given(monic, monic)
    @settings(max_examples=60, deadline=None)
    def test_resultant_matches_root_product(self, f, g):
        # sympy.resultant gets Res(x, x^3+1) wrong (-1 instead of g(0) = 1); use prod g(alpha)
        with mpmath.workdps(60):
            roots = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=300, extraprec=400)
            numeric = mpmath.fprod(mpmath.polyval(list(reversed(g.coeffs)), a) for a in roots)
        assert abs(numeric - resultant(f, g)) < 1e-6

    def test_sylvester_shape(self):
        assert len(sylvester_matrix(P("x^2-3x+1"), P("x^3+x^2-2x-1"))) == 5

    def test_gcd_squarefree_divide(self):
        f = P("x^2-1") * P("x-1")
        assert poly_gcd(f, P("x^2-3x+2")) == P("x-1")
        assert squarefree_part(f) == P("x^2-1")
        assert exact_divide(f, P("x-1")) == P("x^2-1")
        assert exact_divide(f, P("x-3")) is None


class TestComposedProduct:
    @pytest.mark.parametrize(
        "f, g, expected",
        [("x-2", "x-3", "x-6"), ("x^2-3x+1", "x-2", "x^2-6x+4")],
    )
    def test_examples(self, f, g, expected):
        assert composed_product(P(f), P(g)) == P(expected)

    def test_square_of_golden_unit_has_double_root_one(self):
        h = composed_product(P("x^2-3x+1"), P("x^2-3x+1"))
        assert exact_divide(h, P("x-1") * P("x-1")) is not None

    @given(unit_poly, unit_poly)
    @settings(max_examples=40, deadline=None)
    def test_matches_expanded_root_products(self, f, g):
        with mpmath.workdps(80):
            ra = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=300, extraprec=600)
            rb = mpmath.polyroots(list(reversed(g.coeffs)), maxsteps=300, extraprec=600)
            coeffs = [mpmath.mpc(1)]
            for a in ra:
                for b in rb:
                    # multiply by (x - ab), coefficients ascending
                    coeffs = [(-a * b) * coeffs[0]] + [
                        coeffs[i - 1] - a * b * coeffs[i] for i in range(1, len(coeffs))
                    ] + [coeffs[-1]]
        h = composed_product(f, g)
        assert h.degree == f.degree * g.degree
        assert all(abs(c - e) < 1e-6 for c, e in zip(coeffs, h.coeffs))

    def test_requires_monic(self):
        with pytest.raises(InvalidInputError):
            composed_product(IntPolynomial([1, 2]), P("x-1"))


class TestReciprocalAndPowers:
    def test_reciprocal_examples(self):
        assert reciprocal(P("x^2-3x+1")) == P("x^2-3x+1")
        assert reciprocal(P("x^3+x^2-2x-1")) == P("x^3+2x^2-x-1")
        with pytest.raises(NotAUnitError):
            reciprocal(P("x-2"))

    @pytest.mark.parametrize(
        "a, expected", [(1, "x^2-3x+1"), (-1, "x^2-3x+1"), (2, "x^2-7x+1"), (0, "x^2-2x+1")]
    )
    def test_power_min_poly_examples(self, a, expected):
        assert power_min_poly(P("x^2-3x+1"), a) == P(expected)

    @given(unit_poly, st.integers(-4, 4))
    @settings(max_examples=40, deadline=None)
    def test_power_min_poly_roots_are_powers(self, f, a):
        h = power_min_poly(f, a)
        assert h.degree == f.degree
        for z in mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=200, extraprec=200):
            assert abs(mpmath.polyval(list(reversed(h.coeffs)), z**a)) < 1e-6 * max(1, abs(z**a)) ** h.degree

    @pytest.mark.parametrize("m, expected", [(0, 2), (1, 3), (2, 7), (-1, 3), (-3, 18)])
    def test_power_sum_golden(self, m, expected):
        assert power_sum(P("x^2-3x+1"), m) == expected

    def test_power_sum_cubic(self):
        assert power_sum(P("x^3+x^2-2x-1"), 2) == 5
        assert power_sums(P("x^3+x^2-2x-1"), 4) == (3, -1, 5, -4, 13)

    @given(unit_poly, st.integers(-8, 8))
    @settings(max_examples=60, deadline=None)
    def test_power_sum_matches_numeric_roots(self, f, m):
        roots = mpmath.polyroots(list(reversed(f.coeffs)), maxsteps=200, extraprec=300)
        numeric = sum(z**m for z in roots)
        assert abs(numeric - power_sum(f, m)) < 1e-6


class TestIrreducibility:
    @pytest.mark.parametrize(
        "f, expected", [("x^2-1", False), ("x^2-3x+1", True), ("x^4+x^2+1", False), ("x^3+x^2-2x-1", True)]
    )
    def test_examples(self, f, expected):
        assert is_irreducible(P(f)) is expected

    @given(monic)
    @settings(max_examples=80, deadline=None)
    def test_matches_sympy_up_to_degree_six(self, f):
        if f.degree < 1:
            return
        _, factors = sympy.factor_list(to_sympy(f))
        sympy_irreducible = len(factors) == 1 and factors[0][1] == 1
        assert (irreducibility(f) == "irreducible") is sympy_irreducible

    def test_high_degree_uses_mod_p(self):
        f = P("x^7-x-1")
        assert irreducibility(f) == "irreducible"
        assert irreducibility(P("x^7-x-1") * P("x-3")) == "reducible"


class TestUnitCircle:
    @pytest.mark.parametrize(
        "f, method",
        [
            ("x-1", CircleMethod.ROOT_AT_PLUS_MINUS_ONE),
            ("x+1", CircleMethod.ROOT_AT_PLUS_MINUS_ONE),
            ("x^2-x+1", CircleMethod.STURM_ON_CHEBYSHEV_TRANSFORM),
            ("x^2+1", CircleMethod.STURM_ON_CHEBYSHEV_TRANSFORM),
        ],
    )
    def test_rejects_roots_of_unity(self, f, method):
        v = unit_circle_verdict(P(f))
        assert v.has_root_on_circle and v.method is method and v.exact
        assert v.numeric_margin == 0

    def test_golden_goes_through_sturm(self):
        v = unit_circle_verdict(P("x^2-3x+1"))
        assert not v.has_root_on_circle
        assert v.method is CircleMethod.STURM_ON_CHEBYSHEV_TRANSFORM
        assert v.numeric_margin == pytest.approx((5**0.5 - 1) / 2, abs=1e-12)

    def test_non_palindromic_cubic(self):
        v = unit_circle_verdict(P("x^3+x^2-2x-1"))
        assert not v.has_root_on_circle and v.method is CircleMethod.NON_PALINDROMIC_GCD

    def test_salem_quartic(self):
        # Lehmer-type Salem: two real roots off the circle, two on it
        v = unit_circle_verdict(P("x^4-x^3-x^2-x+1"))
        assert v.has_root_on_circle

    def test_chebyshev_transform(self):
        assert chebyshev_transform(P("x^2-x+1")) == P("x-1")
        assert chebyshev_transform(P("x^2-3x+1")) == P("x-3")
        with pytest.raises(InvalidInputError):
            chebyshev_transform(P("x^2-3x+2"))

    def test_sturm_count_closed_interval(self):
        f = P("x^3-x")
        assert sturm_count(f, -1, 1) == 3
        assert sturm_count(f, Fraction(-1, 2), Fraction(1, 2)) == 1
        assert sturm_count(P("x^2+1"), -5, 5) == 0

    @given(monic)
    @settings(max_examples=80, deadline=None)
    def test_matches_numeric_roots(self, f):
        if f.degree < 1:
            return
        verdict = unit_circle_verdict(f, with_margin=False)
        roots = [complex(z) for z in sympy.Poly(sympy.sqf_part(to_sympy(f))).nroots(n=30, maxsteps=200)]
        distance = min(abs(abs(z) - 1) for z in roots)
        if verdict.has_root_on_circle:
            assert distance < 1e-8
        else:
            assert distance > 1e-10

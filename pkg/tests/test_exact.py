import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adelic_heights.exact import (IntPoly, complex_roots, discriminant,
                                  log_abs_fraction, mahler_measure,
                                  newton_polygon_root_valuations,
                                  padic_valuation, poly_gcd, resultant,
                                  squarefree_part, sylvester_resultant)

small_ints = st.integers(min_value=-30, max_value=30)


def poly_strategy(max_deg=5):
    return st.lists(small_ints, min_size=1, max_size=max_deg + 1).map(
        lambda cs: cs if any(cs) else cs + [1]).map(IntPoly)


def test_intpoly_basics():
    P = IntPoly([-1, 0, 1])  # x^2 - 1
    assert P.degree == 2
    assert P.lc == 1
    assert P.eval(Fraction(3)) == 8
    assert P.derivative().coeffs == (0, 2)
    assert IntPoly([2, 4, 6]).content() == 2
    assert IntPoly([2, 4, 6]).primitive_part().coeffs == (1, 2, 3)


def test_shift_compose_linear():
    P = IntPoly([0, 0, 1])  # x^2
    Q = P.shift_compose_linear(2, 3)  # (2x+3)^2 = 9 + 12x + 4x^2
    assert Q.coeffs == (9, 12, 4)


def test_from_fraction_coeffs():
    P, denom = IntPoly.from_fraction_coeffs([Fraction(1, 2), Fraction(1, 3)])
    assert denom == 6
    assert P.coeffs == (3, 2)


def test_padic_valuation():
    assert padic_valuation(12, 2) == 2
    assert padic_valuation(Fraction(1, 8), 2) == -3
    assert padic_valuation(Fraction(9, 5), 3) == 2


def test_discriminant_quadratic():
    # disc(x^2 + bx + c) = b^2 - 4c
    for b in range(-4, 5):
        for c in range(-4, 5):
            assert discriminant(IntPoly([c, b, 1])) == b * b - 4 * c


@given(poly_strategy(4), poly_strategy(4))
@settings(max_examples=60, deadline=None)
def test_resultant_matches_sylvester(P, Q):
    if P.degree == 0 or Q.degree == 0:
        return
    assert resultant(P, Q) == sylvester_resultant(P, Q)


@given(poly_strategy(4), poly_strategy(4))
@settings(max_examples=40, deadline=None)
def test_resultant_vanishes_iff_common_factor(P, Q):
    if P.degree == 0 or Q.degree == 0:
        return
    g = poly_gcd(P, Q)
    assert (resultant(P, Q) == 0) == (g.degree > 0)


def test_resultant_product_of_differences():
    # Res(P, Q) = lc(P)^deg Q lc(Q)^deg P prod (alpha_i - beta_j)
    P = IntPoly([-2, 0, 1])   # roots +-sqrt2
    Q = IntPoly([-3, 0, 1])   # roots +-sqrt3
    assert resultant(P, Q) == 1  # (2-3)^2 ... = ((sqrt2)^2-3)((-sqrt2)^2-3)=1


def test_squarefree_part():
    P = IntPoly([0, 0, 1])  # x^2
    assert squarefree_part(P).coeffs == (0, 1)
    Q = IntPoly([1, 2, 1])  # (x+1)^2
    assert squarefree_part(Q).coeffs == (1, 1)


def test_newton_polygon_root_valuations():
    # x^2 - p^2 has both roots of valuation 1 at p
    vals = newton_polygon_root_valuations(IntPoly([-9, 0, 1]), 3)
    assert sorted(vals) == [Fraction(1), Fraction(1)]
    # px^2 - 1: roots have valuation -1/2
    vals = newton_polygon_root_valuations(IntPoly([-1, 0, 3]), 3)
    assert sorted(vals) == [Fraction(-1, 2), Fraction(-1, 2)]


def test_complex_roots_accuracy():
    P = IntPoly([-1, 0, 0, 0, 1])  # x^4 - 1
    roots = sorted((r.value for r in complex_roots(P)),
                   key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    expected = sorted([1, -1, 1j, -1j], key=lambda z: (round(z.real, 6),
                                                       round(z.imag, 6)))
    for r, e in zip(roots, expected):
        assert abs(r - e) < 1e-10


def test_mahler_measure():
    assert abs(mahler_measure(IntPoly([-2, 0, 1])) - math.log(2)) < 1e-10
    assert abs(mahler_measure(IntPoly([-1, 1]))) < 1e-12
    # cyclotomic: measure 0
    assert abs(mahler_measure(IntPoly([1, 1, 1]))) < 1e-10


def test_log_abs_fraction():
    assert log_abs_fraction(Fraction(8)) == pytest.approx(math.log(8))

import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adelic_heights.exact import IntPoly
from adelic_heights.places import (AdelicMeasure, AlgebraicSet, Place,
                                   adelic_height, adelic_measure_from_json,
                                   delta_valuation, log_norm_at_place,
                                   log_plus_valuation_sum,
                                   mahler_formula_general, naive_height,
                                   naive_height_mahler, norm_at_place,
                                   pairing_finite_sets,
                                   product_formula_residual,
                                   signed_energy_vs_lambda)

fractions = st.fractions(min_value=-1000, max_value=1000,
                         max_denominator=1000).filter(lambda q: q != 0)


def test_norms():
    v2 = Place.finite(2)
    assert norm_at_place(Fraction(12), v2) == 0.25
    assert norm_at_place(Fraction(12), Place.archimedean()) == 12.0
    assert log_norm_at_place(Fraction(1, 8), v2) == pytest.approx(
        3 * math.log(2))


@given(fractions)
@settings(max_examples=100, deadline=None)
def test_product_formula(q):
    assert abs(product_formula_residual(q)) < 1e-10


def random_set(rng, max_deg=5, max_coeff=40):
    while True:
        cs = [rng.randint(-max_coeff, max_coeff)
              for _ in range(rng.randint(2, max_deg + 1))]
        if cs[-1] != 0 and any(cs[:-1]):
            return AlgebraicSet(IntPoly(cs))


def test_heights_agree():
    rng = random.Random(1)
    for _ in range(30):
        F = random_set(rng)
        assert naive_height(F) == pytest.approx(naive_height_mahler(F),
                                                abs=1e-8)


def test_naive_height_point():
    # single rational 3/2: h = (log max(|3|,|2|)) = log 3
    F = AlgebraicSet.from_rationals([Fraction(3, 2)])
    assert naive_height(F) == pytest.approx(math.log(3), abs=1e-12)


def test_delta_valuation():
    # F = {0, p}: min poly x(x - p) = x^2 - px, disc = p^2
    F = AlgebraicSet(IntPoly([0, -3, 1]))
    assert delta_valuation(F, 3) == 2
    assert delta_valuation(F, 5) == 0


def test_pairing_self_exact():
    F = AlgebraicSet(IntPoly([0, -3, 1]))  # {0, 3}
    lp = pairing_finite_sets(F, F, Place.finite(3))
    # (1/|F|^2) v_3(disc) log 3 = (2/4) log 3
    assert lp.coefficient == Fraction(1, 2)
    assert lp.value == pytest.approx(0.5 * math.log(3))


def test_pairing_cross_resultant():
    F = AlgebraicSet.from_rationals([Fraction(0)])
    G = AlgebraicSet.from_rationals([Fraction(9)])
    lp = pairing_finite_sets(F, G, Place.finite(3))
    # -log|0 - 9|_3 = 2 log 3
    assert lp.coefficient == Fraction(2)


def test_log_plus_valuation_sum_unit_lc():
    # monic polynomial: no pole contribution at any prime
    F = AlgebraicSet(IntPoly([7, -5, 1]))
    assert log_plus_valuation_sum(F, 2) == 0
    assert log_plus_valuation_sum(F, 7) == 0


def test_log_plus_valuation_sum_pole():
    # 3x - 1: root 1/3 has |.|_3 = 3, so sum log+ = log 3, coefficient 1
    F = AlgebraicSet(IntPoly([-1, 3]))
    assert log_plus_valuation_sum(F, 3) == 1


def test_signed_energy_nonnegative():
    rng = random.Random(7)
    for _ in range(40):
        F = random_set(rng)
        for p in (2, 3, 5):
            assert signed_energy_vs_lambda(F, p) >= 0


def test_adelic_equals_naive_for_standard_measure():
    rho = AdelicMeasure.all_lambda()
    rng = random.Random(3)
    for _ in range(10):
        F = random_set(rng)
        assert adelic_height(F, rho) == pytest.approx(naive_height(F),
                                                      abs=1e-8)


def test_mahler_formula_general():
    rho = AdelicMeasure.all_lambda()
    rng = random.Random(5)
    for _ in range(8):
        F = random_set(rng)
        assert mahler_formula_general(F, rho) == pytest.approx(
            adelic_height(F, rho), abs=1e-7)


def test_roots_of_unity_height_zero():
    F = AlgebraicSet.roots_of_unity(8)
    assert naive_height(F) == pytest.approx(0.0, abs=1e-10)


def test_measure_json_roundtrip():
    doc = [
        {"place": "inf", "measure_kind": "lambda", "parameters": {}},
        {"place": 3, "measure_kind": "explicit_atomic",
         "parameters": {"atoms": [
             {"center": "0", "logr": "0", "w": "1"}]}},
    ]
    rho = adelic_measure_from_json(doc)
    assert rho.is_lambda_at(Place.archimedean())
    assert not rho.is_lambda_at(Place.finite(3))
    assert rho.is_lambda_at(Place.finite(5))
    # the explicit atom at the unit ball is exactly the standard measure,
    # so heights agree with the all-lambda measure
    rng = random.Random(11)
    for _ in range(5):
        F = random_set(rng)
        assert adelic_height(F, rho) == pytest.approx(
            adelic_height(F, AdelicMeasure.all_lambda()), abs=1e-8)

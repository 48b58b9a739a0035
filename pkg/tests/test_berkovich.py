import random
from fractions import Fraction

import pytest

from adelic_heights.berkovich import (AtomicMeasureB, BerkPoint, TreeFunction,
                                      base_change_identity_check,
                                      cauchy_schwarz_slack, chordal_metric,
                                      contains, energy_atomic, energy_flux,
                                      gromov_product, hyperbolic_distance,
                                      l320_check, lambda_measure,
                                      laplacian_tree, log_sup, potential_of,
                                      project_eps, tree_span, wedge)


def rand_ball(rng, p=3):
    c = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
    logr = Fraction(-rng.randint(0, 8), rng.randint(1, 3))
    return BerkPoint.ball(c, logr, p)


def rand_point(rng, p=3):
    return BerkPoint.point(Fraction(rng.randint(-40, 40),
                                    rng.randint(1, 9)), p)


def test_canonical_center_equality():
    p = 3
    # two centers that differ by an element of absolute value <= radius
    A = BerkPoint.ball(Fraction(1), Fraction(-2), p)
    B = BerkPoint.ball(Fraction(1) + 9, Fraction(-2), p)
    assert A == B
    assert hash(A) == hash(B)
    C = BerkPoint.ball(Fraction(1) + 3, Fraction(-2), p)
    assert A != C


def test_log_sup_examples():
    p = 3
    G = BerkPoint.gauss(p)
    x = BerkPoint.point(Fraction(9), p)
    # |z - w| on {gauss} x {9}: sup over unit ball of |u - 9| = 1
    assert log_sup(G, x) == 0
    y = BerkPoint.point(Fraction(1, 3), p)
    assert log_sup(G, y) == 1  # pole of size p
    assert log_sup(x, y) == 1


def test_wedge_and_contains():
    p = 3
    a = BerkPoint.point(Fraction(0), p)
    b = BerkPoint.point(Fraction(9), p)
    w = wedge(a, b)
    assert w.logr == Fraction(-2)
    assert contains(w, a) and contains(w, b)
    assert contains(BerkPoint.gauss(p), w)


def test_hyperbolic_distance():
    p = 3
    G = BerkPoint.gauss(p)
    B = BerkPoint.ball(Fraction(0), Fraction(-4), p)
    assert hyperbolic_distance(G, B) == 4
    C = BerkPoint.ball(Fraction(1), Fraction(-4), p)
    # path goes up to the gauss point and back down
    assert hyperbolic_distance(B, C) == 8


def test_gromov_product_infinite_iff_equal_type1():
    p = 3
    base = BerkPoint.gauss(p)
    import math
    x = BerkPoint.point(Fraction(2), p)
    assert gromov_product(x, x, base) == math.inf
    y = BerkPoint.point(Fraction(5), p)
    g = gromov_product(x, y, base)
    assert g == 1  # |2-5|_3 = 1/3, both in unit ball


def test_base_change_identity_exact():
    rng = random.Random(0)
    for _ in range(50):
        S = rand_point(rng) if rng.random() < 0.5 else rand_ball(rng)
        Sp = rand_point(rng) if rng.random() < 0.5 else rand_ball(rng)
        S0, S1 = rand_ball(rng), rand_ball(rng)  # bases must be balls
        if S0 == S1 or S == Sp:
            continue
        assert base_change_identity_check(S, Sp, S0, S1) == 0


def rand_mass_zero(rng, k=4, p=3):
    pts = []
    while len(pts) < k:
        S = rand_ball(rng, p)
        if S not in pts:
            pts.append(S)
    ws = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in pts]
    ws[-1] -= sum(ws)
    return AtomicMeasureB(list(zip(pts, ws)), p)


def test_flux_equals_atomic():
    rng = random.Random(1)
    for _ in range(60):
        rho = rand_mass_zero(rng)
        assert energy_flux(rho) == energy_atomic(rho, rho)


def test_pair_energy_is_distance():
    rng = random.Random(2)
    for _ in range(40):
        S, Sp = rand_ball(rng), rand_ball(rng)
        if S == Sp:
            continue
        rho = AtomicMeasureB([(S, Fraction(1)), (Sp, Fraction(-1))], 3)
        assert energy_atomic(rho, rho) == hyperbolic_distance(S, Sp)


def test_l320():
    rng = random.Random(3)
    for _ in range(100):
        pts = [rand_point(rng) for _ in range(rng.randint(2, 5))]
        eps_log = Fraction(-rng.randint(1, 10))
        lhs, rhs = l320_check(pts, eps_log)
        assert lhs <= rhs


def test_project_eps_composition():
    p = 3
    x = BerkPoint.point(Fraction(2), p)
    a = project_eps(x, Fraction(-5))
    b = project_eps(a, Fraction(-3))
    assert b == project_eps(x, Fraction(-3))
    # projecting below the current radius is the identity
    assert project_eps(a, Fraction(-9)) == a


def test_chordal_examples():
    p = 3
    G = BerkPoint.gauss(p)
    x = BerkPoint.point(Fraction(0), p)
    # ||0, gauss|| = sup/(1*1) - diam/2 = 1 - 1/2
    assert chordal_metric(x, G) == pytest.approx(0.5)
    assert chordal_metric(G, G) == pytest.approx(0.0)
    inf = BerkPoint.infinity(p)
    assert chordal_metric(x, inf) == pytest.approx(1.0)


def test_laplacian_of_potential():
    rng = random.Random(4)
    p = 3
    base = BerkPoint.gauss(p)
    rho = rand_mass_zero(rng, k=4, p=p)
    phi = potential_of(rho, base)
    lap = laplacian_tree(phi)
    got = {S: Fraction(0) for S, _ in lap.atoms}
    for S, w in lap.atoms:
        got[S] += w
    want = {}
    for S, w in rho.atoms:
        want[S] = want.get(S, Fraction(0)) + w
    for S, w in want.items():
        assert got.get(S, Fraction(0)) == w


def test_cauchy_schwarz_nonnegative():
    rng = random.Random(5)
    for _ in range(60):
        rho = rand_mass_zero(rng)
        tree = tree_span([S for S, _ in rho.atoms], BerkPoint.gauss(3))
        vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                for _ in tree.vertices]
        phi = TreeFunction(tree, vals)
        assert cauchy_schwarz_slack(phi, rho) >= 0


def test_tree_dump_format():
    p = 3
    pts = [BerkPoint.ball(Fraction(0), Fraction(-2), p),
           BerkPoint.ball(Fraction(1), Fraction(-1), p)]
    tree = tree_span(pts, BerkPoint.gauss(p))
    lines = tree.dump().strip().split("\n")
    n = len(tree.vertices)
    assert len(lines) == n + (n - 1)
    for line in lines[:n]:
        assert len(line.split()) == 2
    for line in lines[n:]:
        i, j, ln = line.split()
        assert int(i) >= 0 and int(j) >= 0 and Fraction(ln) > 0


def test_lambda_measure_is_gauss_atom():
    rho = lambda_measure(3)
    assert len(rho.atoms) == 1
    assert rho.atoms[0][0] == BerkPoint.gauss(3)
    assert rho.atoms[0][1] == 1

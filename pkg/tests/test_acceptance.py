"""Acceptance gate: one test per release criterion, each printing a single
PASS line on success (failures surface as ordinary pytest failures)."""

import cmath
import math
import random
import time
from fractions import Fraction

import numpy as np

from adelic_heights.berkovich import (AtomicMeasureB, BerkPoint, TreeFunction,
                                      cauchy_schwarz_slack, energy_atomic,
                                      energy_flux, hyperbolic_distance,
                                      l320_check, tree_span)
from adelic_heights.complex_potential import (AtomicMeasureC,
                                              PotentialMeasureC,
                                              SmoothingKernel, TestFunctionC,
                                              discrepancy_report,
                                              energy_atomic as energy_atomic_c,
                                              energy_regularized_set)
from adelic_heights.dynamics import (RationalMapQ, basilica_local_energy,
                                     canonical_height_point,
                                     critical_orbit_poly,
                                     critical_orbit_roots, equilibrium_sample,
                                     periodic_point_roots, periodic_points)
from adelic_heights.exact import IntPoly, squarefree_part
from adelic_heights.places import (AlgebraicSet, Place, naive_height,
                                   naive_height_mahler,
                                   product_formula_residual,
                                   signed_energy_vs_lambda)

KERNEL = SmoothingKernel()


def report(num, text):
    print(f"\n[criterion {num:2d}] PASS: {text}")


def test_criterion_01_product_formula():
    rng = random.Random(101)
    t0 = time.monotonic()
    worst = 0.0
    for _ in range(1000):
        q = Fraction(rng.randint(1, 10 ** 9) * rng.choice([-1, 1]),
                     rng.randint(1, 10 ** 9))
        worst = max(worst, abs(product_formula_residual(q)))
    elapsed = time.monotonic() - t0
    assert worst <= 1e-10
    assert elapsed < 5.0
    report(1, f"product formula on 1000 rationals, worst residual "
              f"{worst:.2e}, {elapsed:.2f}s")


def random_primitive_squarefree(rng, max_deg=12, max_coeff=20):
    while True:
        deg = rng.randint(1, max_deg)
        cs = [rng.randint(-max_coeff, max_coeff) for _ in range(deg)]
        cs.append(rng.randint(1, max_coeff))
        P = squarefree_part(IntPoly(cs).primitive_part())
        if P.degree >= 1:
            return P


def test_criterion_02_mahler_agreement():
    rng = random.Random(202)
    t0 = time.monotonic()
    worst = 0.0
    for _ in range(200):
        F = AlgebraicSet(random_primitive_squarefree(rng))
        worst = max(worst, abs(naive_height(F) - naive_height_mahler(F)))
    elapsed = time.monotonic() - t0
    assert worst <= 1e-8
    assert elapsed < 60.0
    report(2, f"two height routes on 200 polynomials, worst gap "
              f"{worst:.2e}, {elapsed:.1f}s")


def test_criterion_03_finite_place_positivity():
    rng = random.Random(303)
    count = 0
    minimum = None
    for _ in range(200):
        F = AlgebraicSet(random_primitive_squarefree(rng, max_deg=6,
                                                     max_coeff=30))
        for p in (2, 3, 5, 7, 11):
            e = signed_energy_vs_lambda(F, p)
            assert e >= 0  # exact rational, zero tolerance
            minimum = e if minimum is None else min(minimum, e)
            count += 1
    report(3, f"signed energy vs reference measure >= 0 exactly on {count} "
              f"(set, prime) pairs, min {minimum}")


def rand_ball(rng, p=3):
    c = Fraction(rng.randint(-50, 50), rng.randint(1, 10))
    logr = Fraction(-rng.randint(0, 10), rng.randint(1, 3))
    return BerkPoint.ball(c, logr, p)


def test_criterion_04_dual_energy():
    rng = random.Random(404)
    for trial in range(500):
        p = rng.choice([2, 3, 5, 7])
        k = rng.randint(2, 6)
        pts = []
        while len(pts) < k:
            S = rand_ball(rng, p)
            if S not in pts:
                pts.append(S)
        ws = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in pts]
        ws[-1] -= sum(ws)
        rho = AtomicMeasureB(list(zip(pts, ws)), p)
        assert energy_flux(rho) == energy_atomic(rho, rho)
    # pair energies equal the path distance
    for trial in range(100):
        S, Sp = rand_ball(rng), rand_ball(rng)
        if S == Sp:
            continue
        rho = AtomicMeasureB([(S, Fraction(1)), (Sp, Fraction(-1))], 3)
        assert energy_atomic(rho, rho) == hyperbolic_distance(S, Sp)
    report(4, "flux and atomic energies agree exactly on 500 mass-zero "
              "measures; pair energy equals tree distance on 100 pairs")


def test_criterion_05_regularization_bounds():
    rng = random.Random(505)
    # finite places: exact on the log_p scale
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        pts = list({BerkPoint.point(
            Fraction(rng.randint(-60, 60), rng.randint(1, 12)), p)
            for _ in range(rng.randint(2, 6))})
        if len(pts) < 2:
            continue
        eps_log = Fraction(-rng.randint(1, 12), rng.randint(1, 3))
        lhs, rhs = l320_check(pts, eps_log)
        assert lhs <= rhs
    # archimedean: slack >= -1e-7
    worst = 0.0
    for _ in range(200):
        k = rng.randint(2, 4)
        pts = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
               for _ in range(k)]
        F = AtomicMeasureC.equidistributed(pts)
        eps = 10 ** rng.uniform(-2.0, -0.3)
        lhs = energy_regularized_set(F, eps)
        rhs = float(energy_atomic_c(F, F)) + \
            (KERNEL.c_phi + math.log(1.0 / eps)) / k
        worst = min(worst, rhs - lhs)
        assert lhs <= rhs + 1e-7
    report(5, f"smoothing upper bound exact at finite places (200 sets), "
              f"archimedean worst slack {worst:.2e} on 200 sets")


def test_criterion_06_equidistribution_rate():
    t0 = time.monotonic()
    lam = PotentialMeasureC.lambda_circle()

    def bump(z):
        d2 = abs(z - 1) ** 2
        return math.exp(-1.0 / (1.0 - d2)) if d2 < 0.999 else 0.0

    ts = np.arange(8192) * (2.0 * math.pi / 8192)
    bump_int = float(np.mean([bump(cmath.exp(1j * t)) for t in ts]))
    funcs = [
        TestFunctionC(lambda z: z.real, 2.0, {"lambda": 0.0}, "re"),
        TestFunctionC(lambda z: math.exp(z.real), 6.0,
                      {"lambda": 1.2660658777520084}, "exp_re"),
        TestFunctionC(bump, 3.0, {"lambda": bump_int}, "bump"),
    ]
    fitted = 0.0
    for k in range(3, 13):
        N = 2 ** k
        pts = [cmath.exp(2j * math.pi * j / N) for j in range(N)]
        for phi in funcs:
            row = discrepancy_report(pts, lam, phi, h_F=0.0)
            # lhs <= C log N / N * Lip(phi): record the implied constant
            fitted = max(fitted, row.lhs * N / (math.log(N) * phi.lipschitz_bound))
    elapsed = time.monotonic() - t0
    assert fitted <= 10.0
    assert elapsed < 120.0
    report(6, f"roots-of-unity discrepancy, fitted rate constant "
              f"{fitted:.3f} <= 10 across N = 8..4096, {elapsed:.1f}s")


def test_criterion_07_canonical_height_invariance():
    rng = random.Random(707)
    worst = 0.0
    for text in ("0,0,1|1", "-1,0,1|1", "1,0,1|1", "1,0,1|0,1"):
        R = RationalMapQ.parse(text)
        for _ in range(50):
            x = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
            hx = canonical_height_point(R, x)
            try:
                y = R.apply(x)
            except ZeroDivisionError:
                y = None
            hy = canonical_height_point(R, y)
            worst = max(worst, abs(hy - 2 * hx))
    assert worst <= 1e-7
    # for z^2 the canonical height is the naive height of the point
    R = RationalMapQ.parse("0,0,1|1")
    worst_nv = 0.0
    for _ in range(50):
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        h_nv = math.log(max(abs(x.numerator), x.denominator))
        worst_nv = max(worst_nv, abs(canonical_height_point(R, x) - h_nv))
    assert worst_nv <= 1e-9
    report(7, f"functoriality |h(Rx) - D h(x)| worst {worst:.2e} over 4 maps"
              f" x 50 points; squaring-map height vs naive {worst_nv:.2e}")


def test_criterion_08_periodic_point_equidistribution():
    t0 = time.monotonic()
    R = RationalMapQ.parse("-1,0,1|1")
    mu = equilibrium_sample(R, n=30, count=50000, seed=0)
    zs = np.array([z for z, _ in mu.finite_atoms()])
    funcs = [lambda z: np.real(z), lambda z: np.imag(z),
             lambda z: np.minimum(np.abs(z) ** 2, 4.0)]
    ref = [float(np.mean(f(zs))) for f in funcs]
    discs = []
    for n in range(2, 9):
        F = periodic_points(R, n)  # exact Galois-stable set
        roots = periodic_point_roots(R, n)
        assert len(roots) == 2 ** n
        assert F.degree <= 2 ** n  # squarefree minimal polynomial
        discs.append(max(abs(float(np.mean(f(roots))) - r)
                         for f, r in zip(funcs, ref)))
    elapsed = time.monotonic() - t0
    assert discs[-1] <= 0.02
    assert discs[-1] < discs[0]
    slope = np.polyfit(range(2, 9), np.log(discs), 1)[0]
    assert slope < 0.0  # decreasing trend
    assert elapsed < 300.0
    report(8, f"periodic points vs sampled equilibrium measure: "
              f"discrepancies {['%.4f' % d for d in discs]}, final "
              f"{discs[-1]:.4f} <= 0.02, log-slope {slope:.2f}, "
              f"{elapsed:.1f}s")


def test_criterion_09_parameter_clouds():
    t0 = time.monotonic()
    # exact mean of the critically finite parameters
    for n in range(2, 13):
        P = critical_orbit_poly(2, n)
        d = P.degree
        mean = Fraction(-P.coeffs[d - 1], d * P.coeffs[d])
        assert mean == Fraction(-1, 2)
    # numerical clouds vs the deepest one
    clouds = {n: critical_orbit_roots(2, n) for n in range(2, 13)}

    def moments(c):
        return np.array([np.mean(np.real(c)), np.mean(np.imag(c)),
                         np.mean(np.minimum(np.abs(c) ** 2, 4.0))])

    ref = moments(clouds[12])
    rows = []
    for n in range(2, 12):
        c = clouds[n]
        disc = float(np.max(np.abs(moments(c) - ref)))
        bound = 10.0 * math.log(len(c)) / len(c)
        assert disc <= bound
        rows.append((len(c), disc, bound))
    elapsed = time.monotonic() - t0
    report(9, f"parameter means exactly -1/2 for n = 2..12; cloud "
              f"discrepancy under 10 log|F|/|F| at all depths "
              f"(final |F|={rows[-1][0]}, {rows[-1][1]:.2e} <= "
              f"{rows[-1][2]:.2e}), {elapsed:.0f}s")


def test_criterion_10_quadratic_example():
    t0 = time.monotonic()
    ratios = []
    for p in (3, 5, 7):
        for n in (1, 2, 3, 4):
            rep = basilica_local_energy(p, n)
            assert rep.oracle_coefficient == rep.discriminant_coefficient
            assert rep.oracle_value < 0
            ratios.append((p, n, rep.ratio_to_printed))
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0
    report(10, f"coding oracle equals discriminant valuation exactly for "
               f"p in {{3,5,7}}, n <= 4, all values negative; ratios to the "
               f"published constant {[r for _, _, r in ratios[:4]]} "
               f"(= 2^n), {elapsed:.1f}s")


def test_criterion_11_tree_cauchy_schwarz():
    rng = random.Random(1111)
    done = 0
    while done < 200:
        p = rng.choice([2, 3, 5])
        k = rng.randint(2, 5)
        pts = []
        while len(pts) < k:
            S = rand_ball(rng, p)
            if S not in pts:
                pts.append(S)
        ws = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in pts]
        ws[-1] -= sum(ws)
        rho = AtomicMeasureB(list(zip(pts, ws)), p)
        tree = tree_span(pts, BerkPoint.gauss(p))
        vals = [Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                for _ in tree.vertices]
        phi = TreeFunction(tree, vals)
        assert cauchy_schwarz_slack(phi, rho) >= 0  # exact rational
        done += 1
    report(11, "energy Cauchy-Schwarz slack >= 0 exactly on 200 random "
               "tree instances")

"""Places of Q, local norms, energy pairings of Galois-stable finite sets,
naive heights, adelic measures and their heights.

All finite-place quantities are exact: a pairing at the prime p is stored as
a rational coefficient of log p and converted to a float only on demand.
Galois-stable sets are represented by primitive squarefree integer
polynomials (plus a flag for the point at infinity), so every height is a
function of the polynomial alone and Galois invariance is structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint, isprime

from . import berkovich as bk
from .complex_potential import PotentialMeasureC
from .exact import (IntPoly, complex_roots, discriminant, log_abs_fraction,
                    log_abs_int, mahler_measure, newton_polygon_root_valuations,
                    padic_valuation, poly_gcd, squarefree_part)


@dataclass(frozen=True)
class Place:
    """The archimedean place or a finite place of Q.  ``degree_factor`` is
    the local degree weight N_v, identically 1 over Q; it is kept in the data
    model so number fields would not need an API change."""

    prime: int | None  # None encodes the archimedean place
    degree_factor: Fraction = Fraction(1)

    @staticmethod
    def archimedean() -> "Place":
        return Place(None)

    @staticmethod
    def finite(p: int) -> "Place":
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        return Place(p)

    @property
    def is_archimedean(self) -> bool:
        return self.prime is None

    def __repr__(self):
        return "Place(inf)" if self.is_archimedean else f"Place({self.prime})"


def norm_at_place(q, v: Place) -> float:
    """The normalized absolute value ||q||_v."""
    q = Fraction(q)
    if v.is_archimedean:
        return abs(float(q))
    if q == 0:
        return 0.0
    return float(v.prime) ** (-padic_valuation(q, v.prime))


def log_norm_at_place(q, v: Place) -> float:
    q = Fraction(q)
    if q == 0:
        raise ValueError("log norm of zero")
    if v.is_archimedean:
        return log_abs_fraction(q)
    return -padic_valuation(q, v.prime) * math.log(v.prime)


def _prime_divisors(*integers):
    out = set()
    for n in integers:
        n = abs(int(n))
        if n > 1:
            out.update(factorint(n).keys())
    return sorted(out)


def product_formula_residual(q) -> float:
    """sum over all places of log||q||_v; exactly the finite places dividing
    numerator and denominator contribute."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("the product formula needs q != 0")
    total = log_abs_fraction(q)
    for p in _prime_divisors(q.numerator, q.denominator):
        total -= padic_valuation(q, p) * math.log(p)
    return total


# ---------------------------------------------------------------------------
# Galois-stable finite subsets of the projective line.


class AlgebraicSet:
    """Root set of a primitive squarefree integer polynomial, optionally
    together with the point at infinity."""

    def __init__(self, min_poly: IntPoly, contains_infinity: bool = False):
        if min_poly.is_zero:
            raise ValueError("zero polynomial")
        P = squarefree_part(min_poly)
        self.min_poly = P.primitive_part()
        self.contains_infinity = bool(contains_infinity)
        if self.min_poly.degree == 0 and not contains_infinity:
            raise ValueError("empty set")
        self._roots = None

    @staticmethod
    def from_rationals(values, contains_infinity: bool = False
                       ) -> "AlgebraicSet":
        P = IntPoly([1])
        for q in dict.fromkeys(Fraction(v) for v in values):
            P = P * IntPoly([-q.numerator, q.denominator])
        return AlgebraicSet(P, contains_infinity)

    @staticmethod
    def roots_of_unity(N: int) -> "AlgebraicSet":
        return AlgebraicSet(IntPoly([-1] + [0] * (N - 1) + [1]))

    @staticmethod
    def infinity_only() -> "AlgebraicSet":
        return AlgebraicSet(IntPoly([1]), contains_infinity=True)

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def size(self) -> int:
        return self.degree + (1 if self.contains_infinity else 0)

    def roots(self, tol: float = 1e-12):
        """Cached complex approximations of the finite points."""
        if self._roots is None or any(r.radius_bound > tol
                                      for r in self._roots):
            self._roots = (complex_roots(self.min_poly, tol)
                           if self.degree > 0 else [])
        return self._roots

    def root_values(self, tol: float = 1e-12):
        return [r.value for r in self.roots(tol)]

    def __repr__(self):
        inf = " + {inf}" if self.contains_infinity else ""
        return f"AlgebraicSet({self.min_poly}{inf})"


def _compose_shift(P: IntPoly, c: Fraction) -> IntPoly:
    """Integer polynomial proportional to P(x + c) (same roots)."""
    acc = [Fraction(0)]
    for a in reversed(P.coeffs):
        # acc <- acc * (x + c) + a
        nxt = [Fraction(0)] * (len(acc) + 1)
        for i, b in enumerate(acc):
            nxt[i + 1] += b
            nxt[i] += b * c
        nxt[0] += a
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        acc = nxt
    Q, _ = IntPoly.from_fraction_coeffs(acc)
    return Q


def shifted_root_valuations(F: AlgebraicSet, c: Fraction, p: int):
    """Multiset of p-adic valuations v_p(alpha - c) over the finite points
    of F, via the Newton polygon of the shifted minimal polynomial."""
    if F.degree == 0:
        return []
    return newton_polygon_root_valuations(_compose_shift(F.min_poly, c), p)


# ---------------------------------------------------------------------------
# Local pairings.


@dataclass(frozen=True)
class LocalPairing:
    """((F, G))_v.  At a finite place the value is the exact rational
    ``coefficient`` times log p; at the archimedean place it is a float."""

    place: Place
    coefficient: Fraction | None
    numeric: float | None = None

    @property
    def value(self) -> float:
        if self.place.is_archimedean:
            return self.numeric
        return float(self.coefficient) * math.log(self.place.prime)


def delta_valuation(F: AlgebraicSet, p: int) -> Fraction:
    """v_p of the pair product prod_{a != a' in F finite} (a - a'),
    equal to v_p(disc) - (2d - 2) v_p(lc)."""
    d = F.degree
    if d < 2:
        return Fraction(0)
    disc = discriminant(F.min_poly)
    return Fraction(padic_valuation(disc, p)
                    - (2 * d - 2) * padic_valuation(F.min_poly.lc, p))


def _delta_log_abs(F: AlgebraicSet) -> float:
    d = F.degree
    if d < 2:
        return 0.0
    disc = discriminant(F.min_poly)
    return log_abs_fraction(disc) - (2 * d - 2) * log_abs_int(F.min_poly.lc)


def pairing_finite_sets(F: AlgebraicSet, G: AlgebraicSet, v: Place
                        ) -> LocalPairing:
    """([F], [G])_v = -(1/(|F||G|)) log|| prod (alpha - beta) ||_v over pairs
    of distinct finite points, via resultants/discriminants.  Exact at finite
    places.  Cross-pairings require disjoint supports."""
    from .exact import resultant  # local name for clarity

    n, m = F.size, G.size
    if F.min_poly == G.min_poly and F.contains_infinity == G.contains_infinity:
        if v.is_archimedean:
            return LocalPairing(v, None, -_delta_log_abs(F) / (n * n))
        return LocalPairing(v, Fraction(delta_valuation(F, v.prime), n * n))
    if F.degree > 0 and G.degree > 0:
        if poly_gcd(F.min_poly, G.min_poly).degree > 0:
            raise ValueError("cross-pairing of overlapping supports")
        res = resultant(F.min_poly, G.min_poly)
        lcF, lcG = F.min_poly.lc, G.min_poly.lc
        prod = Fraction(res, lcF ** G.degree * lcG ** F.degree)
    else:
        prod = Fraction(1)  # no finite pairs
    if v.is_archimedean:
        return LocalPairing(v, None, -log_abs_fraction(prod) / (n * m))
    return LocalPairing(v, Fraction(padic_valuation(prod, v.prime), n * m))


def log_plus_valuation_sum(F: AlgebraicSet, p: int) -> Fraction:
    """sum over finite points of max(0, -v_p(alpha)), the exact coefficient
    of log p in sum log+ ||alpha||_p."""
    if F.degree == 0 or padic_valuation(F.min_poly.lc, p) == 0:
        return Fraction(0)
    vals = newton_polygon_root_valuations(F.min_poly, p)
    return sum((max(Fraction(0), -v) for v in vals if v != math.inf),
               Fraction(0))


def finite_potential_sum(F: AlgebraicSet, rho: "bk.AtomicMeasureB",
                         p: int) -> Fraction:
    """sum over finite points alpha of g_rho(alpha) on the log_p scale, where
    g_rho(S) = int log sup{S, .} drho for an atomic Berkovich measure."""
    total = Fraction(0)
    for S, w in rho.atoms:
        if S.is_infinity:
            raise ValueError("measure atom at infinity has no finite "
                             "potential")
        vals = shifted_root_valuations(F, S.center, p)
        for val in vals:
            if val == math.inf:
                if S.logr is None:
                    raise ValueError("measure atom coincides with a point "
                                     "of F")
                total += w * S.logr
            elif S.logr is None:
                total += w * Fraction(-val)
            else:
                total += w * max(Fraction(-val), S.logr)
    return total


def pairing_set_vs_measure(F: AlgebraicSet, rho, v: Place) -> LocalPairing:
    """([F], rho_v)_v = -(1/|F|) sum g_rho(alpha) over finite points."""
    n = F.size
    if v.is_archimedean:
        if not isinstance(rho, PotentialMeasureC):
            raise TypeError("archimedean measure must carry a potential")
        val = -sum(rho.potential(z) for z in F.root_values()) / n
        return LocalPairing(v, None, val)
    if not isinstance(rho, bk.AtomicMeasureB):
        raise TypeError("finite-place measure must be atomic")
    coeff = -Fraction(finite_potential_sum(F, rho, v.prime), n)
    return LocalPairing(v, coeff)


def signed_energy_vs_lambda(F: AlgebraicSet, p: int) -> Fraction:
    """Exact coefficient of log p in (lambda_p - [F], lambda_p - [F])_p.

    Nonnegative for every F: the reference measure at a good place dominates.
    """
    n = F.size
    cross = Fraction(log_plus_valuation_sum(F, p), n)
    self_term = Fraction(delta_valuation(F, p), n * n)
    # (lambda,lambda) = 0; -2(lambda,[F]) = -2 * (-cross); ([F],[F]) = self
    return 2 * cross + self_term


# ---------------------------------------------------------------------------
# Adelic measures and heights.


class AdelicMeasure:
    """Family of probability measures, one per place: the reference measure
    lambda_v everywhere except at finitely many exceptional places."""

    def __init__(self, exceptional=None):
        self.exceptional = dict(exceptional or {})
        for v, rho in self.exceptional.items():
            if v.is_archimedean:
                if not isinstance(rho, PotentialMeasureC):
                    raise TypeError("archimedean measure must be a "
                                    "PotentialMeasureC")
            elif not isinstance(rho, bk.AtomicMeasureB):
                raise TypeError("finite-place measure must be an "
                                "AtomicMeasureB")

    @staticmethod
    def all_lambda() -> "AdelicMeasure":
        return AdelicMeasure({})

    def measure_at(self, v: Place):
        if v in self.exceptional:
            return self.exceptional[v]
        if v.is_archimedean:
            return PotentialMeasureC.lambda_circle()
        return bk.lambda_measure(v.prime)

    def is_lambda_at(self, v: Place) -> bool:
        return v not in self.exceptional

    def self_energy(self, v: Place) -> float:
        """(rho_v, rho_v)_v, natural-log units."""
        if self.is_lambda_at(v):
            return 0.0
        rho = self.exceptional[v]
        if v.is_archimedean:
            return rho.self_energy
        return float(bk.energy_atomic(rho, rho)) * math.log(v.prime)

    def height_at_infinity(self) -> float:
        """h_rho(inf) = (1/2) sum_v (rho_v, rho_v)_v."""
        return 0.5 * sum(self.self_energy(v) for v in self.exceptional)


def _contributing_places(F: AlgebraicSet, rho: AdelicMeasure):
    primes = set(p for v in rho.exceptional if not v.is_archimedean
                 for p in [v.prime])
    ints = [F.min_poly.lc]
    if F.degree >= 2:
        disc = discriminant(F.min_poly)
        ints += [disc.numerator, disc.denominator]
    primes.update(_prime_divisors(*ints))
    return [Place.archimedean()] + [Place.finite(p) for p in sorted(primes)]


def local_height_term(F: AlgebraicSet, rho: AdelicMeasure, v: Place) -> float:
    """((F - rho_v, F - rho_v))_v expanded as
    (rho_v,rho_v) - 2([F],rho_v) + ([F],[F])_v."""
    rv = rho.measure_at(v)
    cross = pairing_set_vs_measure(F, rv, v).value
    self_F = pairing_finite_sets(F, F, v).value
    return rho.self_energy(v) - 2.0 * cross + self_F


def adelic_height(F: AlgebraicSet, rho: AdelicMeasure) -> float:
    """h_rho(F) = (1/2) sum_v ((F - rho_v, F - rho_v))_v; the sum is finite
    and the contributing finite places are detected exactly."""
    return 0.5 * sum(local_height_term(F, rho, v)
                     for v in _contributing_places(F, rho))


def naive_height(F: AlgebraicSet) -> float:
    """h_nv(F) = (1/|F|) sum over places and finite points of
    log+ ||alpha||_v; the point at infinity contributes 0."""
    n = F.size
    total = sum(max(0.0, math.log(abs(z))) for z in F.root_values()
                if abs(z) > 0)
    for p in _prime_divisors(F.min_poly.lc):
        total += float(log_plus_valuation_sum(F, p)) * math.log(p)
    return total / n


def naive_height_mahler(F: AlgebraicSet) -> float:
    """h_nv via the Mahler measure of the primitive minimal polynomial."""
    if F.contains_infinity:
        raise ValueError("Mahler route needs a set of finite points")
    return mahler_measure(F.min_poly) / F.degree


def mahler_formula_general(F: AlgebraicSet, rho: AdelicMeasure) -> float:
    """h_rho(F) = h_rho(inf) + (1/deg) sum_v int log ||P||_v drho_v, using
    int log||P||_v drho_v = log||lc||_v + sum_alpha g_{rho_v}(alpha).

    At reference places the term vanishes for primitive P (the Gauss-norm
    identity), so only the archimedean place and the exceptional places
    enter the sum.
    """
    if F.contains_infinity:
        raise ValueError("needs a set of finite points")
    d = F.degree
    total = 0.0
    places = {Place.archimedean(), *rho.exceptional}
    for v in places:
        rv = rho.measure_at(v)
        if v.is_archimedean:
            term = log_abs_int(F.min_poly.lc) + sum(
                rv.potential(z) for z in F.root_values())
        else:
            p = v.prime
            coeff = (Fraction(-padic_valuation(F.min_poly.lc, p))
                     + finite_potential_sum(F, rv, p))
            term = float(coeff) * math.log(p)
        total += term
    return rho.height_at_infinity() + total / d


def weil_comparison_bound(rho: AdelicMeasure, sample) -> float:
    """max over the sample of |h_rho(F) - h_nv(F)|."""
    if not sample:
        raise ValueError("empty sample")
    return max(abs(adelic_height(F, rho) - naive_height(F)) for F in sample)


def weil_bound_estimate(rho: AdelicMeasure, grid: int = 40,
                        box: float = 3.0) -> float:
    """h_rho(inf) plus the sampled sup over exceptional places of
    |g_rho_v - g_lambda_v|; dominates weil_comparison_bound."""
    import numpy as np

    bound = rho.height_at_infinity()
    lam = PotentialMeasureC.lambda_circle()
    for v, rv in rho.exceptional.items():
        if v.is_archimedean:
            xs = np.linspace(-box, box, grid)
            worst = max(abs(rv.potential(complex(x, y)) -
                            lam.potential(complex(x, y)))
                        for x in xs for y in xs)
        else:
            worst = 0.0
            can = bk.BerkPoint.gauss(v.prime)
            for S, w in rv.atoms:
                worst += abs(float(w)) * abs(float(
                    bk.log_sup(can, S))) * math.log(v.prime)
            # crude sup bound from the atom positions
            worst *= 2.0
        bound += worst
    return bound


# ---------------------------------------------------------------------------
# JSON interface for adelic measures.


def _place_from_json(tag) -> Place:
    if tag in ("inf", "infinity", None):
        return Place.archimedean()
    return Place.finite(int(tag))


def adelic_measure_from_json(doc) -> AdelicMeasure:
    """Build an AdelicMeasure from a list of
    {"place": "inf"|p, "measure_kind": kind, "parameters": {...}} entries.
    Kinds: "lambda" (may be omitted), "equilibrium" (archimedean; parameters
    {"map": "num|den", "depth": n}), "explicit_atomic"."""
    exceptional = {}
    for entry in doc:
        v = _place_from_json(entry.get("place"))
        kind = entry.get("measure_kind", "lambda")
        params = entry.get("parameters", {})
        if kind == "lambda":
            continue
        if kind == "equilibrium":
            if not v.is_archimedean:
                raise ValueError("equilibrium measures are archimedean-only")
            from .dynamics import RationalMapQ, equilibrium_potential
            R = RationalMapQ.parse(params["map"])
            exceptional[v] = equilibrium_potential(
                R, depth=int(params.get("depth", 40)))
        elif kind == "explicit_atomic":
            if v.is_archimedean:
                from .complex_potential import AtomicMeasureC
                atoms = [(complex(a["z"][0], a["z"][1]), Fraction(a["w"]))
                         for a in params["atoms"]]
                exceptional[v] = PotentialMeasureC.from_atoms(
                    AtomicMeasureC(atoms))
            else:
                atoms = []
                for a in params["atoms"]:
                    c = Fraction(a["center"])
                    logr = a.get("logr")
                    pt = (bk.BerkPoint.point(c, v.prime) if logr is None
                          else bk.BerkPoint.ball(c, Fraction(logr), v.prime))
                    atoms.append((pt, Fraction(a["w"])))
                exceptional[v] = bk.AtomicMeasureB(atoms, v.prime)
        else:
            raise ValueError(f"unknown measure_kind {kind!r}")
    return AdelicMeasure(exceptional)

"""Exact integer/rational polynomial arithmetic and controlled root finding.

Everything here is either exact (big integers, ``fractions.Fraction``) or
carries an explicit error bound (``ComplexApprox``).  All natural logarithms
happen at the numeric boundary; p-adic data is kept as exact valuations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime

from . import _kernels

_LN2 = math.log(2.0)


def log_abs_int(n: int) -> float:
    """log|n| for an arbitrary-size nonzero integer, no overflow."""
    n = abs(n)
    if n == 0:
        raise ValueError("log of zero")
    if n.bit_length() <= 60:
        return math.log(n)
    shift = n.bit_length() - 60
    return math.log(n >> shift) + shift * _LN2


def log_abs_fraction(q: Fraction) -> float:
    if q == 0:
        raise ValueError("log of zero")
    return log_abs_int(q.numerator) - log_abs_int(q.denominator)


def padic_valuation(q, p: int):
    """v with |q|_p = p^(-v); returns math.inf for q = 0."""
    if p < 2 or not isprime(p):
        raise ValueError(f"{p} is not prime")
    q = Fraction(q)
    if q == 0:
        return math.inf
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class ComplexApprox:
    """A complex value with a guaranteed error radius."""

    re: float
    im: float
    radius_bound: float

    def __post_init__(self):
        if not (self.radius_bound >= 0.0 and math.isfinite(self.radius_bound)):
            raise ValueError("radius_bound must be finite and nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


class IntPoly:
    """Integer polynomial, coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    # -- basics ------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def content(self) -> int:
        if self.is_zero:
            return 0
        return math.gcd(*[abs(c) for c in self.coeffs])

    @property
    def is_primitive(self) -> bool:
        return self.content() == 1

    def primitive_part(self) -> "IntPoly":
        if self.is_zero:
            return self
        c = self.content()
        sign = 1 if self.lc > 0 else -1
        return IntPoly([x // (sign * c) for x in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    # -- ring ops ----------------------------------------------------------
    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                        for i in range(n)])

    def __sub__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPoly([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                        for i in range(n)])

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * c for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        """Horner evaluation; exact for int/Fraction, numeric for complex."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_compose_linear(self, a: int, b: int) -> "IntPoly":
        """P(a*x + b) for integer a, b."""
        lin = IntPoly([b, a])
        acc = IntPoly([])
        for c in reversed(self.coeffs):
            acc = acc * lin + IntPoly([c])
        return acc

    @staticmethod
    def from_fraction_coeffs(coeffs) -> tuple["IntPoly", int]:
        """Clear denominators; returns (integer polynomial, denominator d)
        with int_poly = d * input."""
        coeffs = [Fraction(c) for c in coeffs]
        d = 1
        for c in coeffs:
            d = d * c.denominator // math.gcd(d, c.denominator)
        return IntPoly([int(c * d) for c in coeffs]), d


# ---------------------------------------------------------------------------
# Resultants via fraction-free subresultant PRS (Collins/Brown-Traub).


def _pseudo_rem(A, B):
    """lc(B)^(degA-degB+1) * A mod B, exact over the integers."""
    a = list(A.coeffs)
    b = B.coeffs
    db = len(b) - 1
    lb = b[-1]
    d = len(a) - 1 - db + 1
    steps = 0
    while a and len(a) - 1 >= db:
        top = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i in range(db + 1):
            a[shift + i] -= top * b[i]
        a.pop()  # the top entry cancelled exactly
        while a and a[-1] == 0:
            a.pop()
        steps += 1
    r = IntPoly(a)
    if steps < d:
        r = r * (lb ** (d - steps))
    return r


def resultant(P: IntPoly, Q: IntPoly) -> int:
    """Exact resultant; Res(P,Q) = lc(P)^degQ lc(Q)^degP prod (a_i - b_j)."""
    if P.is_zero or Q.is_zero:
        raise ValueError("resultant of the zero polynomial")
    A, B = P, Q
    s = 1
    if A.degree < B.degree:
        if (A.degree * B.degree) % 2 == 1:
            s = -1
        A, B = B, A
    if B.degree == 0:
        return s * B.coeffs[0] ** A.degree
    g = 1
    h = 1
    t = 1
    while True:
        dA, dB = A.degree, B.degree
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            s = -s
        R = _pseudo_rem(A, B)
        if R.is_zero:
            return 0
        A = B
        denom = g * h ** delta
        B = IntPoly([c // denom for c in R.coeffs])
        g = A.lc
        if delta == 0:
            h = h  # h = g^0 * h^1
        else:
            hnum = g ** delta
            if delta == 1:
                h = hnum
            else:
                h = hnum // h ** (delta - 1)
        if B.degree <= 0:
            dA = A.degree
            lB = B.coeffs[0]
            if dA == 0:
                res = h
            else:
                res = lB ** dA // h ** (dA - 1)
            return s * t * res


def sylvester_resultant(P: IntPoly, Q: IntPoly) -> Fraction:
    """Independent oracle: Sylvester determinant via exact Gaussian
    elimination over the rationals."""
    m, n = P.degree, Q.degree
    if m < 0 or n < 0:
        raise ValueError("zero polynomial")
    size = m + n
    if size == 0:
        return Fraction(1)
    M = [[Fraction(0)] * size for _ in range(size)]
    pc = list(reversed(P.coeffs))
    qc = list(reversed(Q.coeffs))
    for i in range(n):
        for j, c in enumerate(pc):
            M[i][i + j] = Fraction(c)
    for i in range(m):
        for j, c in enumerate(qc):
            M[n + i][i + j] = Fraction(c)
    det = Fraction(1)
    for col in range(size):
        piv = None
        for r in range(col, size):
            if M[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = M[col][col]
        for r in range(col + 1, size):
            if M[r][col] != 0:
                f = M[r][col] / inv
                for c2 in range(col, size):
                    M[r][c2] -= f * M[col][c2]
    return det


def discriminant(P: IntPoly) -> Fraction:
    """(-1)^(d(d-1)/2) Res(P, P') / lc(P).

    For monic P this is prod_{i<j} (a_i - a_j)^2.  Zero signals a repeated
    root.
    """
    d = P.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    dP = P.derivative()
    if dP.is_zero:
        return Fraction(0)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return Fraction(sign * resultant(P, dP), P.lc)


# ---------------------------------------------------------------------------
# GCD / squarefree part.


def _poly_gcd_mod(a, b, q):
    """gcd of coefficient lists mod prime q, monic, ascending order."""
    a = [c % q for c in a]
    b = [c % q for c in b]

    def trim(x):
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, q)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            top = a[-1] * inv % q
            shift = len(a) - 1 - db
            for i in range(db + 1):
                a[shift + i] = (a[shift + i] - top * b[i]) % q
            a = trim(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, q)
        a = [c * inv % q for c in a]
    return a


_SF_PRIMES = (1000003, 1000033, 1000037, 1000039)


def poly_gcd(P: IntPoly, Q: IntPoly) -> IntPoly:
    """Primitive gcd in Z[x] (primitive PRS with content control)."""
    if P.is_zero:
        return Q.primitive_part()
    if Q.is_zero:
        return P.primitive_part()
    A, B = P.primitive_part(), Q.primitive_part()
    if A.degree < B.degree:
        A, B = B, A
    while not B.is_zero:
        R = _pseudo_rem(A, B)
        A, B = B, R.primitive_part()
    return A.primitive_part()


def squarefree_part(P: IntPoly) -> IntPoly:
    """Primitive squarefree part, P / gcd(P, P')."""
    if P.degree < 1:
        return P.primitive_part()
    # cheap certificate: squarefree mod q implies squarefree over Z
    dP = P.derivative()
    for q in _SF_PRIMES:
        if P.lc % q == 0:
            continue
        if len(_poly_gcd_mod(list(P.coeffs), list(dP.coeffs), q)) == 1:
            return P.primitive_part()
    g = poly_gcd(P, dP)
    if g.degree == 0:
        return P.primitive_part()
    # exact division P // g over Q, then clear content
    num = [Fraction(c) for c in P.coeffs]
    den = [Fraction(c) for c in g.coeffs]
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        f = num[-1] / den[-1]
        shift = len(num) - len(den)
        out[shift] = f
        for i in range(len(den)):
            num[shift + i] -= f * den[i]
        num.pop()
    ipoly, _ = IntPoly.from_fraction_coeffs(out)
    return ipoly.primitive_part()


# ---------------------------------------------------------------------------
# Newton polygons.


def newton_polygon_root_valuations(P: IntPoly, p: int):
    """Multiset of p-adic valuations of the roots of P in \\bar Q_p.

    Negated slopes of the lower convex hull of {(i, v_p(a_i))}; roots at 0
    appear as +inf entries.  Result has deg P entries.
    """
    if P.is_zero:
        raise ValueError("zero polynomial")
    if p < 2 or not isprime(p):
        raise ValueError(f"{p} is not prime")
    vals = []
    ord0 = 0
    coeffs = list(P.coeffs)
    while coeffs[0] == 0:
        coeffs.pop(0)
        ord0 += 1
    pts = [(i, padic_valuation(c, p)) for i, c in enumerate(coeffs) if c != 0]
    # lower convex hull, left to right
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop if pt makes hull[-1] non-extremal (cross product test)
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        vals.extend([-slope] * (x2 - x1))
    vals.extend([math.inf] * ord0)
    return sorted(vals, key=lambda v: (v is math.inf, v))


# ---------------------------------------------------------------------------
# Root finding (Aberth-Ehrlich, deterministic initialization).


class RootFindingError(RuntimeError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def _error_radii(coeffs_scaled, roots):
    """Guaranteed inclusion radii deg*|P(z)|/|P'(z)| per approximation."""
    n = len(coeffs_scaled) - 1
    p = np.zeros(len(roots), dtype=np.complex128)
    for c in coeffs_scaled[::-1]:
        p = p * roots + c
    dcoeffs = coeffs_scaled[1:] * np.arange(1, len(coeffs_scaled))
    dp = np.zeros(len(roots), dtype=np.complex128)
    for c in dcoeffs[::-1]:
        dp = dp * roots + c
    with np.errstate(divide="ignore", invalid="ignore"):
        r = n * np.abs(p) / np.abs(dp)
    r = np.where(np.isfinite(r), r, np.inf)
    return r


def complex_roots(P: IntPoly, tol: float = 1e-12):
    """All complex roots of P with guaranteed per-root error bounds <= tol.

    Deterministic: initial points sit on a circle of radius given by the
    Cauchy bound, no randomness involved.
    """
    if P.degree < 1:
        raise ValueError("complex_roots needs degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = list(P.coeffs)
    # deflate roots at zero exactly
    zeros_at_origin = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros_at_origin += 1
    out = [ComplexApprox(0.0, 0.0, 0.0)] * zeros_at_origin
    n = len(coeffs) - 1
    if n >= 1:
        scale = max(abs(c) for c in coeffs)
        cf = np.array([float(Fraction(c, scale)) for c in coeffs],
                      dtype=np.complex128)
        cauchy = 1.0 + max(abs(cf[i]) for i in range(n)) / abs(cf[n])
        cauchy = min(cauchy, 1e9)
        angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n + 0.3
        z0 = 0.8 * cauchy * np.exp(1j * angles)
        roots, _ = _kernels.aberth_sweeps(cf, z0, 1000, 1e-14)
        radii = _error_radii(cf, roots)
        if np.max(radii) > tol:
            best = [ComplexApprox(float(z.real), float(z.imag), float(r))
                    for z, r in zip(roots, radii)]
            raise RootFindingError(
                f"root finder did not reach tol={tol} "
                f"(worst bound {np.max(radii):.3g})", best=best)
        out.extend(ComplexApprox(float(z.real), float(z.imag), float(r))
                   for z, r in zip(roots, radii))
    return out


def mahler_measure(P: IntPoly, tol: float = 1e-10) -> float:
    """log M(P) = log|lc| + sum over roots outside the unit disk of log|a|."""
    if P.is_zero:
        raise ValueError("zero polynomial")
    total = log_abs_int(P.lc)
    if P.degree >= 1:
        for r in complex_roots(P, tol=max(tol / (4 * P.degree), 1e-14)):
            m = abs(r.value)
            if m > 1.0:
                total += math.log(m)
    return total

"""Exact model of the Berkovich projective line over Q_p.

Points are restricted to rational centers and rational log_p radii (types I,
II, III; no singular type-(iv) points).  All radii live on the log_p scale as
``fractions.Fraction``, so sup, wedge, Gromov products, tree Laplacians and
energies are exact.  Conversion to natural logarithms (multiplying by log p)
happens only at the numeric boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .exact import padic_valuation

NEG_INF = -math.inf


def _canonical_center(c: Fraction, logr: Fraction, p: int) -> Fraction:
    """Representative of c modulo {x in Q : |x|_p <= p^logr}."""
    t = math.ceil(-logr)  # condition is v_p(x) >= t
    v0 = min(0, padic_valuation(c, p)) if c != 0 else 0
    if c == 0:
        return Fraction(0)
    m = t - v0
    if m <= 0:
        return Fraction(0)
    c1 = c / Fraction(p) ** v0  # in Z_(p)
    mod = p ** m
    num = c1.numerator % mod
    den = c1.denominator % mod
    rep = num * pow(den, -1, mod) % mod
    return Fraction(rep) * Fraction(p) ** v0


@dataclass(frozen=True)
class BerkPoint:
    """Type I point (rational center or infinity) or a ball (types II/III)."""

    prime: int
    center: Fraction | None  # None encodes the point at infinity
    logr: Fraction | None    # None encodes log radius -infinity (type I)

    @staticmethod
    def point(q, p: int) -> "BerkPoint":
        return BerkPoint(p, Fraction(q), None)

    @staticmethod
    def infinity(p: int) -> "BerkPoint":
        return BerkPoint(p, None, None)

    @staticmethod
    def ball(center, logr, p: int) -> "BerkPoint":
        return BerkPoint(p, Fraction(center), Fraction(logr))

    @staticmethod
    def gauss(p: int) -> "BerkPoint":
        """The canonical point, the closed unit ball."""
        return BerkPoint.ball(0, 0, p)

    def __post_init__(self):
        if not isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.logr is not None:
            object.__setattr__(
                self, "center",
                _canonical_center(self.center, self.logr, self.prime))

    @property
    def is_infinity(self) -> bool:
        return self.center is None

    @property
    def is_type1(self) -> bool:
        return self.logr is None

    @property
    def in_hyperbolic(self) -> bool:
        """True for types II/III (points of the tree interior H_p)."""
        return self.logr is not None

    @property
    def is_rational_type(self) -> bool:
        """Type II: log radius is an integer (radius a power of p)."""
        return self.logr is not None and self.logr.denominator == 1

    def diam(self):
        """log_p diameter; -inf for finite type I points."""
        if self.is_infinity:
            raise ValueError("diam of the point at infinity")
        return NEG_INF if self.logr is None else self.logr

    def __repr__(self):
        if self.is_infinity:
            return f"BerkPoint(inf, p={self.prime})"
        if self.is_type1:
            return f"BerkPoint({self.center}, p={self.prime})"
        return f"BerkPoint(B({self.center}, logr={self.logr}), p={self.prime})"


def _check_same_prime(*pts):
    primes = {s.prime for s in pts}
    if len(primes) != 1:
        raise ValueError("points live over different primes")
    return primes.pop()


def log_sup(S: BerkPoint, Sp: BerkPoint):
    """log_p of sup{S, S'} = diam of the wedge; +inf if one point is infinity."""
    p = _check_same_prime(S, Sp)
    if S.is_infinity and Sp.is_infinity:
        raise ValueError("log_sup(inf, inf) is undefined")
    if S.is_infinity or Sp.is_infinity:
        return math.inf
    terms = []
    if S.center != Sp.center:
        terms.append(Fraction(-padic_valuation(S.center - Sp.center, p)))
    if S.logr is not None:
        terms.append(S.logr)
    if Sp.logr is not None:
        terms.append(Sp.logr)
    if not terms:  # equal type I centers
        return NEG_INF
    return max(terms)


def wedge(S: BerkPoint, Sp: BerkPoint) -> BerkPoint:
    """Smallest ball containing both points; infinity if either is infinity."""
    p = _check_same_prime(S, Sp)
    if S.is_infinity or Sp.is_infinity:
        return BerkPoint.infinity(p)
    r = log_sup(S, Sp)
    if r == NEG_INF:
        return S  # equal type I points
    return BerkPoint.ball(S.center, r, p)


def contains(S: BerkPoint, Sp: BerkPoint) -> bool:
    """Ball order: S' <= S, i.e. wedge(S, S') = S."""
    return wedge(S, Sp) == S


def hyperbolic_distance(S: BerkPoint, Sp: BerkPoint) -> Fraction:
    """Tree metric on H_p, in log_p units: 2 log sup - diam S - diam S'."""
    _check_same_prime(S, Sp)
    if not (S.in_hyperbolic and Sp.in_hyperbolic):
        raise ValueError("hyperbolic distance needs type II/III points")
    return 2 * log_sup(S, Sp) - S.logr - Sp.logr


def _median(S: BerkPoint, Sp: BerkPoint, base: BerkPoint) -> BerkPoint:
    """Meeting point of the three paths between S, S', base."""
    joins = []
    for a, b in ((S, Sp), (S, base), (Sp, base)):
        w = wedge(a, b)
        if not w.is_infinity:
            joins.append(w)
    if not joins:
        raise ValueError("median undefined for three points at infinity")
    # the two largest joins coincide; the median is the smallest ball
    return min(joins, key=lambda w: w.diam())


def gromov_product(S: BerkPoint, Sp: BerkPoint, base: BerkPoint):
    """Distance from base to the median of {S, S', base}; +inf iff the two
    points are the same projective point."""
    _check_same_prime(S, Sp, base)
    if not base.in_hyperbolic:
        raise ValueError("base point must be of type II/III")
    if S == Sp and S.is_type1:
        return math.inf
    med = _median(S, Sp, base)
    if not med.in_hyperbolic:
        # can only happen when S == Sp is a type I point, handled above
        return math.inf
    return hyperbolic_distance(med, base)


def base_change_identity_check(S, Sp, S0, S1):
    """Exact residual of the four-term base-change identity; must be 0."""
    lhs = gromov_product(S, Sp, S0) - gromov_product(S, S1, S0)
    rhs = gromov_product(S, Sp, S1) - gromov_product(Sp, S0, S1)
    return lhs - rhs


def project_eps(S: BerkPoint, eps_log) -> BerkPoint:
    """Point on [S, infinity] with diameter max(diam S, eps_log)."""
    if S.is_infinity:
        return S
    eps_log = Fraction(eps_log)
    if S.in_hyperbolic and S.logr >= eps_log:
        return S
    return BerkPoint.ball(S.center, eps_log, S.prime)


def norm_of(S: BerkPoint):
    """log_p of |S| = sup{S, [0]}."""
    return log_sup(S, BerkPoint.point(0, S.prime))


def chordal_metric(S: BerkPoint, Sp: BerkPoint) -> float:
    """Chordal metric on the Berkovich line, numeric value in [0, 1]."""
    p = _check_same_prime(S, Sp)

    def pf(x):  # p^x with the -inf convention
        return 0.0 if x == NEG_INF else float(p) ** float(x)

    if S.is_infinity and Sp.is_infinity:
        return 0.0
    if S.is_infinity or Sp.is_infinity:
        T = Sp if S.is_infinity else S
        m = max(1.0, pf(norm_of(T)))
        return 1.0 / m - pf(T.diam()) / (2.0 * m * m)
    mS = max(1.0, pf(norm_of(S)))
    mSp = max(1.0, pf(norm_of(Sp)))
    return (pf(log_sup(S, Sp)) / (mS * mSp)
            - pf(S.diam()) / (2.0 * mS * mS)
            - pf(Sp.diam()) / (2.0 * mSp * mSp))


# ---------------------------------------------------------------------------
# Atomic measures.


class AtomicMeasureB:
    """Finite signed combination of point masses with exact rational weights."""

    def __init__(self, atoms, p: int):
        self.prime = p
        merged: dict[BerkPoint, Fraction] = {}
        for pt, w in atoms:
            if pt.prime != p:
                raise ValueError("atom over a different prime")
            w = Fraction(w)
            merged[pt] = merged.get(pt, Fraction(0)) + w
        self.atoms = [(pt, w) for pt, w in merged.items() if w != 0]

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @staticmethod
    def equidistributed(points, p: int) -> "AtomicMeasureB":
        n = len(points)
        return AtomicMeasureB([(pt, Fraction(1, n)) for pt in points], p)

    def __sub__(self, other):
        return AtomicMeasureB(
            self.atoms + [(pt, -w) for pt, w in other.atoms], self.prime)


def lambda_measure(p: int) -> AtomicMeasureB:
    """The reference measure at a finite place: Dirac mass at the canonical
    point."""
    return AtomicMeasureB([(BerkPoint.gauss(p), Fraction(1))], p)


def diam(S: BerkPoint):
    """log_p diameter of a point; -inf for finite type I points."""
    return S.diam()


def energy_atomic(rho: AtomicMeasureB, rhop: AtomicMeasureB):
    """Mutual energy -sum m_i m_j' log sup{S_i, S_j'}, exact Fraction on the
    log_p scale.

    Diagonal pairs of equal projective (type I) points and atoms at infinity
    are excluded from the sum; the count of skipped pairs is available via
    ``energy_atomic_report``.
    """
    val, _ = energy_atomic_report(rho, rhop)
    return val


def energy_atomic_report(rho: AtomicMeasureB, rhop: AtomicMeasureB):
    if rho.prime != rhop.prime:
        raise ValueError("measures over different primes")
    total = Fraction(0)
    skipped = 0
    for S, w in rho.atoms:
        if S.is_infinity:
            skipped += 1
            continue
        for Sp, wp in rhop.atoms:
            if Sp.is_infinity:
                skipped += 1
                continue
            if S == Sp and S.is_type1:
                skipped += 1
                continue
            total -= w * wp * log_sup(S, Sp)
    return total, skipped


# ---------------------------------------------------------------------------
# Finite trees (convex hulls) and piecewise-affine functions on them.


class FiniteTree:
    """Convex hull of finitely many type II/III points, base included.

    ``parent[i]`` is the index of the smallest vertex strictly containing
    vertex i (the root has parent -1); ``length[i]`` is the hyperbolic
    distance to the parent, in log_p units.
    """

    def __init__(self, vertices, parent, length, p, truncated=0):
        self.vertices = vertices
        self.parent = parent
        self.length = length
        self.prime = p
        self.truncated = truncated
        self.index = {v: i for i, v in enumerate(vertices)}
        self.children = [[] for _ in vertices]
        for i, par in enumerate(parent):
            if par >= 0:
                self.children[par].append(i)

    @property
    def root(self) -> int:
        return self.parent.index(-1)

    def edges(self):
        """(child, parent, length) triples."""
        for i, par in enumerate(self.parent):
            if par >= 0:
                yield i, par, self.length[i]

    def dump(self) -> str:
        """Text format: vertex lines "center logr", edge lines "i j length"."""
        lines = [f"{v.center} {v.logr}" for v in self.vertices]
        for i, par, ln in self.edges():
            lines.append(f"{i} {par} {ln}")
        return "\n".join(lines) + "\n"


def tree_span(points, base: BerkPoint, type1_floor=Fraction(-16),
              infinity_ceiling=Fraction(16)) -> FiniteTree:
    """Convex hull tree of the given points and the base point.

    Type I points sit at infinite hyperbolic distance; they are truncated at
    log radius ``type1_floor`` (the point at infinity at ``infinity_ceiling``)
    and the number of truncations is recorded on the result.
    """
    if not points:
        raise ValueError("empty point list")
    p = _check_same_prime(base, *points)
    if not base.in_hyperbolic:
        raise ValueError("base point must be of type II/III")
    known = [S.logr for S in points if S.in_hyperbolic] + [base.logr]
    floor = min([Fraction(type1_floor)] + known) - 1
    ceiling = max([Fraction(infinity_ceiling)] + known) + 1
    truncated = 0
    pts = [base]
    for S in points:
        if S.is_infinity:
            S = BerkPoint.ball(0, ceiling, p)
            truncated += 1
        elif S.is_type1:
            S = BerkPoint.ball(S.center, floor, p)
            truncated += 1
        pts.append(S)
    verts = set(pts)
    base_list = list(verts)
    for i, a in enumerate(base_list):
        for b in base_list[i + 1:]:
            verts.add(wedge(a, b))
    # sort by diameter so parents (larger balls) come late
    vl = sorted(verts, key=lambda v: v.diam())
    parent = []
    length = []
    for i, v in enumerate(vl):
        par = -1
        best = None
        for j in range(i + 1, len(vl)):
            w = vl[j]
            if w.diam() > v.diam() and contains(w, v):
                if best is None or w.diam() < best:
                    best = w.diam()
                    par = j
        parent.append(par)
        length.append(Fraction(0) if par < 0
                      else hyperbolic_distance(v, vl[par]))
    roots = [i for i, q in enumerate(parent) if q == -1]
    if len(roots) != 1:
        raise AssertionError("span construction produced a forest")
    return FiniteTree(vl, parent, length, p, truncated)


class TreeFunction:
    """Rational values at tree vertices, affine along edges, locally constant
    off the tree."""

    def __init__(self, tree: FiniteTree, values):
        if len(values) != len(tree.vertices):
            raise ValueError("one value per vertex required")
        self.tree = tree
        self.values = [Fraction(v) for v in values]

    def __getitem__(self, vertex: BerkPoint) -> Fraction:
        return self.values[self.tree.index[vertex]]


def laplacian_tree(g: TreeFunction) -> AtomicMeasureB:
    """Combinatorial Laplacian: at each vertex, the sum of outgoing slopes.

    Sign convention fixed so that the Laplacian of log sup{., S} restricted
    to a tree through S equals [S] - [truncation toward infinity].
    """
    tree = g.tree
    mass = [Fraction(0)] * len(tree.vertices)
    for child, par, ln in tree.edges():
        if ln == 0:
            raise ValueError("zero-length edge")
        slope = (g.values[par] - g.values[child]) / ln
        mass[child] += slope
        mass[par] -= slope
    atoms = [(tree.vertices[i], m) for i, m in enumerate(mass) if m != 0]
    return AtomicMeasureB(atoms, tree.prime)


def potential_of(rho: AtomicMeasureB, base: BerkPoint):
    """Potential g of rho based at ``base``:
    g(S) = -rho(total) - sum w_i <S, S_i>_base, as a TreeFunction on the span
    tree of supp rho and the base.

    Requires atoms of type II/III so the potential is finite everywhere;
    satisfies laplacian_tree(g) = rho - rho(total) [base] exactly.
    """
    for S, _ in rho.atoms:
        if not S.in_hyperbolic:
            raise ValueError("potential_of needs atoms in H_p; "
                             "regularize type I atoms with project_eps first")
    tree = tree_span([S for S, _ in rho.atoms] or [base], base)
    total = rho.total_mass
    values = []
    for v in tree.vertices:
        acc = -total
        for S, w in rho.atoms:
            acc -= w * gromov_product(v, S, base)
        values.append(acc)
    return TreeFunction(tree, values)


def energy_flux(rho: AtomicMeasureB, base: BerkPoint | None = None):
    """Energy of a mass-zero measure via the edge-flux formula:
    sum over edges of (flux)^2 * length; equals energy_atomic exactly.
    """
    if rho.total_mass != 0:
        raise ValueError("energy_flux needs total mass zero")
    if not rho.atoms:
        return Fraction(0)
    for S, _ in rho.atoms:
        if not S.in_hyperbolic:
            raise ValueError("type I atom; apply project_eps first")
    p = rho.prime
    if base is None:
        base = BerkPoint.gauss(p)
    tree = tree_span([S for S, _ in rho.atoms], base)
    weight = [Fraction(0)] * len(tree.vertices)
    for S, w in rho.atoms:
        weight[tree.index[S]] += w
    # subtree sums away from the root give the flux through each edge
    order = sorted(range(len(tree.vertices)),
                   key=lambda i: tree.vertices[i].diam())
    sub = list(weight)
    for i in order:
        par = tree.parent[i]
        if par >= 0:
            sub[par] += sub[i]
    total = Fraction(0)
    for child, _, ln in tree.edges():
        total += sub[child] ** 2 * ln
    return total


def l320_check(points, eps_log):
    """Both sides of the finite-place regularization bound
    ([F]_eps, [F]_eps) <= ([F], [F]) + |F|^(-1) log(1/eps), exact on the
    log_p scale."""
    if not points:
        raise ValueError("empty set")
    p = _check_same_prime(*points)
    points = list(dict.fromkeys(points))  # the bound is for sets of points
    n = len(points)
    F = AtomicMeasureB.equidistributed(points, p)
    Feps = AtomicMeasureB.equidistributed(
        [project_eps(S, eps_log) for S in points], p)
    lhs = energy_atomic(Feps, Feps)
    rhs = energy_atomic(F, F) + Fraction(-Fraction(eps_log), n)
    return lhs, rhs


def tree_dirichlet(phi: TreeFunction) -> Fraction:
    """Dirichlet form sum of slope^2 * length over edges.

    Returned on the 1/log_p scale: multiply by 1/log(p) for natural units
    (slopes are per log_p length).
    """
    total = Fraction(0)
    for child, par, ln in phi.tree.edges():
        slope = (phi.values[par] - phi.values[child]) / ln
        total += slope ** 2 * ln
    return total


def tree_pairing(phi: TreeFunction, rho: AtomicMeasureB) -> Fraction:
    """Integral of phi against rho; atoms must be tree vertices."""
    acc = Fraction(0)
    for S, w in rho.atoms:
        if S not in phi.tree.index:
            raise ValueError(f"atom {S} is not a vertex of the tree")
        acc += w * phi[S]
    return acc


def cauchy_schwarz_slack(phi: TreeFunction, rho: AtomicMeasureB) -> Fraction:
    """<phi,phi>(rho,rho) - |int phi drho|^2, exact; nonnegative.

    The log p factors of the two energies cancel, so the slack is an exact
    rational number.
    """
    if rho.total_mass != 0:
        raise ValueError("needs a mass-zero measure")
    pairing = tree_pairing(phi, rho)
    return tree_dirichlet(phi) * energy_atomic(rho, rho) - pairing ** 2

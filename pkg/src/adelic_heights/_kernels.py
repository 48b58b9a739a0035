"""Hot numeric kernels with optional numba acceleration.

Every kernel has a pure-numpy implementation.  When numba is importable and
the environment variable ``ADELIC_HEIGHTS_NO_NUMBA`` is unset (or "0"), the
numba-compiled version is used instead.  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_USE_NUMBA = os.environ.get("ADELIC_HEIGHTS_NO_NUMBA", "0") in ("", "0")
if _USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        _USE_NUMBA = False

USING_NUMBA = _USE_NUMBA


# ---------------------------------------------------------------------------
# Aberth-Ehrlich simultaneous root iteration.
#
# Coefficients are complex128 in ascending degree order and must be scaled by
# the caller so Horner evaluation does not overflow.  Returns the final
# approximations plus the number of sweeps used.

def _aberth_sweeps_np(coeffs, z, max_iter, tol):
    n = len(z)
    dcoeffs = coeffs[1:] * np.arange(1, len(coeffs))
    for sweep in range(max_iter):
        p = np.zeros(n, dtype=np.complex128)
        for c in coeffs[::-1]:
            p = p * z + c
        dp = np.zeros(n, dtype=np.complex128)
        for c in dcoeffs[::-1]:
            dp = dp * z + c
        # Newton correction, guarded against vanishing derivative
        small = np.abs(dp) < 1e-300
        dp = np.where(small, 1.0, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0  # undo the diagonal fill
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        step = w / denom
        z = z - step
        if np.max(np.abs(step)) < tol:
            return z, sweep + 1
    return z, max_iter


if _USE_NUMBA:

    @njit(cache=True, fastmath=True)
    def _aberth_sweeps_nb(coeffs, z, max_iter, tol):  # pragma: no cover
        n = z.shape[0]
        m = coeffs.shape[0]
        dcoeffs = np.empty(m - 1, dtype=np.complex128)
        for k in range(1, m):
            dcoeffs[k - 1] = coeffs[k] * k
        for sweep in range(max_iter):
            maxstep = 0.0
            for i in range(n):
                p = 0.0 + 0.0j
                for k in range(m - 1, -1, -1):
                    p = p * z[i] + coeffs[k]
                dp = 0.0 + 0.0j
                for k in range(m - 2, -1, -1):
                    dp = dp * z[i] + dcoeffs[k]
                if abs(dp) < 1e-300:
                    dp = 1.0 + 0.0j
                w = p / dp
                s = 0.0 + 0.0j
                zi = z[i]
                for j in range(n):
                    d = zi - z[j]
                    m2 = d.real * d.real + d.imag * d.imag
                    if m2 > 1e-300:
                        s += d.conjugate() / m2
                denom = 1.0 - w * s
                if abs(denom) < 1e-300:
                    denom = 1.0 + 0.0j
                step = w / denom
                z[i] = z[i] - step
                if abs(step) > maxstep:
                    maxstep = abs(step)
            if maxstep < tol:
                return z, sweep + 1
        return z, max_iter


def aberth_sweeps(coeffs, z0, max_iter, tol):
    """Run Aberth-Ehrlich sweeps from initial approximations ``z0``."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128).copy()
    if _USE_NUMBA:
        return _aberth_sweeps_nb(coeffs, z, max_iter, tol)
    return _aberth_sweeps_np(coeffs, z, max_iter, tol)


# ---------------------------------------------------------------------------
# Aberth iteration where the "polynomial" is the critical-orbit map
# c -> P_c^depth(0) with P_c(z) = z^D + c, evaluated by dynamical iteration.
# Values stay O(1) near the roots, which avoids the astronomic coefficient
# range of the expanded polynomial.

def _mandel_aberth_np(D, depth, z, max_iter, tol):
    n = len(z)
    for sweep in range(max_iter):
        g = np.zeros(n, dtype=np.complex128)
        dg = np.zeros(n, dtype=np.complex128)
        # once an orbit escapes, each further step divides the Newton
        # ratio g/dg by D (g -> g^D dominates); finish analytically to
        # avoid overflow
        shrink = np.ones(n)
        live = np.ones(n, dtype=bool)
        for step in range(depth):
            dg = np.where(live, D * g ** (D - 1) * dg + 1.0, dg)
            g = np.where(live, g ** D + z, g)
            esc = live & (np.abs(g) > 1e100)
            shrink = np.where(esc, float(D) ** (depth - 1 - step), shrink)
            live &= ~esc
        small = np.abs(dg) < 1e-300
        dg = np.where(small, 1.0, dg)
        w = g / dg / shrink
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        step = w / denom
        # keep iterates from escaping: roots lie in |c| <= 2
        z = z - step
        mag = np.abs(z)
        esc = mag > 4.0
        z = np.where(esc, 2.0 * z / np.where(esc, mag, 1.0), z)
        if np.max(np.abs(step)) < tol:
            return z, sweep + 1
    return z, max_iter


if _USE_NUMBA:

    @njit(cache=True, fastmath=True)
    def _mandel_aberth_nb(D, depth, z, max_iter, tol):  # pragma: no cover
        n = z.shape[0]
        for sweep in range(max_iter):
            maxstep = 0.0
            for i in range(n):
                g = 0.0 + 0.0j
                dg = 0.0 + 0.0j
                shrink = 1.0
                for step in range(depth):
                    gp = 1.0 + 0.0j
                    for _k in range(D - 1):
                        gp = gp * g
                    dg = D * gp * dg + 1.0
                    g = gp * g + z[i]
                    if abs(g) > 1e100:
                        # escaped: every further step divides g/dg by D
                        shrink = float(D) ** (depth - 1 - step)
                        break
                if abs(dg) < 1e-300:
                    dg = 1.0 + 0.0j
                w = g / dg / shrink
                s = 0.0 + 0.0j
                zi = z[i]
                for j in range(n):
                    d = zi - z[j]
                    m2 = d.real * d.real + d.imag * d.imag
                    if m2 > 1e-300:
                        s += d.conjugate() / m2
                denom = 1.0 - w * s
                if abs(denom) < 1e-300:
                    denom = 1.0 + 0.0j
                step = w / denom
                z[i] = z[i] - step
                if abs(z[i]) > 4.0:
                    z[i] = 2.0 * z[i] / abs(z[i])
                if abs(step) > maxstep:
                    maxstep = abs(step)
            if maxstep < tol:
                return z, sweep + 1
        return z, max_iter


def mandel_aberth(D, depth, z0, max_iter=400, tol=1e-13):
    """Simultaneous roots of c -> P_c^depth(0), P_c(z) = z^D + c."""
    z = np.ascontiguousarray(z0, dtype=np.complex128).copy()
    if _USE_NUMBA:
        return _mandel_aberth_nb(D, depth, z, max_iter, tol)
    return _mandel_aberth_np(D, depth, z, max_iter, tol)


# ---------------------------------------------------------------------------
# Aberth iteration for the periodic-point equation P^depth(z) - z = 0 of a
# polynomial map P, with P and P' evaluated by forward iteration (the
# expanded polynomial has an astronomic coefficient range).

def _periodic_aberth_np(coeffs, depth, z, max_iter, tol, clamp):
    n = len(z)
    D = len(coeffs) - 1
    dcoeffs = coeffs[1:] * np.arange(1, len(coeffs))
    for sweep in range(max_iter):
        g = z.copy()
        dg = np.ones(n, dtype=np.complex128)
        shrink = np.ones(n)
        live = np.ones(n, dtype=bool)
        for step in range(depth):
            pd = np.zeros(n, dtype=np.complex128)
            for c in dcoeffs[::-1]:
                pd = pd * g + c
            pv = np.zeros(n, dtype=np.complex128)
            for c in coeffs[::-1]:
                pv = pv * g + c
            dg = np.where(live, dg * pd, dg)
            g = np.where(live, pv, g)
            # once an orbit escapes, each further step divides the Newton
            # ratio by D; finish analytically to avoid overflow
            esc = live & (np.abs(g) > 1e100)
            shrink = np.where(esc, float(D) ** (depth - 1 - step), shrink)
            live &= ~esc
        G = g - z
        DG = np.where(live, dg - 1.0, dg)
        DG = np.where(np.abs(DG) < 1e-300, 1.0, DG)
        w = G / DG / shrink
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(1.0 / diff, axis=1) - 1.0
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        step_z = w / denom
        z = z - step_z
        mag = np.abs(z)
        far = mag > 2.0 * clamp
        z = np.where(far, clamp * z / np.where(far, mag, 1.0), z)
        if np.max(np.abs(step_z)) < tol:
            return z, sweep + 1
    return z, max_iter


if _USE_NUMBA:

    @njit(cache=True, fastmath=True)
    def _periodic_aberth_nb(coeffs, depth, z, max_iter, tol,
                            clamp):  # pragma: no cover
        n = z.shape[0]
        D = coeffs.shape[0] - 1
        dcoeffs = np.empty(D, dtype=np.complex128)
        for k in range(1, D + 1):
            dcoeffs[k - 1] = coeffs[k] * k
        for sweep in range(max_iter):
            maxstep = 0.0
            for i in range(n):
                g = z[i]
                dg = 1.0 + 0.0j
                shrink = 1.0
                live = True
                for step in range(depth):
                    if not live:
                        break
                    pd = 0.0 + 0.0j
                    for k in range(D - 1, -1, -1):
                        pd = pd * g + dcoeffs[k]
                    pv = 0.0 + 0.0j
                    for k in range(D, -1, -1):
                        pv = pv * g + coeffs[k]
                    dg = dg * pd
                    g = pv
                    if abs(g) > 1e100:
                        shrink = float(D) ** (depth - 1 - step)
                        live = False
                G = g - z[i]
                DG = dg - 1.0 if live else dg
                if abs(DG) < 1e-300:
                    DG = 1.0 + 0.0j
                w = G / DG / shrink
                s = 0.0 + 0.0j
                zi = z[i]
                for j in range(n):
                    d = zi - z[j]
                    m2 = d.real * d.real + d.imag * d.imag
                    if m2 > 1e-300:
                        s += d.conjugate() / m2
                denom = 1.0 - w * s
                if abs(denom) < 1e-300:
                    denom = 1.0 + 0.0j
                stp = w / denom
                z[i] = z[i] - stp
                if abs(z[i]) > 2.0 * clamp:
                    z[i] = clamp * z[i] / abs(z[i])
                if abs(stp) > maxstep:
                    maxstep = abs(stp)
            if maxstep < tol:
                return z, sweep + 1
        return z, max_iter


def periodic_aberth(coeffs, depth, z0, max_iter=800, tol=1e-13, clamp=4.0):
    """Simultaneous roots of P^depth(z) - z for the polynomial with the
    given ascending complex coefficients."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128).copy()
    if _USE_NUMBA:
        return _periodic_aberth_nb(coeffs, depth, z, max_iter, tol, clamp)
    return _periodic_aberth_np(coeffs, depth, z, max_iter, tol, clamp)


# ---------------------------------------------------------------------------
# Pairwise log-distance sum: sum_{i != j} log|z_i - z_j| over one cloud, used
# by discrete energies of large root clouds.

def _pair_log_sum_np(z):
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    return float(np.sum(np.log(np.abs(diff))))


if _USE_NUMBA:

    @njit(cache=True, fastmath=True)
    def _pair_log_sum_nb(z):  # pragma: no cover
        n = z.shape[0]
        total = 0.0
        for i in range(n):
            zi = z[i]
            for j in range(i + 1, n):
                d = zi - z[j]
                total += np.log(d.real * d.real + d.imag * d.imag)
        return total  # 0.5 * log(|d|^2) summed over both orderings


def pair_log_sum(z):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if _USE_NUMBA:
        return _pair_log_sum_nb(z)
    return _pair_log_sum_np(z)


# ---------------------------------------------------------------------------
# One backward step of a degree-2 rational map: for each sample t, solve
# a(t) w^2 + b(t) w + c(t) = 0 and pick the branch given by ``bits``.

def quadratic_branch_step(a, b, c, bits):
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    disc = np.sqrt(b * b - 4.0 * a * c)
    # stable quadratic formula: q = -(b + sign*disc)/2 with sign chosen to
    # avoid cancellation, then the two roots are q/a and c/q
    sgn = np.where(np.real(np.conj(b) * disc) >= 0.0, 1.0, -1.0)
    q = -0.5 * (b + sgn * disc)
    lin = np.abs(a) < 1e-14 * np.abs(b)  # degree collapse: single finite root
    qsafe = np.where(np.abs(q) < 1e-300, 1.0, q)
    r1 = np.where(lin, -c / np.where(np.abs(b) < 1e-300, 1.0, b), q / a)
    r2 = np.where(lin, r1, c / qsafe)
    return np.where(bits, r1, r2)

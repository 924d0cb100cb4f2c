"""Randomized special-function identities.

Each check draws ``cases`` parameter sets from a seeded generator and
returns the worst error seen, so the same code serves the quick unit
tests and the full acceptance run.
"""
import cmath
import math

import numpy as np

from kinkdirac.specfun import (JacobiForm, gamma, hyp2f1, hyp2f1_pfaff, jacobi_p,
                               jacobi_p_expansion, laguerre_l)
from oracles import direct_series_extended, gauss_series_limit, nonpositive_integer_distance

TOL_Z0 = 0.0
TOL_GAUSS = 1e-9
TOL_PFAFF = 1e-11
TOL_JACOBI = 1e-10
TOL_REFLECTION = 1e-10
TOL_LAGUERRE = 1e-11


def _disk(rng, r):
    rad = r * math.sqrt(rng.uniform())
    th = rng.uniform(0.0, 2.0 * math.pi)
    return complex(rad * math.cos(th), rad * math.sin(th))


def worst_z0(cases, seed=11):
    """2F1(a, b; c; 0) == 1 exactly, |a|, |b|, |c| <= 10."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        a, b, c = _disk(rng, 10), _disk(rng, 10), _disk(rng, 10)
        worst = max(worst, abs(hyp2f1(a, b, c, 0.0) - 1.0))
    return worst


def worst_gauss(cases, seed=12):
    """Gamma closed form at z = 1 against the extrapolated series limit, Re(c-a-b) > 0.25."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < cases:
        a, b, c = _disk(rng, 3), _disk(rng, 3), _disk(rng, 5)
        if (c - a - b).real <= 0.25 or nonpositive_integer_distance(c) < 0.25:
            continue
        closed = hyp2f1(a, b, c, 1.0)
        limit = gauss_series_limit(a, b, c)
        worst = max(worst, abs(closed - limit) / max(1.0, abs(closed)))
        done += 1
    return worst


def worst_pfaff(cases, seed=13):
    """Pfaff-transformed evaluation against the direct series for z in (-0.6, -0.5].

    The direct series is summed in extended precision: in double it loses
    up to ~1e-10 to cancellation for |a|, |b| near 5 at this |z|.
    """
    rng = np.random.default_rng(seed)
    params = []
    for _ in range(cases):
        a, b, c = _disk(rng, 5), _disk(rng, 5), _disk(rng, 5)
        if nonpositive_integer_distance(c) < 0.1:
            c += 0.5
        z = -0.6 + 0.1 * rng.uniform()
        if z == -0.6:
            z = -0.5
        params.append((a, b, c, z))
    a, b, c, z = (np.array(col) for col in zip(*params))
    direct = direct_series_extended(a, b, c, z)
    worst = 0.0
    for (ai, bi, ci, zi), d in zip(params, direct):
        worst = max(worst, abs(hyp2f1_pfaff(ai, bi, ci, zi) - d) / abs(d))
    return worst


def worst_jacobi(cases, seed=14):
    """Three evaluators agree, n <= 8, |alpha|, |beta| <= 5, x in [-1, 1]."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < cases:
        n = int(rng.integers(0, 9))
        al, be = _disk(rng, 5), _disk(rng, 5)
        if (nonpositive_integer_distance(al + 1) < 0.05
                or nonpositive_integer_distance(n + al + be + 1) < 0.05):
            continue
        x = complex(rng.uniform(-1.0, 1.0))
        v = jacobi_p(n, al, be, x)
        v31 = jacobi_p_expansion(n, al, be, x, JacobiForm.EQ31)
        v32 = jacobi_p_expansion(n, al, be, x, JacobiForm.EQ32)
        scale = max(abs(v), abs(v31), abs(v32))
        worst = max(worst, max(abs(v - v31), abs(v - v32), abs(v31 - v32)) / scale)
        done += 1
    return worst


def worst_reflection(cases, seed=15):
    """Gamma(z) Gamma(1-z) sin(pi z) / pi == 1, |Re z| <= 10, |Im z| <= 3."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < cases:
        z = complex(rng.uniform(-10, 10), rng.uniform(-3, 3))
        if min(nonpositive_integer_distance(z), nonpositive_integer_distance(1 - z)) < 1e-3:
            continue
        val = gamma(z) * gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
        worst = max(worst, abs(val - 1.0))
        done += 1
    return worst


def worst_laguerre(cases, seed=16):
    """(n+1) L_{n+1} = (2n+1+lam-z) L_n - (n+lam) L_{n-1} for 1 <= n <= 9 (so n+1 <= 10)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(1, 10))
        lam, z = _disk(rng, 5), _disk(rng, 5)
        lm1, l0, lp1 = laguerre_l(n - 1, lam, z), laguerre_l(n, lam, z), laguerre_l(n + 1, lam, z)
        lhs = (n + 1) * lp1
        rhs = (2 * n + 1 + lam - z) * l0 - (n + lam) * lm1
        scale = max(abs(lhs), abs((2 * n + 1 + lam - z) * l0), abs((n + lam) * lm1))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


SUITE = {
    "2F1(z=0) = 1": (worst_z0, TOL_Z0),
    "Gauss summation": (worst_gauss, TOL_GAUSS),
    "Pfaff consistency": (worst_pfaff, TOL_PFAFF),
    "Jacobi three-way": (worst_jacobi, TOL_JACOBI),
    "Gamma reflection": (worst_reflection, TOL_REFLECTION),
    "Laguerre recurrence": (worst_laguerre, TOL_LAGUERRE),
}

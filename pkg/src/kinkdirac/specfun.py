"""Complex special functions used by the closed-form solutions.

Gamma (Lanczos), the Gauss hypergeometric function 2F1 on the restricted
argument set the kink wavefunctions need, Jacobi polynomials with complex
parameters (three independent evaluators) and generalized Laguerre
polynomials.  Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SeriesControl",
    "JacobiForm",
    "gamma",
    "rgamma",
    "binomial",
    "hyp2f1",
    "hyp2f1_series",
    "hyp2f1_pfaff",
    "jacobi_p",
    "jacobi_p_expansion",
    "laguerre_l",
]

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SeriesControl:
    """Budget for non-terminating series."""

    max_terms: int = 10000
    rel_tol: float = 1e-14

    def __post_init__(self):
        if self.max_terms <= 0:
            raise ValueError("max_terms must be positive")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError("rel_tol must lie in (0, 1)")


DEFAULT_CONTROL = SeriesControl()


class JacobiForm(Enum):
    EQ31 = "binomial-double-sum"
    EQ32 = "gamma-ratio-sum"


def _nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _as_nonneg_int(z: complex) -> int | None:
    """Return -z as an int if z is a non-positive integer, else None."""
    if _nonpositive_integer(z):
        return int(-complex(z).real)
    return None


def _csum(terms) -> complex:
    """Correctly rounded sum of complex terms (real and imaginary parts separately)."""
    terms = list(terms)
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _check_finite(z: complex, what: str) -> complex:
    if not cmath.isfinite(z):
        raise OverflowError(f"{what} overflowed")
    return z


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma(z: complex) -> complex:
    """Complex Gamma function.

    Lanczos approximation for ``Re z >= 0.5`` and the reflection formula
    otherwise.  Raises :class:`PoleError` at non-positive integers.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        return _check_finite(math.pi / (s * gamma(1.0 - z)), "gamma")
    if z.imag == 0.0 and z.real == math.floor(z.real) and z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    return _check_finite(cmath.exp(_log_gamma_lanczos(z)), "gamma")


def rgamma(z: complex) -> complex:
    """Reciprocal Gamma function, entire: zero at the poles of Gamma."""
    if _nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


def binomial(w: complex, r: complex) -> complex:
    """Binomial coefficient as the Gamma ratio Gamma(w+1)/(Gamma(r+1) Gamma(w-r+1))."""
    return gamma(w + 1.0) * rgamma(r + 1.0) * rgamma(w - r + 1.0)


def _terminating_2f1(n: int, b: complex, c: complex, z: complex) -> complex:
    # sum_{j=0}^{n} (-n)_j (b)_j / ((c)_j j!) z^j, terms accumulated in increasing order
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    for j in range(n):
        t *= (j - n) * (b + j) / ((c + j) * (j + 1)) * z
        terms.append(t)
    return _csum(terms)


def hyp2f1_series(a: complex, b: complex, c: complex, z: complex,
                  ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Direct power series of 2F1 (no argument checks beyond convergence)."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c={c} is a non-positive integer")
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    partial = 1.0 + 0j
    small = 0
    for j in range(ctrl.max_terms):
        t *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        terms.append(t)
        partial += t
        if t == 0:
            return _csum(terms)
        if abs(t) <= ctrl.rel_tol * abs(partial):
            small += 1
            # two consecutive small terms guard against a single accidental cancellation
            if small >= 2:
                return _csum(terms)
        else:
            small = 0
    raise ConvergenceError(
        f"2F1 series did not converge in {ctrl.max_terms} terms (z={z})")


def hyp2f1_pfaff(a: complex, b: complex, c: complex, z: complex,
                 ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """2F1 through the Pfaff transformation (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))."""
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * hyp2f1_series(a, c - b, c, w, ctrl)


def hyp2f1(a: complex, b: complex, c: complex, z: complex,
           ctrl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Supported arguments: any z when the series terminates (a or b a
    non-positive integer), z = 1 with Re(c-a-b) > 0 (Gauss summation),
    |z| <= 1/2 (power series) and real z in [-1, -1/2) (Pfaff transform).
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if z == 0:
        return 1.0 + 0j
    na, nb = _as_nonneg_int(a), _as_nonneg_int(b)
    terminating = [n for n in (na, nb) if n is not None]
    if terminating:
        n = min(terminating)
        other = b if (na is not None and na == n) else a
        nc = _as_nonneg_int(c)
        if nc is not None and nc < n:
            raise PoleError(f"2F1 lower parameter c={c} hits a pole before termination")
        return _check_finite(_terminating_2f1(n, other, c, z), "hyp2f1")
    if _nonpositive_integer(c):
        raise PoleError(f"2F1 lower parameter c={c} is a non-positive integer")
    if z == 1:
        s = c - a - b
        if s.real <= 0:
            raise DomainError("2F1 at z=1 requires Re(c-a-b) > 0")
        return _check_finite(
            gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b), "hyp2f1")
    if abs(z) <= 0.5:
        return _check_finite(hyp2f1_series(a, b, c, z, ctrl), "hyp2f1")
    if z.imag == 0.0 and -1.0 <= z.real < -0.5:
        return _check_finite(hyp2f1_pfaff(a, b, c, z, ctrl), "hyp2f1")
    raise DomainError(f"2F1 argument z={z} outside the supported region")


def _jacobi_prefactor(n: int, alpha: complex) -> complex:
    # Gamma(n+alpha+1) / (n! Gamma(alpha+1)), written as the rising factorial
    p = 1.0 + 0j
    for j in range(1, n + 1):
        p *= (alpha + j) / j
    return p


def _check_degree(n) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n}")
    return int(n)


def jacobi_p(n: int, alpha: complex, beta: complex, x: complex) -> complex:
    """Jacobi polynomial P_n^(alpha, beta)(x) with complex parameters.

    Evaluated through the terminating hypergeometric representation
    Gamma(n+a+1)/(n! Gamma(a+1)) 2F1(-n, a+b+n+1; a+1; (1-x)/2).
    For Re x < 0 the symmetry P^(a,b)(x) = (-1)^n P^(b,a)(-x) is applied
    first, which avoids heavy cancellation as x approaches -1.
    """
    n = _check_degree(n)
    alpha, beta, x = complex(alpha), complex(beta), complex(x)
    if _nonpositive_integer(alpha + 1.0):
        raise PoleError(f"alpha+1={alpha + 1} is a pole of the Jacobi prefactor")
    if n == 0:
        return 1.0 + 0j
    if x.real < 0 and not _nonpositive_integer(beta + 1.0):
        # P^(a,b)(x) = (-1)^n P^(b,a)(-x) keeps the 2F1 argument at or below 1/2
        sign = -1.0 if n % 2 else 1.0
        pre = _jacobi_prefactor(n, beta)
        return sign * pre * hyp2f1(-n, alpha + beta + n + 1.0, beta + 1.0, (1.0 + x) / 2.0)
    pre = _jacobi_prefactor(n, alpha)
    return pre * hyp2f1(-n, alpha + beta + n + 1.0, alpha + 1.0, (1.0 - x) / 2.0)


def jacobi_p_expansion(n: int, alpha: complex, beta: complex, x: complex,
                       form: JacobiForm = JacobiForm.EQ31) -> complex:
    """Jacobi polynomial from one of two explicit finite sums.

    ``EQ31``: 2^-n sum_p (-1)^(n-p) C(n+a, p) C(n+b, n-p) (1-x)^(n-p) (1+x)^p.
    ``EQ32``: Gamma(n+a+1)/(n! Gamma(n+a+b+1)) sum_r C(n, r)
    Gamma(n+a+b+r+1)/Gamma(a+r+1) ((x-1)/2)^r, with the Gamma ratios
    expanded into rising factorials (and the same reflection as
    :func:`jacobi_p` for Re x < 0).
    Binomials in ``EQ31`` are Gamma ratios.
    """
    n = _check_degree(n)
    alpha, beta, x = complex(alpha), complex(beta), complex(x)
    if _nonpositive_integer(alpha + 1.0):
        raise PoleError(f"alpha+1={alpha + 1} is a pole of the Jacobi prefactor")
    form = JacobiForm(form)
    if form is JacobiForm.EQ31:
        terms = []
        for p in range(n + 1):
            sign = -1.0 if (n - p) % 2 else 1.0
            terms.append(sign * binomial(n + alpha, p) * binomial(n + beta, n - p)
                         * (1.0 - x) ** (n - p) * (1.0 + x) ** p)
        return _check_finite(_csum(terms) / 2.0 ** n, "jacobi_p_expansion")
    s = n + alpha + beta + 1.0
    if _nonpositive_integer(s):
        raise PoleError(f"n+alpha+beta+1={s} is a pole")
    # Gamma(n+a+1)/Gamma(a+r+1) = (a+r+1)_(n-r) and Gamma(s+r)/Gamma(s) = (s)_r,
    # formed as products so no Gamma rounding is amplified by the alternating sum
    sign = 1.0
    a = alpha
    if x.real < 0 and not _nonpositive_integer(beta + 1.0):
        # same reflection as jacobi_p
        sign = -1.0 if n % 2 else 1.0
        a, x = beta, -x
    y = (x - 1.0) / 2.0
    terms = []
    rise_s = 1.0 + 0j
    for r in range(n + 1):
        if r:
            rise_s *= s + r - 1
        tail = 1.0 + 0j
        for j in range(r + 1, n + 1):
            tail *= a + j
        terms.append(math.comb(n, r) * rise_s * tail * y ** r)
    return _check_finite(sign * _csum(terms) / math.factorial(n), "jacobi_p_expansion")


def laguerre_l(n: int, lam: complex, z: complex) -> complex:
    """Generalized Laguerre polynomial L_n^(lam)(z).

    Terminating series sum_j (-1)^j C(n+lam, n-j) z^j / j!, with the
    binomials built by the recurrence in their lower index (no poles).
    """
    n = _check_degree(n)
    lam, z = complex(lam), complex(z)
    # binom[r] = C(n+lam, r), r = 0..n
    binom = [1.0 + 0j]
    for r in range(n):
        binom.append(binom[-1] * (n + lam - r) / (r + 1))
    terms = []
    zj = 1.0 + 0j
    fact = 1.0
    for j in range(n + 1):
        if j:
            zj *= z
            fact *= j
        sign = -1.0 if j % 2 else 1.0
        terms.append(sign * binom[n - j] * zj / fact)
    return _check_finite(_csum(terms), "laguerre_l")

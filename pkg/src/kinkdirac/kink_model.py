"""Dirac equation in 1+1 dimensions with the kink potential V(x) = lambda tanh(kx).

Reduction to the canonical Nikiforov-Uvarov form on each half-line, the
closed-form resonance conditions, the closed-form spinors, and the
linear-potential approximation.

The two spinor components are phi (first) and theta (second), coupled by

    -i theta' + (E - V) theta - m phi = 0
     i phi'   + (E - V) phi   - m theta = 0

so theta = (i phi' + (E - V) phi) / m.  A negative k is handled by the
identity lambda tanh(kx) = (sign(k) lambda) tanh(|k| x).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ConfigError, DivergenceError, DomainError
from .nu_core import CanonicalODE
from .specfun import hyp2f1, jacobi_p, laguerre_l

__all__ = [
    "PhysicalParams",
    "HalfLine",
    "Method",
    "SpinorSample",
    "ResonanceResult",
    "potential",
    "canonical_ode",
    "mu_index",
    "decay_constant",
    "energy_equation_residual",
    "linear_closed_form",
    "linear_branch_ok",
    "spinor_pos",
    "spinor_neg",
    "spinor",
    "spinor_grid",
    "linear_wavefunction",
    "second_order_coefficient",
    "second_order_residual",
    "normalize_numerically",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Mass m, field strength lambda_, inverse width k, delta strength g (natural units)."""

    m: float
    lambda_: float
    k: float
    g: float = 0.0

    def __post_init__(self):
        for name in ("m", "lambda_", "k", "g"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite real number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.k == 0:
            raise ConfigError("k must be non-zero (k = 0 removes the potential's length scale)")
        if self.m <= 0:
            raise ConfigError("m must be positive")

    @property
    def kk(self) -> float:
        return abs(self.k)

    @property
    def ll(self) -> float:
        """Field strength as seen with a positive k."""
        return math.copysign(1.0, self.k) * self.lambda_


class HalfLine(Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"


class Method(Enum):
    EXACT_POS = "exact-pos"
    EXACT_NEG = "exact-neg"
    LINEAR = "linear"


@dataclass(frozen=True)
class SpinorSample:
    x: float
    phi: complex
    theta: complex
    on_shell: bool = True


@dataclass(frozen=True)
class ResonanceResult:
    n: int
    energy: complex
    residual: float
    method: Method
    decay_ok: bool


def potential(p: PhysicalParams, x):
    return p.lambda_ * np.tanh(p.k * np.asarray(x)) if np.ndim(x) else p.lambda_ * math.tanh(p.k * x)


def canonical_ode(p: PhysicalParams, E: complex, side: HalfLine) -> CanonicalODE:
    """Canonical coefficients for s = -exp(-2kx) (x > 0) or s = -exp(2kx) (x < 0)."""
    E = complex(E)
    m, lam, k = p.m, p.lambda_, p.k
    k2 = 4.0 * k * k
    plus = (m * m - (E + lam) ** 2) / k2
    minus = (m * m - (E - lam) ** 2) / k2
    B = (-4j * k * lam + 2.0 * lam * lam - 2.0 * E * E + 2.0 * m * m) / k2
    if HalfLine(side) is HalfLine.POSITIVE:
        return CanonicalODE(1.0, 1.0, 1.0, plus, B, minus)
    return CanonicalODE(1.0, 1.0, 1.0, minus, B, plus)


def mu_index(p: PhysicalParams) -> complex:
    """sqrt((k^2 + 4(i k lambda - lambda^2)) / k^2), the E-independent Jacobi index."""
    k, lam = p.k, p.lambda_
    return cmath.sqrt((k * k + 4.0 * (1j * k * lam - lam * lam)) / (k * k))


def decay_constant(p: PhysicalParams, E: complex, side: HalfLine) -> tuple[complex, bool]:
    """kappa = sqrt(m^2 - (E -+ lambda)^2) with Re kappa >= 0, and whether Re kappa > 0."""
    shift = p.ll if HalfLine(side) is HalfLine.POSITIVE else -p.ll
    kappa = cmath.sqrt(p.m * p.m - (complex(E) - shift) ** 2)
    if kappa.real < 0:
        kappa = -kappa
    return kappa, kappa.real > 0


def energy_equation_residual(p: PhysicalParams, E: complex, n: int, method: Method) -> complex:
    """Right-hand side minus left-hand side of the selected spectral equation."""
    E = complex(E)
    method = Method(method)
    m, lam, k = p.m, p.lambda_, p.k
    if method is Method.LINEAR:
        w = 1.0 + 4.0 * (m * m - E * E - 1j * k * lam)
        return 1.0 + 2 * n + cmath.sqrt(w) - 2j * E
    k2 = k * k
    r_plus = cmath.sqrt((m * m - (E + lam) ** 2) / k2)
    r_minus = cmath.sqrt((m * m - (E - lam) ** 2) / k2)
    if method is Method.EXACT_POS:
        rhs = r_plus - r_minus - (2 * n + 1)
    else:
        rhs = r_plus + r_minus - (2 * n + 1)
    return rhs - mu_index(p)


def linear_closed_form(p: PhysicalParams, n: int) -> complex:
    """Candidate root of the linear-potential spectral equation, obtained by squaring it.

    Squaring admits the wrong square-root branch; check with
    :func:`linear_branch_ok` before using the value as a root.
    """
    m, lk = p.m, p.k * p.lambda_
    return 1j * (1.0 + 4.0 * m * m - 4j * lk - (1 + 2 * n) ** 2) / (4.0 * (1 + 2 * n))


def linear_branch_ok(p: PhysicalParams, E: complex, n: int, tol: float = 1e-9) -> bool:
    """Does the principal root reproduce 2iE - 1 - 2n at this E?"""
    E = complex(E)
    lhs = 2j * E - 1.0 - 2 * n
    root = cmath.sqrt(1.0 + 4.0 * (p.m * p.m - E * E - 1j * p.k * p.lambda_))
    return abs(root - lhs) <= tol * max(1.0, abs(lhs))


def _is_on_shell(p, E, n, method, tol=1e-8):
    return abs(energy_equation_residual(p, E, n, method)) < tol


def _half_line_spinor(p: PhysicalParams, E: complex, n: int, x: float, side: HalfLine):
    """phi and theta of the closed form on one half-line (unnormalized).

    x > 0:  phi = e^{-kappa x} (1+q)^{(1+mu)/2} P_n^{(kappa/k, mu)}(1+2q),  q = e^{-2kx}
    x < 0:  phi = e^{+kappa x} (1+q)^{(1+mu)/2} P_n^{(-kappa/k, mu)}(1+2q), q = e^{2kx}
    theta follows from the product rule, with P_n' written as the
    contiguous 2F1(1-n, b+1; c+1; -q).
    """
    E = complex(E)
    kk = p.kk
    mu = mu_index(p)
    kappa, _ = decay_constant(p, E, side)
    pos = HalfLine(side) is HalfLine.POSITIVE
    sgn = -1.0 if pos else 1.0          # exponent sign, and direction of q
    alpha = kappa / kk if pos else -kappa / kk
    q = math.exp(sgn * 2.0 * kk * x)
    g = 1.0 + q
    env = cmath.exp(sgn * kappa * x) * g ** ((1.0 + mu) / 2.0)
    jac = jacobi_p(n, alpha, mu, 1.0 + 2.0 * q)
    phi = env * jac

    V = potential(p, x)
    bracket = E - V + sgn * 1j * kappa + sgn * 1j * kk * q * (1.0 + mu) / g
    theta_m = bracket * phi
    if n > 0:
        b = alpha + mu + n + 1.0
        c = alpha + 1.0
        pref = 1.0 + 0j
        for j in range(1, n + 1):
            pref *= (alpha + j) / j
        f1 = hyp2f1(1 - n, b + 1.0, c + 1.0, -q)
        theta_m += sgn * 2j * kk * n * q * (b / c) * pref * env * f1
    return phi, theta_m / p.m


def spinor_pos(p: PhysicalParams, E: complex, n: int, x: float) -> SpinorSample:
    """Closed-form spinor for x > 0 (decaying as x -> +inf when Re kappa > 0)."""
    if not x > 0:
        raise DomainError(f"spinor_pos needs x > 0, got {x}")
    phi, theta = _half_line_spinor(p, E, n, float(x), HalfLine.POSITIVE)
    return SpinorSample(float(x), phi, theta, _is_on_shell(p, E, n, Method.EXACT_POS))


def spinor_neg(p: PhysicalParams, E: complex, n: int, x: float) -> SpinorSample:
    """Closed-form spinor for x < 0, envelope e^{+kappa x} with Jacobi index -kappa/k."""
    if not x < 0:
        raise DomainError(f"spinor_neg needs x < 0, got {x}")
    phi, theta = _half_line_spinor(p, E, n, float(x), HalfLine.NEGATIVE)
    return SpinorSample(float(x), phi, theta, _is_on_shell(p, E, n, Method.EXACT_NEG))


def spinor(p: PhysicalParams, E: complex, n: int, x: float, side: HalfLine) -> SpinorSample:
    return (spinor_pos if HalfLine(side) is HalfLine.POSITIVE else spinor_neg)(p, E, n, x)


def spinor_grid(p: PhysicalParams, E: complex, n: int, xs: Sequence[float],
                side: HalfLine) -> list[SpinorSample]:
    side = HalfLine(side)
    xs = [float(x) for x in xs]
    if side is HalfLine.POSITIVE and min(xs) <= 0:
        raise DomainError("grid must lie strictly inside x > 0")
    if side is HalfLine.NEGATIVE and max(xs) >= 0:
        raise DomainError("grid must lie strictly inside x < 0")
    method = Method.EXACT_POS if side is HalfLine.POSITIVE else Method.EXACT_NEG
    shell = _is_on_shell(p, E, n, method)
    out = []
    for x in xs:
        phi, theta = _half_line_spinor(p, E, n, x, side)
        out.append(SpinorSample(x, phi, theta, shell))
    return out


def linear_wavefunction(p: PhysicalParams, E: complex, n: int, x: float) -> complex:
    """x^{-n+iE} e^{-i k lambda x} L_n^{(2iE-2n-1)}(2i k lambda x), free constant set to 1."""
    if not x > 0:
        raise DomainError(f"linear_wavefunction needs x > 0, got {x}")
    E = complex(E)
    lk = p.k * p.lambda_
    return (complex(x) ** (-n + 1j * E) * cmath.exp(-1j * lk * x)
            * laguerre_l(n, 2j * E - 2 * n - 1, 2j * lk * x))


def second_order_coefficient(p: PhysicalParams, E: complex, x: float) -> complex:
    """i k lambda sech^2(kx) + (lambda tanh(kx) - E)^2 - m^2."""
    kx = p.k * x
    sech2 = 1.0 / math.cosh(kx) ** 2 if abs(kx) < 350 else 0.0
    return 1j * p.k * p.lambda_ * sech2 + (p.lambda_ * math.tanh(kx) - complex(E)) ** 2 - p.m ** 2


def second_order_residual(p: PhysicalParams, E: complex,
                          sampler: Callable[[float], SpinorSample], xs: Sequence[float], h: float = 1e-4, analytic_first: bool = True) -> float:
    """sup |phi'' + coeff phi| / sup |phi''| over xs.

    With ``analytic_first`` phi' is recovered exactly from the sample as
    -i (m theta - (E - V) phi) and phi'' is its central difference;
    otherwise phi'' is the plain second difference of phi.
    """
    E = complex(E)

    def dphi(x):
        s = sampler(x)
        return -1j * (p.m * s.theta - (E - potential(p, x)) * s.phi)

    res = []
    d2 = []
    for x in xs:
        f0 = sampler(x).phi
        if analytic_first:
            second = (dphi(x + h) - dphi(x - h)) / (2.0 * h)
        else:
            second = (sampler(x + h).phi - 2.0 * f0 + sampler(x - h).phi) / (h * h)
        d2.append(abs(second))
        res.append(abs(second + second_order_coefficient(p, E, x) * f0))
    scale = max(d2)
    if scale == 0:
        return math.inf
    return max(res) / scale


def _tail(y0: float, y1: float, dx: float) -> float:
    # exponential extrapolation of |phi|^2 beyond an end point
    if y1 == 0.0:
        return 0.0
    if y1 >= y0:
        return math.inf
    return y1 * dx / math.log(y0 / y1)


def normalize_numerically(samples: Sequence[SpinorSample], scheme: str = "simpson",
                          tails: str = "both") -> complex:
    """Scale N making int |N phi|^2 dx = 1 over the sampled grid.

    ``tails`` names the grid ends that are open ("left", "right", "both",
    "none"); an open end whose exponential-tail estimate exceeds 1 % of
    the integral raises :class:`DivergenceError`.
    """
    if len(samples) < 201:
        raise DomainError("need at least 201 samples for the quadrature")
    x = np.array([s.x for s in samples], dtype=float)
    dx = np.diff(x)
    if not (np.all(dx > 0) or np.all(dx < 0)):
        raise DomainError("samples must lie on a monotone grid")
    if dx[0] < 0:
        x, samples = x[::-1], list(samples)[::-1]
    y = np.array([abs(s.phi) ** 2 for s in samples])
    if scheme == "simpson":
        total = float(integrate.simpson(y, x=x))
    elif scheme == "trapezoid":
        total = float(integrate.trapezoid(y, x=x))
    else:
        raise ValueError(f"unknown quadrature scheme {scheme!r}")
    if not total > 0:
        raise DivergenceError("|phi|^2 integrates to zero")
    tail = 0.0
    if tails in ("left", "both"):
        tail += _tail(y[1], y[0], x[1] - x[0])
    if tails in ("right", "both"):
        tail += _tail(y[-2], y[-1], x[-1] - x[-2])
    if tail > 0.01 * total:
        raise DivergenceError(f"tail estimate {tail:.3g} exceeds 1% of the integral {total:.3g}")
    return complex(1.0 / math.sqrt(total))

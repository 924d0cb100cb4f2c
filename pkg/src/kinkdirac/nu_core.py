"""Parametric Nikiforov-Uvarov machinery.

A canonical second-order equation

    psi'' + (c1 - c2 s)/(s (1 - c3 s)) psi' + (-A s^2 + B s - C)/(s (1 - c3 s))^2 psi = 0

is mapped to the derived constants c4..c13 (and the tilde set of the k+
branch), to the polynomial energy condition, and to a description of the
eigenfunction s^c12 (1 - c3 s)^c13 P_n^(c10, c11)(1 - 2 c3 s).

All square roots are principal.  Positivity conditions on the exponents
are recorded as advisory flags only, since the constants are complex in
the problems of interest.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateError, DomainError
from .specfun import jacobi_p, laguerre_l

__all__ = [
    "Branch",
    "CanonicalODE",
    "NUConstants",
    "WavefunctionFactors",
    "LaguerreFactors",
    "derive_constants",
    "energy_residual",
    "wavefunction_factors",
    "eval_psi",
    "laguerre_limit_factors",
    "eval_laguerre_psi",
    "weight_function",
    "ode_operator",
]


class Branch(Enum):
    KMINUS = "k-"
    KPLUS = "k+"


@dataclass(frozen=True)
class CanonicalODE:
    """Coefficients of the canonical equation; A, B, C are the quadratic
    numerator -A s^2 + B s - C."""

    c1: complex
    c2: complex
    c3: complex
    A: complex
    B: complex
    C: complex

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "A", "B", "C"):
            v = complex(getattr(self, name))
            if not cmath.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class NUConstants:
    """Derived constants of the parametric method.

    The constants that divide by c3 (c11, c13 and their tilde versions) are
    computed on access and raise :class:`DegenerateError` when c3 = 0.
    """

    c3: complex
    c4: complex
    c5: complex
    c6: complex
    c7: complex
    c8: complex
    c9: complex
    c10: complex
    c12: complex
    c10t: complex
    c12t: complex
    sqrt_c8: complex
    sqrt_c9: complex
    k_minus: complex
    k_plus: complex

    def _need_c3(self, name):
        if self.c3 == 0:
            raise DegenerateError(f"{name} divides by c3, which is zero")

    @property
    def c11(self) -> complex:
        self._need_c3("c11")
        return 2.0 * self.sqrt_c9 / self.c3

    @property
    def c13(self) -> complex:
        self._need_c3("c13")
        return -self.c4 + (self.sqrt_c9 - self.c5) / self.c3

    @property
    def c11t(self) -> complex:
        return self.c11

    @property
    def c13t(self) -> complex:
        return self.c13

    def positivity_flags(self, branch: Branch = Branch.KMINUS) -> dict[str, bool]:
        """Advisory c12 > 0, c13 > 0, c10 > -1, c11 > -1 on real parts."""
        tilde = Branch(branch) is Branch.KPLUS
        c10 = self.c10t if tilde else self.c10
        c12 = self.c12t if tilde else self.c12
        flags = {"c12>0": c12.real > 0, "c10>-1": c10.real > -1}
        if self.c3 != 0:
            flags["c13>0"] = self.c13.real > 0
            flags["c11>-1"] = self.c11.real > -1
        return flags


@dataclass(frozen=True)
class WavefunctionFactors:
    """psi_n(s) = s^power (1 - c3 s)^bracket P_n^(alpha, beta)(1 - 2 c3 s)."""

    branch: Branch
    power_exponent: complex
    bracket_exponent: complex
    jacobi_alpha: complex
    jacobi_beta: complex
    degree: int
    c3: complex


@dataclass(frozen=True)
class LaguerreFactors:
    """psi_n(s) = s^power exp(-decay s) L_n^(order)(scale s), the c3 = 0 form."""

    power_exponent: complex
    decay: complex
    laguerre_order: complex
    laguerre_scale: complex
    degree: int


def derive_constants(ode: CanonicalODE) -> NUConstants:
    c1, c2, c3 = ode.c1, ode.c2, ode.c3
    # p2, p1, p0 of the parametric tables are A, B, C
    c4 = 0.5 * (1.0 - c1)
    c5 = 0.5 * (c2 - 2.0 * c3)
    c6 = c5 * c5 + ode.A
    c7 = 2.0 * c4 * c5 - ode.B
    c8 = c4 * c4 + ode.C
    c9 = c3 * (c7 + c3 * c8) + c6
    r8 = cmath.sqrt(c8)
    r9 = cmath.sqrt(c9)
    # sqrt(c8 c9) is taken as sqrt(c8) sqrt(c9) so the pi(s) branch stays consistent
    r89 = r8 * r9
    return NUConstants(
        c3=c3, c4=c4, c5=c5, c6=c6, c7=c7, c8=c8, c9=c9,
        c10=2.0 * r8, c12=c4 + r8,
        c10t=-2.0 * r8, c12t=c4 - r8,
        sqrt_c8=r8, sqrt_c9=r9,
        k_minus=-(c7 + 2.0 * c3 * c8) - 2.0 * r89,
        k_plus=-(c7 + 2.0 * c3 * c8) + 2.0 * r89,
    )


def _energy_condition(c2, c3, c5, c7, c8, r8, r9, n):
    return (n * c2 - (2 * n + 1) * c5 + (2 * n + 1) * (r9 + c3 * r8)
            + n * (n - 1) * c3 + c7 + 2.0 * c3 * c8 + 2.0 * r8 * r9)


def energy_residual(ode: CanonicalODE, nu: NUConstants, n: int,
                    branch: Branch = Branch.KMINUS) -> complex:
    """Left-hand side of the NU energy condition; zero at a quantized level.

    The k+ branch is the k- expression with sqrt(c8) replaced by -sqrt(c8).
    """
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    r8 = nu.sqrt_c8 if Branch(branch) is Branch.KMINUS else -nu.sqrt_c8
    return _energy_condition(ode.c2, ode.c3, nu.c5, nu.c7, nu.c8, r8, nu.sqrt_c9, int(n))


def wavefunction_factors(nu: NUConstants, n: int,
                         branch: Branch = Branch.KMINUS) -> WavefunctionFactors:
    branch = Branch(branch)
    if branch is Branch.KMINUS:
        power, alpha = nu.c12, nu.c10
    else:
        power, alpha = nu.c12t, nu.c10t
    return WavefunctionFactors(
        branch=branch, power_exponent=power, bracket_exponent=nu.c13,
        jacobi_alpha=alpha, jacobi_beta=nu.c11, degree=int(n), c3=nu.c3)


def eval_psi(factors: WavefunctionFactors, s: complex) -> complex:
    """Unnormalized psi_n(s); complex powers are principal."""
    s = complex(s)
    c3 = factors.c3
    return (s ** factors.power_exponent
            * (1.0 - c3 * s) ** factors.bracket_exponent
            * jacobi_p(factors.degree, factors.jacobi_alpha, factors.jacobi_beta,
                       1.0 - 2.0 * c3 * s))


def laguerre_limit_factors(nu: NUConstants, n: int) -> LaguerreFactors:
    if nu.c3 != 0:
        raise DomainError("the Laguerre form applies only when c3 = 0")
    return LaguerreFactors(
        power_exponent=nu.c12,
        decay=nu.sqrt_c9 - nu.c5,
        laguerre_order=nu.c10,
        laguerre_scale=2.0 * nu.sqrt_c9,
        degree=int(n),
    )


def eval_laguerre_psi(factors: LaguerreFactors, s: complex) -> complex:
    s = complex(s)
    return (s ** factors.power_exponent * cmath.exp(-factors.decay * s)
            * laguerre_l(factors.degree, factors.laguerre_order, factors.laguerre_scale * s))


def weight_function(nu: NUConstants, s: complex, branch: Branch = Branch.KMINUS) -> complex:
    """rho(s) = s^c10 (1 - c3 s)^c11; carried for inspection only."""
    c10 = nu.c10 if Branch(branch) is Branch.KMINUS else nu.c10t
    s = complex(s)
    return s ** c10 * (1.0 - nu.c3 * s) ** nu.c11


def ode_operator(ode: CanonicalODE, s, psi, dpsi, d2psi):
    """Apply the canonical operator to given values of psi, psi', psi''."""
    sig = s * (1.0 - ode.c3 * s)
    return (d2psi + (ode.c1 - ode.c2 * s) / sig * dpsi
            + (-ode.A * s * s + ode.B * s - ode.C) / (sig * sig) * psi)

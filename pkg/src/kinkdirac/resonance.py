"""Complex-plane root finding for the spectral residuals.

Roots are located with Muller's method from a deterministic grid of seeds
and certified by an argument-principle count over the search box.  The
residuals contain principal square roots, so the winding count walks
around every branch cut instead of across it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import BoundaryZeroError, ConvergenceError, DegenerateError, DomainError
from .kink_model import (HalfLine, Method, PhysicalParams, ResonanceResult, decay_constant,
                         energy_equation_residual, linear_branch_ok, linear_closed_form)

__all__ = [
    "SearchBox",
    "SolverConfig",
    "SearchReport",
    "default_box",
    "residual_function",
    "muller_step",
    "muller",
    "search_resonances",
    "find_resonances",
    "count_roots_in_box",
    "count_resonances",
    "linear_cuts",
    "exact_cuts",
]

Residual = Callable[[complex], complex]


@dataclass(frozen=True)
class SearchBox:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_n: int = 24

    def __post_init__(self):
        for name in ("re_min", "re_max", "im_min", "im_max"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, float(v))
        if not self.re_min < self.re_max:
            raise DomainError("re_min must be below re_max")
        if not self.im_min < self.im_max:
            raise DomainError("im_min must be below im_max")
        if self.grid_n < 4:
            raise DomainError("grid_n must be at least 4")

    def contains(self, z: complex) -> bool:
        return self.re_min <= z.real <= self.re_max and self.im_min <= z.imag <= self.im_max

    def grown(self, frac: float) -> "SearchBox":
        dr = frac * (self.re_max - self.re_min)
        di = frac * (self.im_max - self.im_min)
        return SearchBox(self.re_min - dr, self.re_max + dr,
                         self.im_min - di, self.im_max + di, self.grid_n)

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-12
    max_iter: int = 100
    dedup_radius: float = 1e-8

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be positive")
        if not self.dedup_radius > self.tol:
            raise DomainError("dedup_radius must exceed tol")


@dataclass
class SearchReport:
    roots: list[ResonanceResult] = field(default_factory=list)
    failures: list[tuple[int, complex, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def default_box(p: PhysicalParams, grid_n: int = 24) -> SearchBox:
    half = 1.5 * (p.m + abs(p.lambda_))
    return SearchBox(-half, half, -p.m, p.m, grid_n)


def residual_function(p: PhysicalParams, n: int, method: Method) -> Residual:
    method = Method(method)

    def f(E):
        return energy_equation_residual(p, E, n, method)
    return f


def muller_step(triple: Sequence[tuple[complex, complex]]) -> complex:
    """Next Muller iterate from three (E, f(E)) pairs, the last being the newest.

    The root of the interpolating parabola closest to the newest point is
    taken by choosing the larger-magnitude denominator.
    """
    (x0, f0), (x1, f1), (x2, f2) = [(complex(x), complex(y)) for x, y in triple]
    h1, h2 = x1 - x0, x2 - x1
    if h1 == 0 or h2 == 0 or h1 + h2 == 0:
        raise DegenerateError("Muller step needs three distinct points")
    d1 = (f1 - f0) / h1
    d2 = (f2 - f1) / h2
    a = (d2 - d1) / (h2 + h1)
    b = a * h2 + d2
    disc = cmath.sqrt(b * b - 4.0 * f2 * a)
    den = b + disc if abs(b + disc) >= abs(b - disc) else b - disc
    if den == 0:
        raise DegenerateError("Muller interpolation collapsed (zero denominator)")
    return x2 - 2.0 * f2 / den


def muller(f: Residual, x0: complex, x1: complex, x2: complex,
           max_iter: int = 100, tol: float = 1e-12,
           keep_inside: SearchBox | None = None) -> tuple[complex, complex, int]:
    """Iterate Muller's method; returns (best E, f(E), iterations).

    Stops once |f| < tol and the step is at rounding level, when f hits
    zero, or after max_iter.  Raises :class:`ConvergenceError` if |f| never
    falls below tol or the iterate leaves ``keep_inside``.
    """
    pts = [(complex(x), f(complex(x))) for x in (x0, x1, x2)]
    best = min(pts, key=lambda t: abs(t[1]))
    for it in range(1, max_iter + 1):
        x3 = muller_step(pts)
        if not cmath.isfinite(x3):
            raise ConvergenceError("Muller iterate is not finite")
        if keep_inside is not None and not keep_inside.contains(x3):
            raise ConvergenceError(f"iterate escaped the search region at {x3}")
        f3 = f(x3)
        if abs(f3) < abs(best[1]):
            best = (x3, f3)
        step = abs(x3 - pts[-1][0])
        pts = [pts[1], pts[2], (x3, f3)]
        if f3 == 0:
            break
        if abs(best[1]) < tol and step <= 4e-16 * max(1.0, abs(x3)):
            break
        if step == 0:
            break
    if not abs(best[1]) < tol:
        raise ConvergenceError(f"|f| = {abs(best[1]):.3g} after {it} iterations")
    return best[0], best[1], it


def _decay_ok(p: PhysicalParams, E: complex, method: Method) -> bool:
    side = HalfLine.NEGATIVE if method is Method.EXACT_NEG else HalfLine.POSITIVE
    return decay_constant(p, E, side)[1]


def _seeds(box: SearchBox) -> list[complex]:
    n = box.grid_n
    dr = (box.re_max - box.re_min) / n
    di = (box.im_max - box.im_min) / n
    return [complex(box.re_min + (i + 0.5) * dr, box.im_min + (j + 0.5) * di)
            for j in range(n) for i in range(n)]


def _dedup(found: list[tuple[complex, complex]], radius: float) -> list[tuple[complex, complex]]:
    kept: list[tuple[complex, complex]] = []
    for E, fE in found:
        for idx, (K, fK) in enumerate(kept):
            if abs(E - K) <= radius:
                if abs(fE) < abs(fK):
                    kept[idx] = (E, fE)
                break
        else:
            kept.append((E, fE))
    return kept


def search_resonances(p: PhysicalParams, n_range: Iterable[int], method: Method,
                      box: SearchBox | None = None,
                      cfg: SolverConfig = SolverConfig()) -> SearchReport:
    """All roots of the selected residual in the box, for every n, with diagnostics."""
    method = Method(method)
    box = box or default_box(p)
    escape = box.grown(1.0)
    h = 0.25 * min(box.re_max - box.re_min, box.im_max - box.im_min) / box.grid_n
    report = SearchReport()
    for n in n_range:
        n = int(n)
        if n < 0:
            raise DomainError("n must be non-negative")
        f = residual_function(p, n, method)
        seeds = _seeds(box)
        closed = None
        if method is Method.LINEAR:
            closed = linear_closed_form(p, n)
            seeds.insert(0, closed)
        found = []
        for z in seeds:
            try:
                E, fE, _ = muller(f, z - h, z + h, z + 1j * h, cfg.max_iter, cfg.tol, escape)
            except (ConvergenceError, DegenerateError, ZeroDivisionError, OverflowError) as exc:
                report.failures.append((n, z, str(exc)))
                continue
            if box.contains(E):
                found.append((E, fE))
        roots = _dedup(found, cfg.dedup_radius)
        accepted = []
        for E, _ in roots:
            # independent re-evaluation, not the iterate's own value
            r = abs(energy_equation_residual(p, E, n, method))
            if r < cfg.tol:
                accepted.append(ResonanceResult(n, E, r, method, _decay_ok(p, E, method)))
            else:
                report.notes.append(f"n={n}: candidate {E} rejected on re-check, |f|={r:.3g}")
        if closed is not None:
            if linear_branch_ok(p, closed, n):
                if not any(abs(r.energy - closed) <= cfg.dedup_radius for r in accepted):
                    report.notes.append(f"n={n}: branch-valid closed form {closed} not found by Muller")
            else:
                report.notes.append(
                    f"n={n}: closed-form candidate {closed} is on the wrong square-root branch")
        accepted.sort(key=lambda r: (r.energy.real, r.energy.imag))
        report.roots.extend(accepted)
    return report


def find_resonances(p: PhysicalParams, n_range: Iterable[int], method: Method,
                    box: SearchBox | None = None,
                    cfg: SolverConfig = SolverConfig()) -> list[ResonanceResult]:
    return search_resonances(p, n_range, method, box, cfg).roots


# ---------------------------------------------------------------- winding count

def _wrap(d: float) -> float:
    return (d + math.pi) % (2.0 * math.pi) - math.pi


class _Unresolved(Exception):
    pass


def _piece_winding(f: Residual, path: Callable[[float], complex], n0: int,
                   max_doublings: int = 8) -> tuple[float, complex, complex, float]:
    """Summed argument change of f along path(u), u in [0, 1].

    Doubles the sampling until every increment is below pi/3.  Returns
    (total change, f at start, f at end, min |f| seen).
    """
    n = n0
    for _ in range(max_doublings + 1):
        vals = [f(path(i / n)) for i in range(n + 1)]
        fmin = min(abs(v) for v in vals)
        if fmin == 0:
            raise _Unresolved("f vanishes on the contour")
        args = [cmath.phase(v) for v in vals]
        steps = [_wrap(b - a) for a, b in zip(args, args[1:])]
        if max(abs(s) for s in steps) <= math.pi / 3:
            return math.fsum(steps), vals[0], vals[-1], fmin
        n *= 2
    raise _Unresolved("argument increments did not resolve")


def _segment(a: complex, b: complex):
    return lambda u: a + (b - a) * u


def _outside_exit(z: Callable[[float], complex], box: SearchBox) -> float:
    # first t at which the cut leaves the box, found by doubling then bisection
    hi = 1.0
    while box.contains(z(hi)):
        hi *= 2.0
        if hi > 1e12:
            raise DomainError("branch cut does not leave the search box")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if box.contains(z(mid)):
            lo = mid
        else:
            hi = mid
    return hi


def _edges(box: SearchBox):
    c = [complex(box.re_min, box.im_min), complex(box.re_max, box.im_min),
         complex(box.re_max, box.im_max), complex(box.re_min, box.im_max)]
    return [(c[i], c[(i + 1) % 4]) for i in range(4)]


def _cut_tangent(z, t, dt):
    d = z(t + dt) - z(max(t - dt, 0.0))
    if d == 0:
        raise DomainError("degenerate branch-cut parametrization")
    return d / abs(d)


def _contour_pieces(box: SearchBox, cuts: Sequence[Callable[[float], complex]], delta: float):
    """Boundary of the box minus the slits, as a list of parametrized pieces."""
    exits = []          # (edge index, position along edge, cut)
    for z in cuts:
        z0 = z(0.0)
        if not box.contains(z0):
            probe = [z(t) for t in (0.5 ** j for j in range(-20, 20))]
            if any(box.contains(w) for w in probe):
                raise DomainError("a branch cut crosses the box without starting inside it")
            continue
        t_exit = _outside_exit(z, box)
        P = z(t_exit)
        # snap onto the nearest edge
        dists = [abs(P.imag - box.im_min), abs(P.real - box.re_max),
                 abs(P.imag - box.im_max), abs(P.real - box.re_min)]
        e = dists.index(min(dists))
        a, b = _edges(box)[e]
        P = {0: complex(P.real, box.im_min), 1: complex(box.re_max, P.imag),
             2: complex(P.real, box.im_max), 3: complex(box.re_min, P.imag)}[e]
        tau = abs(P - a) / abs(b - a)
        exits.append((e, tau, z, t_exit, P))
    pieces = []
    for e, (a, b) in enumerate(_edges(box)):
        on_edge = sorted((x for x in exits if x[0] == e), key=lambda x: x[1])
        start = a
        for _, _, z, t_exit, P in on_edge:
            d_out = _cut_tangent(z, t_exit, 1e-6 * max(1.0, t_exit))
            normal = 1j * d_out
            # walk in along the side that faces the stretch of edge just travelled
            s = 1.0 if (d_out.conjugate() * (start - P)).imag > 0 else -1.0

            def side_path(sign, inward, z=z, t_exit=t_exit):
                def g(u):
                    v = (1.0 - u) if inward else u
                    t = t_exit * v * v
                    dt = 1e-6 * max(1.0, t_exit)
                    nrm = 1j * _cut_tangent(z, t, dt)
                    return z(t) + sign * delta * nrm
                return g

            n0 = 1j * _cut_tangent(z, 0.0, 1e-6 * max(1.0, t_exit))
            z0 = z(0.0)
            arc = (lambda u, z0=z0, n0=n0, s=s: z0 + delta * s * n0 * cmath.exp(1j * s * math.pi * u))
            pieces.append(_segment(start, P + s * delta * normal))
            pieces.append(side_path(s, True))
            pieces.append(arc)
            pieces.append(side_path(-s, False))
            start = P - s * delta * normal
        pieces.append(_segment(start, b))
    return pieces


def _winding_once(f: Residual, box: SearchBox, samples: int,
                  cuts: Sequence[Callable[[float], complex]]) -> tuple[float, float]:
    delta = 1e-7 * box.diameter
    pieces = _contour_pieces(box, cuts, delta)
    total = 0.0
    fmin = math.inf
    prev_end = None
    for piece in pieces:
        w, f_start, f_end, m = _piece_winding(f, piece, samples)
        if prev_end is not None:
            total += _wrap(cmath.phase(f_start) - cmath.phase(prev_end))
        total += w
        prev_end = f_end
        fmin = min(fmin, m)
    first = _piece_winding(f, pieces[0], 4)[1]
    total += _wrap(cmath.phase(first) - cmath.phase(prev_end))
    return total / (2.0 * math.pi), fmin


def count_roots_in_box(f: Residual, box: SearchBox, samples_per_edge: int = 2000,
                       cuts: Sequence[Callable[[float], complex]] = (),
                       real_axis_cut: bool = False) -> int:
    """Number of zeros of f inside the box, counted with multiplicity.

    ``cuts`` are branch cuts of f given as curves t -> E(t), t >= 0, that
    start at a branch point inside the box; the contour detours around
    each one.  With ``real_axis_cut`` every cut is assumed to lie on the
    real axis and the box is split there instead.  If f vanishes on the
    contour, the box is grown slightly and the count retried up to three
    times before :class:`BoundaryZeroError` is raised.
    """
    if samples_per_edge < 8:
        raise DomainError("samples_per_edge must be at least 8")
    current = box
    for attempt in range(4):
        try:
            if real_axis_cut:
                eps = 1e-9 * (current.im_max - current.im_min)
                parts = []
                if current.im_max > eps:
                    parts.append(SearchBox(current.re_min, current.re_max,
                                           max(current.im_min, eps), current.im_max, 4))
                if current.im_min < -eps:
                    parts.append(SearchBox(current.re_min, current.re_max,
                                           current.im_min, min(current.im_max, -eps), 4))
            else:
                parts = [current]
            total = 0.0
            for part in parts:
                w, _ = _winding_once(f, part, samples_per_edge, () if real_axis_cut else cuts)
                total += w
            count = round(total)
            if abs(total - count) > 0.1:
                raise _Unresolved(f"non-integer winding {total:.4f}")
            return int(count)
        except _Unresolved:
            current = current.grown(1e-3 * (attempt + 1))
    raise BoundaryZeroError("f vanishes on the box boundary after 3 shifted retries")


def linear_cuts(p: PhysicalParams) -> list[Callable[[float], complex]]:
    """Branch cuts of the linear-potential residual: E = +-sqrt(c + t/4), t >= 0."""
    c = (1.0 + 4.0 * p.m * p.m) / 4.0 - 1j * p.k * p.lambda_
    return [lambda t: cmath.sqrt(c + t / 4.0), lambda t: -cmath.sqrt(c + t / 4.0)]


def exact_cuts(p: PhysicalParams) -> list[Callable[[float], complex]]:
    """Real-axis rays covering the cuts of both exact residuals, or [] if they meet.

    The square roots are cut where |E -+ lambda| >= m on the real axis; for
    m > |lambda| all four cuts lie on the two rays |Re E| >= m - |lambda|.
    """
    a = p.m - abs(p.lambda_)
    if a <= 0:
        return []
    return [lambda t: complex(a + t), lambda t: complex(-a - t)]


def count_resonances(p: PhysicalParams, n: int, method: Method,
                     box: SearchBox | None = None, samples_per_edge: int = 2000) -> int:
    """Argument-principle count of residual zeros for one n and method.

    The contour detours around the branch cuts.  For the exact residuals it
    falls back to splitting the box along the real axis when the cut rays
    do not fit the box, which misses zeros lying exactly on the real axis.
    """
    method = Method(method)
    box = box or default_box(p)
    f = residual_function(p, n, method)
    if method is Method.LINEAR:
        return count_roots_in_box(f, box, samples_per_edge, cuts=linear_cuts(p))
    cuts = exact_cuts(p)
    if cuts:
        try:
            return count_roots_in_box(f, box, samples_per_edge, cuts=cuts)
        except DomainError:
            pass
    return count_roots_in_box(f, box, samples_per_edge, real_axis_cut=True)

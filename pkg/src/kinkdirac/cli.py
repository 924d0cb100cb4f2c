"""kinkdirac command line.

Subcommands: potential, resonances, wavefunction, verify, sweep.  Global
flags may appear before or after the subcommand; values come from the
built-in defaults, then a flat JSON ``--config`` file, then the flags.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 verification FAIL.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from datetime import datetime, timezone

import numpy as np

from .errors import ConfigError, DomainError, KinkDiracError
from .kink_model import (HalfLine, Method, PhysicalParams, decay_constant, linear_branch_ok,
                         linear_closed_form, normalize_numerically, second_order_residual,
                         spinor, spinor_grid)
from .oracle_ode import integrate_halfline_path, matching_determinant, proportionality_deviation
from .records import OutputRecord, diagnostics_json, to_csv, to_json
from .resonance import SearchBox, SolverConfig, count_resonances, default_box, search_resonances

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_FAIL = 0, 1, 2, 3

DEFAULTS = {
    "m": 1.0,
    "lambda": 0.2,
    "k": 0.1,
    "g": 0.0,
    "format": "json",
    "out": None,
    "tol": 1e-12,
    "box": None,
}

ODE_THRESHOLD = 1e-6
ORACLE_THRESHOLD = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_globals(p: argparse.ArgumentParser):
    g = p.add_argument_group("global options")
    g.add_argument("--m", type=float, help="mass (default 1)")
    g.add_argument("--lambda", dest="lambda", type=float, help="field strength (default 0.2)")
    g.add_argument("--k", type=float, help="inverse width, non-zero (default 0.1)")
    g.add_argument("--g", type=float, help="point-interaction strength (default 0)")
    g.add_argument("--config", help="flat JSON file with any of these options")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--tol", type=float, help="root residual tolerance (default 1e-12)")
    g.add_argument("--box", help="re_min,re_max,im_min,im_max")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    _add_globals(common)
    top = _Parser(prog="kinkdirac", parents=[common], argument_default=argparse.SUPPRESS,
                  description="Resonances of the 1+1 Dirac equation with V = lambda tanh(kx).")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("potential", parents=[common], argument_default=argparse.SUPPRESS,
                        help="sample V(x) for one or more (lambda, k) pairs")
    sp.add_argument("--pairs", help="lambda:k pairs, e.g. 1:1,1:3,1:5")
    sp.add_argument("--x-min", type=float)
    sp.add_argument("--x-max", type=float)
    sp.add_argument("--points", type=int)

    sp = sub.add_parser("resonances", parents=[common], argument_default=argparse.SUPPRESS,
                        help="find complex resonance energies")
    sp.add_argument("--n", help="quantum numbers, e.g. 0,1,2 or 0-2")
    sp.add_argument("--method", choices=[m.value for m in Method])
    sp.add_argument("--samples", type=int, help="winding-count samples per edge")

    sp = sub.add_parser("wavefunction", parents=[common], argument_default=argparse.SUPPRESS,
                        help="export the closed-form spinor on one half-line")
    sp.add_argument("--n", type=int)
    sp.add_argument("--method", choices=("exact-pos", "exact-neg"))
    sp.add_argument("--energy", help="re,im (skips the root search)")
    sp.add_argument("--x-min", type=float)
    sp.add_argument("--x-max", type=float)
    sp.add_argument("--points", type=int)
    sp.add_argument("--normalize", action="store_true")

    sp = sub.add_parser("verify", parents=[common], argument_default=argparse.SUPPRESS,
                        help="check closed-form roots against the ODE and the integrator")
    sp.add_argument("--n", help="quantum numbers (default 0,1)")
    sp.add_argument("--method", choices=("exact-pos", "exact-neg"))
    sp.add_argument("--perturb", type=float, help="debug: shift every root by this amount")

    sp = sub.add_parser("sweep", parents=[common], argument_default=argparse.SUPPRESS,
                        help="track a resonance while lambda and/or k vary")
    sp.add_argument("--axis", choices=("lambda", "k", "lambda=k"))
    sp.add_argument("--values", help="comma-separated sweep values")
    sp.add_argument("--n", type=int)
    sp.add_argument("--method", choices=("exact-pos", "exact-neg"))
    return top


COMMAND_DEFAULTS = {
    "potential": {"pairs": None, "x_min": -3.0, "x_max": 3.0, "points": 601},
    "resonances": {"n": "0,1,2", "method": "exact-pos", "samples": 2000},
    "wavefunction": {"n": 0, "method": "exact-pos", "energy": None, "x_min": None,
                     "x_max": None, "points": 401, "normalize": False},
    "verify": {"n": "0,1", "method": "exact-pos", "perturb": 0.0},
    "sweep": {"axis": "lambda=k", "values": "0.1,0.05,0.025", "n": 0, "method": "exact-pos"},
}


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve(ns: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags; flags win."""
    cmd = ns.command
    known = dict(DEFAULTS, **COMMAND_DEFAULTS[cmd])
    opts = dict(known)
    explicit = set()
    given = vars(ns)
    if "config" in given:
        conf = _load_config(given["config"])
        unknown = set(conf) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(conf)
        explicit |= set(conf)
    for key, val in given.items():
        if key in ("command", "config"):
            continue
        opts[key] = val
        explicit.add(key)
    opts["command"] = cmd
    opts["_explicit"] = explicit
    return opts


def _params(opts, lam=None, k=None) -> PhysicalParams:
    try:
        return PhysicalParams(float(opts["m"]), float(opts["lambda"] if lam is None else lam),
                              float(opts["k"] if k is None else k), float(opts["g"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def _box(opts, p: PhysicalParams) -> SearchBox:
    spec = opts.get("box")
    if spec is None:
        return default_box(p)
    try:
        vals = [float(v) for v in (spec.split(",") if isinstance(spec, str) else spec)]
    except ValueError as exc:
        raise ConfigError(f"bad --box {spec!r}") from exc
    if len(vals) != 4:
        raise ConfigError("--box needs re_min,re_max,im_min,im_max")
    try:
        return SearchBox(*vals)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _n_list(spec) -> list[int]:
    if isinstance(spec, int):
        return [spec]
    if isinstance(spec, list):
        return [int(v) for v in spec]
    out = []
    try:
        for part in str(spec).split(","):
            part = part.strip()
            if "-" in part:
                a, b = part.split("-")
                out.extend(range(int(a), int(b) + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise ConfigError(f"bad n specification {spec!r}") from exc
    if not out or min(out) < 0:
        raise ConfigError("n must be a non-empty list of non-negative integers")
    return out


def _float_list(spec) -> list[float]:
    if isinstance(spec, list):
        return [float(v) for v in spec]
    try:
        return [float(v) for v in str(spec).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad value list {spec!r}") from exc


def _grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 2 or not lo < hi:
        raise ConfigError("grid needs x_min < x_max and at least 2 points")
    # written so symmetric grids hit x = 0 exactly
    return [(lo * (n - 1 - i) + hi * i) / (n - 1) for i in range(n)]


def _solver(opts) -> SolverConfig:
    try:
        return SolverConfig(tol=float(opts["tol"]))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _inputs(opts) -> dict:
    return {k: v for k, v in sorted(opts.items()) if not k.startswith("_") and k != "command"}


# ---------------------------------------------------------------- commands

def cmd_potential(opts) -> tuple[OutputRecord, int]:
    explicit = opts["_explicit"]
    if opts["pairs"]:
        try:
            pairs = [tuple(float(v) for v in item.split(":")) for item in opts["pairs"].split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --pairs {opts['pairs']!r}") from exc
        if any(len(t) != 2 for t in pairs):
            raise ConfigError("--pairs items must look like lambda:k")
    elif explicit & {"lambda", "k"}:
        pairs = [(float(opts["lambda"]), float(opts["k"]))]
    else:
        pairs = [(1.0, 1.0), (1.0, 3.0), (1.0, 5.0)]
    xs = _grid(float(opts["x_min"]), float(opts["x_max"]), int(opts["points"]))
    rows, curves = [], []
    for lam, k in pairs:
        p = _params(opts, lam, k)
        for x in xs:
            rows.append({"lambda": lam, "k": k, "x": x, "V": lam * math.tanh(k * x)})
        # complex-step derivative at the origin: Im V(ih) / h
        h = 1e-20
        slope = (lam * np.tanh(complex(0.0, k * h))).imag / h
        curves.append({"lambda": p.lambda_, "k": p.k, "slope_at_origin": float(slope)})
    rec = OutputRecord("potential", _inputs(opts), rows, {"curves": curves})
    return rec, EXIT_OK


def _winding(p, n, method, box, samples):
    try:
        return count_resonances(p, n, method, box, samples)
    except KinkDiracError as exc:
        return f"unavailable: {exc}"


def cmd_resonances(opts) -> tuple[OutputRecord, int]:
    p = _params(opts)
    method = Method(opts["method"])
    box = _box(opts, p)
    ns = _n_list(opts["n"])
    report = search_resonances(p, ns, method, box, _solver(opts))
    rows = [{"n": r.n, "E": r.energy, "residual": r.residual, "decay_ok": r.decay_ok,
             "method": r.method.value} for r in report.roots]
    counts = {str(n): _winding(p, n, method, box, int(opts["samples"])) for n in ns}
    found = {str(n): sum(1 for r in report.roots if r.n == n) for n in ns}
    diag = {
        "box": [box.re_min, box.re_max, box.im_min, box.im_max],
        "winding_count": counts,
        "roots_found": found,
        "seed_failures": len(report.failures),
        "notes": list(report.notes),
    }
    if p.lambda_ == 0:
        if method is Method.EXACT_NEG:
            diag["notes"].append("lambda = 0: the x < 0 residual still vanishes at the real "
                                 "energies +-sqrt(m^2 - k^2 (n+1)^2)")
        else:
            diag["notes"].append("lambda = 0: no field, so no resonances are expected")
    mismatch = [n for n in found if isinstance(counts[n], int) and counts[n] != found[n]]
    if mismatch:
        diag["notes"].append(f"winding count differs from roots found for n in {mismatch} "
                             "(possible multiplicity or missed root)")
    return OutputRecord("resonances", _inputs(opts), rows, diag), EXIT_OK


def _side(method: Method) -> HalfLine:
    return HalfLine.NEGATIVE if method is Method.EXACT_NEG else HalfLine.POSITIVE


def _parse_energy(spec) -> complex:
    if isinstance(spec, dict):
        return complex(spec["re"], spec["im"])
    try:
        parts = [float(v) for v in str(spec).split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --energy {spec!r}") from exc
    if len(parts) != 2:
        raise ConfigError("--energy needs re,im")
    return complex(*parts)


def cmd_wavefunction(opts) -> tuple[OutputRecord, int]:
    p = _params(opts)
    method = Method(opts["method"])
    side = _side(method)
    n = int(opts["n"])
    diag = {}
    if opts["energy"] is not None:
        E = _parse_energy(opts["energy"])
    else:
        roots = search_resonances(p, [n], method, _box(opts, p), _solver(opts)).roots
        if not roots:
            raise ArithmeticError(f"no {method.value} root for n={n} in the search box")
        E = roots[0].energy
        diag["root_count"] = len(roots)
    kappa, ok = decay_constant(p, E, side)
    diag["energy"] = E
    diag["decay_ok"] = ok
    sgn = 1.0 if side is HalfLine.POSITIVE else -1.0
    reach = max(10.0 / p.kk, 20.0 / kappa.real) if ok else 10.0 / p.kk
    npts = int(opts["points"])
    lo = opts["x_min"] if opts["x_min"] is not None else (reach / npts if sgn > 0 else -reach)
    hi = opts["x_max"] if opts["x_max"] is not None else (reach if sgn > 0 else -reach / npts)
    xs = _grid(float(lo), float(hi), npts)
    samples = spinor_grid(p, E, n, xs, side)
    scale = 1.0 + 0j
    if opts["normalize"]:
        scale = normalize_numerically(samples, tails="right" if sgn > 0 else "left")
        diag["normalization_scale"] = scale
    diag["on_shell"] = samples[0].on_shell
    rows = [{"x": s.x, "phi": scale * s.phi, "theta": scale * s.theta,
             "abs_phi2": abs(scale * s.phi) ** 2} for s in samples]
    return OutputRecord("wavefunction", _inputs(opts), rows, diag), EXIT_OK


def verify_root(p: PhysicalParams, E: complex, n: int, method: Method) -> dict:
    """ODE residual, oracle proportionality and |W| for one energy."""
    side = _side(method)
    sgn = 1.0 if side is HalfLine.POSITIVE else -1.0
    kk = p.kk
    xs_ode = sgn * np.linspace(0.1, 5.0, 200) / kk
    ode = second_order_residual(p, E, lambda x: spinor(p, E, n, x, side), xs_ode)
    row = {"n": n, "E": E, "ode_residual": ode}
    try:
        xs = sgn * np.linspace(0.2, 3.0, 100) / kk
        path = integrate_halfline_path(p, E, side, x_eval=xs)
        closed = [spinor(p, E, n, x, side).phi for x in path.x]
        row["oracle_deviation"] = proportionality_deviation(path.phi, closed)
        row["abs_wronskian"] = abs(matching_determinant(p, E).wronskian)
    except KinkDiracError as exc:
        row["oracle_deviation"] = None
        row["abs_wronskian"] = None
        row["note"] = str(exc)
    passed = (ode < ODE_THRESHOLD and row["oracle_deviation"] is not None
              and row["oracle_deviation"] < ORACLE_THRESHOLD)
    row["status"] = "PASS" if passed else "FAIL"
    return row


def cmd_verify(opts) -> tuple[OutputRecord, int]:
    p = _params(opts)
    method = Method(opts["method"])
    ns = _n_list(opts["n"])
    shift = float(opts["perturb"])
    roots = search_resonances(p, ns, method, _box(opts, p), _solver(opts)).roots
    rows = [verify_root(p, r.energy + shift, r.n, method) for r in roots]
    diag = {"thresholds": {"ode_residual": ODE_THRESHOLD, "oracle_deviation": ORACLE_THRESHOLD}}
    if not roots:
        diag["note"] = "no roots: nothing to verify"
    failed = [r for r in rows if r["status"] != "PASS"]
    diag["overall"] = "FAIL" if failed else "PASS"
    return OutputRecord("verify", _inputs(opts), rows, diag), EXIT_FAIL if failed else EXIT_OK


def cmd_sweep(opts) -> tuple[OutputRecord, int]:
    axis = opts["axis"]
    values = _float_list(opts["values"])
    if not values:
        raise ConfigError("sweep needs at least one value")
    if axis in ("k", "lambda=k") and any(v == 0 for v in values):
        raise ConfigError("sweep values for k must be non-zero")
    method = Method(opts["method"])
    n = int(opts["n"])
    rows = []
    for v in values:
        lam = v if axis in ("lambda", "lambda=k") else float(opts["lambda"])
        k = v if axis in ("k", "lambda=k") else float(opts["k"])
        p = _params(opts, lam, k)
        e_lin = linear_closed_form(p, n)
        base = {"value": v, "lambda": lam, "k": k, "n": n, "e_linear": e_lin,
                "linear_branch_ok": linear_branch_ok(p, e_lin, n)}
        try:
            roots = search_resonances(p, [n], method, _box(opts, p), _solver(opts)).roots
        except KinkDiracError as exc:
            rows.append(dict(base, E=None, residual=None, decay_ok=None,
                             abs_diff_linear=None, status=f"error: {exc}"))
            continue
        if not roots:
            rows.append(dict(base, E=None, residual=None, decay_ok=None,
                             abs_diff_linear=None, status="no roots"))
        for r in roots:
            rows.append(dict(base, E=r.energy, residual=r.residual, decay_ok=r.decay_ok,
                             abs_diff_linear=abs(r.energy - e_lin), status="ok"))
    return OutputRecord("sweep", _inputs(opts), rows, {"axis": axis}), EXIT_OK


COMMANDS = {
    "potential": cmd_potential,
    "resonances": cmd_resonances,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def run(argv=None) -> tuple[OutputRecord | None, int]:
    ns = build_parser().parse_args(argv)
    opts = resolve(ns)
    if opts["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    _params(opts)       # rejects k = 0 and bad masses before any work
    t0 = time.perf_counter()
    rec, code = COMMANDS[opts["command"]](opts)
    rec.diagnostics["timestamp"] = {
        "utc": datetime.now(timezone.utc).isoformat(),
        "elapsed_s": time.perf_counter() - t0,
    }
    text = to_csv(rec) if opts["format"] == "csv" else to_json(rec)
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if opts["format"] == "csv":
        sys.stderr.write(diagnostics_json(rec))
    return rec, code


def main(argv=None) -> int:
    try:
        _, code = run(argv)
        return code
    except UsageError as exc:
        print(f"kinkdirac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError) as exc:
        print(f"kinkdirac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KinkDiracError, ArithmeticError, ValueError) as exc:
        print(f"kinkdirac: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

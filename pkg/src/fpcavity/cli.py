"""Command-line surface: kernels, lattice sums, verification, Dicke sweeps.

Four subcommands (`xi`, `kernel`, `verify`, `dicke`) emit CSV or JSON with
fixed schemas.  Runs are reproducible: identical argv (and seed) produce
byte-identical output.  Exit codes: 0 success / all checks pass, 1 at least
one verification failure, 2 argument or domain error.

The --tol-abs/--tol-rel/--max-subdivisions flags tune internal quadrature
and series accuracy; verification pass thresholds are pinned per check and
are not affected by them.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .coulomb import Separation, kernel_e
from .dicke import DickeParams, ground_state, mean_field, spectrum_scan
from .errors import ConvergenceError, DomainError
from .radiation import kernel_d, kernel_d_spectral
from .specfun import Tolerance, xi
from .verify import SUITE_NAMES, IdentityReport, VerifyConfig, run_suite

__all__ = ["dispatch", "emit_report", "parse_report", "main"]

_CSV_COLUMNS = ("id", "params", "abs_err", "rel_err", "pass",
                "tol_abs", "tol_rel")


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def emit_report(reports, fmt: str, suite: str = "adhoc", seed: int = 0,
                warnings=()) -> bytes:
    """Serialize identity reports.

    JSON: {"suite", "seed", "all_pass", "warnings", "checks": [{"id",
    "params", "abs_err", "rel_err", "pass", "tol_abs", "tol_rel"}]}.
    CSV: one row per check with the same columns (params JSON-encoded),
    header row first, 17-significant-digit decimals.
    """
    if fmt == "json":
        doc = {
            "suite": suite,
            "seed": seed,
            "all_pass": all(r.passed for r in reports),
            "warnings": list(warnings),
            "checks": [
                {
                    "id": r.check_id,
                    "params": r.params,
                    "abs_err": r.abs_err,
                    "rel_err": r.rel_err,
                    "pass": r.passed,
                    "tol_abs": r.tol_used.abs_tol,
                    "tol_rel": r.tol_used.rel_tol,
                }
                for r in reports
            ],
        }
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for r in reports:
            writer.writerow([
                r.check_id,
                json.dumps(r.params, sort_keys=True),
                _g17(r.abs_err),
                _g17(r.rel_err),
                "true" if r.passed else "false",
                _g17(r.tol_used.abs_tol),
                _g17(r.tol_used.rel_tol),
            ])
        return buf.getvalue().encode()
    raise DomainError(f"unknown format {fmt!r}")


def parse_report(data: bytes, fmt: str) -> list[IdentityReport]:
    """Inverse of emit_report for the fields present in the schema."""
    def build(check):
        return IdentityReport(
            check_id=check["id"], params=check["params"], lhs=None, rhs=None,
            abs_err=float(check["abs_err"]), rel_err=float(check["rel_err"]),
            passed=bool(check["pass"]),
            tol_used=Tolerance(abs_tol=float(check["tol_abs"]),
                               rel_tol=float(check["tol_rel"])))

    if fmt == "json":
        doc = json.loads(data.decode())
        return [build(c) for c in doc["checks"]]
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(data.decode())))
        out = []
        for row in rows[1:]:
            rec = dict(zip(_CSV_COLUMNS, row))
            out.append(build({
                "id": rec["id"],
                "params": json.loads(rec["params"]),
                "abs_err": rec["abs_err"],
                "rel_err": rec["rel_err"],
                "pass": rec["pass"] == "true",
                "tol_abs": rec["tol_abs"],
                "tol_rel": rec["tol_rel"],
            }))
        return out
    raise DomainError(f"unknown format {fmt!r}")


def _write(ns, data: bytes):
    if ns.output:
        with open(ns.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())


def _tol(ns) -> Tolerance:
    return Tolerance(abs_tol=ns.tol_abs, rel_tol=ns.tol_rel,
                     max_subdivisions=ns.max_subdivisions)


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode()


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, str) else _g17(c) for c in row])
    return buf.getvalue().encode()


def _cmd_xi(ns) -> int:
    value = xi(ns.u, ns.v, _tol(ns))
    if ns.format is None and ns.output is None:
        # bare value on stdout for interactive use
        sys.stdout.write(_g17(value) + "\n")
        return 0
    if (ns.format or "json") == "json":
        data = _json_bytes({"u": ns.u, "v": ns.v, "value": value})
    else:
        data = _csv_bytes(("u", "v", "value"), [(ns.u, ns.v, value)])
    _write(ns, data)
    return 0


def _cmd_kernel(ns) -> int:
    sep = Separation(u=ns.u, v=ns.v, phi=ns.phi)
    tol = _tol(ns)
    if ns.family == "E":
        if ns.spectral:
            raise DomainError("--spectral applies to the D family only")
        mat = kernel_e(ns.sign, sep, tol).m
    else:
        if ns.spectral:
            if ns.sign != "plus":
                raise DomainError("the spectral route evaluates D plus only")
            mat = kernel_d_spectral(sep, ns.eps, tol).m
        else:
            mat = kernel_d(ns.sign, sep, tol).m
    if ns.format == "json":
        data = _json_bytes({"family": ns.family, "sign": ns.sign,
                            "u": ns.u, "v": ns.v, "phi": ns.phi,
                            "matrix": mat.tolist()})
    else:
        data = _csv_bytes(("x", "y", "z"), [tuple(row) for row in mat])
    _write(ns, data)
    return 0


def _cmd_verify(ns) -> int:
    cfg = VerifyConfig(seed=ns.seed)
    summary = run_suite(ns.target, cfg, _tol(ns))
    data = emit_report(summary.reports, ns.format, suite=summary.suite,
                       seed=summary.seed, warnings=summary.warnings)
    _write(ns, data)
    for w in summary.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0 if summary.all_pass else 1


def _cmd_dicke(ns) -> int:
    params = DickeParams(omega_a=ns.omega_a, omega_c=ns.omega_c,
                         y=ns.y if ns.y is not None else 0.0,
                         n_atoms=ns.n_atoms, fock_cutoff=ns.cutoff)
    if ns.target == "ground":
        if ns.y is None:
            raise DomainError("ground requires --y")
        res = ground_state(params)
        doc = {"y": ns.y, "energy": res.energy,
               "photon_number": res.photon_number,
               "sz_expect": res.sz_expect, "parity": res.parity,
               "cutoff_converged": res.cutoff_converged}
        data = _json_bytes(doc) if ns.format == "json" else _csv_bytes(
            ("y", "energy", "photon_number", "sz_expect", "parity",
             "cutoff_converged"),
            [(ns.y, res.energy, res.photon_number, res.sz_expect,
              res.parity, str(res.cutoff_converged).lower())])
        _write(ns, data)
        return 0
    if ns.target == "meanfield":
        if ns.y is None:
            raise DomainError("meanfield requires --y")
        res = mean_field(params)
        doc = {"y": ns.y, "y_c": res.y_c,
               "order_parameter_sq_per_atom": res.order_parameter_sq_per_atom,
               "energy_per_atom": res.energy_per_atom}
        data = _json_bytes(doc) if ns.format == "json" else _csv_bytes(
            ("y", "y_c", "order_parameter_sq_per_atom", "energy_per_atom"),
            [(ns.y, res.y_c, res.order_parameter_sq_per_atom,
              res.energy_per_atom)])
        _write(ns, data)
        return 0
    # scan
    if ns.steps < 1:
        raise DomainError("--steps must be >= 1")
    y_grid = np.linspace(ns.y_min, ns.y_max, ns.steps)
    rows = spectrum_scan(params, [float(y) for y in y_grid])
    if ns.format == "json":
        data = _json_bytes([{"y": r.y, "energy": r.energy,
                             "photon_number": r.photon_number,
                             "gap": r.gap, "parity": r.parity}
                            for r in rows])
    else:
        data = _csv_bytes(("y", "energy", "photon_number", "gap", "parity"),
                          [(r.y, r.energy, r.photon_number, r.gap, r.parity)
                           for r in rows])
    _write(ns, data)
    return 0


def _add_common(p, seed=False, bare_value=False):
    p.add_argument("--tol-abs", type=float, default=1e-10,
                   help="absolute accuracy of internal quadratures/series")
    p.add_argument("--tol-rel", type=float, default=1e-10,
                   help="relative accuracy of internal quadratures/series")
    p.add_argument("--max-subdivisions", type=int, default=4000,
                   help="adaptive quadrature panel-split budget")
    if bare_value:
        p.add_argument("--format", choices=("json", "csv"), default=None,
                       help="structured output format (bare value if omitted)")
    else:
        p.add_argument("--format", choices=("json", "csv"), default="json",
                       help="output format")
    p.add_argument("--output", default=None,
                   help="output file path (stdout if omitted)")
    if seed:
        p.add_argument("--seed", type=int, default=42,
                       help="seed for randomized grids")


def _build_parser() -> argparse.ArgumentParser:
    fmt_cls = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="fpcavity",
        description="Mirror-cavity interaction kernels, their identity "
                    "verification suite, and Dicke-model sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_xi = sub.add_parser("xi", help="evaluate the inverse-cube lattice sum",
                          formatter_class=fmt_cls)
    p_xi.add_argument("--u", type=float, required=True,
                      help="axial argument (2-periodic)")
    p_xi.add_argument("--v", type=float, required=True,
                      help="transverse argument, >= 0")
    _add_common(p_xi, bare_value=True)
    p_xi.set_defaults(func=_cmd_xi)

    p_k = sub.add_parser("kernel", help="evaluate an interaction kernel",
                         formatter_class=fmt_cls)
    p_k.add_argument("--family", choices=("E", "D"), required=True,
                     help="E: Coulomb image kernel; D: quadratic "
                          "displacement-field kernel")
    p_k.add_argument("--sign", choices=("plus", "minus"), default="plus",
                     help="kernel variant")
    p_k.add_argument("--u", type=float, required=True,
                     help="axial separation over L")
    p_k.add_argument("--v", type=float, required=True,
                     help="transverse separation over L")
    p_k.add_argument("--phi", type=float, default=0.0,
                     help="azimuth of the transverse separation")
    p_k.add_argument("--spectral", action="store_true",
                     help="use the regulated spectral route (D family)")
    p_k.add_argument("--eps", type=float, default=0.05,
                     help="spectral regulator")
    _add_common(p_k)
    p_k.set_defaults(func=_cmd_kernel)

    p_v = sub.add_parser("verify", help="run the identity verification suite",
                         formatter_class=fmt_cls)
    p_v.add_argument("target", nargs="?", choices=SUITE_NAMES, default="all")
    _add_common(p_v, seed=True)
    p_v.set_defaults(func=_cmd_verify)

    p_d = sub.add_parser("dicke", help="collective spin-boson model tools",
                         formatter_class=fmt_cls)
    p_d.add_argument("target", choices=("ground", "scan", "meanfield"))
    p_d.add_argument("--omega-a", type=float, default=1.0,
                     help="two-level splitting")
    p_d.add_argument("--omega-c", type=float, default=1.0,
                     help="mode frequency")
    p_d.add_argument("--y", type=float, default=None,
                     help="coupling (ground/meanfield)")
    p_d.add_argument("--y-min", type=float, default=0.0,
                     help="scan grid start")
    p_d.add_argument("--y-max", type=float, default=3.0,
                     help="scan grid end")
    p_d.add_argument("--steps", type=int, default=13,
                     help="scan grid points")
    p_d.add_argument("--n-atoms", type=int, default=8,
                     help="number of two-level systems")
    p_d.add_argument("--cutoff", type=int, default=60,
                     help="boson Fock-space cutoff")
    _add_common(p_d)
    p_d.set_defaults(func=_cmd_dicke)
    return parser


def dispatch(argv) -> int:
    """Parse argv, run the requested computation, return the exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return ns.func(ns)
    except (DomainError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

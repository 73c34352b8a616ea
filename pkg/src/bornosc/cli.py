"""Command-line front end: every computation as a subcommand emitting a table.

Output is machine-readable CSV (comma separator, '#'-prefixed metadata lines,
then a header line) or a single JSON document {"columns", "rows",
"metadata"}.  Floating-point cells are printed with 17 significant digits,
so identical invocations produce byte-identical output.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 input-data
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .core import DomainError, EnergyValue, OscParams, ScaledPhasePoint, born_hamiltonian, level_qmax
from .classical import (
    IntegrationError,
    born_energy_series,
    integrate,
    period_asymptotic,
    period_elliptic,
    period_numeric,
)
from .quantum import FockTruncation, b_to_energy, spectrum, weyl_spectrum_born
from .semiclassical import (
    ZerosFormatError,
    asymptotic_born,
    compare_zeros,
    load_bundled_zeros,
    load_zeros,
    logcosh_asymptotic,
    weyl_solve_born,
    weyl_solve_logcosh,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_DATA = 4

TOL_RANGE = (1e-13, 1e-3)


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError("row arity does not match header")


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _json_cell(x):
    if x is None:
        return None
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def write_csv(table: ResultTable, fh) -> None:
    for key, value in table.metadata.items():
        fh.write(f"# {key} = {value}\n")
    fh.write(",".join(table.columns) + "\n")
    for row in table.rows:
        fh.write(",".join(_fmt_cell(c) for c in row) + "\n")


def write_json(table: ResultTable, fh) -> None:
    doc = {
        "columns": table.columns,
        "rows": [[_json_cell(c) for c in row] for row in table.rows],
        "metadata": {k: (str(v) if not isinstance(v, (int, float)) else v)
                     for k, v in table.metadata.items()},
    }
    json.dump(doc, fh, indent=2)
    fh.write("\n")


def _meta(args, **extra) -> dict:
    md = {
        "command": args.command,
        "version": __version__,
        "epsilon": f"{args.epsilon:.17g}",
        "tol": f"{args.tol:.17g}",
    }
    md.update({k: v for k, v in extra.items()})
    md["argv"] = " ".join(sys.argv[1:])
    return md


def cmd_classical_trajectory(args) -> ResultTable:
    params = OscParams(args.epsilon)
    s0 = ScaledPhasePoint(qt=args.q0, pt=args.p0)
    t_eval = np.linspace(0.0, args.t_end, args.samples)
    traj = integrate(s0, params, args.t_end, tol=args.tol, force=args.force,
                     t_eval=t_eval)
    energy = born_energy_series(traj, params)
    e0 = energy[0]
    drift = np.abs(energy - e0) / max(abs(e0), 1.0)
    rows = [[traj.times[i], traj.q[i], traj.p[i], energy[i], drift[i]]
            for i in range(len(traj))]
    return ResultTable(
        columns=["t", "qt", "pt", "energy", "drift"], rows=rows,
        metadata=_meta(args, q0=f"{args.q0:.17g}", p0=f"{args.p0:.17g}",
                       force=f"{args.force:.17g}",
                       max_energy_drift=f"{traj.max_energy_drift:.17g}"))


def cmd_period_scan(args) -> ResultTable:
    params = OscParams(args.epsilon)
    energies = np.geomspace(args.e_from, args.e_to, args.count)
    rows = []
    for e in energies:
        ev = EnergyValue(float(e))
        q_m = level_qmax(ev, params)
        t_num = period_numeric(ev, params, tol=args.tol).period
        t_ell = period_elliptic(ev, params).period
        t_asy = period_asymptotic(q_m).period
        rows.append([e, q_m, t_num, t_ell, t_asy,
                     abs(t_num - t_ell) / t_ell, abs(t_ell - t_asy) / t_ell])
    return ResultTable(
        columns=["energy", "qmax", "T_numeric", "T_elliptic", "T_asymptotic",
                 "rel_gap_num_ell", "rel_gap_ell_asym"],
        rows=rows, metadata=_meta(args))


def cmd_spectrum(args) -> ResultTable:
    params = OscParams(args.epsilon)
    trunc = FockTruncation(args.nmax)
    if args.method == "weyl-grid":
        sp = weyl_spectrum_born(params, trunc, tol=max(args.tol, 1e-12))
    else:
        sp = spectrum(params, trunc, tol=max(args.tol, 1e-12),
                      only_converged=not args.all)
    rows = [[i, e.sector, e.Bprime, b_to_energy(e.Bprime, params), e.converged]
            for i, e in enumerate(sp.entries)]
    return ResultTable(
        columns=["index", "sector", "Bprime", "energy", "converged"],
        rows=rows, metadata=_meta(args, method=args.method, nmax=args.nmax))


def cmd_semiclassical(args) -> ResultTable:
    params = OscParams(args.epsilon)
    rows = []
    for n in range(args.n_from, args.n_to + 1):
        try:
            if args.hamiltonian == "born":
                est = weyl_solve_born(n, params, method=args.method)
                asy = asymptotic_born(n, params)
            else:
                est = weyl_solve_logcosh(n, params)
                asy = logcosh_asymptotic(n, params)
            gap = abs(est.energy_estimate - asy.energy_estimate) / abs(est.energy_estimate)
            rows.append([n, est.energy_estimate, asy.energy_estimate,
                         est.residual, gap])
        except DomainError as exc:
            print(f"warning: n={n}: {exc}", file=sys.stderr)
            rows.append([n, None, None, None, None])
    return ResultTable(
        columns=["n", "E_area", "E_asymptotic", "residual", "rel_gap"],
        rows=rows,
        metadata=_meta(args, hamiltonian=args.hamiltonian, method=args.method))


def cmd_zeta_compare(args) -> ResultTable:
    if args.zeros is None:
        table = load_bundled_zeros()
        source = "bundled"
    else:
        table = load_zeros(args.zeros)
        source = args.zeros
    rows_cmp = compare_zeros(table, args.n_from, args.n_to)
    rows = [[r.N, r.y_true, r.y_est, r.rel_err] for r in rows_cmp]
    median = float(np.median([r.rel_err for r in rows_cmp]))
    return ResultTable(
        columns=["N", "y_true", "y_est", "rel_err"], rows=rows,
        metadata=_meta(args, zeros=source,
                       median_rel_err=f"{median:.17g}"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bornosc",
        description="Born oscillator: classical periods, quantum spectra, "
                    "semiclassical estimates, zeta-zero comparison.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--epsilon", type=float, default=1.0,
                       help="nonlinearity scale eps (default 1.0)")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="numerical tolerance (default 1e-10)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, metavar="PATH",
                       help="write to PATH instead of standard output")

    p = sub.add_parser("classical-trajectory", help="integrate one orbit")
    common(p)
    p.add_argument("--q0", type=float, required=True, help="initial qt")
    p.add_argument("--p0", type=float, default=0.0, help="initial pt")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--force", type=float, default=0.0, help="constant force F")
    p.add_argument("--samples", type=int, default=201)

    p = sub.add_parser("period-scan", help="periods over an energy grid")
    common(p)
    p.add_argument("--e-from", type=float, required=True)
    p.add_argument("--e-to", type=float, required=True)
    p.add_argument("--count", type=int, default=25)

    p = sub.add_parser("spectrum", help="Fock-sector or Weyl-grid spectrum")
    common(p)
    p.add_argument("--nmax", type=int, default=64)
    p.add_argument("--method", choices=("fock", "weyl-grid"), default="fock")
    p.add_argument("--all", action="store_true",
                   help="include unconverged eigenvalues (fock method)")

    p = sub.add_parser("semiclassical", help="area-rule eigenvalue estimates")
    common(p)
    p.add_argument("--hamiltonian", choices=("born", "logcosh"), default="born")
    p.add_argument("--n-from", type=int, default=0)
    p.add_argument("--n-to", type=int, default=20)
    p.add_argument("--method", choices=("quadrature", "elliptic", "asymptotic"),
                   default="quadrature", help="area route for E_area")

    p = sub.add_parser("zeta-compare", help="estimates vs a zeros table")
    common(p)
    p.add_argument("--zeros", default=None, metavar="PATH",
                   help="zeros table file (default: bundled first 100)")
    p.add_argument("--n-from", type=int, default=10)
    p.add_argument("--n-to", type=int, default=100)

    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if not (args.epsilon > 0.0 and math.isfinite(args.epsilon)):
        parser.error(f"--epsilon must be positive, got {args.epsilon}")
    if not (TOL_RANGE[0] <= args.tol <= TOL_RANGE[1]):
        parser.error(f"--tol must lie in [{TOL_RANGE[0]}, {TOL_RANGE[1]}], got {args.tol}")
    if args.command == "classical-trajectory":
        if not (args.t_end > 0.0):
            parser.error("--t-end must be positive")
        if args.samples < 2:
            parser.error("--samples must be at least 2")
    elif args.command == "period-scan":
        if not (0.0 < args.e_from and 0.0 < args.e_to):
            parser.error("energies must be positive")
        if args.count < 2:
            parser.error("--count must be at least 2")
    elif args.command == "spectrum":
        if args.nmax < 8:
            parser.error("--nmax must be at least 8")
        if args.method == "weyl-grid" and args.nmax > 60:
            parser.error("--method weyl-grid supports --nmax up to 60")
    elif args.command == "semiclassical":
        if args.n_from < 0 or args.n_to < args.n_from:
            parser.error("need 0 <= n-from <= n-to")
        if args.hamiltonian == "logcosh" and args.method != "quadrature":
            parser.error("the logcosh area has no elliptic/asymptotic route; use quadrature")
    elif args.command == "zeta-compare":
        if args.n_from < 3:
            parser.error("zeta comparison requires --n-from >= 3")
        if args.n_to < args.n_from:
            parser.error("need n-from <= n-to")


_DISPATCH = {
    "classical-trajectory": cmd_classical_trajectory,
    "period-scan": cmd_period_scan,
    "spectrum": cmd_spectrum,
    "semiclassical": cmd_semiclassical,
    "zeta-compare": cmd_zeta_compare,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)

    try:
        table = _DISPATCH[args.command](args)
    except (ZerosFormatError, OSError, IndexError) as exc:
        print(f"bornosc: input data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"bornosc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, ArithmeticError, RuntimeError) as exc:
        print(f"bornosc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    writer = write_csv if args.format == "csv" else write_json
    if args.output is None:
        writer(table, sys.stdout)
    else:
        with open(args.output, "w", encoding="ascii") as fh:
            writer(table, fh)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: every command writes one table (CSV or JSON).

Exit codes: 0 success, 1 a ``verify`` check or a solver failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np
import scipy

from . import __version__
from .errors import ACFError, InvalidArgument

MESH_BOUNDS = (16, 2**14)
GRID_BOUNDS = (2, 1024)
POINTS_BOUNDS = (3, 10**5)


def _bounded_int(lo, hi):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"must lie in [{lo}, {hi}], got {v}")
        return v

    return parse


_PI_ANGLE = re.compile(r"^(?:(?P<num>\d+(?:\.\d*)?)\*?)?pi(?:/(?P<den>\d+(?:\.\d*)?))?$")


def _angle(text):
    """A float, or a multiple of pi written like 'pi/3', '2pi/3' or '2*pi/3'."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_ANGLE.match(text.replace(" ", "").lower())
    if m is None:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    num = float(m["num"]) if m["num"] else 1.0
    den = float(m["den"]) if m["den"] else 1.0
    if den == 0:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    return num * math.pi / den


def _radius(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"r must lie in (0, 1], got {v}")
    return v


# ---------------------------------------------------------------- commands


def _grid(args):
    return {"n_rho": args.n_rho, "n_phi": args.n_phi, "n_theta": args.n_theta}


def cmd_eigen_cap(args):
    from .euclid_eigen import EuclidCap, cap_eigenvalue

    sol = cap_eigenvalue(EuclidCap(args.phi0, args.n), args.mesh)
    return [{"phi0": args.phi0, "n": args.n, "lambda": sol.lam, "alpha": sol.alpha, "est_error": sol.est_error, "mesh": sol.mesh}]


def cmd_eigen_sl(args):
    from .heis_eigen import PhiInterval, sl_eigen

    sol = sl_eigen(PhiInterval(args.phi0, args.phi1), args.mesh)
    return [{"phi0": args.phi0, "phi1": args.phi1, "lambda": sol.lam, "alpha": sol.alpha, "est_error": sol.est_error, "mesh": sol.mesh}]


def cmd_bridge(args):
    from .heis_eigen import euclid_bridge

    rows = []
    for phi0 in args.phi0:
        res = euclid_bridge(phi0, args.mesh)
        rows.append({"phi0": phi0, "lambda_h": res.lambda_h, "lambda_e": res.lambda_e, "ratio": res.ratio})
    return rows


def cmd_phi(args):
    from .euclid_acf import TwoPhasePair, cap_pair, half_space_field, phi_functional, phi_log_derivative

    if args.pair == "halfspace":
        pair = TwoPhasePair(half_space_field((0, 0, 1), 1), half_space_field((0, 0, 1), -1))
    else:
        pair = cap_pair(args.phi0, args.mesh)
    grid = _grid(args)
    logd = phi_log_derivative(pair, **grid)
    return [{"pair": args.pair, "r": r, "phi": phi_functional(pair, r, **grid), "log_derivative_at_1": logd} for r in args.r]


def cmd_jbeta(args):
    from .heis_mono import j_beta, j_log_derivative, linear_pair, t_pair

    if args.pair == "linear":
        pair = linear_pair(args.a, 0.0 if args.b is None else args.b)
    else:
        pair = t_pair(args.a, 1.0 if args.b is None else args.b)
    grid = _grid(args)
    logd = j_log_derivative(pair, args.beta, **grid)
    return [
        {"pair": args.pair, "beta": args.beta, "r": r, "j_beta": j_beta(pair, r, args.beta, **grid), "log_derivative_at_1": logd}
        for r in args.r
    ]


def cmd_quotient(args):
    from .heis_mono import boundary_quotient, linear_part, t_part

    u = linear_part(args.a, args.b) if args.field == "linear" else t_part(args.a)
    return [{"field": u.name, "quotient": boundary_quotient(u, **_grid(args))}]


def cmd_psi_table(args):
    from .euclid_eigen import psi

    # the uniform grid on [0, 1] without its endpoints, where psi is undefined
    s = np.linspace(0.0, 1.0, args.points)[1:-1]
    return [{"s": float(v), "psi": psi(float(v))} for v in s]


def cmd_verify(args):
    from .verify import run

    return [r.as_dict() for r in run(args.criterion)]


COMMANDS = {
    "eigen-cap": cmd_eigen_cap,
    "eigen-sl": cmd_eigen_sl,
    "bridge": cmd_bridge,
    "phi": cmd_phi,
    "jbeta": cmd_jbeta,
    "quotient": cmd_quotient,
    "psi-table": cmd_psi_table,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    from .quadrature import DEFAULT_N_PHI, DEFAULT_N_RHO, DEFAULT_N_THETA

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    mesh = argparse.ArgumentParser(add_help=False)
    mesh.add_argument("--mesh", type=_bounded_int(*MESH_BOUNDS), default=1024, help=f"initial cells, {MESH_BOUNDS}")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--n-rho", type=_bounded_int(*GRID_BOUNDS), default=DEFAULT_N_RHO)
    grid.add_argument("--n-phi", type=_bounded_int(*GRID_BOUNDS), default=DEFAULT_N_PHI)
    grid.add_argument("--n-theta", type=_bounded_int(*GRID_BOUNDS), default=DEFAULT_N_THETA)
    radii = argparse.ArgumentParser(add_help=False)
    radii.add_argument("--r", type=_radius, nargs="+", default=[0.25, 0.5, 0.75, 1.0])

    p = argparse.ArgumentParser(prog="acfheis", description="ACF monotonicity computations in R^3 and H^1.")
    p.add_argument("--version", action="version", version=f"acfheis {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eigen-cap", parents=[common, mesh], help="Euclidean spherical-cap eigenvalue")
    s.add_argument("--phi0", type=_angle, required=True)
    s.add_argument("--n", type=_bounded_int(3, 64), default=3)

    s = sub.add_parser("eigen-sl", parents=[common, mesh], help="phi-interval eigenvalue on the Korányi sphere")
    s.add_argument("--phi0", type=_angle, required=True)
    s.add_argument("--phi1", type=_angle, required=True)

    s = sub.add_parser("bridge", parents=[common, mesh], help="lambda_h / lambda_e on caps (0, phi0)")
    s.add_argument("--phi0", type=_angle, nargs="+", required=True)

    s = sub.add_parser("phi", parents=[common, mesh, grid, radii], help="Euclidean functional Phi(r)")
    s.add_argument("--pair", choices=("halfspace", "cap"), default="halfspace")
    s.add_argument("--phi0", type=_angle, default=math.pi / 2, help="cap angle for --pair cap")

    s = sub.add_parser("jbeta", parents=[common, grid, radii], help="Heisenberg functional J_beta(r)")
    s.add_argument("--pair", choices=("linear", "t"), default="linear")
    s.add_argument("--a", type=float, default=1.0, help="x coefficient, or the t+ coefficient")
    s.add_argument("--b", type=float, default=None, help="y coefficient (default 0), or the t- coefficient (default 1)")
    s.add_argument("--beta", type=float, default=4.0)

    s = sub.add_parser("quotient", parents=[common, grid], help="boundary quotient of a test field")
    s.add_argument("--field", choices=("linear", "t"), default="linear")
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--b", type=float, default=0.0)

    s = sub.add_parser("psi-table", parents=[common], help="the cap lower-bound function psi(s)")
    s.add_argument("--points", type=_bounded_int(*POINTS_BOUNDS), default=101)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--criterion", type=_bounded_int(1, 12), nargs="+", help="subset of checks (default: all)")
    return p


# ---------------------------------------------------------------- output


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def to_csv(rows) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for row in rows:
            w.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_json(command, config, rows) -> str:
    doc = {
        "command": command,
        "config": config,
        "rows": [{k: _json_safe(v) for k, v in row.items()} for row in rows],
        "versions": {"acfheis": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("command", "out", "format")}
    try:
        rows = COMMANDS[args.command](args)
    except InvalidArgument as exc:
        parser.exit(2, f"acfheis {args.command}: error: {exc}\n")
    except ACFError as exc:
        parser.exit(1, f"acfheis {args.command}: failed: {exc}\n")
    text = to_json(args.command, config, rows) if args.format == "json" else to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify":
        from .verify import CheckRow, format_table

        table = format_table([CheckRow(**r) for r in rows])
        print(table, file=sys.stderr if not args.out else sys.stdout)
        return 0 if all(r["passed"] for r in rows) else 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

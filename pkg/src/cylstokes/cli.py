"""Command-line front end: ``cylstokes {geometry,constants,coeffs,field,rates,validate}``.

Exit codes: 0 success, 1 failed validation, 2 bad arguments, 3 I/O failure,
4 degenerate configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import noslip
from .assembly import BACKGROUNDS, boundary_integrals, eval_flow, parse_background, rigid_constants, solve_flow
from .errors import ConfigurationError, ConvergenceError, DegeneracyError, DomainError
from .geometry import cart_to_bipolar, inside_disks, make_geometry
from .singular import singular_constants
from .validation import QUANTITIES, fit_rate, sup_norms

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_IO, EXIT_DEGENERATE = 0, 1, 2, 3, 4

FIELD_COLUMNS = ("x", "y", "zeta", "theta", "inside_mask", "ux", "uy", "p",
                 "Exx", "Exy", "Eyy", "Sxx", "Sxy", "Syy")


class UsageError(Exception):
    """Bad argument detected after parsing; mapped to exit code 2."""


def _positive(name):
    def conv(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be positive and finite, got {text!r}")
        return v
    return conv


def _resolution(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must be an integer, got {text!r}") from None
    if v < 2:
        raise argparse.ArgumentTypeError(f"resolution must be at least 2, got {v}")
    return v


def _delta_list(text):
    out = []
    for part in text.split(","):
        out.append(_positive("deltas")(part.strip()))
    if len(out) < 3:
        raise argparse.ArgumentTypeError("deltas needs at least three comma-separated values")
    return out


def _criteria_list(text):
    try:
        out = sorted({int(t) for t in text.split(",")})
    except ValueError:
        raise argparse.ArgumentTypeError(f"criteria must be integers in 1..12, got {text!r}") from None
    if not out or out[0] < 1 or out[-1] > 12:
        raise argparse.ArgumentTypeError(f"criteria must be integers in 1..12, got {text!r}")
    return out


def _emit(data, as_json: bool, text: str | None = None) -> None:
    if as_json or text is None:
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=False) + "\n")
    else:
        sys.stdout.write(text)


def _geometry(args):
    return make_geometry(args.R, args.delta, args.mu)


# ---------------------------------------------------------------------------
# commands


def cmd_geometry(args) -> int:
    g = _geometry(args)
    (x1, _), (x2, _) = g.centers
    data = {
        "R": g.R, "delta": g.delta, "mu": g.mu, "a": g.a, "s": g.s,
        "center1_x": x1, "center2_x": x2,
        "half_gap": g.R * math.cosh(g.s) - g.R,
        "narrow_y_max": g.narrow_half_width,
        "N": noslip.truncation_order(g.s)[0],
    }
    _emit(data, args.json, "".join(f"{k}={v!r}\n" for k, v in data.items()))
    return EXIT_OK


def constants_document(g) -> dict:
    it = boundary_integrals(g)
    rc = rigid_constants(g)
    sc = singular_constants(g)
    F0, G0 = noslip.F0_G0()
    doc = {"R": g.R, "delta": g.delta, "mu": g.mu, "a": g.a, "s": g.s}
    doc.update(it.to_json())
    doc.update(c21=rc.c21, c22=rc.c22, c23=rc.c23, det=rc.det, cond=rc.cond)
    doc.update(K_v=noslip.k_v(g), K_rot=noslip.k_rot(g), A1=sc.A1, B1=sc.B1, A2=sc.A2, C2=sc.C2, F0=F0, G0=G0)
    return doc


def cmd_constants(args) -> int:
    _emit(constants_document(_geometry(args)), True)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    g = _geometry(args)
    if args.N is not None and args.N < 2:
        raise UsageError(f"N must be at least 2, got {args.N}")
    co = noslip.coefficients(g, args.case, args.N)
    _emit(co.to_json(), True)
    return EXIT_OK


def field_grid(sol, xlim, ylim, nx: int, ny: int):
    """Rows ``(x, y, zeta, theta, mask, ux, uy, p, E..., S...)`` in y-outer order; masked rows hold NaN."""
    g = sol.geometry
    xs = np.linspace(xlim[0], xlim[1], nx)
    ys = np.linspace(ylim[0], ylim[1], ny)
    Y, X = np.meshgrid(ys, xs, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    mask = inside_disks(g, x, y)
    table = np.full((x.size, len(FIELD_COLUMNS)), np.nan)
    table[:, 0], table[:, 1], table[:, 4] = x, y, mask
    ok = ~mask
    if np.any(ok):
        zeta, theta = cart_to_bipolar(g, x[ok], y[ok])
        fs = eval_flow(sol, x[ok], y[ok])
        S = fs.sigma
        table[ok, 2], table[ok, 3] = np.clip(zeta, -g.s, g.s), theta
        table[ok, 5], table[ok, 6], table[ok, 7] = fs.u[:, 0], fs.u[:, 1], fs.p
        table[ok, 8], table[ok, 9], table[ok, 10] = fs.E[:, 0, 0], fs.E[:, 0, 1], fs.E[:, 1, 1]
        table[ok, 11], table[ok, 12], table[ok, 13] = S[:, 0, 0], S[:, 0, 1], S[:, 1, 1]
    return table


def _cell(col: int, v: float, masked: bool) -> str:
    if col == 4:
        return str(int(v))
    if masked and col >= 2:
        return ""
    return repr(float(v))


def format_csv(table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELD_COLUMNS)
    for row in table:
        masked = bool(row[4])
        w.writerow([_cell(j, v, masked) for j, v in enumerate(row)])
    return buf.getvalue()


def format_json(table, meta: dict) -> str:
    rows = []
    for row in table:
        masked = bool(row[4])
        rows.append([int(v) if j == 4 else (None if masked and j >= 2 else float(v)) for j, v in enumerate(row)])
    return json.dumps({**meta, "columns": list(FIELD_COLUMNS), "rows": rows}) + "\n"


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_field(args) -> int:
    g = _geometry(args)
    if not (args.xmin < args.xmax and args.ymin < args.ymax):
        raise UsageError("grid bounds must satisfy xmin < xmax and ymin < ymax")
    sol = solve_flow(g, parse_background(args.background))
    table = field_grid(sol, (args.xmin, args.xmax), (args.ymin, args.ymax), args.nx, args.ny)
    fmt = "json" if args.json else args.format
    if fmt == "csv":
        text = format_csv(table)
    else:
        bg = sol.background
        text = format_json(table, {"R": g.R, "delta": g.delta, "mu": g.mu,
                                   "background": [bg.a_coef, bg.c_coef, bg.d_coef]})
    _write(args.output, text)
    if args.figure:
        _field_figure(table, args.nx, args.ny, args.figure)
    return EXIT_OK


def rate_table(background, deltas, R: float = 1.0, mu: float = 1.0) -> dict:
    """:class:`RateFit` per quantity of the sup-norms over ``deltas``."""
    values = {q: [] for q in QUANTITIES}
    for d in deltas:
        norms = sup_norms(solve_flow(make_geometry(R, d, mu), background))
        for q in QUANTITIES:
            values[q].append(norms[q].value)
    return {q: fit_rate(zip(deltas, v)) for q, v in values.items()}


def cmd_rates(args) -> int:
    bg = parse_background(args.background)
    fits = rate_table(bg, args.deltas, args.R, args.mu)
    data = {q: f.to_json() for q, f in fits.items()}
    lines = [f"{'quantity':<10} {'slope':>10} {'intercept':>11} {'r2':>8}  excluded"]
    for q, f in fits.items():
        lines.append(f"{q:<10} {f.slope:>10.4f} {f.intercept:>11.4f} {f.r_squared:>8.5f}  {f.excluded or '-'}")
    _emit(data, args.json, "\n".join(lines) + "\n")
    if args.figure:
        _rates_figure(fits, args.figure)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .acceptance import run

    checks, ok, timing = run(args.criteria, strict=args.strict)
    if args.json:
        _emit({"ok": ok, "strict": args.strict, "checks": [c.to_json() for c in checks],
               "seconds": {str(k): v for k, v in timing.items()}}, True)
    else:
        for c in checks:
            sys.stdout.write(c.line() + "\n")
        sys.stdout.write(f"{'OK' if ok else 'FAILED'}: {sum(c.passed for c in checks)}/{len(checks)} checks passed"
                         f" in {sum(timing.values()):.1f} s\n")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# optional figures


def _pyplot():
    try:
        import matplotlib
    except ImportError:
        raise UsageError("--figure needs matplotlib (pip install 'cylstokes[plot]')") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _field_figure(table, nx: int, ny: int, path: str) -> None:
    plt = _pyplot()
    X = table[:, 0].reshape(ny, nx)
    Y = table[:, 1].reshape(ny, nx)
    S = table[:, 11:14]
    mag = np.sqrt(S[:, 0] ** 2 + 2 * S[:, 1] ** 2 + S[:, 2] ** 2)
    mag = np.ma.masked_invalid(mag.reshape(ny, nx))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    pc = ax.pcolormesh(X, Y, np.log10(mag + 1e-300), shading="auto", cmap="viridis")
    fig.colorbar(pc, ax=ax, label=r"$\log_{10}|\sigma|_F$")
    ux = np.ma.masked_invalid(table[:, 5].reshape(ny, nx))
    uy = np.ma.masked_invalid(table[:, 6].reshape(ny, nx))
    ax.streamplot(X[0], Y[:, 0], ux.filled(0.0), uy.filled(0.0), color="w", linewidth=0.5, density=1.2)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    _save(fig, path)


def _rates_figure(fits: dict, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 4))
    for q, f in fits.items():
        d = np.asarray(f.deltas)
        ax.loglog(d, f.values, "o", label=f"{q} (slope {f.slope:.3f})")
        ax.loglog(d, np.exp(f.intercept) * d**f.slope, "-", lw=0.8, color=ax.lines[-1].get_color())
    ax.set_xlabel(r"$\delta$")
    ax.set_ylabel("sup norm")
    ax.legend(frameon=False)
    _save(fig, path)


def _save(fig, path: str) -> None:
    try:
        fig.savefig(path, dpi=150, bbox_inches="tight")
    finally:
        import matplotlib.pyplot as plt

        plt.close(fig)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    geo = argparse.ArgumentParser(add_help=False)
    geo.add_argument("--R", type=_positive("R"), default=1.0, help="cylinder radius (default 1)")
    geo.add_argument("--delta", type=_positive("delta"), default=1e-2, help="gap width (default 1e-2)")
    geo.add_argument("--mu", type=_positive("mu"), default=1.0, help="viscosity (default 1)")
    bgp = argparse.ArgumentParser(add_help=False)
    bgp.add_argument("--background", default="ex",
                     help=f"one of {', '.join(BACKGROUNDS)} or 'a,c,d' for U = [[a, c], [d, -a]] x")

    p = argparse.ArgumentParser(prog="cylstokes", description="Stokes flow around two nearly touching cylinders.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("geometry", parents=[common, geo], help="bipolar parameters of the configuration")
    sub.add_parser("constants", parents=[common, geo], help="boundary integrals and rigid-motion constants (JSON)")
    c = sub.add_parser("coeffs", parents=[common, geo], help="no-slip series coefficients (JSON)")
    c.add_argument("--case", choices=noslip.CASES, default="extensional")
    c.add_argument("--N", type=int, default=None, help="truncation order (default: automatic)")

    f = sub.add_parser("field", parents=[common, geo, bgp], help="sample the flow on a Cartesian grid")
    f.add_argument("--xmin", type=float, default=-3.0)
    f.add_argument("--xmax", type=float, default=3.0)
    f.add_argument("--ymin", type=float, default=-2.0)
    f.add_argument("--ymax", type=float, default=2.0)
    f.add_argument("--nx", type=_resolution, default=61)
    f.add_argument("--ny", type=_resolution, default=41)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    f.add_argument("--figure", default=None, help="also render a stress map to this image file")

    r = sub.add_parser("rates", parents=[common, bgp], help="fitted blow-up rates of pressure, strain, stress")
    r.add_argument("--R", type=_positive("R"), default=1.0)
    r.add_argument("--mu", type=_positive("mu"), default=1.0)
    r.add_argument("--deltas", type=_delta_list, default=[1e-2, 1e-3, 1e-4, 1e-5])
    r.add_argument("--figure", default=None, help="also render a log-log plot to this image file")

    v = sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    v.add_argument("--criteria", type=_criteria_list, default=None, help="comma-separated subset of 1..12")
    v.add_argument("--strict", action="store_true", help="count known discrepancies as failures")
    return p


COMMANDS = {
    "geometry": cmd_geometry, "constants": cmd_constants, "coeffs": cmd_coeffs,
    "field": cmd_field, "rates": cmd_rates, "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on malformed arguments
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, DomainError) as exc:
        print(f"cylstokes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"cylstokes {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DegeneracyError as exc:
        print(f"cylstokes {args.command}: degenerate configuration: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConvergenceError as exc:
        print(f"cylstokes {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

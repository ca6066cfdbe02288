"""``spinconc`` command-line driver.

Subcommands: sweep, surface, fuzz, scaling, extrapolate, boson-verify.

Every option may also be given in a flat ``key=value`` config file passed
with ``--config``; keys mirror the long flag names and the command line wins.
The worker count comes from the ``SPINCONC_WORKERS`` environment variable.

Exit status is 0 on success, 1 when a check fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .. import __version__
from ..hamiltonians import transition_point
from . import sweeps
from .fitting import FitError
from .output import RowWriter, metadata, open_output

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def read_config(path):
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _add_common(p, *, tol=None):
    p.add_argument("--config", help="key=value file supplying defaults for any flag")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    if tol is not None:
        p.add_argument("--tol", type=float, default=tol)


def _add_model(p, model="biaxial_transverse"):
    p.add_argument("--model", choices=sweeps.MODELS, default=model)
    for name in ("gamma", "hx", "hy", "hz", "x", "y"):
        p.add_argument(f"--{name}", help=f"{name} value or start:stop:step range")


def build_parser():
    parser = argparse.ArgumentParser(prog="spinconc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="ground-state observables over a parameter grid")
    _add_model(p)
    p.add_argument("--N", default="16", help="comma list or start:stop[:step] of spin counts")
    p.add_argument("--mode", choices=sweeps.MODES, default="both")
    p.add_argument("--resolve", choices=sweeps.RESOLVE, default="parity",
                   help="member of a degenerate ground level to report")
    _add_common(p)

    p = sub.add_parser("surface", help="semiclassical C_R surface over (hx, hz)")
    _add_model(p, model="uniaxial_field")
    p.add_argument("--N", default="64")
    p.add_argument("--mode", choices=sweeps.MODES, default="semiclassical")
    p.add_argument("--resolve", choices=sweeps.RESOLVE, default="parity")
    _add_common(p)
    p.set_defaults(hx="-1:1:0.05", hz="0:2:0.05")

    p = sub.add_parser("fuzz", help="check max_n C_n against the Wootters concurrence")
    p.add_argument("--N", default="2:10")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--corpus", choices=sweeps.CORPORA, default="random")
    _add_common(p, tol=1e-7)

    p = sub.add_parser("scaling", help="power-law fit of |C_R(inf) - C_R(N)|")
    _add_model(p)
    p.add_argument("--N", default="128,256,512,1024,2048,4096,8192")
    p.add_argument("--reference", type=float, help="limit value (default: closed form)")
    p.add_argument("--expect-range", help="lo:hi band the exponent must fall in")
    _add_common(p)

    p = sub.add_parser("extrapolate", help="1/N extrapolation compared with closed forms")
    _add_model(p)
    p.add_argument("--N", default="64,128,256,512,1024")
    p.add_argument("--order", type=int, default=2)
    _add_common(p, tol=1e-3)

    p = sub.add_parser("boson-verify", help="boson model vs mapped uniaxial spectrum")
    p.add_argument("--x", default="0.5", help="x value, range, or 'xc' for the transition point")
    p.add_argument("--y", default="1")
    p.add_argument("--N", default="40")
    _add_common(p)
    return parser


def _apply_config(parser, argv):
    """Install config-file values as subparser defaults so the CLI overrides them."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((a for a in argv if a in sub.choices), None)
    if cmd is None:
        return
    target = sub.choices[cmd]
    dests = {a.dest: a for a in target._actions}
    for key, raw in values.items():
        if key not in dests or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for {cmd}")
        action = dests[key]
        value = action.type(raw) if action.type else raw
        if action.choices and value not in action.choices:
            raise UsageError(f"config {key}={raw!r}: choose from {', '.join(map(str, action.choices))}")
        target.set_defaults(**{key: value})


def _config_of(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "func", "out")}


def _single(args, name, required=True):
    raw = getattr(args, name, None)
    if raw is None:
        if required:
            raise UsageError(f"--{name} is required")
        return None
    vals = sweeps.parse_range(raw)
    if len(vals) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return vals[0]


def _point(args):
    p = {}
    for name in sweeps.MODEL_AXES[args.model]:
        p[name] = _single(args, name)
    if args.model == "biaxial_general" and "hy" not in p:
        p["hy"] = 0.0
    return p


def _write(args, fields, rows):
    meta = metadata(args.command, _config_of(args), args.seed)
    with open_output(args.out) as fh:
        w = RowWriter(fh, args.format, fields, meta)
        for r in rows:
            w.write(r)


def _say(msg):
    print(msg, file=sys.stderr)


def cmd_sweep(args):
    ranges = {}
    for name in ("gamma", "hx", "hy", "hz", "x", "y"):
        raw = getattr(args, name)
        if raw is not None:
            ranges[name] = sweeps.parse_range(raw)
    fixed = {}
    if args.model == "biaxial_general" and "hy" not in ranges:
        ranges["hy"] = [0.0]
    if args.model == "isotropic":
        fixed["gamma"] = 1.0
    spec = sweeps.SweepSpec(
        args.model, ranges, sweeps.parse_int_list(args.N), args.mode, args.seed, fixed, args.resolve
    )
    rows = sweeps.run_sweep(spec)
    _write(args, sweeps.ROW_FIELDS, rows)
    errors = sum(bool(r["error"]) for r in rows)
    _say(f"{len(rows)} points, {errors} with errors")
    return EXIT_OK


def cmd_fuzz(args):
    Ns = sweeps.parse_int_list(args.N)
    summary, records = sweeps.fuzz_conjecture(Ns, args.trials, args.seed, args.tol, args.corpus)
    fields = sweeps.FUZZ_FIELDS + ("failed",)
    _write(args, fields, records)
    _say(json.dumps(summary, sort_keys=True))
    return EXIT_FAIL if summary["failures"] else EXIT_OK


SCALING_FIELDS = ("N", "C_R_exact", "m", "E0", "reference", "distance", "exponent", "amplitude", "fit_residual")


def cmd_scaling(args):
    p = _point(args)
    Ns = sweeps.parse_int_list(args.N)
    fit, rows = sweeps.scaling(args.model, p, Ns, reference=args.reference, seed=args.seed)
    for r in rows:
        r.update(exponent=fit.exponent, amplitude=fit.amplitude, fit_residual=fit.residual)
    _write(args, SCALING_FIELDS, rows)
    _say(f"exponent {fit.exponent:.6f} amplitude {fit.amplitude:.6g} residual {fit.residual:.3g} "
         f"N {fit.n_range[0]}..{fit.n_range[1]}")
    if args.expect_range:
        lo, _, hi = args.expect_range.partition(":")
        try:
            lo, hi = float(lo), float(hi)
        except ValueError as exc:
            raise UsageError("--expect-range must be lo:hi") from exc
        if not lo <= fit.exponent <= hi:
            _say(f"exponent outside [{lo}, {hi}]")
            return EXIT_FAIL
    return EXIT_OK


EXTRAPOLATE_FIELDS = ("quantity", "N", "value", "limit", "error", "order", "ill_conditioned", "reference", "deviation")


def cmd_extrapolate(args):
    p = _point(args)
    Ns = sweeps.parse_int_list(args.N)
    res = sweeps.extrapolate_point(args.model, p, Ns, order=args.order, seed=args.seed)
    rows, failed = [], False
    for col, name in ((0, "C_R"), (1, "m")):
        ex, ref = res[name], res[f"{name}_reference"]
        dev = abs(ex.limit - ref) if ref is not None else math.nan
        for N, v in zip(Ns, res["curve"][:, col]):
            rows.append({"quantity": name, "N": N, "value": v})
        rows.append({
            "quantity": name, "limit": ex.limit, "error": ex.error, "order": ex.order,
            "ill_conditioned": ex.ill_conditioned, "reference": ref, "deviation": dev,
        })
        msg = f"{name}: limit {ex.limit:.10f} +- {ex.error:.2e}"
        if ref is not None:
            msg += f" reference {ref:.10f} deviation {dev:.2e}"
            failed |= not dev <= args.tol
        _say(msg + (" (ill-conditioned)" if ex.ill_conditioned else ""))
    _write(args, EXTRAPOLATE_FIELDS, rows)
    return EXIT_FAIL if failed else EXIT_OK


BOSON_FIELDS = (
    "x", "y", "N", "hx", "hz", "scale", "shift", "x_c", "max_deviation", "fit_scale", "fit_shift",
    "order_parameter_boson", "order_parameter_spin", "passed",
)


def cmd_boson_verify(args):
    ys = sweeps.parse_range(args.y)
    Ns = sweeps.parse_int_list(args.N)
    reports = []
    for y in ys:
        xs = [transition_point(y)] if str(args.x).strip().lower() == "xc" else sweeps.parse_range(args.x)
        for x in xs:
            for N in Ns:
                reports.append(sweeps.verify_boson_map(x, y, N))
    _write(args, BOSON_FIELDS, [r.as_record() for r in reports])
    bad = [r for r in reports if not r.passed]
    _say(f"{len(reports)} checks, max deviation {max(r.max_deviation for r in reports):.3e}, {len(bad)} failed")
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "surface": cmd_sweep,
    "fuzz": cmd_fuzz,
    "scaling": cmd_scaling,
    "extrapolate": cmd_extrapolate,
    "boson-verify": cmd_boson_verify,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        # argparse: 0 for --help/--version, 2 for usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except FitError as exc:
        _say(f"spinconc: fit failed: {exc} {json.dumps(exc.diagnostics)}")
        return EXIT_FAIL
    except (UsageError, ValueError) as exc:
        _say(f"spinconc: error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

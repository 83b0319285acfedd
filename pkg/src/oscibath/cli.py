"""Command-line interface: ``oscibath {modes,table1,kernel,verify,sweep}``.

Exit codes: 0 pass, 1 check failure, 2 bad input, 3 caustic, 4 inverted mode.
An optional JSON config file named by ``OSCIBATH_CONFIG`` may set ``hbar``,
``tolerances``, ``format`` and ``seed``; any other key is rejected.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import kernels, network, verify, white_noise
from .errors import CausticError, DomainError, InvertedModeError, OscibathError
from .oracles import gaussian
from .oracles.eigen import dense_eigensolve

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAUSTIC, EXIT_INVERTED = 0, 1, 2, 3, 4
FORMATS = ("json", "csv", "human")
CONFIG_ENV = "OSCIBATH_CONFIG"
TABLE_TOL = 1e-10


class UsageError(Exception):
    """Bad command-line or configuration input (exit 2)."""


@dataclass
class RunConfig:
    hbar: float = 1.0
    tolerances: dict = field(default_factory=dict)
    format: str = "json"
    seed: int = 0

    @classmethod
    def from_mapping(cls, data):
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(data) - {"hbar", "tolerances", "format", "seed"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        if not isinstance(cfg.hbar, (int, float)) or not cfg.hbar > 0:
            raise UsageError("config hbar must be a positive number")
        if cfg.format not in FORMATS:
            raise UsageError(f"config format must be one of {FORMATS}")
        if not isinstance(cfg.seed, int) or isinstance(cfg.seed, bool) or cfg.seed < 0:
            raise UsageError("config seed must be a non-negative integer")
        if not isinstance(cfg.tolerances, dict):
            raise UsageError("config tolerances must be an object")
        unknown = set(cfg.tolerances) - set(verify.DEFAULT_TOLERANCES)
        if unknown:
            raise UsageError(f"unknown tolerance keys: {sorted(unknown)}")
        for key, value in cfg.tolerances.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
                raise UsageError(f"tolerance {key!r} must be a positive number")
        return cfg

    @classmethod
    def load(cls, environ=None):
        path = (os.environ if environ is None else environ).get(CONFIG_ENV)
        if not path:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        return cls.from_mapping(data)


# formatting ----------------------------------------------------------------


def _g(value):
    return format(value, ".17g")


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_g(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, allow_nan=True)


def _float_list(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"{name} must be a comma-separated list of numbers") from exc


def _sweep_range(text):
    parts = text.split(":")
    try:
        t0, t1, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as exc:
        raise UsageError("--sweep expects t0:t1:steps") from exc
    if len(parts) != 3 or steps < 1:
        raise UsageError("--sweep expects t0:t1:steps with steps >= 1")
    return np.linspace(t0, t1, steps) if steps > 1 else np.array([t0])


# commands ------------------------------------------------------------------


def cmd_modes(args, cfg):
    spec = network.mode_spectrum(network.OscillatorNetwork(n=args.n, coupling=args.coupling, hbar=cfg.hbar))
    fmt = args.format or cfg.format
    if fmt == "json":
        return _json(spec.to_dict()), EXIT_OK
    if fmt == "csv":
        rows = [("degenerate", float(spec.degenerate_value))] * spec.degenerate_multiplicity
        rows += [("lambda_plus", float(spec.lambda_plus)), ("lambda_minus", float(spec.lambda_minus))]
        return _csv(["kind", "value"], rows), EXIT_OK
    lines = [
        f"N = {spec.n}, C = {spec.coupling:g}" + ("  (all modes degenerate)" if spec.all_degenerate else ""),
        f"degenerate: {spec.degenerate_value:.10g} x {spec.degenerate_multiplicity}",
        f"lambda+   : {spec.lambda_plus:.10g}",
        f"lambda-   : {spec.lambda_minus:.10g}",
    ]
    return "\n".join(lines) + "\n", EXIT_OK


def table1_rows(coupling=1.0, perturb=0.0):
    """Table rows comparing the tabulated closed form with a dense eigensolve."""
    rows = []
    for n in sorted(network.TABLE_I):
        net = network.OscillatorNetwork(n=n, coupling=coupling)
        brute = np.sort(dense_eigensolve(network.build_characteristic_matrix(net)).real)
        if n == 4:
            brute[-1] += perturb
        lp, lm = network.table_row(n, coupling)
        tabulated = np.sort(np.r_[[-coupling] * (n - 2), lp, lm])
        diff = float(np.max(np.abs(brute - tabulated)))
        bp = float(brute[np.argmin(np.abs(brute - lp))])
        bm = float(brute[np.argmin(np.abs(brute - lm))])
        spec = network.mode_spectrum(net)
        degen_exact = spec.degenerate_multiplicity == n - 2 and spec.degenerate_value == -coupling
        rows.append({
            "n": n,
            "closed_form": [lp, lm],
            "brute_force": [bp, bm],
            "degenerate": {"value": -coupling, "multiplicity": n - 2},
            "abs_difference": diff,
            "pass": bool(diff < TABLE_TOL * max(1.0, abs(coupling)) and degen_exact),
        })
    return rows


def cmd_table1(args, cfg):
    rows = table1_rows(args.coupling, args.perturb)
    failing = [r for r in rows if not r["pass"]]
    fmt = args.format or cfg.format
    if fmt == "json":
        out = _json(rows)
    elif fmt == "csv":
        out = _csv(
            ["n", "closed_plus", "closed_minus", "brute_plus", "brute_minus", "abs_difference", "pass"],
            [(r["n"], *r["closed_form"], *r["brute_force"], r["abs_difference"], str(r["pass"]).lower()) for r in rows],
        )
    else:
        out = "".join(
            f"N={r['n']:2d}  closed {r['closed_form'][0]: .12f} {r['closed_form'][1]: .12f}  "
            f"brute {r['brute_force'][0]: .12f} {r['brute_force'][1]: .12f}  diff {r['abs_difference']:.2e}  "
            f"{'PASS' if r['pass'] else 'FAIL'}\n"
            for r in rows
        )
    if failing:
        sys.stderr.write(f"table1: row N={failing[0]['n']} failed (difference {failing[0]['abs_difference']:.3g})\n")
        return out, EXIT_FAIL
    return out, EXIT_OK


def _kernel_value(args, cfg, t):
    hbar = args.hbar if args.hbar is not None else cfg.hbar
    if args.kind == "sho":
        return kernels.sho_kernel(kernels.KernelSpec(args.m, args.omega, t, hbar, args.form), args.x, args.x0)
    if args.kind == "pair":
        coords = _float_list(args.coords, "--coords") if args.coords else [args.x, 0.0]
        if len(coords) != 2:
            raise UsageError("pair kernel takes --coords x1,x2")
        spec = kernels.PairSpec(
            n=args.n, mass=args.m, omega=args.omega, coupling=args.coupling, time=t, hbar=hbar,
            form=args.form, allow_inverted=args.allow_inverted,
        )
        return complex(kernels.pair_kernel(spec, coords[0], coords[1]))
    coords = _float_list(args.coords, "--coords") if args.coords else [0.0] * args.n
    if len(coords) != args.n:
        raise UsageError(f"--coords needs {args.n} values, got {len(coords)}")
    net = network.OscillatorNetwork(n=args.n, mass=args.m, omega=args.omega, coupling=args.coupling, hbar=hbar)
    return kernels.full_propagator(net, coords, t, form=args.form, allow_inverted=args.allow_inverted)


def cmd_kernel(args, cfg):
    fmt = args.format or cfg.format
    if args.sweep:
        rows = []
        for t in _sweep_range(args.sweep):
            s = kernels.amplitude_summary(_kernel_value(args, cfg, float(t)))
            rows.append((float(t), s["re"], s["im"], s["magnitude"], s["phase"]))
        return _csv(["t", "re", "im", "magnitude", "phase"], rows), EXIT_OK
    summary = kernels.amplitude_summary(_kernel_value(args, cfg, args.t))
    if fmt == "json":
        return _json(summary), EXIT_OK
    if fmt == "csv":
        return _csv(["re", "im", "magnitude", "phase"], [tuple(summary.values())]), EXIT_OK
    return (
        f"K = {summary['re']:.12g} {summary['im']:+.12g}i  |K| = {summary['magnitude']:.12g}  "
        f"arg K = {summary['phase']:.12g}\n"
    ), EXIT_OK


def cmd_verify(args, cfg):
    seed = args.seed if args.seed is not None else cfg.seed
    reports = verify.run_suite(args.suite, cfg.tolerances, seed=seed, steps=args.steps, hbar=cfg.hbar)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    fmt = args.format or cfg.format
    if fmt == "json":
        out = _json([r.to_dict(timing=args.timing) for r in reports])
    elif fmt == "csv":
        header = ["check_name", "expected", "computed", "abs_error", "rel_error", "pass"]
        if args.timing:
            header.append("runtime_ms")
        rows = []
        for r in reports:
            row = [r.check_name, str(r.expected), str(r.computed), r.abs_error, r.rel_error, str(r.passed).lower()]
            if args.timing:
                row.append(r.runtime_ms)
            rows.append(row)
        out = _csv(header, rows)
    else:
        out = "".join(
            f"{'PASS' if r.passed else 'FAIL'}  {r.check_name:<36s} abs {r.abs_error:.3e}  rel {r.rel_error:.3e}"
            + (f"  {r.runtime_ms} ms" if args.timing else "") + "\n"
            for r in reports
        )
    return out, status


SWEEP_QUANTITIES = ("det", "qform", "wn-kernel", "sliced")


def sweep_rows(quantity, omega, t, steps, hbar=1.0, x=1.0):
    """Convergence rows ``(steps, value, target, abs_error)``; complex values use magnitudes of differences."""
    rows = []
    for s in steps:
        if quantity == "det":
            value, target = white_noise.fredholm_det(white_noise.WhiteNoiseGrid(t, s), omega, hbar), math.cos(omega * t)
        elif quantity == "qform":
            value = white_noise.inverse_quadratic_form(white_noise.WhiteNoiseGrid(t, s), omega, hbar)
            target = math.tan(omega * t) / (omega * t)
        elif quantity == "wn-kernel":
            value = white_noise.assemble_sho_kernel_wn(white_noise.WhiteNoiseGrid(t, s), 1.0, omega, hbar, x)
            target = kernels.sho_kernel(kernels.KernelSpec(1.0, omega, t, hbar), x)
        else:
            value = gaussian.time_sliced_propagator(1.0, omega, hbar, t, x, 0.0, s)
            target = kernels.sho_kernel(kernels.KernelSpec(1.0, omega, t, hbar), x)
        rows.append((s, value, target, abs(value - target)))
    return rows


def cmd_sweep(args, cfg):
    steps = [int(v) for v in _float_list(args.steps, "--steps")]
    if not steps:
        raise UsageError("--steps needs at least one value")
    rows = sweep_rows(args.quantity, args.omega, args.t, steps, cfg.hbar, args.x)
    if any(isinstance(r[1], complex) for r in rows):
        header = ["steps", "value_re", "value_im", "target_re", "target_im", "abs_error"]
        flat = [(s, float(v.real), float(v.imag), float(g.real), float(g.imag), float(e)) for s, v, g, e in rows]
    else:
        header = ["steps", "value", "target", "abs_error"]
        flat = [(s, float(v), float(g), float(e)) for s, v, g, e in rows]
    return _csv(header, flat), EXIT_OK


# parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser():
    parser = _Parser(prog="oscibath", description="Star-coupled oscillator bath: spectra, propagators and checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_format(p):
        p.add_argument("--format", choices=FORMATS, default=None, help="output format (default from config, else json)")

    p = sub.add_parser("modes", help="normal-mode spectrum of the characteristic matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coupling", type=float, default=1.0)
    add_format(p)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("table1", help="tabulated nondegenerate eigenvalues, N=2..10, against a dense eigensolve")
    p.add_argument("--coupling", type=float, default=1.0)
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    add_format(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("kernel", help="evaluate a closed-form propagator")
    p.add_argument("kind", choices=("sho", "pair", "full"))
    p.add_argument("--m", type=float, default=1.0, help="mass")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=None)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--n", type=int, default=4, help="oscillator count (pair, full)")
    p.add_argument("--coupling", type=float, default=0.0)
    p.add_argument("--coords", default=None, help="comma-separated coordinates (pair: x1,x2; full: N values)")
    p.add_argument("--form", choices=kernels.FORMS, default="standard")
    p.add_argument("--allow-inverted", action="store_true", help="use the hyperbolic kernel for unstable modes")
    p.add_argument("--sweep", default=None, metavar="T0:T1:STEPS", help="emit CSV over a time grid")
    add_format(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", help="run a verification suite and print its reports")
    p.add_argument("suite", choices=(*verify.SUITES, "all"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--steps", type=int, default=2000, help="white-noise grid size")
    p.add_argument("--timing", action="store_true", help="include runtime_ms (breaks byte-identical output)")
    add_format(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="convergence study as CSV: steps, value, target, abs_error")
    p.add_argument("quantity", choices=SWEEP_QUANTITIES)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--steps", default="250,500,1000,2000")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load()
        out, code = args.func(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except CausticError as exc:
        sys.stderr.write(f"{exc}\n")
        if getattr(exc, "critical_time", None) is not None:
            sys.stderr.write(f"critical time: {exc.critical_time!r}\n")
        return EXIT_CAUSTIC
    except InvertedModeError as exc:
        sys.stderr.write(f"{exc}\n")
        if getattr(exc, "critical_coupling", None) is not None:
            sys.stderr.write(f"critical coupling C* = {exc.critical_coupling!r}\n")
        return EXIT_INVERTED
    except (DomainError, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT
    except OscibathError as exc:
        sys.stderr.write(f"failure: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())

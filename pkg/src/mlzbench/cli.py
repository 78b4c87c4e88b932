"""Command-line front end.

Exit codes: 0 success / check passed, 1 check failed, 2 invalid input.
"""

import argparse
import logging
import re
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import integrability, io, models, propagator, semiclassical, spectrum

log = logging.getLogger("mlzbench")

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _window(text):
    parts = text.split(":")
    try:
        a, b = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be a:b, got {text!r}") from None
    if not a < b:
        raise argparse.ArgumentTypeError("window needs a < b")
    return a, b


def _range(text):
    parts = text.split(":")
    try:
        a, b, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"range must be a:b:steps, got {text!r}") from None
    if len(parts) != 3 or steps < 1 or (steps > 1 and not a < b):
        raise argparse.ArgumentTypeError("range needs a < b and steps >= 1")
    return np.linspace(a, b, steps)


def _T_list(text):
    vals = _floats(text)
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("horizons must be positive")
    return vals


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InvalidInput(message)


# ---------------------------------------------------------------- io helpers


def _load(path):
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None
    try:
        return io.loads_model(text)
    except ValueError as exc:
        raise InvalidInput(f"{path}: {exc}") from None


def _write(args, text):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_catalog(args):
    name = args.name
    if args.e2 is None:
        args.e2 = 1.5 if name == "h6" else 1.0
    try:
        partner = None
        if name == "h5":
            if args.g3 is not None:
                model = models.build_h5_ansatz(args.e1, args.e2, args.b, args.g1, args.g2, args.g3, args.tau)
            else:
                model, partner = models.build_h5(args.e1, args.e2, args.b, args.g1, args.g2, args.tau)
        elif name == "h6":
            model = models.build_h6(args.e1, args.e2, args.b, args.g, args.tau)
        elif name == "lz2":
            model = models.build_lz2(args.g, args.beta, args.tau)
        elif name == "demkov-osherov":
            model = models.build_demkov_osherov(args.e, args.gs, args.tau)
        elif name == "bowtie":
            model, partner = models.build_bowtie(args.betas, args.gs, args.tau)
        elif name == "tavis-cummings":
            model, partner, _ = models.build_tavis_cummings(args.eps, args.g, args.M, args.tau)
        elif name == "fermion":
            fm = models.build_fermion(args.e, args.gs, args.x, args.nf, args.tau)
            model, partner = fm.model, fm.partner
        else:
            raise InvalidInput(f"unknown catalog model {name!r}")
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    _write(args, io.dump_model(model, partner))
    return EXIT_OK


def cmd_verify(args):
    model, partner = _load(args.model)
    if partner is None:
        raise InvalidInput("model file has no partner; nothing to verify")
    report = integrability.verify_pair(model, partner, args.tol)
    doc = report.to_dict()
    doc["flow"] = integrability.verify_flow(model, partner).__dict__
    doc["zero_area"] = integrability.zero_area_check(model, partner).to_dict()
    _write(args, io.dumps(doc))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_solve(args):
    model, _ = _load(args.model)
    report = integrability.solve_partner(model, args.tol)
    _write(args, io.dumps(report))
    return EXIT_OK if report.feasible else EXIT_FAIL


def _param_setter(model, param):
    """Builder varying one model entry: tau | slope:i | tau_slope:i | coupling:i:j."""
    parts = param.split(":")
    key = parts[0]
    try:
        idx = [int(p) for p in parts[1:]]
    except ValueError:
        raise InvalidInput(f"bad --param value {param!r}") from None
    n = model.n
    if key == "tau" and not idx:
        return lambda v: model.with_tau(v)
    if key in ("slope", "tau_slope") and len(idx) == 1 and 0 <= idx[0] < n:
        def build(v):
            arr = getattr(model, key).copy()
            arr[idx[0]] = v
            return replace(model, **{key: arr})
        return build
    if key == "coupling" and len(idx) == 2 and all(0 <= i < n for i in idx):
        i, j = idx

        def build(v):
            a = model.coupling.copy()
            a[i, j] = a[j, i] = v
            return replace(model, coupling=a)
        return build
    raise InvalidInput(f"bad --param value {param!r} (use tau, slope:i, tau_slope:i, coupling:i:j)")


def cmd_scan(args):
    model, _ = _load(args.model)
    builder = _param_setter(model, args.param)
    result = integrability.scan_parameter(builder, args.param, args.range, args.tol)
    _write(args, io.dumps(result))
    return EXIT_OK


def cmd_spectrum(args):
    model, _ = _load(args.model)
    flow = spectrum.eigenflow(model, args.window[0], args.window[1], args.samples)
    _write(args, flow.to_csv())
    return EXIT_OK


def cmd_crossings(args):
    model, _ = _load(args.model)
    report = spectrum.crossing_count_check(model, args.window, args.grid, args.threshold)
    doc = {
        "diabatic_crossings": [e.to_dict() for e in spectrum.diabatic_crossings(model)],
        "exact_crossings": [c.to_dict() for c in report.exact_crossings],
        "count_check": report.to_dict(),
    }
    _write(args, io.dumps(doc))
    return EXIT_OK if report.match else EXIT_FAIL


def _horizons(args):
    T = args.T if args.T else list(propagator.DEFAULT_T_LIST)
    if len(T) < 3 or any(b <= a for a, b in zip(T, T[1:])):
        raise InvalidInput("--T needs at least three increasing horizons")
    return T


def cmd_propagate(args):
    model, _ = _load(args.model)
    try:
        result = propagator.transition_matrix(model, _horizons(args), args.rk_tol)
    except propagator.StepSizeUnderflow as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    if args.csv:
        _write(args, io.matrix_csv(result.probability))
    else:
        _write(args, io.dumps(result))
    ok = max(result.unitarity) < 1e-8 and result.stochasticity < 1e-6
    return EXIT_OK if ok else EXIT_FAIL


def cmd_predict(args):
    model, _ = _load(args.model)
    try:
        pred = semiclassical.predict_probabilities(model)
    except semiclassical.DegenerateCrossing as exc:
        raise InvalidInput(str(exc)) from None
    if args.csv:
        _write(args, io.matrix_csv(pred.probability))
    else:
        _write(args, io.dumps(pred))
    return EXIT_OK


def cmd_compare(args):
    model, _ = _load(args.model)
    try:
        report = semiclassical.compare_with_numerics(model, _horizons(args), args.rk_tol)
    except semiclassical.DegenerateCrossing as exc:
        raise InvalidInput(str(exc)) from None
    doc = report.to_dict()
    doc["tol"] = args.tol
    doc["passed"] = report.max_deviation < args.tol
    if args.out:
        Path(args.out).write_text(io.dumps(doc))
    print(f"max |P_pred - P_num| = {report.max_deviation:.3e} (tol {args.tol:g})")
    return EXIT_OK if report.max_deviation < args.tol else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser():
    p = _Parser(prog="mlzbench", description="t/tau-family multistate Landau-Zener workbench")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="emit a catalog model as JSON")
    c.add_argument("name", choices=["h5", "h6", "demkov-osherov", "bowtie", "tavis-cummings", "fermion", "lz2"])
    c.add_argument("--e1", type=float, default=1.0)
    c.add_argument("--e2", type=float, default=None, help="default 1 for h5, 1.5 for h6")
    c.add_argument("--b", type=float, default=1.0)
    c.add_argument("--g", type=float, default=0.105)
    c.add_argument("--g1", type=float, default=0.15)
    c.add_argument("--g2", type=float, default=0.25)
    c.add_argument("--g3", type=float, default=None, help="h5 only: free g3 (no partner emitted)")
    c.add_argument("--beta", type=float, default=1.0, help="lz2 slope difference")
    c.add_argument("--betas", type=_floats, default=[1.0, -0.5, 2.0], help="bowtie slopes")
    c.add_argument("--e", type=_floats, default=[-1.0, 0.0, 1.0], help="level intercepts")
    c.add_argument("--gs", type=_floats, default=[0.1, 0.2, 0.3], help="per-level couplings")
    c.add_argument("--eps", type=_floats, default=[1.0, 2.0], help="Tavis-Cummings spin splittings")
    c.add_argument("--M", type=int, default=2, help="Tavis-Cummings excitation number")
    c.add_argument("--x", type=float, default=0.5, help="fermion interaction")
    c.add_argument("--nf", type=int, default=2, help="fermion number")
    c.add_argument("--tau", type=_positive, default=1.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    def model_cmd(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("model", help="model JSON file ('-' for stdin)")
        s.add_argument("--out")
        s.set_defaults(func=func)
        return s

    s = model_cmd("verify", cmd_verify, "check cc1-cc6 for the model and its partner")
    s.add_argument("--tol", type=_positive, default=1e-10)
    s = model_cmd("solve", cmd_solve, "solve cc2-cc6 for a commuting partner")
    s.add_argument("--tol", type=_positive, default=integrability.FEASIBLE_TOL)
    s = model_cmd("scan", cmd_scan, "scan one model entry for integrability")
    s.add_argument("--param", required=True, help="tau | slope:i | tau_slope:i | coupling:i:j")
    s.add_argument("--range", type=_range, required=True, help="a:b:steps")
    s.add_argument("--tol", type=_positive, default=integrability.FEASIBLE_TOL)
    s = model_cmd("spectrum", cmd_spectrum, "adiabatic eigenvalues as CSV")
    s.add_argument("--window", type=_window, default=spectrum.DEFAULT_WINDOW)
    s.add_argument("--samples", type=_positive_int, default=1201)
    s = model_cmd("crossings", cmd_crossings, "diabatic and exact crossings")
    s.add_argument("--window", type=_window, default=spectrum.DEFAULT_WINDOW)
    s.add_argument("--grid", type=_positive_int, default=spectrum.DEFAULT_GRID)
    s.add_argument("--threshold", type=_positive, default=None)
    for name, func, help_ in (
        ("propagate", cmd_propagate, "numerical transition probabilities"),
        ("predict", cmd_predict, "chronological LZ product"),
        ("compare", cmd_compare, "predictor vs propagator"),
    ):
        s = model_cmd(name, func, help_)
        if name != "predict":
            s.add_argument("--T", type=_T_list, default=None, help="comma-separated horizons")
            s.add_argument("--rk-tol", type=_positive, default=propagator.DEFAULT_RK_TOL)
        if name != "compare":
            s.add_argument("--csv", action="store_true", help="emit the probability matrix as CSV")
        else:
            s.add_argument("--tol", type=_positive, default=5e-3)
    return p


_NUMERIC = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    """Rewrite ``--flag -6:6`` as ``--flag=-6:6`` so argparse does not read -6:6 as an option."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_values(argv))
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

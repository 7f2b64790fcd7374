"""Command line front end.

Exit codes: 0 success, 1 validation or precondition failure, 2 unreadable
or malformed input, 3 cylinder budget exceeded. Errors are reported as a
JSON object on standard error. Nothing is random, so repeated runs with the
same inputs write byte-identical outputs.
"""

import argparse
import contextlib
import json
import sys

import numpy as np

from . import serialization as ser
from .branches import Interval
from .distortion import BUDGET, DEFAULT_SAMPLES, TAU_GROWTH, distortion_profile
from .exceptions import BudgetExceededError, LebmapsError, NumericError, PreconditionError
from .extension import DELTA_UNIFORM, MARGIN_GRID, TAU_MATCH, assemble_circle_map, c1_matching_report
from .maps import SIGMA_MIN, TAU_BRANCH, validate_full_branch_map
from .modulus import Modulus
from .perturbation import PerturbationConfig, c1_distance, perturb_map, unbounded_demo
from .transfer import DensityGrid, invariance_defect, pullback_measure_defect, transfer_apply

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


class CommandFailed(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code, self.kind = code, kind


@contextlib.contextmanager
def _output(path, newline=None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline=newline) as fh:
            yield fh


def _write_json(obj, path):
    with _output(path) as fh:
        fh.write(ser.dumps(obj))


def _modulus(text):
    try:
        return Modulus.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _window(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
        return Interval(lo, hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must be 'lo,hi': {exc}")


def _word(text):
    try:
        return tuple(int(a) for a in text.split(",")) if text else ()
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"prefix must be comma separated integers: {exc}")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# -- subcommands -----------------------------------------------------------


def cmd_validate(args):
    m = ser.load_map(args.map)
    report = validate_full_branch_map(m, args.grid_size, args.sigma_min, args.tau_branch)
    out = {"validation": report.to_dict(), "matching": c1_matching_report(m, tau_match=args.tau_match).to_dict()}
    _write_json(out, args.output)
    if not report.passed:
        raise CommandFailed(EXIT_FAIL, "ValidationFailed", ", ".join(report.failures))


def cmd_extend(args):
    spec = ser.load_spec(args.spec)
    m = assemble_circle_map(spec, args.delta_uniform, args.grid_size, args.tau_match)
    _write_json(ser.map_to_dict(m), args.output)


def cmd_check_invariance(args):
    m = ser.load_map(args.map)
    edges = np.linspace(0.0, 1.0, args.intervals + 1)
    report = {
        "invariance_defect": invariance_defect(m, args.nodes),
        "pullback_measure_defect": pullback_measure_defect(
            m, [Interval(a, b) for a, b in zip(edges, edges[1:])]
        ),
        "nodes": args.nodes,
        "intervals": args.intervals,
    }
    _write_json(report, args.output)
    if args.density_csv:
        ones = DensityGrid(np.ones(args.nodes))
        transfer_apply(m, ones).to_csv(args.density_csv)


def cmd_distortion(args):
    m = ser.load_map(args.map)
    report = distortion_profile(m, args.kmax, args.samples, args.tau_growth, args.prefix, budget=args.budget)
    with _output(args.output, newline="") as fh:
        ser.write_distortion_csv(report, fh)
    print(json.dumps({"classification": report.classification}), file=sys.stderr)


def _config(args):
    return PerturbationConfig(args.epsilon, args.modulus, args.v0_radius, args.blend_width, args.window)


def cmd_perturb(args):
    m = ser.load_map(args.map)
    pm = perturb_map(m, _config(args), args.delta_uniform)
    _write_json(ser.map_to_dict(pm), args.output)
    if args.report:
        _write_json(
            {"c1_distance": c1_distance(m, pm), "invariance_defect": invariance_defect(pm, 1000)},
            args.report,
        )


def cmd_demo_unbounded(args):
    m = ser.load_map(args.map)
    cfg = _config(args)
    result = unbounded_demo(m, cfg, args.kmax, args.delta_uniform, args.x0, args.samples)
    with _output(args.output, newline="") as fh:
        ser.write_demo_csv(result.report, fh)
    if args.config_out:
        resolved = cfg.resolve(m.branches[0].domain)
        win = resolved.compensation_window
        _write_json(
            {
                "epsilon": cfg.epsilon,
                "modulus": ser.modulus_to_dict(cfg.modulus),
                "v0_radius": resolved.v0_radius,
                "blend_width": resolved.blend_width,
                "compensation_window": [win.lo, win.hi],
                "x0": result.x0,
                "sigma_hat": result.lower_bound_params.sigma_hat,
                "C": result.lower_bound_params.C,
                "kmax": args.kmax,
                "samples": args.samples,
                "delta_uniform": args.delta_uniform,
                "classification": result.report.classification,
                "seeds": None,
            },
            args.config_out,
        )


# -- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lebmaps",
        description="Lebesgue-preserving expanding circle maps: extension, invariance, distortion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    common.add_argument("--config", default=None, help="JSON file of option defaults, keyed by option name")
    common.add_argument("--seedless", action="store_true", help="accepted for recipes; runs are always deterministic")

    p = sub.add_parser("validate", parents=[common], help="check the structure of a map JSON")
    p.add_argument("map")
    p.add_argument("--grid-size", type=_positive_int, default=1000, help="validation points per branch")
    p.add_argument("--sigma-min", type=float, default=SIGMA_MIN, help="required expansion lower bound")
    p.add_argument("--tau-branch", type=float, default=TAU_BRANCH, help="endpoint and tiling tolerance")
    p.add_argument("--tau-match", type=float, default=TAU_MATCH, help="derivative matching tolerance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("extend", parents=[common], help="complete a partial spec to a Lebesgue-preserving map")
    p.add_argument("spec")
    p.add_argument("--delta-uniform", type=float, default=DELTA_UNIFORM, help="required margin below 1")
    p.add_argument("--grid-size", type=_positive_int, default=MARGIN_GRID, help="grid for the margin check")
    p.add_argument("--tau-match", type=float, default=TAU_MATCH, help="derivative matching tolerance")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("check-invariance", parents=[common], help="report Lebesgue invariance defects")
    p.add_argument("map")
    p.add_argument("--nodes", type=_positive_int, default=1000, help="grid nodes for P1 (>= 100)")
    p.add_argument("--intervals", type=_positive_int, default=64, help="equal intervals for the pullback check")
    p.add_argument("--density-csv", default=None, help="also write P1 on the grid as CSV")
    p.set_defaults(func=cmd_check_invariance)

    p = sub.add_parser("distortion", parents=[common], help="sampled distortion d_1..d_kmax as CSV")
    p.add_argument("map")
    p.add_argument("--kmax", type=_positive_int, default=10)
    p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES, help="samples per cylinder (>= 2)")
    p.add_argument("--tau-growth", type=float, default=TAU_GROWTH, help="relative rise that counts as growth")
    p.add_argument("--prefix", type=_word, default=(), help="restrict to itineraries starting with e.g. 1,1")
    p.add_argument("--budget", type=_positive_int, default=BUDGET, help="maximal cylinders per level")
    p.set_defaults(func=cmd_distortion)

    for name, func, helptext in (
        ("perturb", cmd_perturb, "perturb branch 1 by eps * modulus and re-extend"),
        ("demo-unbounded", cmd_demo_unbounded, "leftmost-cylinder distortion experiment as CSV"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("map")
        p.add_argument("--epsilon", type=float, default=0.05)
        p.add_argument("--modulus", type=_modulus, default=Modulus.log_reciprocal(2.0), help="holder:A, log:C or logsq:C")
        p.add_argument("--v0-radius", type=float, default=None, help="default |I_1|/5")
        p.add_argument("--blend-width", type=float, default=None, help="default |I_1|/10")
        p.add_argument("--window", type=_window, default=None, help="compensation window 'lo,hi'")
        p.add_argument("--delta-uniform", type=float, default=DELTA_UNIFORM)
        p.set_defaults(func=func)
        if name == "perturb":
            p.add_argument("--report", default=None, help="write C1 distance and invariance defect JSON here")
        else:
            p.add_argument("--kmax", type=_positive_int, default=40)
            p.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
            p.add_argument("--x0", type=float, default=None, help="default: midpoint of V0")
            p.add_argument("--config-out", default=None, help="write the resolved experiment config JSON here")
    return parser


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandFailed(EXIT_PARSE, "ConfigError", str(exc))
    if not isinstance(cfg, dict):
        raise CommandFailed(EXIT_PARSE, "ConfigError", "config must be a JSON object")
    # re-parse: config values become defaults, explicit flags still win
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("help", "config", "func"):
            raise CommandFailed(EXIT_PARSE, "ConfigError", f"unknown config field {key!r}")
        action = known[dest]
        if action.type is not None and not isinstance(value, bool):
            try:
                value = action.type(value if isinstance(value, str) else str(value))
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise CommandFailed(EXIT_PARSE, "ConfigError", f"{key}: {exc}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def run(argv=None):
    """Run one subcommand; returns the exit status."""
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except CommandFailed as exc:
        return _fail(exc.code, exc.kind, str(exc))
    except (ser.FormatError, OSError) as exc:
        return _fail(EXIT_PARSE, type(exc).__name__, str(exc))
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, type(exc).__name__, str(exc))
    except (PreconditionError, NumericError, LebmapsError, ValueError) as exc:
        return _fail(EXIT_FAIL, type(exc).__name__, str(exc))
    return EXIT_OK


def _fail(code, kind, message):
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

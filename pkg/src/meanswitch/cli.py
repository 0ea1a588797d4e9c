"""Command-line front door.

Subcommands: eval-mean, residual, residual-cont, reduce, affinity, phi,
search, verify.  Reports are canonical JSON (sorted keys, 17-digit
floats) written to stdout or --out; errors are machine-readable JSON on
stderr with exit code 2 for parse errors, 3 for validation and domain
errors and 4 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import affinity, generators, jsonio, means, measures, search, switch, verify
from .errors import (
    DomainError,
    InvalidSpecError,
    NumericalError,
    OutOfImageError,
    ParseError,
    ValidationError,
)
from .generators import Interval
from .means import BilinearKernel, StepKernel, ValueMatrix

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4


def _parse_interval(text: str) -> Interval:
    try:
        lo, hi = (float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ParseError(f"interval must be 'lo,hi', got {text!r}") from exc
    return Interval(lo, hi)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad numeric list {text!r}") from exc


def _load_json_arg(value: str) -> dict:
    """Accept a path to a JSON file or an inline JSON object."""
    path = Path(value)
    try:
        if path.exists() and path.is_file():
            text = path.read_text(encoding="utf-8")
        else:
            text = value
        obj = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read JSON from {value!r}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    return obj


def _read_matrix(value: str) -> ValueMatrix:
    if value == "-":
        return ValueMatrix.from_csv(sys.stdin.read())
    path = Path(value)
    if not path.exists():
        raise ParseError(f"matrix file {value!r} not found")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        try:
            return ValueMatrix.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad matrix JSON in {value!r}: {exc}") from exc
    return ValueMatrix.from_csv(text)


def _read_kernel(value: str):
    obj = _load_json_arg(value)
    kind = obj.get("type")
    try:
        if kind == "bilinear":
            c00, c10, c01, c11 = (float(v) for v in obj["coeffs"])
            return BilinearKernel(c00, c10, c01, c11)
        if kind == "step":
            values = tuple(float(v) for v in obj["values"])
            cuts = tuple(float(v) for v in obj["cuts"])
            return StepKernel(values, cuts)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad kernel JSON {obj!r}") from exc
    raise ParseError(f"kernel type must be 'bilinear' or 'step', got {kind!r}")


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanswitch",
        description="Quasi-arithmetic means and the switch-equation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-mean", help="Evaluate a discrete quasi-arithmetic mean")
    p.add_argument("--generator", required=True, help="e.g. pow:2 or log|affine:2:3")
    p.add_argument("--interval", required=True, help="lo,hi")
    p.add_argument("--weights", required=True, help="comma-separated weights")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out", default=None)

    p = sub.add_parser("residual", help="Discrete switch residual of an instance")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--lambda", dest="lam", required=True, help="row weights")
    p.add_argument("--mu", required=True, help="column weights")
    p.add_argument("--matrix", required=True, help="CSV/JSON path, or - for stdin CSV")
    p.add_argument("--out", default=None)

    p = sub.add_parser("residual-cont", help="Continuous switch residual by quadrature")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--lambda-measure", dest="lam", required=True, help="measure JSON or path")
    p.add_argument("--mu-measure", dest="mu", required=True)
    p.add_argument("--kernel", required=True, help="kernel JSON or path")
    p.add_argument("--out", default=None)

    p = sub.add_parser("reduce", help="Reduce a step-kernel instance to a 2x2 discrete one")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--lambda-measure", dest="lam", required=True)
    p.add_argument("--mu-measure", dest="mu", required=True)
    p.add_argument("--kernel", required=True, help="step kernel JSON or path")
    p.add_argument("--out", default=None)

    p = sub.add_parser("affinity", help="Fit f = a*g + b and report the sup error")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out", default=None)

    p = sub.add_parser("phi", help="Normalized composite and its affine surface fit")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--grid", type=int, default=affinity.SURFACE_GRID_DEFAULT)
    p.add_argument("--out", default=None)

    p = sub.add_parser("search", help="Maximize |residual| over matrices (and weights)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--interval", required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=400)
    p.add_argument("--constraint", choices=["symmetric", "rank1"], default=None)
    p.add_argument("--optimize-weights", action="store_true")
    p.add_argument("--weight-floor", type=float, default=0.05)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="Run verification suites; exit 0 iff all pass")
    p.add_argument("--suite", required=True, help="suite name or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    return parser


def _cmd_eval_mean(args) -> int:
    spec = generators.parse_generator(args.generator)
    interval = _parse_interval(args.interval)
    pv = measures.parse_weights(args.weights)
    values = _parse_floats(args.values)
    mean = means.discrete_mean(spec, interval, pv, values)
    _emit(jsonio.canonical(mean) + "\n", args.out)
    return EXIT_OK


def _cmd_residual(args) -> int:
    inst = switch.SwitchInstance.make(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
        measures.parse_weights(args.lam),
        measures.parse_weights(args.mu),
        _read_matrix(args.matrix),
    )
    _emit(jsonio.dumps(switch.discrete_residual(inst).to_json()), args.out)
    return EXIT_OK


def _cmd_residual_cont(args) -> int:
    inst = switch.ContinuousSwitchInstance.make(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
        measures.SimpleMeasure.from_json(_load_json_arg(args.lam)),
        measures.SimpleMeasure.from_json(_load_json_arg(args.mu)),
        _read_kernel(args.kernel),
    )
    _emit(jsonio.dumps(switch.continuous_residual(inst).to_json()), args.out)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    inst = switch.ContinuousSwitchInstance.make(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
        measures.SimpleMeasure.from_json(_load_json_arg(args.lam)),
        measures.SimpleMeasure.from_json(_load_json_arg(args.mu)),
        _read_kernel(args.kernel),
    )
    reduced = switch.reduce_to_discrete(inst)
    payload = {
        "instance": reduced.to_json(),
        "residual_continuous": switch.continuous_residual(inst).residual,
        "residual_discrete": switch.discrete_residual(reduced).residual,
    }
    _emit(jsonio.dumps(payload), args.out)
    return EXIT_OK


def _cmd_affinity(args) -> int:
    fit = affinity.detect_affine(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
        grid_size=args.grid,
    )
    payload = {
        "a": fit.a,
        "b": fit.b,
        "sup_error": fit.sup_error,
        "verdict": "affine" if fit.sup_error <= verify.AFFINE_SUP_THRESHOLD else "non-affine",
    }
    _emit(jsonio.dumps(payload), args.out)
    return EXIT_OK


def _cmd_phi(args) -> int:
    phi = affinity.normalize_pair(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
    )
    surf = affinity.build_phi_surface(phi, args.alpha, grid=args.grid)
    payload = {
        "A": surf.A,
        "B": surf.B,
        "C": surf.C,
        "fit_residual": surf.fit_residual,
        "diagonal_residual": surf.diagonal_residual,
    }
    _emit(jsonio.dumps(payload), args.out)
    return EXIT_OK


def _cmd_search(args) -> int:
    constraint = {"symmetric": "symmetric", "rank1": "rank_one", None: "none"}[args.constraint]
    cfg = search.SearchConfig(
        m=args.m,
        n=args.n,
        restarts=args.restarts,
        seed=args.seed,
        max_evals=args.max_evals,
        constraint=constraint,
        optimize_weights=args.optimize_weights,
        weight_floor=args.weight_floor,
    )
    result = search.maximize_residual(
        generators.parse_generator(args.f),
        generators.parse_generator(args.g),
        _parse_interval(args.interval),
        cfg,
    )
    _emit(jsonio.dumps(result.to_json()), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.suite == "all":
        reports = verify.run_all(seed=args.seed)
    else:
        reports = [verify.run_suite(args.suite, seed=args.seed)]
    passed = all(r.passed for r in reports)
    payload = {
        "seed": args.seed,
        "passed": passed,
        "reports": [r.to_json() for r in reports],
    }
    _emit(jsonio.dumps(payload), args.out)
    return EXIT_OK if passed else EXIT_FAIL


_HANDLERS = {
    "eval-mean": _cmd_eval_mean,
    "residual": _cmd_residual,
    "residual-cont": _cmd_residual_cont,
    "reduce": _cmd_reduce,
    "affinity": _cmd_affinity,
    "phi": _cmd_phi,
    "search": _cmd_search,
    "verify": _cmd_verify,
}


def _error_payload(code: int, exc: Exception) -> str:
    return jsonio.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code})


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ParseError as exc:
        sys.stderr.write(_error_payload(EXIT_PARSE, exc))
        return EXIT_PARSE
    except (InvalidSpecError, ValidationError, DomainError) as exc:
        sys.stderr.write(_error_payload(EXIT_VALIDATION, exc))
        return EXIT_VALIDATION
    except (OutOfImageError, NumericalError) as exc:
        sys.stderr.write(_error_payload(EXIT_NUMERICAL, exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

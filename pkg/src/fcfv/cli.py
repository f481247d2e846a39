"""Command line entry point: ``fcfv run|converge|tau-sweep|import-check``.

Settings come from, in decreasing priority: command-line flags, the file
given with ``--config`` (TOML when the interpreter has ``tomllib``, JSON
otherwise), the ``FCFV_NUM_THREADS`` environment variable (thread count
only) and built-in defaults.

Exit codes: 0 success, 2 usage error or unknown case, 1 any other failure.
Failures print one JSON object ``{"error": ..., "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .benchmarks import REGISTRY
from .runs import (
    RESULT_COLUMNS,
    TAU_COLUMNS,
    ConfigError,
    RunConfig,
    UnknownCaseError,
    import_check,
    run_case,
    run_convergence,
    run_tau_sweep,
    threads_from_env,
    write_rows,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    tomllib = None

_RUN_FIELDS = {f.name for f in fields(RunConfig)}
_SOLVER_KEYS = {"method", "preconditioner", "cg_tolerance", "cg_max_iterations"}


def load_config_file(path) -> dict:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".toml":
        if tomllib is None:
            raise ConfigError(f"{path}: TOML needs Python 3.11+; use a JSON config instead")
        data = tomllib.loads(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a table/object")
    unknown = sorted(set(data) - _RUN_FIELDS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")
    solver = data.get("solver", {})
    bad = sorted(set(solver) - _SOLVER_KEYS)
    if bad:
        raise ConfigError(f"{path}: unknown solver keys {', '.join(bad)}")
    return data


def _param(text: str):
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _dims(text: str):
    try:
        dims = tuple(int(v) for v in text.lower().split("x"))
    except ValueError:
        dims = ()
    if len(dims) != 3:
        raise argparse.ArgumentTypeError(f"expected NTHETAxNZxNT, got {text!r}")
    return dims


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--config", help="TOML or JSON file with RunConfig keys")
    p.add_argument("--case", help=f"benchmark name ({', '.join(sorted(REGISTRY))})")
    p.add_argument("--levels", type=int, nargs="+", help="refinement levels")
    p.add_argument("--shell-dims", type=_dims, nargs="+", dest="shell_dims", help="shell meshes as NTHETAxNZxNT")
    p.add_argument("--kind", choices=["quad", "tri", "hex", "tet"])
    p.add_argument("--seed", type=int, help="distort interior nodes with this seed")
    p.add_argument("--mesh-file", dest="mesh_file", help="use an imported mesh instead of generated ones")
    p.add_argument("--param", type=_param, action="append", dest="param", metavar="KEY=VALUE", help="case parameter (repeatable)")
    p.add_argument("--young-modulus", type=float, dest="young_modulus")
    p.add_argument("--nu", type=float)
    p.add_argument("--model", choices=["plane_strain", "plane_stress", "3d"])
    p.add_argument("--tau", type=float)
    p.add_argument("--length-scale", type=float, dest="length_scale")
    p.add_argument("--solver", choices=["auto", "direct", "cg"], dest="method")
    p.add_argument("--preconditioner", choices=["none", "jacobi", "amg"])
    p.add_argument("--cg-tolerance", type=float, dest="cg_tolerance")
    p.add_argument("--cg-max-iterations", type=int, dest="cg_max_iterations")
    p.add_argument("-o", "--output", help="artifact directory")
    p.add_argument("--vtk", action="store_true", help="write one VTK file per mesh")
    p.add_argument("--threads", type=int, help="assembly threads (default: FCFV_NUM_THREADS or 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcfv", description="Face-centred finite volume elasticity runs.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    sub.add_parser("run", parents=[common], help="solve one case and report errors")
    sub.add_parser("converge", parents=[common], help="convergence study over several levels")
    sweep = sub.add_parser("tau-sweep", parents=[common], help="error as a function of tau")
    sweep.add_argument("--taus", type=float, nargs="+", default=argparse.SUPPRESS)
    check = sub.add_parser("import-check", help="validate a mesh file")
    check.add_argument("path")
    check.add_argument("--case", help="take boundary rules from this case when the file has no tags")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ns = vars(args)
    data = load_config_file(ns["config"]) if "config" in ns else {}
    solver = dict(data.pop("solver", {}))
    data.setdefault("threads", threads_from_env())
    for key in _SOLVER_KEYS:
        if key in ns:
            solver[key] = ns[key]
    if "param" in ns:
        data["params"] = {**data.get("params", {}), **dict(ns["param"])}
    if "shell_dims" in ns:
        data["levels"] = [list(d) for d in ns["shell_dims"]]
    for key in _RUN_FIELDS - {"solver", "params"}:
        if key in ns:
            data[key] = ns[key]
    return RunConfig(**data, solver=solver)


def _emit_error(exc: BaseException) -> None:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "import-check":
            print(json.dumps(import_check(args.path, getattr(args, "case", None)), indent=2))
            return 0
        config = config_from_args(args)
        if args.command == "run":
            outcome = run_case(config)
            write_rows(outcome.rows, sys.stdout, RESULT_COLUMNS)
        elif args.command == "converge":
            outcome = run_convergence(config)
            write_rows(outcome.rows, sys.stdout, RESULT_COLUMNS)
            for key, rate in outcome.rates.items():
                print(f"rate {key} {rate:.4f}")
        else:
            outcome = run_tau_sweep(config)
            write_rows(outcome.rows, sys.stdout, TAU_COLUMNS)
            for mesh_id, tau in outcome.metadata["best_tau"].items():
                print(f"best tau {mesh_id} {tau:g}")
    except UnknownCaseError as exc:
        _emit_error(exc)
        return 2
    except (ValueError, KeyError, OSError, RuntimeError, TypeError) as exc:
        _emit_error(exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Batch driver: single runs, convergence sweeps, tau sweeps and mesh import.

Every driver writes into its own output directory:

``results.csv``
    one row per mesh (``converge``/``run``) with the frozen header
    :data:`RESULT_COLUMNS`, or one row per (mesh, tau) for ``tau-sweep``
    with :data:`TAU_COLUMNS`.
``metadata.json``
    tau, length scale, case parameters, mesh digests and solver reports.
``<mesh_id>.vtk``
    cell data, only when ``RunConfig.vtk`` is set.

CSV content depends only on the configuration, so two runs with the same
config (seeds included) give byte-identical files. Timings go to the
metadata file only.
"""

from __future__ import annotations

import csv
import inspect
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .benchmarks import REGISTRY, BenchmarkCase, get_case
from .mesh import Mesh, TAG_NAMES, Tag, classify_faces, read_mesh
from .pipeline import Result, case_errors, solve_problem
from .postproc import convergence_rate, export_vtk
from .solver import SolverConfig
from .voigt import Model

RESULT_COLUMNS = ["mesh_id", "h", "n_dof", "E_u", "E_sigma", "E_r", "scalar_name", "scalar_value"]
TAU_COLUMNS = ["mesh_id", "tau", "h", "n_dof", "E_u", "E_sigma", "E_sum", "best"]
DEFAULT_TAUS = (0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0)
THREADS_ENV = "FCFV_NUM_THREADS"


class UnknownCaseError(KeyError):
    """Raised for a case name missing from the registry."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown case {name!r}; available: {', '.join(sorted(REGISTRY))}")

    def __str__(self):
        return self.args[0]


class ConfigError(ValueError):
    pass


def threads_from_env(default: int = 1) -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass
class RunConfig:
    """Everything needed to reproduce a run.

    ``levels`` holds refinement levels; shell levels may also be explicit
    ``(n_theta, n_z, n_t)`` triples. ``mesh_file`` replaces the case's mesh
    generator with an imported mesh (its stored tags are used when present).
    ``young_modulus``, ``nu`` and ``model`` override the case material and
    are forwarded, like ``params``, to the case factory so that the exact
    solution stays consistent with the material.
    """

    case: str = "poly2d"
    levels: list = field(default_factory=lambda: [3])
    kind: str | None = None
    seed: int | None = None
    mesh_file: str | None = None
    params: dict = field(default_factory=dict)
    young_modulus: float | None = None
    nu: float | None = None
    model: str | None = None
    tau: float = 3.0
    taus: list = field(default_factory=lambda: list(DEFAULT_TAUS))
    length_scale: float | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    output: str | None = None
    vtk: bool = False
    threads: int = 1

    def __post_init__(self):
        if isinstance(self.solver, dict):
            self.solver = SolverConfig(**self.solver)
        if not self.levels and self.mesh_file is None:
            raise ConfigError("the refinement level list is empty")
        self.levels = [tuple(v) if isinstance(v, (list, tuple)) else int(v) for v in self.levels]
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if not self.taus or any(not t > 0 for t in self.taus):
            raise ConfigError(f"tau values must be positive, got {self.taus}")
        if self.length_scale is not None and not self.length_scale > 0:
            raise ConfigError(f"length scale must be positive, got {self.length_scale}")
        if self.threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {self.threads}")

    def factory_kwargs(self) -> dict:
        kw = dict(self.params)
        for key, value in (("young_modulus", self.young_modulus), ("nu", self.nu), ("model", self.model)):
            if value is not None:
                kw[key] = Model(value) if key == "model" else value
        return kw

    def as_dict(self) -> dict:
        d = asdict(self)
        d["solver"] = {k: getattr(v, "value", v) for k, v in asdict(self.solver).items()}
        d["levels"] = [list(v) if isinstance(v, tuple) else v for v in self.levels]
        d["params"] = {k: getattr(v, "value", v) for k, v in self.params.items()}
        return d


@dataclass
class RunOutcome:
    rows: list[dict]
    metadata: dict
    rates: dict = field(default_factory=dict)
    files: list[Path] = field(default_factory=list)


def make_case(config: RunConfig) -> BenchmarkCase:
    if config.case not in REGISTRY:
        raise UnknownCaseError(config.case)
    factory = REGISTRY[config.case]
    kw = config.factory_kwargs()
    accepted = inspect.signature(factory).parameters
    unknown = sorted(set(kw) - set(accepted))
    if unknown:
        raise ConfigError(
            f"case {config.case!r} does not take {', '.join(unknown)}; it accepts {', '.join(accepted) or 'no parameters'}"
        )
    return get_case(config.case, **kw)


def _meshes(case: BenchmarkCase, config: RunConfig):
    """Yield (mesh_id, mesh) for every requested refinement."""
    if config.mesh_file is not None:
        mesh = read_mesh(config.mesh_file)
        yield Path(config.mesh_file).stem, mesh
        return
    for level in config.levels:
        yield case.mesh_label(level, config.kind, config.seed), case.mesh(level, config.kind, config.seed)


def _solve_one(case: BenchmarkCase, mesh: Mesh, tau: float, config: RunConfig) -> tuple[Result, dict]:
    problem = case.problem(mesh, tau=tau, length_scale=config.length_scale)
    result = solve_problem(problem, config.solver, n_threads=config.threads)
    row = case_errors(case, result)
    if case.scalar is not None:
        row["scalar_name"], row["scalar_value"] = case.scalar(mesh, result)
    return result, row


def _mesh_record(mesh_id: str, mesh: Mesh, result: Result) -> dict:
    rep = result.report.as_dict()
    return {
        "mesh_id": mesh_id,
        "kind": mesh.kind,
        "digest": mesh.digest(),
        "n_cells": mesh.n_cells,
        "n_faces": mesh.n_faces,
        "n_dof": result.system.n_dof,
        "solver": rep,
    }


def _base_metadata(command: str, case: BenchmarkCase, config: RunConfig) -> dict:
    ell = case.length_scale if config.length_scale is None else config.length_scale
    return {
        "command": command,
        "version": __version__,
        "case": _jsonable(case.metadata()),
        "reference": _jsonable(case.reference),
        "tau": config.tau,
        "length_scale": ell,
        "config": config.as_dict(),
        "meshes": [],
    }


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if hasattr(obj, "value"):
        return obj.value
    return obj


def _output_dir(config: RunConfig) -> Path | None:
    if config.output is None:
        return None
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return out


def write_rows(rows: Sequence[dict], path_or_buffer, columns: Sequence[str]) -> None:
    """CSV with a fixed header; floats use their shortest round-trip repr,
    missing values are blank."""
    own = isinstance(path_or_buffer, (str, os.PathLike))
    fh = open(path_or_buffer, "w", newline="") if own else path_or_buffer
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow(["" if row.get(c) is None else _cell(row[c]) for c in columns])
    finally:
        if own:
            fh.close()


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _write_artifacts(out: Path | None, rows, columns, metadata, outcome: RunOutcome) -> None:
    if out is None:
        return
    csv_path, meta_path = out / "results.csv", out / "metadata.json"
    write_rows(rows, csv_path, columns)
    with open(meta_path, "w") as fh:
        json.dump(_jsonable(metadata), fh, indent=2, sort_keys=True)
        fh.write("\n")
    outcome.files += [csv_path, meta_path]


def _sweep(command: str, config: RunConfig) -> RunOutcome:
    case = make_case(config)
    out = _output_dir(config)
    meta = _base_metadata(command, case, config)
    rows, outcome = [], RunOutcome([], meta)
    for mesh_id, mesh in _meshes(case, config):
        result, row = _solve_one(case, mesh, config.tau, config)
        rows.append({"mesh_id": mesh_id, **row})
        meta["meshes"].append(_mesh_record(mesh_id, mesh, result))
        if out is not None and config.vtk:
            path = out / f"{mesh_id}.vtk"
            export_vtk(mesh, result.solution, path, title=f"{case.name} {mesh_id}")
            outcome.files.append(path)
    outcome.rows = rows
    return outcome


def run_case(config: RunConfig) -> RunOutcome:
    """Solve every level in ``config.levels`` (normally one) and report errors
    and the case's reference scalar."""
    outcome = _sweep("run", config)
    _write_artifacts(_output_dir(config), outcome.rows, RESULT_COLUMNS, outcome.metadata, outcome)
    return outcome


def fit_rates(rows: Sequence[dict], last: int = 3) -> dict:
    """Least-squares slope of log(E) against log(h) over the last ``last`` rows."""
    tail = rows[-last:]
    rates = {}
    for key in ("E_u", "E_sigma", "E_r"):
        vals = [r.get(key) for r in tail]
        if all(v is not None and v > 0 for v in vals):
            rates[key] = convergence_rate([r["h"] for r in tail], vals)
    return rates


def run_convergence(config: RunConfig) -> RunOutcome:
    if config.mesh_file is not None:
        raise ConfigError("a convergence study needs generated meshes, not a single mesh file")
    if len(config.levels) < 3:
        raise ConfigError(f"a convergence study needs at least 3 levels, got {len(config.levels)}")
    outcome = _sweep("converge", config)
    outcome.rates = fit_rates(outcome.rows)
    outcome.metadata["rates"] = outcome.rates
    _write_artifacts(_output_dir(config), outcome.rows, RESULT_COLUMNS, outcome.metadata, outcome)
    return outcome


def run_tau_sweep(config: RunConfig) -> RunOutcome:
    """One row per (mesh, tau); ``best`` flags the tau with the smallest
    E_u + E_sigma on each mesh."""
    case = make_case(config)
    if case.exact_displacement is None:
        raise ConfigError(f"case {case.name!r} has no exact solution to sweep tau against")
    out = _output_dir(config)
    meta = _base_metadata("tau-sweep", case, config)
    meta["taus"] = list(config.taus)
    rows = []
    for mesh_id, mesh in _meshes(case, config):
        block = []
        for tau in config.taus:
            result, row = _solve_one(case, mesh, tau, config)
            row = {"mesh_id": mesh_id, "tau": float(tau), **row, "E_sum": row["E_u"] + row["E_sigma"]}
            block.append(row)
            meta["meshes"].append({**_mesh_record(mesh_id, mesh, result), "tau": float(tau)})
        best = min(range(len(block)), key=lambda i: block[i]["E_sum"])
        for i, row in enumerate(block):
            row["best"] = i == best
        rows += block
    outcome = RunOutcome(rows, meta)
    meta["best_tau"] = {r["mesh_id"]: r["tau"] for r in rows if r["best"]}
    _write_artifacts(out, rows, TAU_COLUMNS, meta, outcome)
    return outcome


def import_mesh(path) -> Mesh:
    return read_mesh(path)


def import_check(path, case: str | None = None) -> dict:
    """Read a mesh file, validate it and summarise it.

    Boundary tags stored in the file are checked for completeness. Without
    stored tags, ``case`` supplies the boundary rules instead.
    """
    mesh = read_mesh(path)
    rules = None
    if mesh.face_tags is None and case is not None:
        rules = make_case(RunConfig(case=case)).rules
    fs = classify_faces(mesh, rules)
    counts = {TAG_NAMES[t]: int(np.sum(fs.tags == t)) for t in (Tag.DIRICHLET, Tag.NEUMANN, Tag.SYMMETRY)}
    groups = sorted({str(g) for g in fs.groups[mesh.boundary_faces]})
    return {
        "path": str(path),
        "kind": mesh.kind,
        "nsd": mesh.nsd,
        "n_nodes": len(mesh.nodes),
        "n_cells": mesh.n_cells,
        "n_faces": mesh.n_faces,
        "n_boundary_faces": int(mesh.boundary_faces.size),
        "h": mesh.h,
        "digest": mesh.digest(),
        "boundary_tags": counts,
        "groups": groups,
        "tags_from": "file" if rules is None else f"case {case}",
    }


def with_overrides(config: RunConfig, **changes) -> RunConfig:
    return replace(config, **{k: v for k, v in changes.items() if v is not None})

"""Command-line entry point: run, sweep, validate.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (the
message names the failing operation).
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Optional

import numpy as np

from .. import __version__
from ..errors import ConfigError, NmflowError, NumericalError
from ..measures import compute_report
from ..measures.trajectory import backflow
from ..models.spin_chains import xx_chain_distance, xx_chain_sigma
from .scenarios import (TRAJECTORY_MODELS, ScenarioConfig, SweepAxis,
                        apply_sweep_point, build_model, load_config)
from .writers import (IncrementalCsvWriter, fmt, measures_header, measures_row,
                      write_trajectory_csv)


def _threads(config: ScenarioConfig, override: Optional[int]) -> int:
    if override is not None:
        return max(1, override)
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get("NMFLOW_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"NMFLOW_THREADS is not an integer: {env!r}")
    return os.cpu_count() or 1


def _evaluate_point(config: ScenarioConfig, params: dict) -> dict:
    """All measures plus trajectory data for one parameter assignment."""
    times = config.times()
    toggles = config.measure_toggles
    if config.model_id in TRAJECTORY_MODELS:
        return _evaluate_trajectory_model(config, params, times)

    model = build_model(config.model_id, params)
    report = compute_report(
        model, times, settings=config.search,
        with_blp=toggles.get("blp", True),
        with_helstrom=toggles.get("helstrom", True),
        with_rhp=toggles.get("rhp", True),
        with_divisibility=toggles.get("divisibility", True),
        with_volume=toggles.get("volume", True))

    cells = {
        "blp": report.blp.value if report.blp is not None else None,
        "helstrom": report.helstrom.value if report.helstrom is not None else None,
        "rhp": report.rhp.value if report.rhp is not None else None,
        "rhp_infinite_flag": report.rhp.infinite if report.rhp is not None else None,
        "divisibility_class": (report.divisibility.classification.value
                               if report.divisibility is not None else None),
        "volume_monotone": (report.volume.monotone
                            if report.volume is not None else None),
        "error": None,
    }
    out = {"cells": cells, "report": report, "times": times}
    if report.blp is not None:
        traj = report.blp.trajectory
        out["distances"] = traj.values
        out["sigmas"] = np.gradient(traj.values, times)
    g_fun = model.decoherence_function()
    if g_fun is not None:
        gs = g_fun.values(times)
        out["g_abs"] = np.abs(gs)
        out["g_phase"] = np.angle(gs)
    if report.volume is not None:
        out["volumes"] = report.volume.volumes
    return out


def _evaluate_trajectory_model(config: ScenarioConfig, params: dict,
                               times: np.ndarray) -> dict:
    if config.model_id == "xx_chain":
        distances = xx_chain_distance(times)
        sigmas = xx_chain_sigma(times)
        extras = {"g_abs": distances, "g_phase": np.zeros_like(times),
                  "volumes": distances ** 2}
        label = "XX-chain optimal pair"
    elif config.model_id == "total_system":
        from ..correlations import info_flow
        record = info_flow(build_model(config.model_id, params), times)
        distances = record.i_int
        sigmas = np.gradient(distances, times)
        extras = {"i_ext": record.i_ext,
                  "conservation_defect": record.conservation_defect()}
        label = "total-system reduced pair (I_int)"
    else:
        model = build_model(config.model_id, params)
        distances = model.global_distance(times)
        sigmas = np.gradient(distances, times)
        extras = {
            "local_1": model.local_distance(times, 1),
            "local_2": model.local_distance(times, 2),
        }
        label = "Bell-pair (global)"
    cells = {
        "blp": backflow(times, distances),
        "helstrom": None, "rhp": None, "rhp_infinite_flag": None,
        "divisibility_class": "not_applicable", "volume_monotone": None,
        "error": None,
    }
    return {"cells": cells, "report": None, "times": times,
            "distances": distances, "sigmas": sigmas, "label": label, **extras}


def _point_assignments(axes: tuple[SweepAxis, ...]) -> list[dict]:
    if not axes:
        return [{}]
    grids = [axis.values() for axis in axes]
    names = [axis.parameter for axis in axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*grids)]


def _write_point_outputs(config: ScenarioConfig, result: dict) -> None:
    times = result["times"]
    if "distances" in result:
        write_trajectory_csv(config.out_dir / "trajectory.csv", times,
                             result["distances"], result["sigmas"],
                             result.get("g_abs"), result.get("g_phase"),
                             result.get("volumes"))


def _report_lines(config: ScenarioConfig, result: dict,
                  assignments: Optional[dict] = None) -> list[str]:
    lines = [f"nmflow {__version__} report",
             f"model: {config.model_id}"]
    params = dict(config.model_params)
    if assignments:
        params.update(assignments)
    lines.append(f"parameters: {params}")
    lines.append(f"window: t in [0, {fmt(config.t_max)}], {config.n_points} points")
    lines.append(f"seed: {config.seed}")
    lines.append("")
    report = result.get("report")
    cells = result["cells"]
    if report is None:
        lines.append(f"trajectory model ({result.get('label', '')})")
        lines.append(f"blp (trajectory backflow): {fmt(cells['blp'])}")
        if "local_1" in result:
            lines.append(
                f"local backflow photon 1: "
                f"{fmt(float(np.maximum(np.diff(result['local_1']), 0).sum()))}, "
                f"photon 2: "
                f"{fmt(float(np.maximum(np.diff(result['local_2']), 0).sum()))}")
        if "conservation_defect" in result:
            lines.append(f"I_int + I_ext conservation defect: "
                         f"{fmt(result['conservation_defect'])}")
        return lines
    if report.blp is not None:
        b = report.blp
        polar, azim = b.bloch_angles
        lines.append(f"blp: {fmt(b.value)}")
        lines.append(f"  optimal pair Bloch vectors: +/-({fmt(b.direction[0])}, "
                     f"{fmt(b.direction[1])}, {fmt(b.direction[2])})")
        lines.append(f"  polar angle: {np.degrees(polar):.3f} deg, "
                     f"azimuth: {np.degrees(azim):.3f} deg")
        lines.append(f"  certified zero: {fmt(b.certified_zero)}; "
                     f"refinement error: {fmt(b.refinement_error)}")
    if report.helstrom is not None:
        lines.append(f"helstrom: {fmt(report.helstrom.value)} "
                     f"(weight q = {fmt(report.helstrom.weight)})")
    if report.rhp is not None:
        r = report.rhp
        tag = (f"INFINITE (first singular time {fmt(r.first_singular_time)}; "
               f"finite part {fmt(r.value)})") if r.infinite else fmt(r.value)
        lines.append(f"rhp: {tag}")
    if report.divisibility is not None:
        d = report.divisibility
        extra = (f" (first violation t = {fmt(d.first_violation_time)})"
                 if d.first_violation_time is not None else "")
        lines.append(f"divisibility: {d.classification.value}{extra} [{d.method}]")
    if report.volume is not None:
        lines.append(f"volume monotone: {fmt(report.volume.monotone)}")
    lines.append("")
    lines.append(f"diagnostics: {report.diagnostics}")
    return lines


def run_command(config: ScenarioConfig) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    result = _evaluate_point(config, config.model_params)
    _write_point_outputs(config, result)
    header = measures_header(())
    with (config.out_dir / "measures.csv").open("w") as fh:
        fh.write(header + "\n")
        fh.write(measures_row((), result["cells"]) + "\n")
    report_text = "\n".join(_report_lines(config, result)) + "\n"
    (config.out_dir / "report.txt").write_text(report_text)
    return 0


def sweep_command(config: ScenarioConfig, n_threads: int) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    assignments = _point_assignments(config.axes)
    axis_names = tuple(axis.parameter for axis in config.axes)
    writer = IncrementalCsvWriter(config.out_dir / "measures.csv",
                                  measures_header(axis_names))

    def work(index_and_assignment):
        index, assignment = index_and_assignment
        params = apply_sweep_point(config.model_params, assignment)
        try:
            result = _evaluate_point(config, params)
            cells = result["cells"]
        except NmflowError as err:
            result = None
            cells = {"error": f"{type(err).__name__}: {err}"}
        return index, assignment, cells, result

    report_lines = [f"nmflow {__version__} sweep report",
                    f"model: {config.model_id}",
                    f"axes: {[a.parameter for a in config.axes]}",
                    f"points: {len(assignments)}", ""]
    results = {}
    if n_threads == 1:
        iterator = map(work, enumerate(assignments))
    else:
        pool = ThreadPoolExecutor(max_workers=n_threads)
        iterator = pool.map(work, enumerate(assignments))
    for index, assignment, cells, result in iterator:
        axis_values = tuple(assignment[name] for name in axis_names)
        writer.add(index, measures_row(axis_values, cells))
        results[index] = (assignment, cells, result)
    if n_threads > 1:
        pool.shutdown()
    writer.close()

    for index in sorted(results):
        assignment, cells, _ = results[index]
        status = cells.get("error") or f"blp={fmt(cells.get('blp'))}"
        report_lines.append(f"point {index} {assignment}: {status}")
    (config.out_dir / "report.txt").write_text("\n".join(report_lines) + "\n")

    if len(assignments) == 1 and results[0][2] is not None:
        _write_point_outputs(config, results[0][2])
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nmflow",
        description="Open-system dynamics, non-Markovianity measures and "
                    "divisibility diagnostics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("run", "evaluate one scenario"),
                            ("sweep", "evaluate a parameter sweep"),
                            ("validate", "check a scenario file and exit")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="scenario TOML file")
        p.add_argument("--out", help="output directory override")
        p.add_argument("--seed", type=int, help="seed override")
        p.add_argument("--threads", type=int, help="worker count override "
                       "(default: NMFLOW_THREADS or logical cores)")

    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.out:
            config = replace(config, out_dir=Path(args.out))
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.command == "validate":
            print(f"{args.config}: valid ({config.model_id}, "
                  f"{len(config.axes)} sweep axes)")
            return 0
        threads = _threads(config, args.threads)
        if args.command == "run":
            return run_command(config)
        return sweep_command(config, threads)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        op = f" [{err.operation}]" if err.operation else ""
        print(f"numerical failure{op}: {err}", file=sys.stderr)
        return 3
    except NmflowError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

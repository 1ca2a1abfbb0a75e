"""Scenario configuration: TOML schema, validation, model builders.

The full schema is documented in docs/config.md.  Every section maps to
one module: [model] picks and parametrizes the dynamics, [time] the
grid, [measures] the toggles, [search] the pair-search settings,
[sweep] up to two parameter axes, [run] seed/output/threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

try:
    import tomllib  # Python 3.11+
except ModuleNotFoundError:  # pragma: no cover - version-dependent import
    import tomli as tomllib

from ..errors import ConfigError
from ..models import (FabryPerotParams, FrequencySpectrum, LossyCavityModel,
                      NonlocalDephasingModel, PlateSchedule, PureDephasingModel,
                      RandomUnitaryModel, SpectralDensity, SpectrumDephasingModel,
                      SpinChainSpec, IsingProbeModel, fabry_perot_spectrum)
from ..measures import SearchSettings

MIN_GRID = 16


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ScenarioConfig:
    model_id: str
    model_params: dict
    t_max: float
    n_points: int
    out_dir: Path
    seed: int = 0
    threads: Optional[int] = None
    measure_toggles: dict = dc_field(default_factory=dict)
    search: SearchSettings = SearchSettings()
    axes: tuple[SweepAxis, ...] = ()

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_points)


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ConfigError(f"missing key '{key}' in [{where}]")
    value = table[key]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"[{where}] {key} must be {kind.__name__}, "
                          f"got {type(value).__name__}")
    return value


def load_config(path) -> ScenarioConfig:
    """Parse and validate a scenario file; ConfigError carries line info
    when the TOML itself is malformed."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f"{path}: {err}")
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> ScenarioConfig:
    model_tbl = raw.get("model")
    if not isinstance(model_tbl, dict):
        raise ConfigError("missing [model] section")
    model_id = _require(model_tbl, "id", str, "model")
    if model_id not in MODEL_BUILDERS:
        known = ", ".join(sorted(MODEL_BUILDERS))
        raise ConfigError(f"unknown model id '{model_id}' (known: {known})")
    params = {k: v for k, v in model_tbl.items() if k != "id"}

    time_tbl = raw.get("time", {})
    t_max = _require(time_tbl, "t_max", float, "time")
    n_points = _require(time_tbl, "n_points", int, "time")
    if t_max <= 0:
        raise ConfigError("[time] t_max must be positive")
    if n_points < MIN_GRID:
        raise ConfigError(f"[time] n_points must be at least {MIN_GRID}")

    run_tbl = raw.get("run", {})
    out_dir = Path(run_tbl.get("out_dir", "nmflow-out"))
    seed = int(run_tbl.get("seed", 0))
    threads = run_tbl.get("threads")
    if threads is not None:
        threads = int(threads)
        if threads < 1:
            raise ConfigError("[run] threads must be >= 1")

    measures_tbl = raw.get("measures", {})
    toggles = {key: bool(measures_tbl.get(key, True))
               for key in ("blp", "helstrom", "rhp", "divisibility", "volume")}

    search_tbl = raw.get("search", {})
    search = SearchSettings(
        n_azimuthal=int(search_tbl.get("n_azimuthal", 24)),
        n_polar=int(search_tbl.get("n_polar", 12)),
        refine=bool(search_tbl.get("refine", True)),
        n_weights=int(search_tbl.get("n_weights", 9)))
    if search.n_azimuthal < 4 or search.n_polar < 3:
        raise ConfigError("[search] grid too coarse (need >= 4 x 3)")

    axes = []
    sweep_tbl = raw.get("sweep")
    if sweep_tbl is not None:
        axes.append(_parse_axis(sweep_tbl, "sweep"))
        second = sweep_tbl.get("second")
        if second is not None:
            axes.append(_parse_axis(second, "sweep.second"))
    if len(axes) > 2:
        raise ConfigError("at most two sweep axes are supported")

    config = ScenarioConfig(model_id=model_id, model_params=params, t_max=t_max,
                            n_points=n_points, out_dir=out_dir, seed=seed,
                            threads=threads, measure_toggles=toggles,
                            search=search, axes=tuple(axes))
    # building the model validates the parameters early
    build_model(config.model_id, config.model_params)
    return config


def _parse_axis(tbl: dict, where: str) -> SweepAxis:
    parameter = _require(tbl, "parameter", str, where)
    start = _require(tbl, "start", float, where)
    stop = _require(tbl, "stop", float, where)
    steps = _require(tbl, "steps", int, where)
    if steps < 1:
        raise ConfigError(f"[{where}] steps must be >= 1")
    return SweepAxis(parameter, start, stop, steps)


# ---------------------------------------------------------------------------
# model builders

def _rate_from_spec(spec, where: str) -> Callable[[float], float] | float:
    if isinstance(spec, (int, float)):
        return float(spec)
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "constant":
            return float(spec.get("value", 0.0))
        if kind == "tanh":
            scale = float(spec.get("scale", 1.0))
            sign = float(spec.get("sign", 1.0))
            return lambda t: sign * math.tanh(scale * t)
        if kind == "piecewise_constant":
            edges = np.asarray(spec.get("times", []), dtype=float)
            values = np.asarray(spec.get("values", []), dtype=float)
            if len(values) != len(edges) + 1:
                raise ConfigError(f"[{where}] piecewise_constant needs "
                                  "len(values) == len(times) + 1")
            return lambda t: float(values[int(np.searchsorted(edges, t, "right"))])
        raise ConfigError(f"[{where}] unknown rate kind '{kind}'")
    raise ConfigError(f"[{where}] rate must be a number or a table")


def _beta_from(params: dict):
    beta = params.get("beta")
    if beta in (None, "inf", "zero_temperature"):
        return None
    return float(beta)


def _build_dephasing_ohmic(params: dict):
    j = SpectralDensity.ohmic(alpha=float(params.get("alpha", 1.0)),
                              exponent=float(params.get("exponent", 1.0)),
                              cutoff=float(params.get("cutoff", 1.0)))
    return PureDephasingModel.thermal(j, _beta_from(params))


def _build_dephasing_tabulated(params: dict):
    path = params.get("path")
    if not path:
        raise ConfigError("[model] dephasing_tabulated needs 'path' to a "
                          "two-column (omega, J) text file")
    j = SpectralDensity.from_text(path)
    return PureDephasingModel.thermal(j, _beta_from(params))


def _build_lossy_cavity(params: dict):
    return LossyCavityModel.from_params(
        gamma0=float(params.get("gamma0", 1.0)),
        lam=float(params.get("lam", 1.0)),
        detuning=float(params.get("detuning", 0.0)))


def _build_random_unitary(params: dict):
    return RandomUnitaryModel(
        _rate_from_spec(params.get("gamma1", 0.0), "model.gamma1"),
        _rate_from_spec(params.get("gamma2", 0.0), "model.gamma2"),
        _rate_from_spec(params.get("gamma3", 0.0), "model.gamma3"))


def _build_spectrum(params: dict) -> FrequencySpectrum:
    spec = params.get("spectrum")
    if not isinstance(spec, dict):
        raise ConfigError("[model] dephasing_spectrum needs a [model.spectrum] table")
    kind = spec.get("kind")
    if kind == "two_peak":
        return FrequencySpectrum.two_peak(
            separation=float(spec.get("separation", 1.0)),
            weight_ratio=float(spec.get("weight_ratio", 0.5)),
            center=float(spec.get("center", 0.0)))
    if kind == "gaussian":
        return FrequencySpectrum.gaussian(variance=float(spec.get("variance", 1.0)),
                                          center=float(spec.get("center", 0.0)))
    if kind == "fabry_perot":
        fp = FabryPerotParams(
            center=float(spec.get("center", 0.0)),
            envelope_sigma=float(spec.get("envelope_sigma", 1.0)),
            finesse_coefficient=float(spec.get("finesse_coefficient", 30.0)),
            free_spectral_range=float(spec.get("free_spectral_range", 4.0)),
            tilt_scale=float(spec.get("tilt_scale", 0.0245)))
        return fabry_perot_spectrum(float(spec.get("theta", 0.0)), fp)
    if kind == "file":
        return FrequencySpectrum.from_text(spec["path"])
    raise ConfigError(f"[model.spectrum] unknown kind '{kind}'")


def _build_dephasing_spectrum(params: dict):
    return SpectrumDephasingModel(_build_spectrum(params),
                                  delta_n=float(params.get("delta_n", 1.0)))


def _build_ising_probe(params: dict):
    spec = SpinChainSpec.at_shifted_field(
        n_spins=int(params.get("n_spins", 8)),
        field_shifted=float(params.get("lambda_star", 1.0)),
        probe_coupling=float(params.get("delta", 0.1)),
        coupling=float(params.get("coupling", 1.0)),
        boundary=str(params.get("boundary", "periodic")))
    return IsingProbeModel(spec)


def _build_nonlocal(params: dict):
    sched_tbl = params.get("schedule", {})
    kind = sched_tbl.get("kind", "consecutive")
    if kind == "consecutive":
        schedule = PlateSchedule.consecutive(
            duration2=float(sched_tbl.get("duration2", 1.0)),
            duration1=float(sched_tbl.get("duration1", 1.0)))
    elif kind == "simultaneous":
        schedule = PlateSchedule.simultaneous(float(sched_tbl.get("duration", 1.0)))
    else:
        raise ConfigError(f"[model.schedule] unknown kind '{kind}'")
    return NonlocalDephasingModel(
        variance=float(params.get("variance", 1.0)),
        correlation=float(params.get("correlation", 0.0)),
        delta_n=float(params.get("delta_n", 1.0)),
        schedule=schedule)


def _build_xx_chain(params: dict):
    return "xx_chain"  # trajectory-level; no parameters at matched fields


def _matrix_from(params: dict, key: str, dim: int) -> np.ndarray:
    real = params.get(key)
    if real is None:
        raise ConfigError(f"[model] total_system needs '{key}'")
    mat = np.asarray(real, dtype=float).astype(complex)
    imag = params.get(key + "_imag")
    if imag is not None:
        mat = mat + 1.0j * np.asarray(imag, dtype=float)
    if mat.shape != (dim, dim):
        raise ConfigError(f"[model] {key} has shape {mat.shape}, expected "
                          f"({dim}, {dim})")
    return mat


_TOTAL_PRESETS = {
    # qubit pair with exchange coupling, distinct product preparations
    "qubit_exchange": dict(
        dim_s=2, dim_e=2,
        h_s=[[0.5, 0.0], [0.0, -0.5]], h_e=[[0.4, 0.0], [0.0, -0.4]],
        h_i=[[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.4, 0.0],
             [0.0, 1.4, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]],
        rho_s1_bloch=[0.8, 0.0, 0.2], rho_s2_bloch=[-0.5, 0.3, -0.4],
        rho_e_bloch=[0.0, 0.0, 0.6]),
}


def _build_total_system(params: dict):
    from ..core.states import DensityMatrix
    from ..correlations import TotalSystem

    preset = params.get("preset")
    if preset is not None:
        if preset not in _TOTAL_PRESETS:
            raise ConfigError(f"[model] unknown total_system preset '{preset}' "
                              f"(known: {', '.join(sorted(_TOTAL_PRESETS))})")
        params = {**_TOTAL_PRESETS[preset], **{k: v for k, v in params.items()
                                               if k != "preset"}}
    dim_s = int(params.get("dim_s", 2))
    dim_e = int(params.get("dim_e", 2))
    h_s = _matrix_from(params, "h_s", dim_s)
    h_e = _matrix_from(params, "h_e", dim_e)
    h_i = _matrix_from(params, "h_i", dim_s * dim_e)
    if "rho_s1_bloch" in params:
        rho_s1 = DensityMatrix.from_bloch(params["rho_s1_bloch"])
        rho_s2 = DensityMatrix.from_bloch(params["rho_s2_bloch"])
        rho_e = DensityMatrix.from_bloch(params["rho_e_bloch"])
    else:
        rho_s1 = DensityMatrix(_matrix_from(params, "rho_s1", dim_s))
        rho_s2 = DensityMatrix(_matrix_from(params, "rho_s2", dim_s))
        rho_e = DensityMatrix(_matrix_from(params, "rho_e", dim_e))
    return TotalSystem.from_product(h_s, h_e, h_i, rho_s1, rho_s2, rho_e)


MODEL_BUILDERS: dict[str, Callable[[dict], Any]] = {
    "dephasing_ohmic": _build_dephasing_ohmic,
    "dephasing_tabulated": _build_dephasing_tabulated,
    "lossy_cavity": _build_lossy_cavity,
    "random_unitary": _build_random_unitary,
    "dephasing_spectrum": _build_dephasing_spectrum,
    "ising_probe": _build_ising_probe,
    "nonlocal_dephasing": _build_nonlocal,
    "xx_chain": _build_xx_chain,
    "total_system": _build_total_system,
}

# models whose output is a trajectory rather than a qubit map family
TRAJECTORY_MODELS = {"nonlocal_dephasing", "xx_chain", "total_system"}


def build_model(model_id: str, params: dict):
    try:
        return MODEL_BUILDERS[model_id](params)
    except ConfigError:
        raise
    except KeyError as err:
        raise ConfigError(f"[model] missing parameter {err}")
    except (TypeError, ValueError) as err:
        raise ConfigError(f"[model] invalid parameters for '{model_id}': {err}")


def apply_sweep_point(params: dict, assignments: dict[str, float]) -> dict:
    """Overlay swept values onto the model parameter table (dotted keys
    reach into subtables, e.g. 'spectrum.theta')."""
    out = {k: (dict(v) if isinstance(v, dict) else v) for k, v in params.items()}
    for key, value in assignments.items():
        parts = key.split(".")
        table = out
        for part in parts[:-1]:
            table = table.setdefault(part, {})
            if not isinstance(table, dict):
                raise ConfigError(f"sweep parameter '{key}' does not address a table")
        table[parts[-1]] = value
    return out

"""z-axis sweeps over the power models, figure presets, and trace metrics."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Sequence

import numpy as np

from . import closed_form, field as fe
from .field import FocusScenario, PhaseNoiseModel
from .geometry import SPEED_OF_LIGHT, ArrayConfig, DeviationModel
from .pathloss import CIPathLossParams, emulate_measurement_trace

MODEL_TAGS = (
    "exact",
    "closed_form",
    "noisy_expectation",
    "noisy_mc",
    "deviated",
    "deviated_taylor",
    "emulated",
)

FOCUSING_THRESHOLD_DB = 3.0


@dataclass
class PowerTrace:
    """Power sampled along the z-axis, tagged with the model that produced it."""

    grid: np.ndarray
    values: np.ndarray
    model_tag: str
    config_snapshot: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.size == 0:
            raise ValueError("trace grid must be a non-empty 1-D array")
        if self.values.shape != self.grid.shape:
            raise ValueError("trace grid and values differ in length")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("trace grid must be strictly increasing")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("trace values must be finite and non-negative")
        if self.model_tag not in MODEL_TAGS:
            raise ValueError(f"unknown model tag {self.model_tag!r}")

    def __len__(self) -> int:
        return self.grid.size

    @property
    def normalized(self) -> bool:
        return bool(self.config_snapshot.get("normalized", False))

    @property
    def wavelength(self) -> float | None:
        snap = self.config_snapshot
        return snap.get("array", {}).get("wavelength", snap.get("wavelength"))

    def peak_normalized(self) -> PowerTrace:
        snap = dict(self.config_snapshot, normalized=True)
        return PowerTrace(self.grid, self.values / self.values.max(), self.model_tag, snap)


@dataclass(frozen=True)
class TraceComparison:
    max_relative_error: float
    rms_relative_error: float
    peak_shift: float


class LobeUnboundedError(ValueError):
    """No local minimum on one or both sides of the focus within the grid."""

    def __init__(self, sides: tuple[str, ...]):
        self.sides = sides
        super().__init__(f"main lobe unbounded on side(s): {', '.join(sides)}")


# -- presets -----------------------------------------------------------------------

@dataclass(frozen=True)
class Preset:
    name: str
    frequency_hz: float
    power_w: float
    side_count: int
    spacing_lam: float
    focal_lam: float
    description: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    def array(self, side_count: int | None = None, spacing_lam: float | None = None) -> ArrayConfig:
        lam = self.wavelength
        return ArrayConfig(side_count or self.side_count,
                           (spacing_lam if spacing_lam is not None else self.spacing_lam) * lam,
                           lam)

    def scenario(self) -> FocusScenario:
        return FocusScenario(self.focal_lam * self.wavelength, self.power_w)


@lru_cache(maxsize=None)
def _preset_table() -> dict[str, dict[str, Any]]:
    text = resources.files("thzfocus").joinpath("presets.json").read_text(encoding="utf-8")
    return json.loads(text)


def preset_names() -> list[str]:
    return sorted(_preset_table())


def preset(name: str) -> Preset:
    try:
        raw = dict(_preset_table()[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {preset_names()}") from None
    core = {k: raw.pop(k) for k in ("frequency_hz", "power_w", "side_count", "spacing_lam", "focal_lam")}
    desc = raw.pop("description", "")
    return Preset(name=name, description=desc, extra=raw, **core)


# -- grids ---------------------------------------------------------------------------

def default_grid(focal_distance: float, points: int = 400, lo: float = 0.2, hi: float = 4.0,
                 scale: str = "log") -> np.ndarray:
    """``points`` samples over ``[lo L, hi L]``, log-spaced unless ``scale='linear'``."""
    if points < 1:
        raise ValueError("grid needs at least one point")
    if not 0 < lo < hi:
        raise ValueError("grid bounds must satisfy 0 < lo < hi")
    if scale == "log":
        return np.geomspace(lo * focal_distance, hi * focal_distance, points)
    if scale == "linear":
        return np.linspace(lo * focal_distance, hi * focal_distance, points)
    raise ValueError(f"unknown grid scale {scale!r}")


def lobe_grid(cfg: ArrayConfig, focal_distance: float, step_lam: float = 1.0,
              lo: float = 0.2, hi: float = 4.0) -> np.ndarray:
    """Uniform grid of pitch ``step_lam`` wavelengths for locating lobe nulls."""
    step = step_lam * cfg.wavelength
    return np.arange(lo * focal_distance, hi * focal_distance + 0.5 * step, step)


# -- sweeps --------------------------------------------------------------------------

def snapshot(cfg: ArrayConfig, sc: FocusScenario, **params: Any) -> dict[str, Any]:
    snap: dict[str, Any] = {"array": asdict(cfg), "scenario": asdict(sc)}
    for key, value in params.items():
        if value is None:
            continue
        snap[key] = asdict(value) if hasattr(value, "__dataclass_fields__") else value
    return snap


def _chunked(fn, grid: np.ndarray, workers: int) -> np.ndarray:
    if workers <= 1 or grid.size < 2 * workers:
        return np.asarray(fn(grid), dtype=float)
    parts = np.array_split(grid, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(fn, parts))
    return np.concatenate([np.atleast_1d(r) for r in results])


def z_sweep(cfg: ArrayConfig, sc: FocusScenario, grid: Sequence[float], model: str = "exact", *,
            noise: PhaseNoiseModel | None = None,
            deviation: DeviationModel | None = None,
            pathloss: CIPathLossParams | None = None,
            trials: int | None = None,
            seed: int | None = None,
            workers: int = 1) -> PowerTrace:
    """Evaluate one power model at every grid point.

    ``workers > 1`` splits the grid into contiguous blocks evaluated on a
    thread pool; results are concatenated in grid order, so the output does
    not depend on the worker count.  The emulated model always runs serially
    because it normalises over the whole trace.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("z_sweep needs a non-empty 1-D grid")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")

    def need(obj, name):
        if obj is None:
            raise ValueError(f"model {model!r} requires {name}")
        return obj

    extra: dict[str, Any] = {}
    if model == "exact":
        fn = lambda g: fe.received_power(cfg, sc, g)
    elif model == "closed_form":
        fn = lambda g: closed_form.approx_power(cfg, sc, g)
    elif model == "noisy_expectation":
        need(noise, "a PhaseNoiseModel")
        fn = lambda g: fe.expected_power_noisy(cfg, sc, g, noise)
        extra = {"noise": noise}
    elif model == "noisy_mc":
        need(noise, "a PhaseNoiseModel")
        need(trials, "trials")
        need(seed, "seed")
        fn = lambda g: fe.monte_carlo_expected_power(cfg, sc, g, noise, trials, seed)[0]
        extra = {"noise": noise, "trials": trials, "seed": seed}
    elif model == "deviated":
        need(deviation, "a DeviationModel")
        fn = lambda g: fe.received_power_deviated(cfg, sc, g, deviation)
        extra = {"deviation": deviation}
    elif model == "deviated_taylor":
        need(deviation, "a DeviationModel")
        fn = lambda g: fe.received_power_deviated_taylor(cfg, sc, g, deviation)
        extra = {"deviation": deviation}
    elif model == "emulated":
        pathloss = pathloss or CIPathLossParams()
        noise = noise or PhaseNoiseModel(0.0)
        stochastic = pathloss.shadow_sigma_db > 0 or noise.sigma_phi > 0
        if stochastic and seed is None:
            raise ValueError("model 'emulated' with shadowing or phase noise requires seed")
        seed = 0 if seed is None else seed
        values = emulate_measurement_trace(cfg, sc, grid, pathloss, noise, seed)
        snap = snapshot(cfg, sc, pathloss=pathloss, noise=noise, seed=seed)
        snap["normalized"] = True
        return PowerTrace(grid, values, "emulated", snap)
    else:
        raise ValueError(f"unknown model {model!r}; choose from {MODEL_TAGS}")

    values = _chunked(fn, grid, workers)
    return PowerTrace(grid, values, model, snapshot(cfg, sc, **extra))


def noise_sweep(cfg: ArrayConfig, sc: FocusScenario, grid, sigmas: Sequence[float],
                workers: int = 1) -> list[PowerTrace]:
    return [z_sweep(cfg, sc, grid, "noisy_expectation", noise=PhaseNoiseModel(s), workers=workers)
            for s in sigmas]


def deviation_sweep(cfg: ArrayConfig, sc: FocusScenario, grid, deviations: Sequence[DeviationModel],
                    model: str = "deviated", workers: int = 1):
    """One trace per deviation, or ``(deviation, focal power)`` pairs when ``grid`` is None."""
    if model not in ("deviated", "deviated_taylor"):
        raise ValueError("deviation_sweep model must be 'deviated' or 'deviated_taylor'")
    if grid is None:
        return [(dev, fe.focal_power_deviated(cfg, sc, dev)) for dev in deviations]
    return [z_sweep(cfg, sc, grid, model, deviation=dev, workers=workers) for dev in deviations]


@dataclass(frozen=True)
class SensitivityTable:
    """Rows are ``(spacing, side_count)`` configs, columns the translation ``dd``."""

    configs: tuple[tuple[float, int], ...]
    deltas: np.ndarray
    values: np.ndarray

    def first_column_below(self, level: float = 0.9) -> int | None:
        below = np.nonzero((self.values < level).any(axis=0))[0]
        return int(below[0]) if below.size else None

    def row(self, spacing: float, side_count: int) -> np.ndarray:
        for i, (d, n) in enumerate(self.configs):
            if n == side_count and math.isclose(d, spacing, rel_tol=1e-12):
                return self.values[i]
        raise KeyError((spacing, side_count))


def sensitivity_sweep(configs: Sequence[tuple[float, int]], delta_grid: Sequence[float], *,
                      wavelength: float, focal_distance: float,
                      transmit_power: float = 1.0) -> SensitivityTable:
    """Focal power under dx = dy = dd, normalised by its undeviated value, per config."""
    deltas = np.asarray(delta_grid, dtype=float)
    sc = FocusScenario(focal_distance, transmit_power)
    rows = []
    for spacing, side_count in configs:
        cfg = ArrayConfig(side_count, spacing, wavelength)
        ref = fe.focal_power_deviated(cfg, sc, DeviationModel())
        rows.append([fe.focal_power_deviated(cfg, sc, DeviationModel(dd, dd)) / ref for dd in deltas])
    return SensitivityTable(tuple((float(d), int(n)) for d, n in configs), deltas, np.array(rows))


# -- trace analysis ----------------------------------------------------------------

def find_peak(trace: PowerTrace) -> tuple[float, float]:
    """Grid point of maximum power; ties go to the smaller distance."""
    if len(trace) == 0:
        raise ValueError("empty trace")
    i = int(np.argmax(trace.values))
    return float(trace.grid[i]), float(trace.values[i])


def _local_minima(values: np.ndarray) -> np.ndarray:
    v = values
    return np.nonzero((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:]))[0] + 1


def nearest_minima(trace: PowerTrace, focal: float) -> tuple[float | None, float | None]:
    """Nearest strict local minima below and above ``focal``; None where absent."""
    g = trace.grid
    if not g[0] < focal < g[-1]:
        raise ValueError("trace must span both sides of the focal distance")
    mins = _local_minima(trace.values)
    below = mins[g[mins] < focal]
    above = mins[g[mins] > focal]
    return (float(g[below[-1]]) if below.size else None,
            float(g[above[0]]) if above.size else None)


def find_lobe_minima(trace: PowerTrace, focal: float) -> tuple[float, float]:
    """Like :func:`nearest_minima` but raises :class:`LobeUnboundedError` on a missing side."""
    lo, hi = nearest_minima(trace, focal)
    missing = tuple(side for side, v in (("backward", lo), ("forward", hi)) if v is None)
    if missing:
        raise LobeUnboundedError(missing)
    return lo, hi


def _same_geometry(a: PowerTrace, b: PowerTrace) -> bool:
    keys = ("array", "scenario")
    sa, sb = a.config_snapshot, b.config_snapshot
    if not all(k in sa and k in sb for k in keys):
        return True  # nothing recorded to compare (e.g. a CSV import)
    return all(sa[k] == sb[k] for k in keys)


def compare_traces(a: PowerTrace, b: PowerTrace, *, normalize: bool = False,
                   window: tuple[float, float] | None = None,
                   allow_config_mismatch: bool = False) -> TraceComparison:
    """Relative error of ``b`` against reference ``a``.

    ``b`` is linearly interpolated onto the part of ``a``'s grid it covers.
    ``normalize`` scales each trace by its own peak first; ``window`` limits
    the error statistics (not the peak search) to ``[lo, hi]`` meters.
    """
    if not allow_config_mismatch and not _same_geometry(a, b):
        raise ValueError("traces come from different array/scenario configurations")
    va, vb = a.values, b.values
    if normalize:
        va, vb = va / va.max(), vb / vb.max()

    mask = (a.grid >= b.grid[0]) & (a.grid <= b.grid[-1])
    if window is not None:
        mask &= (a.grid >= window[0]) & (a.grid <= window[1])
    if not mask.any():
        raise ValueError("trace grids do not overlap")
    grid = a.grid[mask]
    ref = va[mask]
    other = vb[mask] if np.array_equal(a.grid, b.grid) else np.interp(grid, b.grid, vb)

    diff = np.abs(other - ref)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(diff == 0, 0.0, diff / np.abs(ref))
    shift = abs(find_peak(a)[0] - find_peak(b)[0])
    return TraceComparison(float(rel.max()), float(np.sqrt(np.mean(rel ** 2))), shift)


def is_focusing(trace: PowerTrace, threshold_db: float = FOCUSING_THRESHOLD_DB) -> bool:
    """Interior peak at least ``threshold_db`` above the far end of the grid."""
    i = int(np.argmax(trace.values))
    if i == 0:
        return False
    right = trace.values[-1]
    if right == 0:
        return True
    return 10 * math.log10(trace.values[i] / right) >= threshold_db

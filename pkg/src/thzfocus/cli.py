"""Command-line front end.

    thzfocus <command> [--preset NAME | --config FILE] [--out DIR]
                       [--format csv|json] [--seed N] [--set KEY=VALUE ...]

Configuration documents are ``key = value`` lines; ``#`` starts a comment.
Lengths accept a ``lam`` suffix (``700lam`` = 700 wavelengths), frequencies a
``GHz``/``THz`` suffix, and list-valued keys take comma-separated items.
Sources merge as preset < config file < flags.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import closed_form, sweeps
from .field import FocusScenario, PhaseNoiseModel
from .geometry import SPEED_OF_LIGHT, ArrayConfig, DeviationModel
from .pathloss import CIPathLossParams
from .sweeps import PowerTrace
from .traceio import SCHEMA_VERSION, atomic_write_text, dumps_json, read_trace, trace_to_csv, trace_to_json

COMMANDS = ("zsweep", "noise", "deviation", "sensitivity", "lobes", "emulate", "compare")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key and source line."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    preset: str | None = None
    frequency: float | None = None
    wavelength: float = 0.0
    power: float = 1.0
    side_count: int = 0
    spacing: float = 0.0
    focal_distance: float = 0.0
    model: str = "exact"
    side_counts: tuple[int, ...] = ()
    sigma_phi: tuple[float, ...] = ()
    delta_x: tuple[float, ...] = ()
    delta_y: tuple[float, ...] = ()
    ple: float = 1.91
    d0: float = 1.0
    shadow_sigma_db: float = 0.0
    trials: int = 0
    seed: int | None = None
    grid_lo: float = 0.2
    grid_hi: float = 4.0
    grid_points: int = 400
    grid_scale: str = "log"
    lobe_step_lam: float = 1.0
    configs: tuple[tuple[float, int], ...] = ()
    delta_max: float = 0.0
    delta_points: int = 21
    inputs: tuple[str, ...] = ()
    normalize: bool = False
    window: tuple[float, float] | None = None
    workers: int = 1
    out: str = "out"
    format: str = "csv"

    def array(self, side_count: int | None = None) -> ArrayConfig:
        return ArrayConfig(side_count or self.side_count, self.spacing, self.wavelength)

    def scenario(self) -> FocusScenario:
        return FocusScenario(self.focal_distance, self.power)

    def grid(self) -> np.ndarray:
        return sweeps.default_grid(self.focal_distance, self.grid_points, self.grid_lo,
                                   self.grid_hi, self.grid_scale)

    def deviations(self) -> list[DeviationModel]:
        return [DeviationModel(dx, dy) for dx, dy in zip(self.delta_x, self.delta_y)]

    def pathloss(self) -> CIPathLossParams:
        return CIPathLossParams(self.ple, self.d0, self.shadow_sigma_db)

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


# -- parsing ---------------------------------------------------------------------

@dataclass
class _Entry:
    value: str
    source: str


_LENGTH_KEYS = {"spacing", "focal_distance", "wavelength", "d0", "delta_max"}
_LENGTH_LIST_KEYS = {"delta_x", "delta_y", "window"}
_FLOAT_KEYS = {"power", "ple", "shadow_sigma_db", "grid_lo", "grid_hi", "lobe_step_lam"}
_INT_KEYS = {"side_count", "trials", "seed", "grid_points", "delta_points", "workers"}
_KNOWN_KEYS = {f.name for f in fields(RunConfig)}

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_LEN_RE = re.compile(rf"^({_NUMBER})\s*(lam|lambda|m|mm)?$")
_FREQ_RE = re.compile(rf"^({_NUMBER})\s*(hz|khz|mhz|ghz|thz)?$", re.IGNORECASE)
_FREQ_SCALE = {None: 1.0, "hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12}


def _parse_lines(text: str, origin: str) -> dict[str, _Entry]:
    out: dict[str, _Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        out[key] = _Entry(value, f"{origin}:{lineno}")
    return out


def _preset_entries(name: str) -> dict[str, _Entry]:
    try:
        p = sweeps.preset(name)
    except KeyError as exc:
        raise ConfigError(f"preset: {exc.args[0]}") from None
    src = f"preset:{name}"
    ent = {
        "frequency": _Entry(repr(p.frequency_hz), src),
        "power": _Entry(repr(p.power_w), src),
        "side_count": _Entry(str(p.side_count), src),
        "spacing": _Entry(f"{p.spacing_lam!r}lam", src),
        "focal_distance": _Entry(f"{p.focal_lam!r}lam", src),
    }
    x = p.extra
    if "side_counts" in x:
        ent["side_counts"] = _Entry(",".join(map(str, x["side_counts"])), src)
    if "sigmas_rad" in x:
        ent["sigma_phi"] = _Entry(",".join(map(repr, x["sigmas_rad"])), src)
    if "deviations_lam" in x:
        ent["delta_x"] = _Entry(",".join(f"{d[0]!r}lam" for d in x["deviations_lam"]), src)
        ent["delta_y"] = _Entry(",".join(f"{d[1]!r}lam" for d in x["deviations_lam"]), src)
    if "configs" in x:
        ent["configs"] = _Entry(",".join(f"{d!r}lam:{n}" for d, n in x["configs"]), src)
    if "delta_max_lam" in x:
        ent["delta_max"] = _Entry(f"{x['delta_max_lam']!r}lam", src)
    if "delta_points" in x:
        ent["delta_points"] = _Entry(str(x["delta_points"]), src)
    return ent


def _length(text: str, lam: float | None, key: str, src: str) -> float:
    m = _LEN_RE.match(text.strip())
    if not m:
        raise ConfigError(f"{src}: key {key!r}: cannot parse length {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if unit in ("lam", "lambda"):
        if lam is None:
            raise ConfigError(f"{src}: key {key!r}: 'lam' units need a frequency or wavelength")
        return value * lam
    return value * 1e-3 if unit == "mm" else value


def _number(text: str, kind, key: str, src: str):
    try:
        if kind is int:
            v = float(text)
            if v != int(v):
                raise ValueError
            return int(v)
        return float(text)
    except ValueError:
        raise ConfigError(f"{src}: key {key!r}: expected {kind.__name__}, got {text!r}") from None


def _items(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_config(text: str = "", *, command: str | None = None, preset: str | None = None,
                 overrides: dict[str, str] | None = None, origin: str = "config") -> RunConfig:
    """Resolve a configuration document into a validated :class:`RunConfig`.

    ``command`` and ``preset`` may also be given as keys in ``text``;
    ``overrides`` (already split ``key -> value`` strings, e.g. from flags)
    win over the document, which wins over the preset.
    """
    doc = _parse_lines(text, origin)
    extra: dict[str, _Entry] = {}
    for key, value in (overrides or {}).items():
        key = key.lower().replace("-", "_")
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"flag: unknown key {key!r}")
        extra[key] = _Entry(str(value), f"flag:{key}")

    preset_name = preset or (extra.get("preset") or doc.get("preset") or _Entry("", "")).value or None
    merged: dict[str, _Entry] = {}
    if preset_name:
        merged.update(_preset_entries(preset_name))
    merged.update(doc)
    merged.update(extra)
    merged.pop("preset", None)

    cmd = command or (merged.pop("command").value if "command" in merged else None)
    merged.pop("command", None)
    if cmd not in COMMANDS:
        raise ConfigError(f"command: expected one of {COMMANDS}, got {cmd!r}")

    vals: dict[str, Any] = {"command": cmd, "preset": preset_name}

    # wavelength first so 'lam' lengths resolve; an explicit wavelength beats a preset frequency
    lam = None
    f_entry, w_entry = merged.pop("frequency", None), merged.pop("wavelength", None)
    if f_entry and w_entry and not f_entry.source.startswith("preset:"):
        raise ConfigError(f"{w_entry.source}: give either 'frequency' or 'wavelength', not both")
    if w_entry is not None:
        lam = _length(w_entry.value, None, "wavelength", w_entry.source)
        if not lam > 0:
            raise ConfigError(f"{w_entry.source}: key 'wavelength' must be > 0")
        vals["frequency"] = SPEED_OF_LIGHT / lam
    elif f_entry is not None:
        m = _FREQ_RE.match(f_entry.value.strip())
        if not m:
            raise ConfigError(f"{f_entry.source}: key 'frequency': cannot parse {f_entry.value!r}")
        freq = float(m.group(1)) * _FREQ_SCALE[(m.group(2) or "").lower() or None]
        if not freq > 0:
            raise ConfigError(f"{f_entry.source}: key 'frequency' must be > 0")
        vals["frequency"] = freq
        lam = SPEED_OF_LIGHT / freq
    if lam is not None:
        vals["wavelength"] = lam
    elif cmd != "compare":
        raise ConfigError("missing required key 'frequency' (or 'wavelength')")

    for key, e in merged.items():
        v = e.value
        if key in _LENGTH_KEYS:
            vals[key] = _length(v, lam, key, e.source)
        elif key in _LENGTH_LIST_KEYS:
            vals[key] = tuple(_length(t, lam, key, e.source) for t in _items(v))
        elif key in _FLOAT_KEYS:
            vals[key] = _number(v, float, key, e.source)
        elif key in _INT_KEYS:
            vals[key] = _number(v, int, key, e.source)
        elif key == "sigma_phi":
            vals[key] = tuple(_number(t, float, key, e.source) for t in _items(v))
        elif key == "side_counts":
            vals[key] = tuple(_number(t, int, key, e.source) for t in _items(v))
        elif key == "configs":
            pairs = []
            for t in _items(v):
                if ":" not in t:
                    raise ConfigError(f"{e.source}: key 'configs': expected 'spacing:side_count', got {t!r}")
                d, n = t.split(":", 1)
                pairs.append((_length(d, lam, key, e.source), _number(n, int, key, e.source)))
            vals[key] = tuple(pairs)
        elif key == "inputs":
            vals[key] = tuple(_items(v))
        elif key == "normalize":
            low = v.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigError(f"{e.source}: key 'normalize': expected a boolean, got {v!r}")
            vals[key] = low in ("true", "1", "yes")
        elif key in ("model", "grid_scale", "out", "format"):
            vals[key] = v
        else:  # pragma: no cover - _KNOWN_KEYS and this table must agree
            raise ConfigError(f"{e.source}: unhandled key {key!r}")

    if "window" in vals:
        w = vals["window"]
        if len(w) != 2 or not w[0] < w[1]:
            raise ConfigError(f"{merged['window'].source}: key 'window': expected 'lo, hi' with lo < hi")
    _fill_deviations(vals, merged)
    cfg = RunConfig(**vals)
    _validate(cfg, merged)
    return cfg


def _fill_deviations(vals: dict[str, Any], merged: dict[str, _Entry]) -> None:
    dx, dy = vals.get("delta_x", ()), vals.get("delta_y", ())
    if dx and not dy:
        dy = (0.0,) * len(dx)
    if dy and not dx:
        dx = (0.0,) * len(dy)
    if len(dx) == 1 and len(dy) > 1:
        dx = dx * len(dy)
    if len(dy) == 1 and len(dx) > 1:
        dy = dy * len(dx)
    if len(dx) != len(dy):
        src = merged.get("delta_y", merged.get("delta_x")).source
        raise ConfigError(f"{src}: keys 'delta_x' and 'delta_y' have different lengths")
    vals["delta_x"], vals["delta_y"] = tuple(dx), tuple(dy)


def _where(merged: dict[str, _Entry], key: str) -> str:
    return merged[key].source if key in merged else "config"


def _validate(cfg: RunConfig, merged: dict[str, _Entry]) -> None:
    def fail(key: str, msg: str):
        raise ConfigError(f"{_where(merged, key)}: key {key!r} {msg}")

    if cfg.format not in FORMATS:
        fail("format", f"must be one of {FORMATS}")
    if cfg.workers < 1:
        fail("workers", "must be >= 1")
    if cfg.command == "compare":
        if len(cfg.inputs) != 2:
            fail("inputs", "must list exactly two trace files")
        return

    for key in ("side_count", "spacing", "focal_distance"):
        if key not in merged:
            raise ConfigError(f"missing required key {key!r}")
        if not getattr(cfg, key) > 0:
            fail(key, "must be > 0")
    if not cfg.power > 0:
        fail("power", "must be > 0")
    if not 0 < cfg.grid_lo < cfg.grid_hi:
        fail("grid_lo", "and 'grid_hi' must satisfy 0 < grid_lo < grid_hi")
    if cfg.grid_points < 2:
        fail("grid_points", "must be >= 2")
    if cfg.grid_scale not in ("log", "linear"):
        fail("grid_scale", "must be 'log' or 'linear'")
    if not cfg.lobe_step_lam > 0:
        fail("lobe_step_lam", "must be > 0")
    if any(s < 0 or not math.isfinite(s) for s in cfg.sigma_phi):
        fail("sigma_phi", "values must be >= 0")
    if any(n < 1 for n in cfg.side_counts):
        fail("side_counts", "values must be >= 1")
    if not cfg.ple > 0:
        fail("ple", "must be > 0")
    if not cfg.d0 > 0:
        fail("d0", "must be > 0")
    if cfg.shadow_sigma_db < 0:
        fail("shadow_sigma_db", "must be >= 0")
    if cfg.trials < 0 or cfg.trials == 1:
        fail("trials", "must be 0 (off) or >= 2")
    if cfg.model not in sweeps.MODEL_TAGS:
        fail("model", f"must be one of {sweeps.MODEL_TAGS}")

    stochastic = cfg.trials > 0 or cfg.shadow_sigma_db > 0 or cfg.model == "noisy_mc" or (
        cfg.command == "emulate" and any(s > 0 for s in cfg.sigma_phi))
    if stochastic and cfg.seed is None:
        raise ConfigError("missing required key 'seed' (stochastic model enabled)")

    if cfg.command == "noise" and not cfg.sigma_phi:
        fail("sigma_phi", "needs at least one value for 'noise'")
    if cfg.command == "deviation" and not cfg.delta_x:
        fail("delta_x", "needs at least one value for 'deviation'")
    if cfg.command == "sensitivity":
        if not cfg.configs:
            fail("configs", "needs at least one 'spacing:side_count' pair")
        if not cfg.delta_max > 0:
            fail("delta_max", "must be > 0")
        if cfg.delta_points < 2:
            fail("delta_points", "must be >= 2")
    if cfg.command == "zsweep" and cfg.model in ("noisy_expectation", "noisy_mc") and len(cfg.sigma_phi) != 1:
        fail("sigma_phi", f"model {cfg.model!r} needs exactly one value")
    if cfg.command == "zsweep" and cfg.model in ("deviated", "deviated_taylor") and len(cfg.delta_x) != 1:
        fail("delta_x", f"model {cfg.model!r} needs exactly one deviation")
    if cfg.model == "noisy_mc" and cfg.trials < 2:
        fail("trials", "must be >= 2 for model 'noisy_mc'")
    if cfg.command == "emulate" and len(cfg.sigma_phi) > 1:
        fail("sigma_phi", "takes a single value for 'emulate'")


# -- running -----------------------------------------------------------------------

@dataclass
class _Artifacts:
    files: dict[str, str] = field(default_factory=dict)

    def trace(self, name: str, trace: PowerTrace, fmt: str) -> None:
        text = trace_to_csv(trace) if fmt == "csv" else trace_to_json(trace)
        self.files[f"{name}.{fmt}"] = text

    def json(self, name: str, doc: Any) -> None:
        self.files[f"{name}.json"] = dumps_json(doc)


def _lam_pair(value: float, lam: float) -> dict[str, float | None]:
    if not math.isfinite(value):
        return {"m": None, "lambda": None}
    return {"m": value, "lambda": value / lam}


def _run_zsweep(cfg: RunConfig, art: _Artifacts) -> None:
    sc = cfg.scenario()
    grid = cfg.grid()
    noise = PhaseNoiseModel(cfg.sigma_phi[0]) if cfg.sigma_phi else None
    dev = cfg.deviations()[0] if cfg.delta_x else None
    kwargs = dict(noise=noise, deviation=dev, pathloss=cfg.pathloss(),
                  trials=cfg.trials or None, seed=cfg.seed, workers=cfg.workers)
    if cfg.side_counts:
        summary = []
        for n in cfg.side_counts:
            tr = sweeps.z_sweep(cfg.array(n), sc, grid, cfg.model, **kwargs)
            art.trace(f"zsweep_{cfg.model}_n{n}", tr, cfg.format)
            l_star, p_star = sweeps.find_peak(tr)
            summary.append({"side_count": n, "peak_l": _lam_pair(l_star, cfg.wavelength),
                            "peak_power": p_star, "focusing": sweeps.is_focusing(tr)})
        art.json("focusing", {"threshold_db": sweeps.FOCUSING_THRESHOLD_DB, "traces": summary})
    else:
        tr = sweeps.z_sweep(cfg.array(), sc, grid, cfg.model, **kwargs)
        art.trace(f"zsweep_{cfg.model}", tr, cfg.format)


def _run_noise(cfg: RunConfig, art: _Artifacts) -> None:
    arr, sc, grid = cfg.array(), cfg.scenario(), cfg.grid()
    for i, tr in enumerate(sweeps.noise_sweep(arr, sc, grid, cfg.sigma_phi, cfg.workers)):
        art.trace(f"noise_{i}", tr, cfg.format)
        if cfg.trials and cfg.sigma_phi[i] > 0:
            mc = sweeps.z_sweep(arr, sc, grid, "noisy_mc", noise=PhaseNoiseModel(cfg.sigma_phi[i]),
                                trials=cfg.trials, seed=cfg.seed, workers=cfg.workers)
            art.trace(f"noise_mc_{i}", mc, cfg.format)


def _run_deviation(cfg: RunConfig, art: _Artifacts) -> None:
    model = cfg.model if cfg.model in ("deviated", "deviated_taylor") else "deviated"
    arr, sc = cfg.array(), cfg.scenario()
    traces = sweeps.deviation_sweep(arr, sc, cfg.grid(), cfg.deviations(), model, cfg.workers)
    for i, tr in enumerate(traces):
        art.trace(f"deviation_{i}", tr, cfg.format)
    focal = sweeps.deviation_sweep(arr, sc, None, cfg.deviations())
    art.json("deviation_focal", {"focal_distance": _lam_pair(sc.focal_distance, cfg.wavelength),
                                 "entries": [{"delta_x": _lam_pair(d.delta_x, cfg.wavelength),
                                              "delta_y": _lam_pair(d.delta_y, cfg.wavelength),
                                              "focal_power_w": p} for d, p in focal]})


def _run_sensitivity(cfg: RunConfig, art: _Artifacts) -> None:
    deltas = np.linspace(0.0, cfg.delta_max, cfg.delta_points)
    table = sweeps.sensitivity_sweep(cfg.configs, deltas, wavelength=cfg.wavelength,
                                     focal_distance=cfg.focal_distance, transmit_power=cfg.power)
    lam = cfg.wavelength
    if cfg.format == "csv":
        lines = ["spacing_m,spacing_over_lambda,side_count,delta_m,delta_over_lambda,power_norm"]
        for (d, n), row in zip(table.configs, table.values):
            for dd, v in zip(table.deltas, row):
                lines.append(",".join([format(d, ".17g"), format(d / lam, ".17g"), str(n),
                                       format(dd, ".17g"), format(dd / lam, ".17g"), format(v, ".17g")]))
        art.files["sensitivity.csv"] = "\n".join(lines) + "\n"
    else:
        art.json("sensitivity", {"schema_version": SCHEMA_VERSION,
                                 "configs": [{"spacing": _lam_pair(d, lam), "side_count": n}
                                             for d, n in table.configs],
                                 "deltas_m": table.deltas, "deltas_lambda": table.deltas / lam,
                                 "values": table.values})


def lobe_report(arr: ArrayConfig, sc: FocusScenario, step_lam: float = 1.0, workers: int = 1) -> dict[str, Any]:
    """Predicted (closed-form) versus numerically located main-lobe nulls."""
    lam, L = arr.wavelength, sc.focal_distance
    ext = closed_form.main_lobe_extent(arr, L)
    grid = sweeps.lobe_grid(arr, L, step_lam)
    trace = sweeps.z_sweep(arr, sc, grid, "exact", workers=workers)
    lo, hi = sweeps.nearest_minima(trace, L)
    measured = {"backward": None if lo is None else lo - L,
                "forward": None if hi is None else hi - L}

    def gap(pred: float, meas: float | None) -> float | None:
        if meas is None or not math.isfinite(pred):
            return None
        return ((L + meas) - (L + pred)) / (L + pred)

    b_fwd = (float(closed_form.b_parameter(arr, L, closed_form.eta(L, L + ext.forward)))
             if ext.bounded else None)
    return {
        "schema_version": SCHEMA_VERSION,
        "array": asdict(arr), "scenario": asdict(sc),
        "lobe_ratio": closed_form.lobe_ratio(arr, L),
        "b_min": closed_form.B_MIN,
        "b_at_predicted_forward": b_fwd,
        "grid_step": _lam_pair(step_lam * lam, lam),
        "predicted": {"forward": _lam_pair(ext.forward, lam), "backward": _lam_pair(ext.backward, lam)},
        "measured": {k: (_lam_pair(v, lam) if v is not None else None) for k, v in measured.items()},
        "relative_gap_in_l": {"forward": gap(ext.forward, measured["forward"]),
                              "backward": gap(ext.backward, measured["backward"])},
    }


def _run_lobes(cfg: RunConfig, art: _Artifacts) -> None:
    art.json("lobes", lobe_report(cfg.array(), cfg.scenario(), cfg.lobe_step_lam, cfg.workers))


def _run_emulate(cfg: RunConfig, art: _Artifacts) -> None:
    noise = PhaseNoiseModel(cfg.sigma_phi[0] if cfg.sigma_phi else 0.0)
    tr = sweeps.z_sweep(cfg.array(), cfg.scenario(), cfg.grid(), "emulated",
                        noise=noise, pathloss=cfg.pathloss(), seed=cfg.seed)
    art.trace("emulate", tr, cfg.format)


def _run_compare(cfg: RunConfig, art: _Artifacts) -> None:
    a, b = (read_trace(p) for p in cfg.inputs)
    cmp = sweeps.compare_traces(a, b, normalize=cfg.normalize, window=cfg.window)
    art.json("compare", {"schema_version": SCHEMA_VERSION, "inputs": list(cfg.inputs),
                         "tags": [a.model_tag, b.model_tag], "normalize": cfg.normalize,
                         **asdict(cmp)})


_RUNNERS = {
    "zsweep": _run_zsweep,
    "noise": _run_noise,
    "deviation": _run_deviation,
    "sensitivity": _run_sensitivity,
    "lobes": _run_lobes,
    "emulate": _run_emulate,
    "compare": _run_compare,
}


def run(cfg: RunConfig) -> int:
    """Execute ``cfg``; every artifact is computed before any file is written."""
    art = _Artifacts()
    try:
        _RUNNERS[cfg.command](cfg, art)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"thzfocus {cfg.command}: error: {exc}", file=sys.stderr)
        return 1
    out = Path(cfg.out)
    # the output directory is left out so identical runs give identical bytes anywhere
    config = {k: v for k, v in cfg.as_dict().items() if k != "out"}
    manifest = {"schema_version": SCHEMA_VERSION, "command": cfg.command,
                "config": config, "artifacts": sorted(art.files)}
    art.files["run.json"] = dumps_json(manifest)
    try:
        for name in sorted(art.files):
            atomic_write_text(out / name, art.files[name])
    except OSError as exc:
        print(f"thzfocus {cfg.command}: error writing to {out}: {exc}", file=sys.stderr)
        return 1
    return 0


# -- entry point ---------------------------------------------------------------------

_FLAG_KEYS = {
    "out": "out", "format": "format", "seed": "seed", "model": "model",
    "side_count": "side_count", "spacing": "spacing", "focal": "focal_distance",
    "frequency": "frequency", "power": "power", "sigma": "sigma_phi",
    "dx": "delta_x", "dy": "delta_y", "trials": "trials", "ple": "ple",
    "workers": "workers",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thzfocus",
                                description="Near-field focusing of sparse UPAs along the z-axis.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", help=f"one of: {', '.join(sweeps.preset_names())}")
    src.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--seed", help="seed for every stochastic component")
    p.add_argument("--model", help="zsweep/deviation model tag")
    p.add_argument("--side-count", dest="side_count")
    p.add_argument("--spacing", help="element spacing, e.g. 15lam")
    p.add_argument("--focal", help="focal distance, e.g. 700lam")
    p.add_argument("--frequency", help="carrier, e.g. 300GHz")
    p.add_argument("--power", help="transmit power in W")
    p.add_argument("--sigma", help="phase-noise std(s) in rad, comma-separated")
    p.add_argument("--dx", help="x translation(s), comma-separated")
    p.add_argument("--dy", help="y translation(s), comma-separated")
    p.add_argument("--trials", help="Monte Carlo trials (0 = off)")
    p.add_argument("--ple", help="CI path-loss exponent")
    p.add_argument("--workers", help="threads for grid evaluation")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="any configuration key; repeatable")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict[str, str] = {}
    for item in args.set:
        if "=" not in item:
            print(f"thzfocus: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    for flag, key in _FLAG_KEYS.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    text, origin = "", "config"
    if args.config is not None:
        try:
            text = args.config.read_text(encoding="utf-8")
        except OSError as exc:
            print(f"thzfocus: cannot read config {args.config}: {exc}", file=sys.stderr)
            return 2
        origin = str(args.config)
    try:
        cfg = parse_config(text, command=args.command, preset=args.preset,
                           overrides=overrides, origin=origin)
    except ConfigError as exc:
        print(f"thzfocus: config error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

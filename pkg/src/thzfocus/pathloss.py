"""Close-in (CI) path loss and a synthetic stand-in for the measured z-scan.

The emulator feeds CI-model amplitudes through the same focused phasor sum
as the exact model, optionally with log-normal shadowing and phase noise,
and peak-normalises the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FocusScenario, PhaseNoiseModel, _residual_phases, phasor_sum
from .geometry import ArrayConfig, _check_distance


@dataclass(frozen=True)
class CIPathLossParams:
    ple: float = 1.91
    reference_distance: float = 1.0
    shadow_sigma_db: float = 0.0

    def __post_init__(self) -> None:
        if not self.ple > 0:
            raise ValueError(f"ple must be > 0, got {self.ple!r}")
        if not self.reference_distance > 0:
            raise ValueError(f"reference_distance must be > 0, got {self.reference_distance!r}")
        if not self.shadow_sigma_db >= 0:
            raise ValueError(f"shadow_sigma_db must be >= 0, got {self.shadow_sigma_db!r}")


def fspl_db(distance, wavelength: float):
    """Free-space path loss ``20 log10(4 pi d / lambda)`` in dB."""
    d = _check_distance(distance)
    if not wavelength > 0:
        raise ValueError("wavelength must be > 0")
    return (20.0 * np.log10(4 * np.pi * d / wavelength))[()]


def ci_path_loss_db(params: CIPathLossParams, distance, shadow_draw=0.0, *, wavelength: float):
    d = _check_distance(distance)
    return (10.0 * params.ple * np.log10(d / params.reference_distance)
            + fspl_db(params.reference_distance, wavelength) + shadow_draw)[()]


def _point_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def emulate_measurement_trace(cfg: ArrayConfig, sc: FocusScenario, z_grid,
                              params: CIPathLossParams, noise: PhaseNoiseModel,
                              seed: int = 0) -> np.ndarray:
    """Peak-normalised synthetic power scan along z.

    For each grid point ``i`` a substream keyed by ``(seed, i)`` draws one
    shadowing value (dB) and then one phase-noise value per element.  All
    elements share the on-axis CI path loss, mirroring the common-amplitude
    channel approximation of the exact model.

    Returns the normalised values (max exactly 1); wrap them with
    :func:`thzfocus.sweeps.z_sweep` (``model="emulated"``) to get a trace.
    """
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("z_grid must be a non-empty 1-D sequence")
    _check_distance(z)
    if np.any(np.diff(z) <= 0):
        raise ValueError("z_grid must be strictly increasing")

    n = cfg.element_count
    base = _residual_phases(cfg, sc, z)
    raw = np.empty(z.size)
    for i, l in enumerate(z):
        rng = _point_rng(seed, i)
        shadow = params.shadow_sigma_db * rng.standard_normal(n)
        jitter = noise.sigma_phi * rng.standard_normal(n)
        pl_db = ci_path_loss_db(params, l, shadow, wavelength=cfg.wavelength)
        amp = 10.0 ** (-pl_db / 20.0)
        total = phasor_sum(base[i] + jitter, amp)
        raw[i] = sc.transmit_power / n * abs(total) ** 2
    peak = raw.max()
    if not peak > 0:
        raise ValueError("emulated trace has no positive power")
    out = raw / peak
    out[np.argmax(raw)] = 1.0
    return out

"""Exact on-axis received power of a focused UPA.

Every element radiates with the common Green's-function amplitude
``lambda / (4 pi l)`` and the exact spherical phase ``k D``.  The precoder
conjugates the phase towards the focal point, so the received power is

    P_l = beta_l |sum_e exp(i (k D_e(l) - k D_e(L)))|^2,
    beta_l = P lambda^2 / (N (4 pi l)^2).

The residual phase ``k (D_e(l) - D_e(L))`` is formed from
``(l^2 - L^2) / (D_e(l) + D_e(L))`` so that it is exactly zero at l = L and
free of the cancellation in ``k D - k L`` for D of thousands of wavelengths.

Phase noise and rigid array translation are layered on the same sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    ArrayConfig,
    DeviationModel,
    ElementIndex,
    _check_distance,
    check_deviation,
    element_distance,
    element_coordinates,
    lattice_squared_radius,
)

# element count above which phasor sums switch to exactly-rounded accumulation
COMPENSATED_THRESHOLD = 100_000
# cap on (points x elements) evaluated per vectorised block
_BLOCK = 2_000_000


@dataclass(frozen=True)
class FocusScenario:
    focal_distance: float
    transmit_power: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.focal_distance) and self.focal_distance > 0):
            raise ValueError(f"focal_distance must be > 0, got {self.focal_distance!r}")
        if not (math.isfinite(self.transmit_power) and self.transmit_power > 0):
            raise ValueError(f"transmit_power must be > 0, got {self.transmit_power!r}")


@dataclass(frozen=True)
class PhaseNoiseModel:
    """Zero-mean i.i.d. Gaussian phase noise per element, std ``sigma_phi`` rad."""

    sigma_phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma_phi) and self.sigma_phi >= 0):
            raise ValueError(f"sigma_phi must be >= 0, got {self.sigma_phi!r}")


@dataclass(frozen=True)
class ComplexFieldSum:
    value: complex
    element_count: int

    @property
    def power(self) -> float:
        return abs(self.value) ** 2


# -- internals -----------------------------------------------------------------

def _residual_phases(cfg: ArrayConfig, sc: FocusScenario, l: np.ndarray,
                     dev: DeviationModel | None = None) -> np.ndarray:
    """k (D_e(l) - D_e(L)) per element, shape ``l.shape + (N,)``.

    With ``dev`` the propagation distance uses the translated lattice while the
    precoder keeps the nominal one.
    """
    L = sc.focal_distance
    r2 = lattice_squared_radius(cfg)
    d_focal = np.sqrt(r2 + L * L)
    l = l[..., None]
    if dev is None:
        num = (l - L) * (l + L)
        dist = np.sqrt(r2 + l * l)
    else:
        xy = element_coordinates(cfg)
        dx, dy = dev.delta_x, dev.delta_y
        shift = dx * (2 * xy[:, 0] + dx) + dy * (2 * xy[:, 1] + dy)
        num = shift + (l - L) * (l + L)
        dist = np.sqrt(lattice_squared_radius(cfg, dev) + l * l)
    return cfg.wavenumber * num / (dist + d_focal)


def phasor_sum(phases: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
    """sum_e w_e exp(i phases[..., e]) in fixed element order.

    Beyond ``COMPENSATED_THRESHOLD`` terms the real and imaginary parts are
    accumulated with ``math.fsum`` (exactly rounded), row by row.
    """
    phases = np.asarray(phases, dtype=float)
    n = phases.shape[-1]
    terms = np.exp(1j * phases)
    if weights is not None:
        terms = terms * weights
    if n < COMPENSATED_THRESHOLD:
        return terms.sum(axis=-1)
    flat = terms.reshape(-1, n)
    out = np.empty(flat.shape[0], dtype=complex)
    for i, row in enumerate(flat):
        out[i] = complex(math.fsum(row.real.tolist()), math.fsum(row.imag.tolist()))
    return out.reshape(terms.shape[:-1])


def _blocked(fn, l: np.ndarray, n_elements: int) -> np.ndarray:
    """Apply ``fn`` to slices of the flattened ``l`` so each block stays bounded."""
    flat = l.ravel()
    step = max(1, _BLOCK // max(n_elements, 1))
    out = np.empty(flat.shape, dtype=float)
    for start in range(0, flat.size, step):
        out[start:start + step] = fn(flat[start:start + step])
    return out.reshape(l.shape)


def beta(cfg: ArrayConfig, sc: FocusScenario, l):
    """Per-point scale ``P lambda^2 / (N (4 pi l)^2)``."""
    l = _check_distance(l)
    return (sc.transmit_power * cfg.wavelength ** 2
            / (cfg.element_count * (4 * np.pi * l) ** 2))[()]


# -- public operations -----------------------------------------------------------

def precoding_phases(cfg: ArrayConfig, sc: FocusScenario) -> np.ndarray:
    """Focusing phases ``-k D_{n,m}(L)`` as a (side_count, side_count) matrix.

    Entry ``[n - 1, m - 1]`` belongs to element (n, m).
    """
    L = sc.focal_distance
    d_focal = np.sqrt(lattice_squared_radius(cfg) + L * L)
    return (-cfg.wavenumber * d_focal).reshape(cfg.side_count, cfg.side_count)


def channel_coefficient(cfg: ArrayConfig, idx: ElementIndex, l) -> complex:
    """Green's-function coefficient ``-(lambda / (4 pi l)) exp(i k D)``."""
    dist = element_distance(cfg, idx, l)
    return -(cfg.wavelength / (4 * np.pi * l)) * np.exp(1j * cfg.wavenumber * dist)


def field_sum(cfg: ArrayConfig, sc: FocusScenario, l: float,
              dev: DeviationModel | None = None) -> ComplexFieldSum:
    """The N-term phasor sum at one point (precoder phase folded in)."""
    arr = _check_distance(l)
    if arr.ndim:
        raise ValueError("field_sum takes a single distance")
    s = phasor_sum(_residual_phases(cfg, sc, arr, dev))
    return ComplexFieldSum(complex(s), cfg.element_count)


def received_power(cfg: ArrayConfig, sc: FocusScenario, l):
    """Noise-free received power in watts at (0, 0, l); ``l`` may be an array."""
    arr = _check_distance(l)
    coh = _blocked(lambda x: np.abs(phasor_sum(_residual_phases(cfg, sc, x))) ** 2,
                   arr, cfg.element_count)
    return (beta(cfg, sc, arr) * coh)[()]


def coherence_factor(noise: PhaseNoiseModel) -> float:
    """mu = E[exp(i phi)] = exp(-sigma^2 / 2)."""
    return math.exp(-0.5 * noise.sigma_phi ** 2)


def expected_power_noisy(cfg: ArrayConfig, sc: FocusScenario, l, noise: PhaseNoiseModel):
    """Mean power under phase noise: ``mu^2 P_l + beta_l N (1 - mu^2)``."""
    arr = _check_distance(l)
    mu2 = coherence_factor(noise) ** 2
    if mu2 == 1.0:
        return received_power(cfg, sc, arr)
    return (mu2 * received_power(cfg, sc, arr)
            + beta(cfg, sc, arr) * cfg.element_count * (1.0 - mu2))[()]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one Monte Carlo trial, keyed by its index."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def sample_power_noisy(cfg: ArrayConfig, sc: FocusScenario, l, noise: PhaseNoiseModel,
                       rng: np.random.Generator):
    """One realisation of the phase-noisy power.

    Draws one N(0, sigma^2) phase per element (row-major) from ``rng``.  An
    array ``l`` reuses the same realisation at every point.
    """
    arr = _check_distance(l)
    jitter = noise.sigma_phi * rng.standard_normal(cfg.element_count)
    coh = _blocked(
        lambda x: np.abs(phasor_sum(_residual_phases(cfg, sc, x) + jitter)) ** 2,
        arr, cfg.element_count)
    return (beta(cfg, sc, arr) * coh)[()]


def monte_carlo_expected_power(cfg: ArrayConfig, sc: FocusScenario, l, noise: PhaseNoiseModel,
                               trials: int, seed: int):
    """Sample mean and standard error of the noisy power over ``trials`` draws.

    Trial ``t`` uses ``trial_rng(seed, t)``, so the first ``k`` trials of a
    longer run coincide with a shorter run of ``k`` trials.
    """
    if int(trials) != trials or trials < 2:
        raise ValueError(f"trials must be an integer >= 2, got {trials!r}")
    arr = _check_distance(l)
    if noise.sigma_phi == 0.0:
        p = received_power(cfg, sc, arr)
        return p, (np.zeros_like(p) if np.ndim(p) else 0.0)
    n = cfg.element_count
    jitter = np.empty((trials, n))
    for t in range(trials):
        jitter[t] = trial_rng(seed, t).standard_normal(n)
    jitter *= noise.sigma_phi

    base = _residual_phases(cfg, sc, arr.ravel())
    b = beta(cfg, sc, arr.ravel())
    mean = np.empty(arr.size)
    se = np.empty(arr.size)
    for j in range(arr.size):
        samples = b[j] * np.abs(phasor_sum(base[j] + jitter)) ** 2
        mean[j] = samples.mean()
        se[j] = samples.std(ddof=1) / math.sqrt(trials)
    return mean.reshape(arr.shape)[()], se.reshape(arr.shape)[()]


def received_power_deviated(cfg: ArrayConfig, sc: FocusScenario, l, dev: DeviationModel):
    """Power with the lattice translated by ``dev`` and the precoder left nominal."""
    arr = _check_distance(l)
    check_deviation(cfg, dev)
    coh = _blocked(lambda x: np.abs(phasor_sum(_residual_phases(cfg, sc, x, dev))) ** 2,
                   arr, cfg.element_count)
    return (beta(cfg, sc, arr) * coh)[()]


def _taylor_phases(cfg: ArrayConfig, sc: FocusScenario, l: np.ndarray, dev: DeviationModel):
    xy = element_coordinates(cfg)
    dist = np.sqrt(xy[:, 0] ** 2 + xy[:, 1] ** 2 + l[..., None] ** 2)
    shift = cfg.wavenumber * (xy[:, 0] * dev.delta_x + xy[:, 1] * dev.delta_y) / dist
    return _residual_phases(cfg, sc, l) + shift


def received_power_deviated_taylor(cfg: ArrayConfig, sc: FocusScenario, l, dev: DeviationModel):
    """Deviated power with the translation linearised into a per-element phase."""
    arr = _check_distance(l)
    check_deviation(cfg, dev)
    coh = _blocked(lambda x: np.abs(phasor_sum(_taylor_phases(cfg, sc, x, dev))) ** 2,
                   arr, cfg.element_count)
    return (beta(cfg, sc, arr) * coh)[()]


def focal_power_deviated(cfg: ArrayConfig, sc: FocusScenario, dev: DeviationModel) -> float:
    """Focal-point power ``(P_L / N^2) |sum exp(i dphi)|^2`` under translation."""
    check_deviation(cfg, dev)
    L = np.asarray(sc.focal_distance)
    xy = element_coordinates(cfg)
    dist = np.sqrt(xy[:, 0] ** 2 + xy[:, 1] ** 2 + L * L)
    dphi = cfg.wavenumber * (xy[:, 0] * dev.delta_x + xy[:, 1] * dev.delta_y) / dist
    n = cfg.element_count
    p_focal = received_power(cfg, sc, L)
    return float(p_focal / n ** 2 * abs(phasor_sum(dphi)) ** 2)

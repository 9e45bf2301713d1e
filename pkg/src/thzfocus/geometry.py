"""Uniform planar array lattice and element-to-point distances.

Elements sit on the XY plane, centred on the origin, with indices running
1..side_count along each axis.  Observation points lie on the z-axis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.998e8


@dataclass(frozen=True)
class ArrayConfig:
    """Square UPA: ``side_count`` x ``side_count`` elements at pitch ``spacing``."""

    side_count: int
    spacing: float
    wavelength: float

    def __post_init__(self) -> None:
        if int(self.side_count) != self.side_count or self.side_count < 1:
            raise ValueError(f"side_count must be a positive integer, got {self.side_count!r}")
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"spacing must be positive, got {self.spacing!r}")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise ValueError(f"wavelength must be positive, got {self.wavelength!r}")
        object.__setattr__(self, "side_count", int(self.side_count))

    @classmethod
    def from_frequency(cls, side_count: int, spacing: float, frequency: float) -> ArrayConfig:
        return cls(side_count, spacing, SPEED_OF_LIGHT / frequency)

    @property
    def element_count(self) -> int:
        return self.side_count * self.side_count

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def aperture(self) -> float:
        """Centre-to-centre extent of one side, ``(side_count - 1) * spacing``."""
        return (self.side_count - 1) * self.spacing


@dataclass(frozen=True)
class ElementIndex:
    """1-based (n, m) element index; n runs along x, m along y."""

    n: int
    m: int

    def check(self, cfg: ArrayConfig) -> None:
        if not (1 <= self.n <= cfg.side_count and 1 <= self.m <= cfg.side_count):
            raise IndexError(
                f"element ({self.n}, {self.m}) outside 1..{cfg.side_count}"
            )

    def mirrored(self, cfg: ArrayConfig) -> ElementIndex:
        s = cfg.side_count + 1
        return ElementIndex(s - self.n, s - self.m)


@dataclass(frozen=True)
class DeviationModel:
    """Rigid translation (delta_x, delta_y) of the whole lattice, in meters."""

    delta_x: float = 0.0
    delta_y: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta_x) and math.isfinite(self.delta_y)):
            raise ValueError("deviation components must be finite")

    @property
    def is_zero(self) -> bool:
        return self.delta_x == 0.0 and self.delta_y == 0.0


def check_deviation(cfg: ArrayConfig, dev: DeviationModel) -> None:
    # repo threshold; the first-order model only needs |delta| << distance
    limit = cfg.spacing / 2
    if abs(dev.delta_x) > limit or abs(dev.delta_y) > limit:
        warnings.warn(
            f"deviation ({dev.delta_x:g}, {dev.delta_y:g}) m exceeds half the element "
            f"spacing ({limit:g} m); first-order phase model may be inaccurate",
            stacklevel=3,
        )


def _check_distance(l) -> np.ndarray:
    arr = np.asarray(l, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError("observation distance must be finite and > 0 (point in front of the array)")
    return arr


def axis_coordinates(cfg: ArrayConfig) -> np.ndarray:
    """Positions along one axis, ``(i - (side_count + 1)/2) * spacing`` for i = 1..side_count."""
    i = np.arange(1, cfg.side_count + 1, dtype=float)
    return (i - (cfg.side_count + 1) / 2.0) * cfg.spacing


def element_coordinates(cfg: ArrayConfig) -> np.ndarray:
    """Return an (N, 2) array of (x, y) positions, row-major over (n, m).

    Row ``(n - 1) * side_count + (m - 1)`` holds ``(x_n, y_m)``.
    """
    a = axis_coordinates(cfg)
    xx, yy = np.meshgrid(a, a, indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()])


def _coord(cfg: ArrayConfig, idx: ElementIndex) -> tuple[float, float]:
    idx.check(cfg)
    c = (cfg.side_count + 1) / 2.0
    return (idx.n - c) * cfg.spacing, (idx.m - c) * cfg.spacing


def element_distance(cfg: ArrayConfig, idx: ElementIndex, l):
    """Distance from element (n, m) to the on-axis point (0, 0, l)."""
    l = _check_distance(l)
    x, y = _coord(cfg, idx)
    return np.sqrt(x * x + y * y + l * l)[()]


def perturbed_distance(cfg: ArrayConfig, idx: ElementIndex, l, dev: DeviationModel):
    """Distance from the translated element (x_n + dx, y_m + dy) to (0, 0, l)."""
    l = _check_distance(l)
    check_deviation(cfg, dev)
    x, y = _coord(cfg, idx)
    xs, ys = x + dev.delta_x, y + dev.delta_y
    return np.sqrt(xs * xs + ys * ys + l * l)[()]


def deviation_phase(cfg: ArrayConfig, idx: ElementIndex, l, dev: DeviationModel):
    """First-order phase shift ``k (x_n dx + y_m dy) / D`` caused by the translation."""
    l = _check_distance(l)
    check_deviation(cfg, dev)
    x, y = _coord(cfg, idx)
    dist = np.sqrt(x * x + y * y + l * l)
    return (cfg.wavenumber * (x * dev.delta_x + y * dev.delta_y) / dist)[()]


# -- vectorised forms over the whole lattice, shape (..., N) ------------------

def lattice_squared_radius(cfg: ArrayConfig, dev: DeviationModel | None = None) -> np.ndarray:
    """x^2 + y^2 for every element (optionally after translation), row-major."""
    xy = element_coordinates(cfg)
    if dev is not None:
        xy = xy + np.array([dev.delta_x, dev.delta_y])
    return xy[:, 0] ** 2 + xy[:, 1] ** 2


def lattice_distances(cfg: ArrayConfig, l, dev: DeviationModel | None = None) -> np.ndarray:
    """Distances from every element to each point in ``l``; shape ``l.shape + (N,)``."""
    l = _check_distance(l)
    r2 = lattice_squared_radius(cfg, dev)
    return np.sqrt(r2 + l[..., None] ** 2)


def lattice_deviation_phases(cfg: ArrayConfig, l, dev: DeviationModel) -> np.ndarray:
    l = _check_distance(l)
    xy = element_coordinates(cfg)
    dist = np.sqrt(xy[:, 0] ** 2 + xy[:, 1] ** 2 + l[..., None] ** 2)
    return cfg.wavenumber * (xy[:, 0] * dev.delta_x + xy[:, 1] * dev.delta_y) / dist

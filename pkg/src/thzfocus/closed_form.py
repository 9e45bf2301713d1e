"""Fresnel-integral approximation of the on-axis power and main-lobe extents.

With ``eta = (l - L) / l`` and

    b = sqrt(|pi d^2 eta / (lambda L)|) (sqrt(N) - 1) / 2,

the focusing factor is

    rho = (sqrt(N) - 1)^4 / (N b^4) (C(b)^2 + S(b)^2)^2    (eta != 0)
    rho = (sqrt(N) - 1)^4 / N                               (eta == 0)

and ``P_l ~ P lambda^2 / (4 pi l)^2 * rho``.  Note the normalisation differs
from the exact sum: at the focal point the ratio is (sqrt(N) - 1)^4 / N^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import FocusScenario
from .fresnel import fresnel_cs
from .geometry import ArrayConfig, _check_distance

# first local minimum of the lobe function, kept as a literal (see tests for a re-derivation)
B_MIN = 1.9111


@dataclass(frozen=True)
class LobeParameters:
    eta: float
    b: float
    b_min_constant: float = B_MIN


@dataclass(frozen=True)
class LobeExtent:
    """Axial distances from the focus to the lobe edges.

    ``forward`` is ``math.inf`` when the closed form predicts no forward null.
    """

    forward: float
    backward: float

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.forward)


def eta(L, l):
    """Relative axial displacement ``(l - L) / l``."""
    L = _check_distance(L)
    l = _check_distance(l)
    return ((l - L) / l)[()]


def b_parameter(cfg: ArrayConfig, L: float, eta_value):
    if not L > 0:
        raise ValueError("focal distance must be > 0")
    e = np.asarray(eta_value, dtype=float)
    scale = math.pi * cfg.spacing ** 2 / (cfg.wavelength * L)
    return (np.sqrt(np.abs(scale * e)) * (cfg.side_count - 1) / 2.0)[()]


def lobe_parameters(cfg: ArrayConfig, L: float, l: float) -> LobeParameters:
    e = float(eta(L, l))
    return LobeParameters(e, float(b_parameter(cfg, L, e)))


def rho(cfg: ArrayConfig, b, eta_value):
    """Focusing factor; the eta == 0 branch takes precedence over ``b``.

    Raises ``ZeroDivisionError`` for eta != 0 paired with b == 0.
    """
    b = np.asarray(b, dtype=float)
    e = np.asarray(eta_value, dtype=float)
    b, e = np.broadcast_arrays(b, e)
    peak = (cfg.side_count - 1) ** 4 / cfg.element_count
    off = e != 0
    if np.any(off & (b == 0)):
        raise ZeroDivisionError("eta != 0 with b == 0; route eta == 0 to the focal branch")
    out = np.full(b.shape, float(peak))
    if off.any():
        bb = b[off]
        c, s = fresnel_cs(bb)
        out[off] = peak / bb ** 4 * (c * c + s * s) ** 2
    return out[()]


def approx_power(cfg: ArrayConfig, sc: FocusScenario, l):
    """Closed-form on-axis power in watts."""
    l = _check_distance(l)
    L = sc.focal_distance
    e = (l - L) / l
    b = b_parameter(cfg, L, e)
    return (sc.transmit_power * cfg.wavelength ** 2 / (4 * np.pi * l) ** 2 * rho(cfg, b, e))[()]


def lobe_ratio(cfg: ArrayConfig, L: float) -> float:
    """``r = pi d^2 (sqrt(N) - 1)^2 / (4 b_min^2 lambda L)``, i.e. 1 / |eta| at the null."""
    if not L > 0:
        raise ValueError("focal distance must be > 0")
    return (math.pi * cfg.spacing ** 2 * (cfg.side_count - 1) ** 2
            / (4 * B_MIN ** 2 * cfg.wavelength * L))


def main_lobe_extent(cfg: ArrayConfig, L: float) -> LobeExtent:
    r = lobe_ratio(cfg, L)
    forward = L / (r - 1) if r > 1 else math.inf
    return LobeExtent(forward=forward, backward=-L / (r + 1))

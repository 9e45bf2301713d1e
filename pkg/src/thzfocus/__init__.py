"""Spatial power focusing of sparse uniform planar arrays in the near field.

The exact phasor-sum model lives in :mod:`thzfocus.field`, the Fresnel
approximation and lobe geometry in :mod:`thzfocus.closed_form`, and figure
presets plus trace tooling in :mod:`thzfocus.sweeps`.
"""

from .closed_form import B_MIN, LobeExtent, approx_power, b_parameter, eta, main_lobe_extent, rho
from .field import (
    FocusScenario,
    PhaseNoiseModel,
    coherence_factor,
    expected_power_noisy,
    focal_power_deviated,
    monte_carlo_expected_power,
    received_power,
    received_power_deviated,
    received_power_deviated_taylor,
    sample_power_noisy,
)
from .fresnel import fresnel_c, fresnel_s
from .geometry import ArrayConfig, DeviationModel, ElementIndex, element_coordinates
from .pathloss import CIPathLossParams, ci_path_loss_db, emulate_measurement_trace, fspl_db
from .sweeps import PowerTrace, compare_traces, find_lobe_minima, find_peak, preset, z_sweep

__version__ = "0.1.0"

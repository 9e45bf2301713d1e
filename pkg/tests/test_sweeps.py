import math

import numpy as np
import pytest

from oracles import direct_power
from thzfocus import sweeps
from thzfocus.field import PhaseNoiseModel, beta, received_power
from thzfocus.geometry import DeviationModel
from thzfocus.pathloss import CIPathLossParams
from thzfocus.sweeps import LobeUnboundedError, PowerTrace


def _trace(values, grid=None, tag="exact", snap=None):
    values = np.asarray(values, dtype=float)
    grid = np.arange(1, values.size + 1, dtype=float) if grid is None else grid
    return PowerTrace(grid, values, tag, snap or {})


# -- presets ----------------------------------------------------------------------

def test_presets_carry_reference_geometries():
    names = set(sweeps.preset_names())
    assert {"fig2a", "fig2b", "fig2c", "fig5", "fig6", "fig7"} <= names
    for name in names:
        p = sweeps.preset(name)
        assert p.frequency_hz == 300e9 and p.power_w == 1.0
    a, b = sweeps.preset("fig2a"), sweeps.preset("fig2b")
    assert (a.side_count, a.spacing_lam, a.focal_lam) == (35, 10.0, 2500.0)
    assert (b.side_count, b.spacing_lam, b.focal_lam) == (7, 15.0, 700.0)
    c = sweeps.preset("fig2c")
    assert c.spacing_lam == 0.5 and c.focal_lam == 2500.0 and 700 in c.extra["side_counts"]


def test_unknown_preset():
    with pytest.raises(KeyError):
        sweeps.preset("fig99")


# -- trace type -------------------------------------------------------------------------

@pytest.mark.parametrize("grid,values,tag", [
    ([], [], "exact"),
    ([1, 2], [1], "exact"),
    ([2, 1], [1, 1], "exact"),
    ([1, 2], [1, -1], "exact"),
    ([1, 2], [1, np.nan], "exact"),
    ([1, 2], [1, 1], "measured"),
])
def test_trace_invariants(grid, values, tag):
    with pytest.raises(ValueError):
        PowerTrace(np.array(grid, dtype=float), np.array(values, dtype=float), tag)


# -- z_sweep -------------------------------------------------------------------------------

def test_grid_helpers():
    g = sweeps.default_grid(1.0)
    assert g.size == 400 and g[0] == pytest.approx(0.2) and g[-1] == pytest.approx(4.0)
    assert np.allclose(np.diff(np.log(g)), np.log(20) / 399)
    lin = sweeps.default_grid(2.0, 5, 0.5, 1.5, "linear")
    assert np.allclose(lin, [1.0, 1.5, 2.0, 2.5, 3.0])
    with pytest.raises(ValueError):
        sweeps.default_grid(1.0, 10, 2.0, 1.0)


def test_exact_sweep_matches_direct_sum(fig2b):
    cfg, sc, lam = fig2b
    grid = np.array([350, 600, 700, 800, 1500]) * lam
    tr = sweeps.z_sweep(cfg, sc, grid)
    ref = [direct_power(7, cfg.spacing, lam, sc.focal_distance, 1.0, l) for l in grid]
    np.testing.assert_allclose(tr.values, ref, rtol=1e-9)
    assert tr.config_snapshot["array"]["side_count"] == 7


def test_sweep_independent_of_worker_count(fig2a):
    cfg, sc, _ = fig2a
    grid = sweeps.default_grid(sc.focal_distance, 97)
    one = sweeps.z_sweep(cfg, sc, grid, "exact", workers=1)
    four = sweeps.z_sweep(cfg, sc, grid, "exact", workers=4)
    assert np.array_equal(one.values, four.values)


def test_sweep_rejects_bad_grid(fig2b):
    cfg, sc, _ = fig2b
    with pytest.raises(ValueError):
        sweeps.z_sweep(cfg, sc, [])
    with pytest.raises(ValueError):
        sweeps.z_sweep(cfg, sc, [2.0, 1.0])
    with pytest.raises(ValueError):
        sweeps.z_sweep(cfg, sc, [1.0], "bogus")
    with pytest.raises(ValueError):
        sweeps.z_sweep(cfg, sc, [1.0], "noisy_mc", noise=PhaseNoiseModel(0.3), trials=10)
    with pytest.raises(ValueError):
        sweeps.z_sweep(cfg, sc, [1.0, 2.0], "emulated", noise=PhaseNoiseModel(0.3))


def test_every_model_tag_runs(fig2b):
    cfg, sc, _ = fig2b
    grid = sweeps.default_grid(sc.focal_distance, 16, 0.5, 3.0)
    kw = dict(noise=PhaseNoiseModel(0.4), deviation=DeviationModel(1e-4, 0.0),
              pathloss=CIPathLossParams(), trials=8, seed=1)
    for tag in sweeps.MODEL_TAGS:
        tr = sweeps.z_sweep(cfg, sc, grid, tag, **kw)
        assert tr.model_tag == tag and len(tr) == 16
    assert sweeps.z_sweep(cfg, sc, grid, "emulated", **kw).normalized


def test_dense_trace_strictly_decreasing():
    p = sweeps.preset("fig2b_dense")
    tr = sweeps.z_sweep(p.array(), p.scenario(), sweeps.default_grid(p.scenario().focal_distance))
    assert np.all(np.diff(tr.values) < 0)


def test_fig2a_exact_peak_at_focus(fig2a):
    cfg, sc, _ = fig2a
    tr = sweeps.z_sweep(cfg, sc, sweeps.default_grid(sc.focal_distance))
    i_peak = int(np.argmax(tr.values))
    i_focus = int(np.argmin(np.abs(tr.grid - sc.focal_distance)))
    assert abs(i_peak - i_focus) <= 1


# -- noise and deviation sweeps ----------------------------------------------------------

def test_noise_sweep(fig2b):
    cfg, sc, _ = fig2b
    grid = sweeps.default_grid(sc.focal_distance, 200, 0.5, 3.0)
    traces = sweeps.noise_sweep(cfg, sc, grid, [0.0, 0.2, 0.5, 1.0])
    assert len(traces) == 4
    assert np.array_equal(traces[0].values, sweeps.z_sweep(cfg, sc, grid).values)
    coherent = received_power(cfg, sc, grid) > beta(cfg, sc, grid) * cfg.element_count
    for lo, hi in zip(traces, traces[1:]):
        assert np.all(hi.values[coherent] <= lo.values[coherent])


def test_deviation_sweep(fig2b):
    cfg, sc, lam = fig2b
    grid = sweeps.default_grid(sc.focal_distance, 120, 0.5, 3.0)
    devs = [DeviationModel(), DeviationModel(0.5 * lam, 0.5 * lam), DeviationModel(lam, lam)]
    traces = sweeps.deviation_sweep(cfg, sc, grid, devs)
    assert len(traces) == len(devs)
    np.testing.assert_allclose(traces[0].values, sweeps.z_sweep(cfg, sc, grid).values, rtol=1e-13)
    assert traces[2].values.max() < traces[0].values.max()
    focal = sweeps.deviation_sweep(cfg, sc, None, devs)
    assert [d for d, _ in focal] == devs and focal[2][1] < focal[0][1]


def test_sensitivity_table():
    p = sweeps.preset("fig7")
    lam = p.wavelength
    configs = [(d * lam, n) for d, n in p.extra["configs"]]
    deltas = np.linspace(0, lam, 21)
    table = sweeps.sensitivity_sweep(configs, deltas, wavelength=lam, focal_distance=p.scenario().focal_distance)
    assert table.values.shape == (4, 21)
    assert np.all(table.values[:, 0] == 1.0)
    j = table.first_column_below(0.9)
    assert j is not None
    assert table.row(15 * lam, 7)[j] < table.row(10 * lam, 7)[j]
    assert table.row(15 * lam, 9)[j] < table.row(10 * lam, 9)[j]
    assert table.row(10 * lam, 9)[j] < table.row(10 * lam, 7)[j]
    assert table.row(15 * lam, 9)[j] < table.row(15 * lam, 7)[j]


# -- trace analysis ---------------------------------------------------------------------------

def test_find_peak_examples():
    assert sweeps.find_peak(_trace([4.0], np.array([2.5]))) == (2.5, 4.0)
    assert sweeps.find_peak(_trace([1, 3, 2])) == (2.0, 3.0)
    assert sweeps.find_peak(_trace([5, 1, 5])) == (1.0, 5.0)


def test_lobe_minima_synthetic():
    w = _trace([5, 1, 4, 9, 4, 2, 6])
    assert sweeps.find_lobe_minima(w, 4.0) == (2.0, 6.0)
    with pytest.raises(LobeUnboundedError) as exc:
        sweeps.find_lobe_minima(_trace([1, 2, 9, 2, 3]), 3.0)
    assert exc.value.sides == ("backward",)
    with pytest.raises(ValueError):
        sweeps.find_lobe_minima(w, 10.0)


def test_lobe_minima_unbounded_for_dense_array():
    p = sweeps.preset("fig2b_dense")
    cfg, sc = p.array(), p.scenario()
    tr = sweeps.z_sweep(cfg, sc, sweeps.lobe_grid(cfg, sc.focal_distance, 2.0))
    with pytest.raises(LobeUnboundedError) as exc:
        sweeps.find_lobe_minima(tr, sc.focal_distance)
    assert set(exc.value.sides) == {"backward", "forward"}


def test_lobe_minima_agree_with_direct_sum(fig2b):
    cfg, sc, lam = fig2b
    L = sc.focal_distance
    tr = sweeps.z_sweep(cfg, sc, sweeps.lobe_grid(cfg, L, 2.0))
    lo, hi = sweeps.find_lobe_minima(tr, L)
    # the direct sum must also dip at both points relative to their neighbours
    for l in (lo, hi):
        around = [direct_power(7, cfg.spacing, lam, L, 1.0, l + s * 2 * lam) for s in (-1, 0, 1)]
        assert around[1] < around[0] and around[1] < around[2]
    assert lo < L < hi


def test_compare_traces_basics():
    a = _trace([1, 2, 4, 2])
    assert sweeps.compare_traces(a, a) == sweeps.TraceComparison(0.0, 0.0, 0.0)
    b = _trace(2 * a.values)
    assert sweeps.compare_traces(a, b, normalize=True) == sweeps.TraceComparison(0.0, 0.0, 0.0)
    raw = sweeps.compare_traces(a, b)
    assert raw.max_relative_error == pytest.approx(1.0) and raw.rms_relative_error == pytest.approx(1.0)


def test_compare_traces_resamples_and_windows():
    a = _trace([1, 2, 3, 4, 5])
    b = _trace([1.5, 3.5], np.array([1.5, 3.5]))
    cmp = sweeps.compare_traces(a, b)
    assert cmp.max_relative_error == pytest.approx(0.0, abs=1e-15)
    assert cmp.peak_shift == pytest.approx(1.5)
    with pytest.raises(ValueError):
        sweeps.compare_traces(a, _trace([1, 1], np.array([10.0, 11.0])))
    win = sweeps.compare_traces(a, _trace([1, 2, 3, 4, 10]), window=(1.0, 4.0))
    assert win.max_relative_error == 0.0


def test_compare_refuses_mixed_configurations(fig2a, fig2b):
    grid = np.array([0.5, 1.0, 1.5])
    ta = sweeps.z_sweep(*fig2a[:2], grid)
    tb = sweeps.z_sweep(*fig2b[:2], grid)
    with pytest.raises(ValueError):
        sweeps.compare_traces(ta, tb)
    assert sweeps.compare_traces(ta, tb, allow_config_mismatch=True).max_relative_error > 0


def test_focusing_classifier():
    assert not sweeps.is_focusing(_trace([5, 4, 3, 2]))
    assert sweeps.is_focusing(_trace([1, 5, 3, 2]))
    assert not sweeps.is_focusing(_trace([1, 5, 4, 4]))
    assert sweeps.is_focusing(_trace([1, 5, 0]))

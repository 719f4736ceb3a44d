import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotmode.model import ModelParams
from rotmode.observables import (
    CSV_COLUMNS,
    CoherentInput,
    InternalConsistencyError,
    anomalous_moment,
    default_time_grid,
    entanglement_entropy,
    mean_energy,
    sample_series,
    series_arrays,
    shifted_ratios,
    slow_period,
    squeezing_ratios,
    symplectic_eigenvalue,
    vacuum_occupation,
    vacuum_occupation_expanded,
)
from rotmode.oracle import evolve_moments_series
from rotmode.propagator import Propagator, propagator

from conftest import params, stable_params

NEAR_UNSTABLE = ModelParams(1.0, 0.5, 0.49)
WEAK = ModelParams(1.0, 0.5, 0.15)
ALPHAS = [(0j, 0j), (1.0, 0.5j), (-2.0, 3.0)]


def _thermal_entropy(f, terms=4000):
    # von Neumann entropy of a thermal state with mean occupation f
    n = np.arange(terms)
    log_p = n * math.log(f) - (n + 1) * math.log1p(f)
    return float(-np.sum(np.exp(log_p) * log_p))


def test_zero_time_baseline():
    prop = propagator(NEAR_UNSTABLE, 0.0)
    assert vacuum_occupation(prop, 1) == 0.0 and vacuum_occupation(prop, 2) == 0.0
    assert anomalous_moment(prop, 1) == 0.0
    assert squeezing_ratios(prop) == (1.0, 1.0, 1.0, 1.0)
    assert symplectic_eigenvalue(prop) == 0.0


@pytest.mark.parametrize("t", [0.4, 5.0, 90.0])
def test_isotropic_nulls(t):
    prop = propagator(ModelParams(0.9, 0.9, 0.35), t)
    assert vacuum_occupation(prop, 1) == 0.0
    assert anomalous_moment(prop, 2) == 0.0
    assert symplectic_eigenvalue(prop, 1) == 0.0
    assert squeezing_ratios(prop) == (1.0, 1.0, 1.0, 1.0)


@settings(max_examples=50)
@given(params(), st.floats(0.01, 100.0))
def test_lower_frequency_mode_more_populated(p, t):
    prop = propagator(p, t)
    n1, n2 = vacuum_occupation(prop, 1), vacuum_occupation(prop, 2)
    assert n2 >= n1 - 1e-12 * max(1.0, n1)


@pytest.mark.parametrize("j", [1, 2])
def test_expanded_occupation_at_t1(j):
    prop = propagator(NEAR_UNSTABLE, 1.0)
    assert vacuum_occupation(prop, j) == pytest.approx(vacuum_occupation_expanded(NEAR_UNSTABLE, 1.0, j), abs=1e-10)


@settings(max_examples=60)
@given(stable_params(), st.floats(0.0, 100.0))
def test_expanded_occupation_cross_check(p, t):
    prop = propagator(p, t)
    for j in (1, 2):
        assert abs(vacuum_occupation(prop, j) - vacuum_occupation_expanded(p, t, j)) <= 1e-10


def test_short_time_anomalous_moments():
    prop = propagator(NEAR_UNSTABLE, 1e-3)
    a1, a2 = anomalous_moment(prop, 1), anomalous_moment(prop, 2)
    assert a1.real > 0.0
    assert abs(a1.imag) <= 1e-2 * a1.real
    assert a2 == pytest.approx(-a1, rel=1e-3)


def test_short_time_squeezing_law():
    p, t = NEAR_UNSTABLE, 1e-3
    _, rp1, rq2, _ = squeezing_ratios(propagator(p, t))
    w1, w2, w = p.omega1, p.omega2, p.omega
    predicted = 1.0 - w**2 * (w1 - w2) * w2 * t * t / (2.0 * w1 * w2)
    assert rp1 - 1.0 == pytest.approx(predicted - 1.0, rel=0.01)
    assert rq2 - 1.0 == pytest.approx(predicted - 1.0, rel=0.01)


@pytest.mark.parametrize("bad", [0, 3])
def test_invalid_mode_index(bad):
    prop = propagator(NEAR_UNSTABLE, 1.0)
    with pytest.raises(ValueError):
        vacuum_occupation(prop, bad)
    with pytest.raises(ValueError):
        anomalous_moment(prop, bad)
    with pytest.raises(ValueError):
        symplectic_eigenvalue(prop, bad)


def test_unphysical_propagator_rejected():
    bogus = Propagator(1.0, 3.0 * np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    with pytest.raises(InternalConsistencyError):
        symplectic_eigenvalue(bogus, 2)
    bogus = Propagator(1.0, np.eye(2, dtype=complex) * 5.0, np.array([[-1.0, 0.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(InternalConsistencyError):
        squeezing_ratios(bogus)


@pytest.mark.parametrize(
    "ratios, expected",
    [((1.0,), (0.0,)), ((1.2,), (0.2,)), ((0.9,), (-0.1,))],
)
def test_shifted_ratios(ratios, expected):
    assert shifted_ratios(ratios) == pytest.approx(expected, abs=1e-15)


def test_symplectic_eigenvalue_mode_independent(rng):
    for t in rng.uniform(0.0, 2.0 * slow_period(NEAR_UNSTABLE), size=20):
        prop = propagator(NEAR_UNSTABLE, t)
        assert symplectic_eigenvalue(prop, 1) == pytest.approx(symplectic_eigenvalue(prop, 2), abs=1e-10)


@pytest.mark.parametrize(
    "f, expected",
    [(0.0, 0.0), (1.0, 2.0 * math.log(2.0)), (0.5, 1.5 * math.log(1.5) + 0.5 * math.log(2.0))],
)
def test_entropy_values(f, expected):
    assert entanglement_entropy(f) == pytest.approx(expected, rel=1e-14, abs=0.0)


def test_entropy_hand_values():
    assert entanglement_entropy(1.0) == pytest.approx(1.38629, abs=1e-5)
    assert entanglement_entropy(0.5) == pytest.approx(0.954771, abs=1e-6)
    assert entanglement_entropy(0.5) < entanglement_entropy(1.0)


@pytest.mark.parametrize("f", [1e-6, 0.05, 0.5, 1.0, 3.0])
def test_entropy_matches_thermal_series(f):
    assert entanglement_entropy(f) == pytest.approx(_thermal_entropy(f), rel=1e-10)


def test_entropy_monotone_concave():
    f = np.linspace(0.0, 5.0, 501)
    s = entanglement_entropy(f)
    assert s[0] == 0.0
    assert np.all(np.diff(s) > 0.0)
    assert np.all(np.diff(s, 2) < 0.0)


@pytest.mark.parametrize("f", [-1e-3, math.nan])
def test_entropy_domain(f):
    with pytest.raises(ValueError):
        entanglement_entropy(f)
    with pytest.raises(ValueError):
        entanglement_entropy(np.array([0.1, f]))


def test_mean_energy_vacuum_free():
    p = ModelParams(1.0, 0.5, 0.0)
    assert mean_energy(p, propagator(p, 3.0)) == pytest.approx(0.75, rel=1e-15)


@pytest.mark.parametrize(
    "p", [NEAR_UNSTABLE, ModelParams(1.0, 0.5, 1.5), ModelParams(1.0, 0.5, 0.75), ModelParams(1.0, 1.0, 1.0)]
)
def test_mean_energy_conserved(p):
    state = CoherentInput(0.7 - 0.2j, 1.1j)
    e0 = mean_energy(p, propagator(p, 0.0), state)
    e1 = mean_energy(p, propagator(p, 17.3), state)
    assert e1 == pytest.approx(e0, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("t", [0.0, 2.5, 31.0])
def test_mean_energy_isotropic_hand_value(t):
    w0 = 0.8
    p = ModelParams(w0, w0, 0.3)
    assert mean_energy(p, propagator(p, t), CoherentInput(1.0, 0.0)) == pytest.approx(2.0 * w0, rel=1e-13)


def test_sample_series_edge_cases():
    assert sample_series(NEAR_UNSTABLE, []) == []
    (s,) = sample_series(NEAR_UNSTABLE, [0.0])
    assert (s.rq1, s.rp1, s.rq2, s.rp2) == (1.0, 1.0, 1.0, 1.0)
    assert s.f == 0.0 and s.s == 0.0 and s.shifted == (0.0, 0.0, 0.0, 0.0)


def test_series_arrays_columns():
    cols = series_arrays(NEAR_UNSTABLE, np.linspace(0.0, 5.0, 7))
    assert tuple(cols) == CSV_COLUMNS


def test_series_matches_pointwise(rng):
    times = np.sort(rng.uniform(0.0, 60.0, size=25))
    for sample in sample_series(NEAR_UNSTABLE, times):
        prop = propagator(NEAR_UNSTABLE, sample.t)
        assert sample.n1 == pytest.approx(vacuum_occupation(prop, 1), rel=1e-13, abs=1e-16)
        assert sample.a2sq == pytest.approx(anomalous_moment(prop, 2), rel=1e-13, abs=1e-16)
        assert (sample.rq1, sample.rp1, sample.rq2, sample.rp2) == pytest.approx(squeezing_ratios(prop))
        assert sample.f == pytest.approx(symplectic_eigenvalue(prop), abs=1e-15)


@pytest.mark.parametrize(
    "p",
    [NEAR_UNSTABLE, WEAK, ModelParams(1.0, 0.5, 1.5), ModelParams(1.0, 0.5, 0.75), ModelParams(1.0, 0.5, 0.5), ModelParams(1.0, 1.0, 1.0)],
)
def test_uncertainty_and_sum_rule(p):
    times = np.linspace(0.0, 60.0, 1201)
    cols = series_arrays(p, times)
    for j in (1, 2):
        rq, rp, n = cols[f"rq{j}"], cols[f"rp{j}"], cols[f"n{j}"]
        assert np.all(rq * rp >= 1.0 - 1e-12)
        scale = 1.0 + 2.0 * n
        assert np.all(np.abs(rq**2 + rp**2 - 2.0 * (1.0 + 2.0 * n)) <= 1e-10 * scale)
    assert np.all(cols["f"] >= 0.0) and np.all(cols["S"] >= 0.0)


def test_near_unstable_entropy_and_squeezing_in_phase():
    grid = default_time_grid(NEAR_UNSTABLE)
    assert grid.size == 2048
    cols = series_arrays(NEAR_UNSTABLE, grid)
    step = grid[1] - grid[0]
    s, dq1, dp2 = cols["S"], cols["dq1"], cols["dp2"]
    # envelope peaks: max S, min dQ1 and min dP2 in the same half of the slow period
    half = grid.size // 2
    for lo, hi in ((0, half), (half, grid.size)):
        peak = grid[lo + np.argmax(s[lo:hi])]
        assert abs(grid[lo + np.argmin(dq1[lo:hi])] - peak) <= 0.1 * grid[half]
        assert abs(grid[lo + np.argmin(dp2[lo:hi])] - peak) <= 0.1 * grid[half]
    assert step > 0.0


def test_coherent_independence_against_oracle():
    times = np.linspace(0.0, 40.0, 9)
    cols = series_arrays(NEAR_UNSTABLE, times)
    for alpha in ALPHAS:
        for state, n1, n2, a1 in zip(
            evolve_moments_series(NEAR_UNSTABLE, *alpha, times), cols["n1"], cols["n2"], cols["re_a1sq"]
        ):
            assert state.covariance_occupation(1) == pytest.approx(n1, abs=1e-8)
            assert state.covariance_occupation(2) == pytest.approx(n2, abs=1e-8)
            assert state.anomalous_covariance(1).real == pytest.approx(a1, abs=1e-8)


def test_isotropic_total_number_conserved():
    p = ModelParams(0.9, 0.9, 0.4)
    times = np.linspace(0.0, 50.0, 26)
    for alpha in ALPHAS:
        totals = [
            sum(s.covariance_occupation(j) + abs(s.mean[j - 1]) ** 2 for j in (1, 2))
            for s in evolve_moments_series(p, *alpha, times)
        ]
        assert np.ptp(totals) <= 1e-9 * max(1.0, totals[0])


def test_anisotropy_scaling():
    diffs = np.logspace(-3, -1, 7)
    t, w = 1.7, 0.05
    n = [vacuum_occupation(propagator(ModelParams(1.0, 1.0 - d, w), t), 1) for d in diffs]
    slope = np.polyfit(np.log(diffs), np.log(n), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.05)


def test_slow_period_and_grid():
    assert slow_period(NEAR_UNSTABLE) == pytest.approx(2.0 * math.pi / 0.0661, rel=0.01)
    landau = ModelParams(1.0, 1.0, 1.0)
    assert slow_period(landau) == pytest.approx(2.0 * math.pi / 2.0)
    assert default_time_grid(NEAR_UNSTABLE, 5)[-1] == slow_period(NEAR_UNSTABLE)

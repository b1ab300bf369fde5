"""Photon-counting simulation: determinism, statistics, convergence."""

import numpy as np
import pytest
import scipy.stats

from talbot_sim import (DomainError, McRun, beta_from_fwhm, sample_wavelength,
                        simulate_scan)
from talbot_sim.montecarlo import RNG_ID, point_rng

from helpers import (FWHM, LAMBDA0, baseline_detection, baseline_grating,
                     plane_source, point_source)


def _run(seed=7, events=1000.0, f=0.3, beta=None, **kw):
    src = point_source(beta=beta_from_fwhm(FWHM) if beta is None else beta)
    return McRun(seed=seed, events_per_point=events,
                 source=src, grating=baseline_grating(f=f),
                 scan=baseline_detection(), **kw)


def test_sample_wavelength_monochromatic_is_center_line():
    rng = np.random.default_rng(0)
    src = plane_source(beta=0.0)
    assert sample_wavelength(src, rng) == LAMBDA0


def test_sample_wavelength_moments():
    # the line weight exp(-(dl/beta)**2) is a normal law with
    # sigma = beta/sqrt(2); check both moments on a large frozen draw
    beta = beta_from_fwhm(FWHM)
    src = plane_source(beta=beta)
    rng = np.random.Generator(np.random.Philox(12345))
    draws = np.array([sample_wavelength(src, rng) for _ in range(100_000)])
    sigma = beta / np.sqrt(2.0)
    assert abs(draws.mean() - LAMBDA0) < 4 * sigma / np.sqrt(draws.size)
    assert draws.std() == pytest.approx(sigma, rel=0.03)


def test_sample_wavelength_always_positive():
    # a line much wider than its center wavelength exercises the
    # rejection branch; draws must still be physical
    src = plane_source(lambda0=1e-9, beta=1e-6)
    rng = np.random.Generator(np.random.Philox(99))
    draws = [sample_wavelength(src, rng) for _ in range(2000)]
    assert min(draws) > 0


def test_simulate_scan_deterministic_per_seed():
    a = simulate_scan(_run(seed=7))
    b = simulate_scan(_run(seed=7))
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.errors, b.errors)
    c = simulate_scan(_run(seed=8))
    assert not np.array_equal(a.values, c.values)


def test_simulate_scan_errors_and_meta():
    pat = simulate_scan(_run(seed=7))
    assert pat.norm == "raw"
    assert np.array_equal(pat.errors, np.sqrt(pat.values))
    assert pat.meta["seed"] == 7
    assert pat.meta["rng"] == RNG_ID
    assert pat.meta["events_per_point"] == 1000.0
    means = pat.meta["expected_means"]
    assert means.shape == pat.values.shape
    assert means.max() == pytest.approx(1000.0, rel=1e-12)


def test_simulate_scan_vanishing_dwell_gives_zero_counts():
    pat = simulate_scan(_run(seed=7, events=1e-12))
    assert np.all(pat.values == 0)


def test_counts_converge_to_expected_means():
    # normalized counts approach the rate curve as the dwell grows
    devs = []
    for events in (100.0, 1000.0, 10000.0):
        pat = simulate_scan(_run(seed=2026, events=events))
        means = pat.meta["expected_means"]
        devs.append(float(np.max(np.abs(pat.values - means)) / events))
    assert devs[0] > devs[1] > devs[2]


def test_counts_follow_poisson_law():
    # Pearson chi-square of one frozen run against its own means;
    # wildly wrong count statistics would push p below the floor
    pat = simulate_scan(_run(seed=7))
    means = pat.meta["expected_means"]
    chi2 = float(np.sum((pat.values - means) ** 2 / means))
    p = scipy.stats.chi2.sf(chi2, df=means.size)
    assert p > 0.01


def test_point_streams_are_reproducible_and_distinct():
    first = [point_rng(42, i).uniform() for i in range(4)]
    again = [point_rng(42, i).uniform() for i in range(4)]
    assert first == again
    assert len(set(first)) == len(first)


def test_mcrun_validation():
    with pytest.raises(DomainError):
        _run(seed=-1)
    with pytest.raises(DomainError):
        _run(seed=2 ** 64)
    with pytest.raises(DomainError):
        _run(events=0.0)
    with pytest.raises(DomainError):
        _run(events=-5.0)
